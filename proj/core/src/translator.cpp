/* Copyright 2026 The TransLAD Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "translad/translator.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "translad/kv.hpp"

namespace fs = std::filesystem;
namespace nn = torch::nn;

namespace translad::translator {

PatchGrid PatchGrid::uniform(int k, int height, int width) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(std::max(k, 0)))));
  if (k < 1 || side * side != k) throw Error("patch count " + std::to_string(k) + " is not a perfect square");
  if (side > height || side > width) throw Error("patch grid finer than the frame");
  PatchGrid grid;
  for (int i = 0; i <= side; ++i) {
    grid.row_bounds.push_back(i == side ? height : i * (height / side));
    grid.col_bounds.push_back(i == side ? width : i * (width / side));
  }
  return grid;
}

void PatchGrid::validate(int height, int width) const {
  auto check = [](const std::vector<int>& b, int extent, const char* axis) {
    if (b.size() < 2 || b.front() != 0 || b.back() != extent) {
      throw Error(std::string("patch grid does not span the frame ") + axis);
    }
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i] <= b[i - 1]) throw Error(std::string("patch grid has empty or overlapping ") + axis + " patches");
    }
  };
  check(row_bounds, height, "rows");
  check(col_bounds, width, "columns");
}

torch::Tensor patch_losses(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid,
                           LossKind kind) {
  if (output.sizes() != target.sizes() || output.dim() != 4) {
    throw Error("patch loss: output and target must share a [B, C, H, W] shape");
  }
  grid.validate(static_cast<int>(output.size(2)), static_cast<int>(output.size(3)));
  const auto diff = output - target;
  const auto err = kind == LossKind::squared ? diff.square() : diff.abs();
  std::vector<torch::Tensor> per_patch;
  per_patch.reserve(static_cast<std::size_t>(grid.count()));
  for (std::size_t r = 0; r + 1 < grid.row_bounds.size(); ++r) {
    for (std::size_t c = 0; c + 1 < grid.col_bounds.size(); ++c) {
      const auto patch = err.slice(2, grid.row_bounds[r], grid.row_bounds[r + 1])
                             .slice(3, grid.col_bounds[c], grid.col_bounds[c + 1]);
      per_patch.push_back(patch.mean({1, 2, 3}));
    }
  }
  return torch::stack(per_patch, 1);
}

torch::Tensor patch_loss_appearance(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid) {
  return std::get<0>(patch_losses(output, target, grid, LossKind::squared).max(1)).mean();
}

torch::Tensor patch_loss_motion(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid) {
  return std::get<0>(patch_losses(output, target, grid, LossKind::absolute).max(1)).mean();
}

torch::Tensor patch_loss(Branch branch, const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid) {
  return branch == Branch::appearance ? patch_loss_appearance(output, target, grid)
                                      : patch_loss_motion(output, target, grid);
}

namespace {

nn::Conv2dOptions conv_options(int in, int out, int kernel, int stride) {
  return nn::Conv2dOptions(in, out, kernel).stride(stride).padding(kernel / 2).bias(false);
}

}  // namespace

BasicBlockImpl::BasicBlockImpl(int in_channels, int out_channels, int stride) {
  conv1 = register_module("conv1", nn::Conv2d(conv_options(in_channels, out_channels, 3, stride)));
  bn1 = register_module("bn1", nn::BatchNorm2d(out_channels));
  conv2 = register_module("conv2", nn::Conv2d(conv_options(out_channels, out_channels, 3, 1)));
  bn2 = register_module("bn2", nn::BatchNorm2d(out_channels));
  if (stride != 1 || in_channels != out_channels) {
    shortcut = register_module(
        "shortcut", nn::Sequential(nn::Conv2d(conv_options(in_channels, out_channels, 1, stride)), nn::BatchNorm2d(out_channels)));
  }
}

torch::Tensor BasicBlockImpl::forward(const torch::Tensor& x) {
  auto y = torch::relu(bn1(conv1(x)));
  y = bn2(conv2(y));
  return torch::relu(y + (shortcut ? shortcut->forward(x) : x));
}

ResidualEncoderImpl::ResidualEncoderImpl(const ModelConfig& config) {
  const int w = config.base_width;
  stem = register_module("stem", nn::Sequential(nn::Conv2d(conv_options(3, w, 7, 2)), nn::BatchNorm2d(w),
                                                nn::ReLU(nn::ReLUOptions(true))));
  pool = register_module("pool", nn::MaxPool2d(nn::MaxPool2dOptions(3).stride(2).padding(1)));
  channels = {w, w, 2 * w, 4 * w, 8 * w};
  int in = w;
  for (std::size_t s = 0; s < 4; ++s) {
    const int out = channels[s + 1];
    nn::Sequential stage;
    for (int b = 0; b < std::max(config.blocks[s], 1); ++b) {
      stage->push_back(BasicBlock(b == 0 ? in : out, out, (b == 0 && s > 0) ? 2 : 1));
    }
    stages[s] = register_module("layer" + std::to_string(s + 1), stage);
    in = out;
  }
}

std::vector<torch::Tensor> ResidualEncoderImpl::forward(const torch::Tensor& x) {
  std::vector<torch::Tensor> features;
  auto y = stem->forward(x);
  features.push_back(y);
  y = pool(y);
  for (auto& stage : stages) {
    y = stage->forward(y);
    features.push_back(y);
  }
  return features;
}

DecoderBlockImpl::DecoderBlockImpl(int in_channels, int skip_channels, int out_channels) {
  body = register_module("body", nn::Sequential(nn::Conv2d(conv_options(in_channels + skip_channels, out_channels, 3, 1)),
                                                nn::BatchNorm2d(out_channels), nn::ReLU(nn::ReLUOptions(true)),
                                                nn::Conv2d(conv_options(out_channels, out_channels, 3, 1)),
                                                nn::BatchNorm2d(out_channels), nn::ReLU(nn::ReLUOptions(true))));
}

torch::Tensor DecoderBlockImpl::forward(const torch::Tensor& x, const torch::Tensor& skip) {
  std::vector<int64_t> size = skip.defined() ? std::vector<int64_t>{skip.size(2), skip.size(3)}
                                             : std::vector<int64_t>{x.size(2) * 2, x.size(3) * 2};
  auto up = torch::nn::functional::interpolate(
      x, torch::nn::functional::InterpolateFuncOptions().size(size).mode(torch::kNearest));
  if (skip.defined()) up = torch::cat({up, skip}, 1);
  return body->forward(up);
}

ResUNetImpl::ResUNetImpl(const ModelConfig& cfg) : config(cfg) {
  if (cfg.base_width < 4) throw Error("model base width must be >= 4");
  if (cfg.out_channels < 1) throw Error("model needs at least one output channel");
  encoder = register_module("encoder", ResidualEncoder(cfg));
  const auto& ch = encoder->channels;
  const int w = cfg.base_width;
  const std::array<int, 5> dec{4 * w, 2 * w, w, std::max(w / 2, 4), std::max(w / 4, 4)};
  const std::array<int, 5> skip{ch[3], ch[2], ch[1], ch[0], 0};
  int in = ch[4];
  for (std::size_t i = 0; i < dec.size(); ++i) {
    decoder.push_back(register_module("decoder" + std::to_string(i + 1), DecoderBlock(in, skip[i], dec[i])));
    in = dec[i];
  }
  head = register_module("head", nn::Conv2d(nn::Conv2dOptions(in, cfg.out_channels, 3).padding(1)));
}

torch::Tensor ResUNetImpl::forward(const torch::Tensor& x) {
  // Standard natural-image normalization expected by residual encoders.
  static const auto mean = torch::tensor({0.485, 0.456, 0.406}).view({1, 3, 1, 1});
  static const auto stdev = torch::tensor({0.229, 0.224, 0.225}).view({1, 3, 1, 1});
  const auto normalized = (x - mean.to(x.dtype())) / stdev.to(x.dtype());
  const auto f = encoder->forward(normalized);
  auto y = decoder[0]->forward(f[4], f[3]);
  y = decoder[1]->forward(y, f[2]);
  y = decoder[2]->forward(y, f[1]);
  y = decoder[3]->forward(y, f[0]);
  y = decoder[4]->forward(y, torch::Tensor());
  if (y.size(2) != x.size(2) || y.size(3) != x.size(3)) {
    y = torch::nn::functional::interpolate(
        y, torch::nn::functional::InterpolateFuncOptions().size(std::vector<int64_t>{x.size(2), x.size(3)}).mode(torch::kNearest));
  }
  return torch::sigmoid(head(y));
}

namespace {

void write_model_config(const fs::path& path, Branch branch, const ModelConfig& config) {
  KvDocument doc;
  doc.set("branch", to_string(branch));
  doc.set("base_width", std::to_string(config.base_width));
  std::string blocks;
  for (std::size_t i = 0; i < config.blocks.size(); ++i) blocks += (i ? "," : "") + std::to_string(config.blocks[i]);
  doc.set("blocks", blocks);
  doc.set("out_channels", std::to_string(config.out_channels));
  doc.save(path);
}

}  // namespace

TranslatorModel make_model(Branch branch, const ModelConfig& config, std::uint64_t seed) {
  torch::manual_seed(seed);
  TranslatorModel model{branch, config, ResUNet(config)};
  for (auto& module : model.net->modules(false)) {
    if (auto* conv = module->as<nn::Conv2d>()) {
      nn::init::kaiming_normal_(conv->weight, 0.0, torch::kFanOut, torch::kReLU);
    }
  }
  return model;
}

void save_encoder(const TranslatorModel& model, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  torch::serialize::OutputArchive archive;
  model.net->encoder->save(archive);
  archive.save_to(path.string());
}

void load_encoder(TranslatorModel& model, const fs::path& path) {
  if (!fs::exists(path)) throw Error("encoder weights not found: " + path.string());
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
    model.net->encoder->load(archive);
  } catch (const c10::Error& e) {
    throw Error("encoder weights in " + path.string() + " do not match the model: " + e.what_without_backtrace());
  }
}

double learning_rate(const TrainConfig& config, int epoch) {
  if (config.lr_halve_every <= 0) return config.lr0;
  return config.lr0 * std::ldexp(1.0, -(epoch / config.lr_halve_every));
}

torch::Tensor image_to_tensor(const Image& image) {
  auto hwc = torch::from_blob(const_cast<float*>(image.data.data()), {image.height, image.width, image.channels},
                              torch::kFloat32);
  return hwc.permute({2, 0, 1}).clone(torch::MemoryFormat::Contiguous);
}

Image tensor_to_image(const torch::Tensor& chw) {
  const auto hwc = chw.detach().to(torch::kFloat32).permute({1, 2, 0}).contiguous();
  Image image(static_cast<int>(hwc.size(0)), static_cast<int>(hwc.size(1)), static_cast<int>(hwc.size(2)));
  std::memcpy(image.data.data(), hwc.data_ptr<float>(), image.data.size() * sizeof(float));
  return image;
}

fs::path branch_dir(const fs::path& run_dir, Branch branch) { return run_dir / directory_name(branch); }

void save_checkpoint(const TranslatorModel& model, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  torch::serialize::OutputArchive archive;
  model.net->save(archive);
  archive.save_to(path.string());
}

void load_checkpoint(TranslatorModel& model, const fs::path& path) {
  if (!fs::exists(path)) throw StageError("checkpoint " + path.string() + " not found; run `train` first");
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
    model.net->load(archive);
  } catch (const c10::Error& e) {
    throw Error("checkpoint " + path.string() + " does not match the model: " + e.what_without_backtrace());
  }
}

TranslatorModel load_latest(const fs::path& run_dir, Branch branch) {
  const fs::path dir = branch_dir(run_dir, branch);
  const fs::path pointer = dir / "latest";
  if (!fs::exists(pointer) || !fs::exists(dir / "model.txt")) {
    throw StageError(std::string("no trained ") + to_string(branch) + " model in " + run_dir.string() +
                     "; run `train --branch " + directory_name(branch) + "` first");
  }
  const auto doc = KvDocument::load(dir / "model.txt");
  ModelConfig config;
  config.base_width = static_cast<int>(doc.get_int("base_width", config.base_width));
  config.out_channels = static_cast<int>(doc.get_int("out_channels", config.out_channels));
  const auto blocks = split(doc.get_string("blocks", "3,4,6,3"), ',');
  if (blocks.size() != 4) throw Error("model.txt: blocks needs 4 entries");
  for (std::size_t i = 0; i < 4; ++i) config.blocks[i] = static_cast<int>(parse_int("blocks", blocks[i]));
  TranslatorModel model = make_model(branch, config, 0);
  std::ifstream in(pointer);
  std::string name;
  std::getline(in, name);
  load_checkpoint(model, dir / trim(name));
  model.net->eval();
  return model;
}

TrainResult train(TranslatorModel& model, const Corpus& corpus, const TargetCache& cache, const TrainConfig& config,
                  const fs::path& run_dir, const LogSink& log) {
  if (config.epochs < 0) throw Error("epochs must be >= 0");
  if (config.batch_size < 1) throw Error("batch size must be >= 1");
  if (config.lr0 <= 0) throw Error("learning rate must be positive");

  const auto missing = cache.missing(model.branch, corpus.train_clips);
  if (!missing.empty()) {
    throw StageError(std::to_string(missing.size()) + " training frames have no " + to_string(model.branch) +
                     " target (first: " + missing.front() + "); run `gen-targets` first");
  }

  std::vector<const Frame*> frames;
  for (const auto& clip : corpus.train_clips) {
    for (const auto& f : clip.frames) frames.push_back(&f);
  }
  if (frames.empty()) throw Error("no training frames");

  const Image& first = frames.front()->pixels;
  const PatchGrid grid = PatchGrid::uniform(config.patch_count, first.height, first.width);

  std::vector<torch::Tensor> inputs, targets;
  inputs.reserve(frames.size());
  targets.reserve(frames.size());
  for (const Frame* f : frames) {
    inputs.push_back(image_to_tensor(f->pixels));
    Image t = cache.read(model.branch, f->clip_id, f->index);
    if (t.channels != model.config.out_channels || t.height != first.height || t.width != first.width) {
      throw Error("target " + f->clip_id + "/" + frame_stem(f->index) + " does not match the " +
                  to_string(model.branch) + " model output shape");
    }
    targets.push_back(image_to_tensor(t));
  }
  const auto all_inputs = torch::stack(inputs);
  const auto all_targets = torch::stack(targets);
  inputs.clear();
  targets.clear();

  fs::path dir;
  std::ofstream loss_csv;
  if (!run_dir.empty()) {
    dir = branch_dir(run_dir, model.branch);
    fs::create_directories(dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".ckpt") fs::remove(entry.path());
    }
    write_model_config(dir / "model.txt", model.branch, model.config);
    loss_csv.open(dir / "loss.csv", std::ios::trunc);
    loss_csv << "epoch,step,loss\n";
  }
  auto write_checkpoint = [&](int epoch) {
    if (dir.empty()) return;
    const std::string name = "epoch_" + std::to_string(epoch) + ".ckpt";
    save_checkpoint(model, dir / name);
    std::ofstream(dir / "latest", std::ios::trunc) << name << "\n";
  };

  TrainResult result;
  if (config.epochs == 0) {
    write_checkpoint(0);
    return result;
  }

  torch::manual_seed(config.seed);
  torch::optim::Adam optimizer(model.net->parameters(), torch::optim::AdamOptions(config.lr0));
  std::mt19937_64 rng(config.seed ^ 0x5851f42d4c957f2dull);
  std::vector<std::int64_t> order(frames.size());
  std::iota(order.begin(), order.end(), 0);

  model.net->train();
  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = learning_rate(config, epoch);
    for (auto& group : optimizer.param_groups()) static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);
    std::shuffle(order.begin(), order.end(), rng);
    double sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const auto idx = torch::tensor(std::vector<std::int64_t>(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                                order.begin() + static_cast<std::ptrdiff_t>(end)));
      const auto x = all_inputs.index_select(0, idx);
      const auto y = all_targets.index_select(0, idx);
      optimizer.zero_grad();
      const auto loss = patch_loss(model.branch, model.net->forward(x), y, grid);
      loss.backward();
      optimizer.step();
      const double value = loss.item<double>();
      result.history.push_back({epoch, step, value});
      if (loss_csv.is_open()) loss_csv << epoch << "," << step << "," << value << "\n";
      sum += value;
      ++batches;
      ++step;
    }
    result.epoch_means.push_back(sum / batches);
    write_checkpoint(epoch + 1);
    if (log) {
      std::ostringstream msg;
      msg << to_string(model.branch) << " epoch " << epoch + 1 << "/" << config.epochs << " lr " << lr << " loss "
          << result.epoch_means.back();
      log(msg.str());
    }
  }
  model.net->eval();
  return result;
}

std::vector<Image> translate_batch(TranslatorModel& model, const std::vector<const Frame*>& frames) {
  if (frames.empty()) return {};
  torch::NoGradGuard no_grad;
  model.net->eval();
  std::vector<torch::Tensor> inputs;
  for (const Frame* f : frames) {
    if (f->pixels.channels != 3) throw Error("translate: frames must have 3 channels");
    if (!f->pixels.same_shape(frames.front()->pixels)) throw Error("translate: frames in a batch differ in shape");
    inputs.push_back(image_to_tensor(f->pixels));
  }
  const auto out = model.net->forward(torch::stack(inputs));
  std::vector<Image> images;
  for (std::int64_t i = 0; i < out.size(0); ++i) images.push_back(tensor_to_image(out[i]));
  return images;
}

Image translate(TranslatorModel& model, const Frame& frame) { return translate_batch(model, {&frame}).front(); }

}  // namespace translad::translator
