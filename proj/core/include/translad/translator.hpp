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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "translad/data_model.hpp"
#include "translad/target_cache.hpp"

namespace translad::translator {

// Non-overlapping tiling of a frame. Bounds run from 0 to the frame extent.
struct PatchGrid {
  std::vector<int> row_bounds;
  std::vector<int> col_bounds;

  // k equal patches on a sqrt(k) x sqrt(k) layout; leftover rows/columns go to the last patch.
  static PatchGrid uniform(int k, int height, int width);

  [[nodiscard]] int count() const {
    return static_cast<int>((row_bounds.size() - 1) * (col_bounds.size() - 1));
  }
  // Throws unless the grid partitions a height x width frame exactly.
  void validate(int height, int width) const;
};

enum class LossKind { squared, absolute };

// Per-frame, per-patch mean loss: [B, C, H, W] x2 -> [B, k]; patch order is row-major.
torch::Tensor patch_losses(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid,
                           LossKind kind);

// Maximum patch MSE per frame, averaged over the batch.
torch::Tensor patch_loss_appearance(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid);
// Maximum patch MAE per frame, averaged over the batch.
torch::Tensor patch_loss_motion(const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid);
torch::Tensor patch_loss(Branch branch, const torch::Tensor& output, const torch::Tensor& target, const PatchGrid& grid);

struct ModelConfig {
  int base_width = 64;
  std::array<int, 4> blocks{3, 4, 6, 3};  // residual blocks per encoder stage (34-layer layout)
  int out_channels = 1;
};

struct BasicBlockImpl : torch::nn::Module {
  BasicBlockImpl(int in_channels, int out_channels, int stride);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr}, bn2{nullptr};
  torch::nn::Sequential shortcut{nullptr};
};
TORCH_MODULE(BasicBlock);

struct ResidualEncoderImpl : torch::nn::Module {
  explicit ResidualEncoderImpl(const ModelConfig& config);
  // Feature maps at strides 2, 4, 8, 16, 32.
  std::vector<torch::Tensor> forward(const torch::Tensor& x);

  torch::nn::Sequential stem{nullptr};
  torch::nn::MaxPool2d pool{nullptr};
  std::array<torch::nn::Sequential, 4> stages{nullptr, nullptr, nullptr, nullptr};
  std::array<int, 5> channels{};
};
TORCH_MODULE(ResidualEncoder);

struct DecoderBlockImpl : torch::nn::Module {
  DecoderBlockImpl(int in_channels, int skip_channels, int out_channels);
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& skip);

  torch::nn::Sequential body{nullptr};
};
TORCH_MODULE(DecoderBlock);

// U-Net with a residual encoder, skip connections at every scale and a sigmoid head.
struct ResUNetImpl : torch::nn::Module {
  explicit ResUNetImpl(const ModelConfig& config);
  torch::Tensor forward(const torch::Tensor& x);

  ModelConfig config;
  ResidualEncoder encoder{nullptr};
  std::vector<DecoderBlock> decoder;
  torch::nn::Conv2d head{nullptr};
};
TORCH_MODULE(ResUNet);

struct TranslatorModel {
  Branch branch = Branch::appearance;
  ModelConfig config;
  ResUNet net{nullptr};
};

TranslatorModel make_model(Branch branch, const ModelConfig& config, std::uint64_t seed);

void save_encoder(const TranslatorModel& model, const std::filesystem::path& path);
void load_encoder(TranslatorModel& model, const std::filesystem::path& path);

struct TrainConfig {
  double lr0 = 0.005;
  int lr_halve_every = 10;
  int epochs = 60;
  int batch_size = 8;
  int patch_count = 9;
  std::uint64_t seed = 0;
};

// lr0 * 2^-floor(epoch / lr_halve_every)
double learning_rate(const TrainConfig& config, int epoch);

struct LossRecord {
  int epoch = 0;
  int step = 0;
  double loss = 0.0;
};

struct TrainResult {
  std::vector<LossRecord> history;
  std::vector<double> epoch_means;
};

using LogSink = std::function<void(const std::string&)>;

// Fits the model to cached targets of the training split. When `run_dir` is non-empty a
// checkpoint <run_dir>/<branch>/epoch_<n>.ckpt, a `latest` pointer and loss.csv are written.
TrainResult train(TranslatorModel& model, const Corpus& corpus, const TargetCache& cache, const TrainConfig& config,
                  const std::filesystem::path& run_dir = {}, const LogSink& log = {});

// Inference-mode forward pass; output is H x W x out_channels in [0, 1].
Image translate(TranslatorModel& model, const Frame& frame);
std::vector<Image> translate_batch(TranslatorModel& model, const std::vector<const Frame*>& frames);

torch::Tensor image_to_tensor(const Image& image);  // HWC -> CHW float
Image tensor_to_image(const torch::Tensor& chw);    // CHW -> HWC

std::filesystem::path branch_dir(const std::filesystem::path& run_dir, Branch branch);
void save_checkpoint(const TranslatorModel& model, const std::filesystem::path& path);
void load_checkpoint(TranslatorModel& model, const std::filesystem::path& path);
// Rebuilds the model described by <run_dir>/<branch>/model.txt and loads the `latest` checkpoint.
TranslatorModel load_latest(const std::filesystem::path& run_dir, Branch branch);

}  // namespace translad::translator
