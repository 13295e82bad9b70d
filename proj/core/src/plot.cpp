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

#include "translad/plot.hpp"

#include <algorithm>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "translad/error.hpp"

namespace fs = std::filesystem;

namespace translad {

void plot_scores(const fs::path& path, const std::string& title, const std::vector<PlotCurve>& curves,
                 const std::vector<std::uint8_t>& labels, int width, int height) {
  constexpr int kLeft = 50, kRight = 20, kTop = 36, kBottom = 36;
  cv::Mat canvas(height, width, CV_8UC3, cv::Scalar(255, 255, 255));
  const int plot_w = width - kLeft - kRight;
  const int plot_h = height - kTop - kBottom;
  std::size_t n = labels.size();
  for (const auto& c : curves) n = std::max(n, c.values.size());
  if (n == 0) throw Error("plot: nothing to draw for " + title);
  auto x_of = [&](double i) { return kLeft + static_cast<int>(n > 1 ? i * plot_w / static_cast<double>(n - 1) : 0); };

  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    const int x0 = x_of(static_cast<double>(i) - 0.5), x1 = x_of(static_cast<double>(i) + 0.5);
    cv::rectangle(canvas, cv::Point(std::max(x0, kLeft), kTop), cv::Point(std::min(x1, kLeft + plot_w), kTop + plot_h),
                  cv::Scalar(203, 192, 255), cv::FILLED);
  }
  cv::rectangle(canvas, cv::Point(kLeft, kTop), cv::Point(kLeft + plot_w, kTop + plot_h), cv::Scalar(0, 0, 0), 1);

  int legend_x = kLeft;
  for (const auto& c : curves) {
    if (c.values.empty()) continue;
    const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
    const double span = *hi - *lo;
    std::vector<cv::Point> pts;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const double v = span > 0 ? (c.values[i] - *lo) / span : 0.0;
      pts.emplace_back(x_of(static_cast<double>(i)), kTop + plot_h - static_cast<int>(v * plot_h));
    }
    const cv::Scalar color(c.b, c.g, c.r);
    cv::polylines(canvas, pts, false, color, 2, cv::LINE_AA);
    cv::putText(canvas, c.name, cv::Point(legend_x, height - 12), cv::FONT_HERSHEY_SIMPLEX, 0.5, color, 1, cv::LINE_AA);
    legend_x += 30 + 10 * static_cast<int>(c.name.size());
  }
  cv::putText(canvas, title, cv::Point(kLeft, 24), cv::FONT_HERSHEY_SIMPLEX, 0.6, cv::Scalar(0, 0, 0), 1, cv::LINE_AA);
  cv::putText(canvas, "frame", cv::Point(kLeft + plot_w - 40, height - 12), cv::FONT_HERSHEY_SIMPLEX, 0.45,
              cv::Scalar(80, 80, 80), 1, cv::LINE_AA);

  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), canvas)) throw Error("cannot write " + path.string());
}

}  // namespace translad
