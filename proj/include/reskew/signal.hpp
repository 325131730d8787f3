// Copyright 2026 The reskew Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reskew/error.hpp"

namespace reskew {

/// Mono audio: a sample buffer plus its sampling rate in Hz.
///
/// Every constructed Signal holds only finite samples and a positive rate;
/// the constructor throws otherwise, so downstream code never re-checks.
class Signal {
 public:
  Signal(std::vector<double> samples, int sample_rate)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    if (sample_rate_ <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample rate must be positive, got " +
                      std::to_string(sample_rate_));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!std::isfinite(samples_[i])) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite sample at index " + std::to_string(i));
      }
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& vector() const noexcept { return samples_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  Signal negated() const {
    std::vector<double> out(samples_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -samples_[i];
    return Signal(std::move(out), sample_rate_);
  }

  Signal scaled(double gain) const {
    std::vector<double> out(samples_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = gain * samples_[i];
    return Signal(std::move(out), sample_rate_);
  }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

}  // namespace reskew
