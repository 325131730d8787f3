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

// Source-filter synthesis of sustained vowels with known polarity.
//
// The source is the time derivative of a Rosenberg glottal pulse: a smooth
// positive lobe while the glottis opens, then a steeper negative lobe that
// ends abruptly at the glottal closure instant (GCI). Positive polarity
// means that derivative has its dominant peak negative, at the GCI.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "reskew/error.hpp"
#include "reskew/reskew.hpp"
#include "reskew/signal.hpp"

namespace reskew {

struct Formant {
  double center_hz;
  double bandwidth_hz;
};

struct VoiceSpec {
  double f0_hz = 120.0;
  double duration_s = 1.0;
  std::vector<Formant> formants{{660.0, 80.0}, {1720.0, 100.0}, {2410.0, 120.0}};
  double jitter_pct = 1.0;
  Polarity polarity = Polarity::kPositive;
  std::uint64_t seed = 0;
  // Fractions of the period spent opening and closing; the rest is closed.
  double open_fraction = 0.6;
  double closing_fraction = 0.3;

  void validate(int sample_rate) const {
    if (sample_rate <= 0) {
      throw Error(ErrorCode::kInvalidSpec, "sample rate must be positive");
    }
    if (!(f0_hz >= 50.0 && f0_hz <= 500.0)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "f0 " + std::to_string(f0_hz) + " Hz outside [50, 500]");
    }
    if (!(duration_s > 0.0)) {
      throw Error(ErrorCode::kInvalidSpec, "duration must be positive");
    }
    if (!(jitter_pct >= 0.0 && jitter_pct < 50.0)) {
      throw Error(ErrorCode::kInvalidSpec, "jitter must be in [0, 50) percent");
    }
    if (!(open_fraction > 0.0 && closing_fraction > 0.0 &&
          open_fraction + closing_fraction <= 1.0)) {
      throw Error(ErrorCode::kInvalidSpec, "bad open/closing fractions");
    }
    for (const Formant& f : formants) {
      if (!(f.center_hz > 0.0 && f.center_hz < 0.5 * sample_rate)) {
        throw Error(ErrorCode::kInvalidSpec,
                    "formant " + std::to_string(f.center_hz) +
                        " Hz outside (0, Fs/2)");
      }
      if (!(f.bandwidth_hz > 0.0)) {
        throw Error(ErrorCode::kInvalidSpec, "formant bandwidth must be positive");
      }
    }
  }
};

namespace detail {

// Uniform in [-1, 1) from the raw engine output; std distributions are not
// reproducible across standard libraries.
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace detail

/// Glottal flow derivative train. Cycle periods are Fs/f0 scaled by
/// (1 + jitter * u), u uniform in [-1, 1). Negative polarity is the exact
/// negation of the positive train for the same seed.
inline Signal glottal_source(const VoiceSpec& spec, int sample_rate) {
  spec.validate(sample_rate);
  const auto n = static_cast<std::size_t>(std::lround(spec.duration_s * sample_rate));
  std::vector<double> out(n, 0.0);
  std::mt19937_64 rng(spec.seed);
  const double nominal = sample_rate / spec.f0_hz;
  const double pi = std::numbers::pi;

  double cycle_start = 0.0;
  while (cycle_start < static_cast<double>(n)) {
    const double period =
        nominal * (1.0 + 0.01 * spec.jitter_pct * detail::uniform_pm1(rng));
    const double t_open = spec.open_fraction * period;
    const double t_close = spec.closing_fraction * period;
    const auto first = static_cast<std::size_t>(std::ceil(cycle_start));
    const double cycle_end = cycle_start + period;
    for (std::size_t i = first; i < n && static_cast<double>(i) < cycle_end; ++i) {
      const double t = static_cast<double>(i) - cycle_start;
      double v = 0.0;
      if (t <= t_open) {
        v = (pi / (2.0 * t_open)) * std::sin(pi * t / t_open);
      } else if (t <= t_open + t_close) {
        v = -(pi / (2.0 * t_close)) * std::sin(pi * (t - t_open) / (2.0 * t_close));
      }
      // Scale so the GCI peak has unit magnitude.
      out[i] = v * (2.0 * t_close / pi);
    }
    cycle_start = cycle_end;
  }
  if (spec.polarity == Polarity::kNegative) {
    for (double& v : out) v = -v;
  }
  return Signal(std::move(out), sample_rate);
}

/// Two-pole resonator with unit gain at DC.
inline IirCoeffs formant_resonator(const Formant& f, int sample_rate) {
  const double r = std::exp(-std::numbers::pi * f.bandwidth_hz / sample_rate);
  const double theta = 2.0 * std::numbers::pi * f.center_hz / sample_rate;
  const double a1 = -2.0 * r * std::cos(theta);
  const double a2 = r * r;
  return IirCoeffs({1.0 + a1 + a2}, {1.0, a1, a2});
}

/// Glottal source through cascaded formant resonators, peak-normalised to 0.5.
inline Signal synthesize_voice(const VoiceSpec& spec, int sample_rate) {
  VoiceSpec positive = spec;
  positive.polarity = Polarity::kPositive;
  std::vector<double> y = glottal_source(positive, sample_rate).vector();
  for (const Formant& f : spec.formants) {
    const IirCoeffs c = formant_resonator(f, sample_rate);
    std::vector<double> state(c.state_size(), 0.0);
    iir_filter_inplace(y, c, state);
  }
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw Error(ErrorCode::kInvalidSpec, "silent synthesis");
  const double gain = (spec.polarity == Polarity::kPositive ? 0.5 : -0.5) / peak;
  for (double& v : y) v *= gain;
  return Signal(std::move(y), sample_rate);
}

struct Vowel {
  std::string name;
  std::vector<Formant> formants;
};

inline std::vector<Vowel> standard_vowels() {
  return {
      {"a", {{660.0, 80.0}, {1720.0, 100.0}, {2410.0, 120.0}}},
      {"e", {{530.0, 70.0}, {1840.0, 100.0}, {2480.0, 120.0}}},
      {"o", {{570.0, 70.0}, {840.0, 80.0}, {2410.0, 120.0}}},
  };
}

inline constexpr double kGridF0Hz[] = {80.0, 120.0, 180.0, 240.0, 300.0};
inline constexpr int kGridSeeds = 5;

struct GridEntry {
  std::string name;
  VoiceSpec spec;
};

/// 5 F0 values x 3 vowels x 2 polarities x 5 seeds = 150 voices.
inline std::vector<GridEntry> standard_grid(double duration_s = 1.0) {
  std::vector<GridEntry> grid;
  for (double f0 : kGridF0Hz) {
    for (const Vowel& vowel : standard_vowels()) {
      for (Polarity pol : {Polarity::kPositive, Polarity::kNegative}) {
        for (int s = 0; s < kGridSeeds; ++s) {
          VoiceSpec spec;
          spec.f0_hz = f0;
          spec.duration_s = duration_s;
          spec.formants = vowel.formants;
          spec.polarity = pol;
          spec.seed = static_cast<std::uint64_t>(s) + 1;
          std::string name = "f0_" + std::to_string(static_cast<int>(f0)) +
                             "_" + vowel.name + "_" +
                             std::string(to_string(pol)) + "_s" +
                             std::to_string(s + 1);
          grid.push_back({std::move(name), std::move(spec)});
        }
      }
    }
  }
  return grid;
}

}  // namespace reskew
