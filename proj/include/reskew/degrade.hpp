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

// Degradations applied to clean speech: additive noise at a target SNR and
// reverberation through an image-source room impulse response.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reskew/dsp.hpp"
#include "reskew/error.hpp"
#include "reskew/signal.hpp"

namespace reskew {

namespace detail {

inline double mean_square(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

}  // namespace detail

/// Gain g such that clean + g * noise[0..len) has the requested SNR, with
/// both powers taken over the full clean length (no silence removal).
inline double noise_gain(const Signal& clean, const Signal& noise, double snr_db) {
  if (clean.sample_rate() != noise.sample_rate()) {
    throw Error(ErrorCode::kRateMismatch,
                "clean at " + std::to_string(clean.sample_rate()) +
                    " Hz, noise at " + std::to_string(noise.sample_rate()) + " Hz");
  }
  if (clean.empty() || noise.size() < clean.size()) {
    throw Error(ErrorCode::kNoiseTooShort,
                "noise has " + std::to_string(noise.size()) +
                    " samples, clean has " + std::to_string(clean.size()));
  }
  const double p_clean = detail::mean_square(clean.samples());
  const double p_noise =
      detail::mean_square(noise.samples().first(clean.size()));
  if (p_clean == 0.0 || p_noise == 0.0) {
    throw Error(ErrorCode::kSilentInput, "zero-power clean or noise signal");
  }
  return std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
}

/// clean + g * noise, noise truncated to the clean length (never looped).
inline Signal mix_noise(const Signal& clean, const Signal& noise, double snr_db) {
  const double g = noise_gain(clean, noise, snr_db);
  std::vector<double> y(clean.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = clean[i] + g * noise[i];
  return Signal(std::move(y), clean.sample_rate());
}

/// Zero-mean, unit-variance Gaussian noise from a seeded Mersenne Twister.
inline Signal white_noise(std::size_t n, int sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return Signal(std::move(x), sample_rate);
}

using Vec3 = std::array<double, 3>;

struct RoomSpec {
  Vec3 dimensions_m{3.0, 4.0, 5.0};
  Vec3 source_pos_m{1.0, 1.5, 1.5};
  Vec3 mic_pos_m{2.0, 2.5, 1.5};
  double t60_s = 0.3;
  double speed_of_sound = 343.0;
  // Bound on the total number of wall reflections per image; unset means
  // images are limited only by the RIR length and the energy floor.
  std::optional<int> max_order;
  // Images whose amplitude falls this far below the direct path are skipped.
  double energy_floor_db = -80.0;
  // Refine the Eyring reflection coefficient until the generated response's
  // Schroeder decay reaches -60 dB at t60_s. Plain Eyring otherwise.
  bool calibrate_t60 = true;

  void validate() const {
    for (int d = 0; d < 3; ++d) {
      const double len = dimensions_m[static_cast<std::size_t>(d)];
      if (!(len > 0.0)) {
        throw Error(ErrorCode::kInvalidGeometry, "room dimensions must be positive");
      }
      for (const Vec3* p : {&source_pos_m, &mic_pos_m}) {
        const double c = (*p)[static_cast<std::size_t>(d)];
        if (!(c > 0.0 && c < len)) {
          throw Error(ErrorCode::kInvalidGeometry,
                      "source and microphone must be strictly inside the room");
        }
      }
    }
    if (source_pos_m == mic_pos_m) {
      throw Error(ErrorCode::kInvalidGeometry, "source and microphone coincide");
    }
    if (!(t60_s > 0.0)) {
      throw Error(ErrorCode::kInvalidGeometry, "T60 must be positive");
    }
    if (!(speed_of_sound > 0.0)) {
      throw Error(ErrorCode::kInvalidGeometry, "speed of sound must be positive");
    }
    if (max_order && *max_order < 0) {
      throw Error(ErrorCode::kInvalidGeometry, "max_order must be >= 0");
    }
  }

  double volume() const {
    return dimensions_m[0] * dimensions_m[1] * dimensions_m[2];
  }

  double surface() const {
    const auto& d = dimensions_m;
    return 2.0 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]);
  }

  double source_mic_distance() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double d = source_pos_m[i] - mic_pos_m[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
};

struct Rir {
  std::vector<double> taps;
  int sample_rate = 16000;
};

/// Uniform wall pressure reflection coefficient from Eyring's formula,
/// T60 = 24 ln(10) V / (-c S ln(1 - alpha)), with beta = sqrt(1 - alpha).
inline double eyring_reflection(const RoomSpec& room) {
  const double k = 24.0 * std::numbers::ln10 * room.volume() /
                   (room.speed_of_sound * room.surface() * room.t60_s);
  return std::exp(-0.5 * k);
}

inline constexpr int kFractionalDelayHalfWidth = 4;

/// Image-source RIR for a shoebox room with a given uniform wall reflection.
///
/// Each image contributes beta^reflections / (4 pi d) at delay d / c,
/// spread over +-4 samples by a Hann-windowed sinc. The response is
/// 1.5 * T60 long (extended if needed to hold the direct path).
inline Rir image_method_rir(const RoomSpec& room, int sample_rate, double beta) {
  room.validate();
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "reflection coefficient outside [0, 1)");
  }
  const double fs = sample_rate;
  const double c = room.speed_of_sound;
  const double direct_dist = room.source_mic_distance();
  const double direct_amp = 1.0 / (4.0 * std::numbers::pi * direct_dist);
  const double floor_amp = direct_amp * std::pow(10.0, room.energy_floor_db / 20.0);

  const double direct_delay = direct_dist / c * fs;
  const auto length = static_cast<std::size_t>(std::max(
      std::ceil(1.5 * room.t60_s * fs),
      std::ceil(direct_delay) + kFractionalDelayHalfWidth + 1));
  std::vector<double> h(length, 0.0);
  const double max_dist = static_cast<double>(length + kFractionalDelayHalfWidth) / fs * c;

  const auto& dim = room.dimensions_m;
  const auto& src = room.source_pos_m;
  const auto& mic = room.mic_pos_m;
  std::array<int, 3> reach{};
  for (std::size_t d = 0; d < 3; ++d) {
    reach[d] = static_cast<int>(std::ceil(max_dist / (2.0 * dim[d]))) + 1;
  }
  const double log_beta = beta > 0.0 ? std::log(beta) : -INFINITY;

  auto add_arrival = [&](double dist, double amp) {
    const double delay = dist / c * fs;
    const auto centre = static_cast<long>(std::floor(delay));
    for (long n = centre - kFractionalDelayHalfWidth + 1;
         n <= centre + kFractionalDelayHalfWidth; ++n) {
      if (n < 0 || n >= static_cast<long>(length)) continue;
      const double t = static_cast<double>(n) - delay;
      if (std::abs(t) >= kFractionalDelayHalfWidth) continue;
      const double sinc =
          t == 0.0 ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
      const double win =
          0.5 * (1.0 + std::cos(std::numbers::pi * t / kFractionalDelayHalfWidth));
      h[static_cast<std::size_t>(n)] += amp * sinc * win;
    }
  };

  // Image coordinate along one axis: (1 - 2p) * src + 2 n L, reflected
  // |n - p| + |n| times.
  for (int nx = -reach[0]; nx <= reach[0]; ++nx) {
    for (int px = 0; px <= 1; ++px) {
      const double dx = (1 - 2 * px) * src[0] + 2.0 * nx * dim[0] - mic[0];
      const int rx = std::abs(nx - px) + std::abs(nx);
      if (std::abs(dx) > max_dist) continue;
      for (int ny = -reach[1]; ny <= reach[1]; ++ny) {
        for (int py = 0; py <= 1; ++py) {
          const double dy = (1 - 2 * py) * src[1] + 2.0 * ny * dim[1] - mic[1];
          const int ry = std::abs(ny - py) + std::abs(ny);
          const double dxy2 = dx * dx + dy * dy;
          if (dxy2 > max_dist * max_dist) continue;
          for (int nz = -reach[2]; nz <= reach[2]; ++nz) {
            for (int pz = 0; pz <= 1; ++pz) {
              const double dz = (1 - 2 * pz) * src[2] + 2.0 * nz * dim[2] - mic[2];
              const int rz = std::abs(nz - pz) + std::abs(nz);
              const int order = rx + ry + rz;
              if (room.max_order && order > *room.max_order) continue;
              const double dist = std::sqrt(dxy2 + dz * dz);
              if (dist > max_dist) continue;
              const double refl = order == 0 ? 1.0 : std::exp(order * log_beta);
              const double amp = refl / (4.0 * std::numbers::pi * dist);
              if (order > 0 && amp < floor_amp) continue;
              add_arrival(dist, amp);
            }
          }
        }
      }
    }
  }
  return {std::move(h), sample_rate};
}

/// Schroeder backward-integrated energy decay in dB, 0 dB at the first tap.
inline std::vector<double> schroeder_decay_db(std::span<const double> taps) {
  std::vector<double> edc(taps.size());
  double acc = 0.0;
  for (std::size_t i = taps.size(); i-- > 0;) {
    acc += taps[i] * taps[i];
    edc[i] = acc;
  }
  const double total = edc.empty() ? 0.0 : edc[0];
  for (double& v : edc) {
    v = (v > 0.0 && total > 0.0) ? 10.0 * std::log10(v / total) : -INFINITY;
  }
  return edc;
}

/// Time in seconds, measured from the first non-zero tap, at which the
/// Schroeder decay first drops to `level_db`; nullopt if it never does.
inline std::optional<double> decay_time(const Rir& rir, double level_db = -60.0) {
  const auto edc = schroeder_decay_db(rir.taps);
  std::size_t onset = 0;
  while (onset < rir.taps.size() && rir.taps[onset] == 0.0) ++onset;
  for (std::size_t i = onset; i < edc.size(); ++i) {
    if (edc[i] <= level_db) {
      return static_cast<double>(i - onset) / rir.sample_rate;
    }
  }
  return std::nullopt;
}

/// Image-source RIR whose reflection coefficient is derived from room.t60_s.
///
/// With a uniform coefficient, images close to the longest room axis see
/// fewer reflections per metre than the mean free path implies, so the
/// Eyring value alone decays too slowly. When room.calibrate_t60 is set the
/// coefficient is bisected (starting from Eyring) until the -60 dB crossing
/// of the Schroeder decay lands within 0.5 % of t60_s.
inline Rir image_method_rir(const RoomSpec& room, int sample_rate) {
  room.validate();
  const double eyring = eyring_reflection(room);
  Rir best = image_method_rir(room, sample_rate, eyring);
  if (!room.calibrate_t60) return best;

  const double target = room.t60_s;
  auto error_of = [&](const Rir& rir) {
    const auto t = decay_time(rir, -60.0);
    return t ? *t - target : INFINITY;
  };
  double best_err = error_of(best);
  if (std::abs(best_err) <= 0.005 * target) return best;

  // Decay time grows with beta; bracket in log(-log beta) coordinates.
  auto to_beta = [](double u) { return std::exp(-std::exp(u)); };
  const double u0 = std::log(-std::log(std::max(eyring, 1e-300)));
  double lo = u0, hi = u0;  // beta(lo) > beta(hi)
  if (best_err > 0.0) {
    for (int i = 0; i < 40; ++i) {
      hi += 0.25;
      if (error_of(image_method_rir(room, sample_rate, to_beta(hi))) < 0.0) break;
    }
  } else {
    for (int i = 0; i < 40; ++i) {
      lo -= 0.25;
      if (error_of(image_method_rir(room, sample_rate, to_beta(lo))) > 0.0) break;
    }
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    Rir rir = image_method_rir(room, sample_rate, to_beta(mid));
    const double err = error_of(rir);
    if (std::abs(err) < std::abs(best_err)) {
      best_err = err;
      best = std::move(rir);
    }
    if (std::abs(best_err) <= 0.005 * target) break;
    (err > 0.0 ? lo : hi) = mid;
  }
  return best;
}

inline Signal reverberate(const Signal& clean, const Rir& rir) {
  if (clean.sample_rate() != rir.sample_rate) {
    throw Error(ErrorCode::kRateMismatch,
                "speech at " + std::to_string(clean.sample_rate()) +
                    " Hz, RIR at " + std::to_string(rir.sample_rate) + " Hz");
  }
  return fir_convolve(clean, rir.taps);
}

}  // namespace reskew
