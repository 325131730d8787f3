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

// Polarity detection from the skewness of two excitation signals:
//   r(n)  - the LP residual of the speech,
//   g'(n) - the speech inverse-filtered with LP coefficients estimated on a
//           high-passed copy, a rough glottal flow derivative.
// A positive-polarity recording gives skew(r) > 0 and skew(g') < 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reskew/dsp.hpp"
#include "reskew/elliptic.hpp"
#include "reskew/error.hpp"
#include "reskew/signal.hpp"

namespace reskew {

enum class Polarity { kPositive, kNegative };

enum class Method {
  kReskew,     // sign of skew(r) - skew(g')
  kReskewRes,  // sign of skew(r)
  kReskewGlot  // sign of -skew(g')
};

inline constexpr Method kAllMethods[] = {Method::kReskew, Method::kReskewRes,
                                         Method::kReskewGlot};

inline std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

inline Polarity flipped(Polarity p) {
  return p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  return std::nullopt;
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kReskew: return "reskew";
    case Method::kReskewRes: return "reskew-res";
    case Method::kReskewGlot: return "reskew-glot";
  }
  return "reskew";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

struct ReskewConfig {
  double frame_shift_ms = 5.0;
  double frame_length_ms = 25.0;
  // Unset means round(Fs / 1000) + 2.
  std::optional<int> lp_order;
  double cutoff_hz = 400.0;
  int filter_order = 9;
  double passband_ripple_db = 0.5;
  double stopband_atten_db = 60.0;

  int resolved_lp_order(int sample_rate) const {
    return lp_order ? *lp_order
                    : static_cast<int>(std::lround(sample_rate / 1000.0)) + 2;
  }

  std::size_t frame_length(int sample_rate) const {
    return static_cast<std::size_t>(
        std::lround(frame_length_ms * sample_rate / 1000.0));
  }

  std::size_t frame_shift(int sample_rate) const {
    return static_cast<std::size_t>(
        std::lround(frame_shift_ms * sample_rate / 1000.0));
  }

  EllipticSpec highpass(int sample_rate) const {
    return EllipticSpec{filter_order, cutoff_hz, passband_ripple_db,
                        stopband_atten_db, sample_rate};
  }

  void validate(int sample_rate) const {
    if (!(frame_shift_ms > 0.0) || !(frame_length_ms > frame_shift_ms)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "need frame_length_ms > frame_shift_ms > 0");
    }
    if (frame_shift(sample_rate) == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame shift rounds to zero samples");
    }
    const int p = resolved_lp_order(sample_rate);
    if (p < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "LP order must be at least 2, got " + std::to_string(p));
    }
    if (static_cast<std::size_t>(p) >= frame_length(sample_rate)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "LP order must be below the frame length");
    }
    highpass(sample_rate).validate();
  }
};

struct LpFrame {
  std::size_t center_index = 0;
  std::vector<double> coeffs;  // a_1..a_p, A(z) = 1 - sum a_k z^-k
  double gain = 0.0;
};

/// Frame-wise LP analysis on Hann-windowed frames.
///
/// Frame m covers [m * shift, m * shift + length); only full frames are
/// analysed. Throws SignalTooShort when not even one frame fits.
inline std::vector<LpFrame> lp_analysis(std::span<const double> x,
                                        int sample_rate,
                                        const ReskewConfig& config) {
  config.validate(sample_rate);
  const std::size_t len = config.frame_length(sample_rate);
  const std::size_t shift = config.frame_shift(sample_rate);
  const auto order = static_cast<std::size_t>(config.resolved_lp_order(sample_rate));
  if (x.size() < len) {
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(x.size()) + " samples, one frame needs " +
                    std::to_string(len));
  }
  const std::vector<double> window = hanning_window(len);
  std::vector<double> buf(len);
  std::vector<LpFrame> frames;
  frames.reserve((x.size() - len) / shift + 1);
  for (std::size_t start = 0; start + len <= x.size(); start += shift) {
    for (std::size_t i = 0; i < len; ++i) buf[i] = x[start + i] * window[i];
    const auto acf = autocorrelation(buf, order);
    auto lp = levinson_durbin(acf, order);
    frames.push_back({start + len / 2, std::move(lp.coeffs), lp.gain});
  }
  return frames;
}

/// Time-varying inverse filtering e[n] = x[n] - sum_k a_k x[n - k].
///
/// Frame m's predictor is used over its hop segment, the `shift` samples
/// starting at center_m - shift/2. Samples before the first segment or after
/// the last take the nearest frame. The input history is continuous across
/// segment boundaries (no per-frame restart).
inline std::vector<double> inverse_filter(std::span<const double> x,
                                          const std::vector<LpFrame>& frames,
                                          std::size_t shift) {
  if (frames.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no LP frames");
  }
  std::vector<double> out(x.size());
  const std::size_t first_center = frames.front().center_index;
  const std::size_t seg0 = first_center >= shift / 2 ? first_center - shift / 2 : 0;
  const std::size_t last = frames.size() - 1;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::size_t m =
        n < seg0 ? 0 : std::min((n - seg0) / shift, last);
    const auto& a = frames[m].coeffs;
    double acc = x[n];
    const std::size_t taps = std::min(a.size(), n);
    for (std::size_t k = 1; k <= taps; ++k) acc -= a[k - 1] * x[n - k];
    // History before the first sample repeats x[0].
    for (std::size_t k = taps + 1; k <= a.size(); ++k) acc -= a[k - 1] * x[0];
    out[n] = acc;
  }
  return out;
}

/// r(n): speech inverse-filtered with its own frame-wise LP model.
inline Signal lp_residual(const Signal& speech, const ReskewConfig& config) {
  const auto frames = lp_analysis(speech.samples(), speech.sample_rate(), config);
  return Signal(inverse_filter(speech.samples(), frames,
                               config.frame_shift(speech.sample_rate())),
                speech.sample_rate());
}

/// g'(n): the ORIGINAL speech inverse-filtered with LP coefficients
/// estimated on its elliptic high-passed version (cutoff config.cutoff_hz).
inline Signal glottal_derivative(const Signal& speech,
                                 const ReskewConfig& config) {
  const int fs = speech.sample_rate();
  config.validate(fs);
  const Signal high = design_elliptic_highpass(config.highpass(fs)).apply(speech);
  const auto frames = lp_analysis(high.samples(), fs, config);
  return Signal(inverse_filter(speech.samples(), frames, config.frame_shift(fs)),
                fs);
}

struct ExcitationPair {
  Signal residual;
  Signal glottal_derivative;
  double skew_residual = 0.0;
  double skew_glottal = 0.0;
};

/// Both excitation signals and their whole-signal skewness. The mean is
/// removed from the speech once, before any analysis.
inline ExcitationPair analyze_excitation(const Signal& speech,
                                         const ReskewConfig& config) {
  const Signal x = remove_dc(speech);
  Signal r = lp_residual(x, config);
  Signal g = glottal_derivative(x, config);
  const double sr = skewness(r);
  const double sg = skewness(g);
  return {std::move(r), std::move(g), sr, sg};
}

inline double decision_statistic(Method method, double skew_residual,
                                 double skew_glottal) {
  switch (method) {
    case Method::kReskew: return skew_residual - skew_glottal;
    case Method::kReskewRes: return skew_residual;
    case Method::kReskewGlot: return -skew_glottal;
  }
  return 0.0;
}

struct PolarityDecision {
  Polarity polarity;
  Method method;
  double statistic;
  ExcitationPair excitation;
};

/// Decision from an already computed excitation pair.
inline PolarityDecision decide(const ExcitationPair& excitation, Method method) {
  const double stat = decision_statistic(method, excitation.skew_residual,
                                         excitation.skew_glottal);
  if (stat == 0.0) {
    throw Error(ErrorCode::kExactTie,
                std::string("statistic is exactly zero for ") +
                    std::string(to_string(method)));
  }
  return {stat > 0.0 ? Polarity::kPositive : Polarity::kNegative, method, stat,
          excitation};
}

inline PolarityDecision detect_polarity(const Signal& speech,
                                        const ReskewConfig& config = {},
                                        Method method = Method::kReskew) {
  return decide(analyze_excitation(speech, config), method);
}

}  // namespace reskew
