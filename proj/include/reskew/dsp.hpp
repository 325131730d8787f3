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

// Numeric kernels shared by the analysis, degradation and synthesis code:
// windowing, autocorrelation, Levinson-Durbin, IIR/FIR filtering, and the
// whole-sequence skewness statistic.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "reskew/error.hpp"
#include "reskew/signal.hpp"

namespace reskew {

namespace detail {

// Neumaier compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace detail

// Skewness with 1/N-normalised moments:
//   gamma1 = m3 / m2^(3/2),  mk = (1/N) sum (x_i - mean)^k.
// Deviations are taken from the rounded mean c, and the moments are then
// shifted by mu = mean(x - c):
//   m2 = s2 - mu^2,  m3 = s3 - 3 mu s2 + 2 mu^3.
template <std::ranges::contiguous_range R>
  requires std::floating_point<std::ranges::range_value_t<R>>
double skewness(const R& range) {
  std::span<const std::ranges::range_value_t<R>> x(range);
  if (x.size() < 2) {
    throw Error(ErrorCode::kTooShort, "skewness needs at least 2 samples");
  }
  if (std::ranges::all_of(x, [&](auto v) { return v == x[0]; })) {
    throw Error(ErrorCode::kZeroVariance, "all samples are equal");
  }
  const double n = static_cast<double>(x.size());
  detail::CompensatedSum sum;
  for (auto v : x) sum.add(static_cast<double>(v));
  const double c = sum.value() / n;
  detail::CompensatedSum s1;
  detail::CompensatedSum s2;
  detail::CompensatedSum s3;
  for (auto v : x) {
    const double d = static_cast<double>(v) - c;
    const double d2 = d * d;
    s1.add(d);
    s2.add(d2);
    s3.add(d2 * d);
  }
  const double mu = s1.value() / n;
  const double e2 = s2.value() / n;
  const double m2 = e2 - mu * mu;
  const double m3 = s3.value() / n - 3.0 * mu * e2 + 2.0 * mu * mu * mu;
  if (m2 == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "second central moment is zero");
  }
  return m3 / (m2 * std::sqrt(m2));
}

inline double skewness(const Signal& s) { return skewness(s.vector()); }

/// Symmetric n-point Hann taper, w[k] = 0.5 (1 - cos(2 pi k / (n - 1))).
inline std::vector<double> hanning_window(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "window length is 0");
  if (n == 1) return {1.0};
  std::vector<double> w(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 * (1.0 - std::cos(step * static_cast<double>(k)));
  }
  // cos() is not exactly symmetric in floating point; mirror the first half.
  for (std::size_t k = 0; k < n / 2; ++k) w[n - 1 - k] = w[k];
  return w;
}

/// Biased, unnormalised autocorrelation R[0..max_lag].
inline std::vector<double> autocorrelation(std::span<const double> frame,
                                           std::size_t max_lag) {
  if (max_lag >= frame.size()) {
    throw Error(ErrorCode::kLagTooLarge,
                "max_lag " + std::to_string(max_lag) +
                    " must be below frame length " +
                    std::to_string(frame.size()));
  }
  std::vector<double> r(max_lag + 1, 0.0);
  const std::size_t n = frame.size();
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) acc += frame[k] * frame[k + lag];
    r[lag] = acc;
  }
  return r;
}

inline constexpr double kLpRidge = 1e-9;

struct LpSolution {
  // Predictor a_1..a_p; the inverse filter is A(z) = 1 - sum a_k z^-k.
  std::vector<double> coeffs;
  // Square root of the final forward prediction error energy.
  double gain = 0.0;
};

/// Solves the autocorrelation normal equations for an order-p predictor.
///
/// R[0] is inflated by (1 + kLpRidge) before the recursion. An all-zero
/// autocorrelation (digital silence) yields the trivial predictor.
inline LpSolution levinson_durbin(std::span<const double> acf,
                                  std::size_t order) {
  if (acf.size() < order + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "autocorrelation has " + std::to_string(acf.size()) +
                    " lags, order " + std::to_string(order) + " needs " +
                    std::to_string(order + 1));
  }
  LpSolution out{std::vector<double>(order, 0.0), 0.0};
  if (acf[0] == 0.0) return out;
  if (!(acf[0] > 0.0) || !std::isfinite(acf[0])) {
    throw Error(ErrorCode::kSingularToeplitz, "R[0] must be positive");
  }

  std::vector<double>& a = out.coeffs;
  std::vector<double> prev(order, 0.0);
  double err = acf[0] * (1.0 + kLpRidge);
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = acf[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j - 1] * acf[i - j];
    const double k = acc / err;
    if (!std::isfinite(k)) {
      throw Error(ErrorCode::kSingularToeplitz,
                  "non-finite reflection coefficient at stage " +
                      std::to_string(i));
    }
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i - 1),
              prev.begin());
    for (std::size_t j = 1; j < i; ++j) a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
    a[i - 1] = k;
    err *= (1.0 - k * k);
    // Exactly predictable input: the remaining stages would divide by ~0.
    if (!(err > 0.0)) {
      err = 0.0;
      break;
    }
  }
  out.gain = std::sqrt(err);
  return out;
}

/// Transfer function b(z)/a(z), normalised so that a[0] == 1.
class IirCoeffs {
 public:
  IirCoeffs(std::vector<double> b, std::vector<double> a)
      : b_(std::move(b)), a_(std::move(a)) {
    if (b_.empty() || a_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty filter polynomial");
    }
    if (a_[0] == 0.0 || !std::isfinite(a_[0])) {
      throw Error(ErrorCode::kInvalidArgument, "a[0] must be finite, nonzero");
    }
    const double a0 = a_[0];
    if (a0 != 1.0) {
      for (double& v : b_) v /= a0;
      for (double& v : a_) v /= a0;
    }
    a_[0] = 1.0;
  }

  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& a() const noexcept { return a_; }
  std::size_t state_size() const noexcept {
    return std::max(b_.size(), a_.size()) - 1;
  }

 private:
  std::vector<double> b_;
  std::vector<double> a_;
};

// Transposed direct-form II, in place. `state` must hold state_size() values
// and is updated so that a following call continues seamlessly.
inline void iir_filter_inplace(std::span<double> data, const IirCoeffs& c,
                               std::span<double> state) {
  const std::size_t order = c.state_size();
  const std::size_t nb = c.b().size();
  const std::size_t na = c.a().size();
  auto bk = [&](std::size_t k) { return k < nb ? c.b()[k] : 0.0; };
  auto ak = [&](std::size_t k) { return k < na ? c.a()[k] : 0.0; };
  std::vector<double> b(order + 1), a(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    b[k] = bk(k);
    a[k] = ak(k);
  }
  if (order == 0) {
    for (double& v : data) v *= b[0];
    return;
  }
  for (double& v : data) {
    const double x = v;
    const double y = b[0] * x + state[0];
    for (std::size_t k = 1; k < order; ++k) {
      state[k - 1] = b[k] * x - a[k] * y + state[k];
    }
    state[order - 1] = b[order] * x - a[order] * y;
    v = y;
  }
}

struct FilterResult {
  Signal output;
  std::vector<double> state;
};

/// Causal single-pass filtering. Passing the returned state back in lets a
/// long signal be filtered segment by segment with identical output.
inline FilterResult iir_filter(const Signal& x, const IirCoeffs& coeffs,
                               std::span<const double> initial_state = {}) {
  std::vector<double> state(coeffs.state_size(), 0.0);
  if (!initial_state.empty()) {
    if (initial_state.size() != state.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "filter state has " + std::to_string(initial_state.size()) +
                      " values, expected " + std::to_string(state.size()));
    }
    std::ranges::copy(initial_state, state.begin());
  }
  std::vector<double> y = x.vector();
  iir_filter_inplace(y, coeffs, state);
  return {Signal(std::move(y), x.sample_rate()), std::move(state)};
}

/// Linear convolution truncated to the input length, aligned at the start.
inline Signal fir_convolve(const Signal& x, std::span<const double> h) {
  if (x.empty() || h.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "convolution of empty sequence");
  }
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  const auto xs = x.samples();
  const std::size_t taps = std::min(h.size(), n);
  for (std::size_t k = 0; k < taps; ++k) {
    const double hk = h[k];
    if (hk == 0.0) continue;
    double* out = y.data() + k;
    const double* in = xs.data();
    const std::size_t len = n - k;
    for (std::size_t i = 0; i < len; ++i) out[i] += hk * in[i];
  }
  return Signal(std::move(y), x.sample_rate());
}

inline Signal remove_dc(const Signal& x) {
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "empty signal");
  double sum = 0.0;
  for (double v : x.samples()) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - mean;
  return Signal(std::move(y), x.sample_rate());
}

}  // namespace reskew
