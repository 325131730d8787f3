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

// Elliptic (Cauer) high-pass design.
//
// The analog low-pass prototype is built from Jacobi elliptic functions
// evaluated through descending Landen transformations, mapped to a
// high-pass with s -> wc / s, then discretised with the bilinear transform
// using a prewarped cutoff. The result is kept as second-order sections.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "reskew/dsp.hpp"
#include "reskew/error.hpp"
#include "reskew/signal.hpp"

namespace reskew {

struct EllipticSpec {
  int order = 9;
  double cutoff_hz = 400.0;  // passband edge
  double passband_ripple_db = 0.5;
  double stopband_atten_db = 60.0;
  int sample_rate = 16000;

  void validate() const {
    if (sample_rate <= 0) {
      throw Error(ErrorCode::kInvalidSpec, "sample rate must be positive");
    }
    if (!(cutoff_hz > 0.0 && cutoff_hz < 0.5 * sample_rate)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "cutoff " + std::to_string(cutoff_hz) +
                      " Hz outside (0, Fs/2)");
    }
    if (order < 1 || order > 30) {
      throw Error(ErrorCode::kInvalidSpec,
                  "unsupported order " + std::to_string(order));
    }
    if (!(passband_ripple_db > 0.0) ||
        !(stopband_atten_db > passband_ripple_db)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "need 0 < passband ripple < stopband attenuation");
    }
  }
};

/// One biquad: (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  IirCoeffs coeffs() const { return IirCoeffs({b0, b1, b2}, {1.0, a1, a2}); }
};

class SosFilter {
 public:
  SosFilter() = default;
  explicit SosFilter(std::vector<Biquad> sections)
      : sections_(std::move(sections)) {}

  const std::vector<Biquad>& sections() const noexcept { return sections_; }

  Signal apply(const Signal& x) const {
    std::vector<double> y = x.vector();
    for (const Biquad& s : sections_) {
      double state[2] = {0.0, 0.0};
      iir_filter_inplace(y, s.coeffs(), state);
    }
    return Signal(std::move(y), x.sample_rate());
  }

  std::complex<double> response(double freq_hz, int sample_rate) const {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
    const std::complex<double> zi = std::polar(1.0, -w);
    std::complex<double> h = 1.0;
    for (const Biquad& s : sections_) {
      h *= (s.b0 + zi * (s.b1 + zi * s.b2)) / (1.0 + zi * (s.a1 + zi * s.a2));
    }
    return h;
  }

  std::vector<std::complex<double>> poles() const {
    std::vector<std::complex<double>> out;
    for (const Biquad& s : sections_) {
      if (s.a2 == 0.0) {
        if (s.a1 != 0.0) out.emplace_back(-s.a1, 0.0);
        continue;
      }
      const std::complex<double> disc =
          std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
      out.push_back((-s.a1 + disc) / 2.0);
      out.push_back((-s.a1 - disc) / 2.0);
    }
    return out;
  }

  /// Expands the cascade into a single b(z)/a(z). Only numerically sound for
  /// inspection; filtering always goes through the sections.
  IirCoeffs transfer_function() const {
    std::vector<double> b{1.0}, a{1.0};
    auto mul = [](const std::vector<double>& p, const double (&q)[3]) {
      std::vector<double> r(p.size() + 2, 0.0);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j) r[i + j] += p[i] * q[j];
      return r;
    };
    for (const Biquad& s : sections_) {
      const double bq[3] = {s.b0, s.b1, s.b2};
      const double aq[3] = {1.0, s.a1, s.a2};
      b = mul(b, bq);
      a = mul(a, aq);
    }
    return IirCoeffs(std::move(b), std::move(a));
  }

 private:
  std::vector<Biquad> sections_;
};

namespace detail {

using cplx = std::complex<double>;

// Descending Landen sequence of moduli, starting from (k, k').
// Passing k' explicitly keeps precision when k is within 1e-8 of 1.
inline std::vector<double> landen(double k, double kp) {
  std::vector<double> v;
  for (int n = 0; n < 32 && k > 1e-300; ++n) {
    k = k / (1.0 + kp);
    k *= k;
    v.push_back(k);
    if (k < 1e-16) break;
    kp = std::sqrt((1.0 - k) * (1.0 + k));
  }
  return v;
}

inline double ellipk(double k, double kp) {
  double prod = 1.0;
  for (double v : landen(k, kp)) prod *= (1.0 + v);
  return 0.5 * std::numbers::pi * prod;
}

// cd(u K, k) and sn(u K, k) for complex u (u normalised by the quarter period).
inline cplx cde(cplx u, double k, double kp) {
  const auto v = landen(k, kp);
  cplx w = std::cos(u * (0.5 * std::numbers::pi));
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    w = (1.0 + *it) * w / (1.0 + *it * w * w);
  }
  return w;
}

inline cplx sne(cplx u, double k, double kp) {
  const auto v = landen(k, kp);
  cplx w = std::sin(u * (0.5 * std::numbers::pi));
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    w = (1.0 + *it) * w / (1.0 + *it * w * w);
  }
  return w;
}

inline double srem(double x, double y) {
  double z = std::remainder(x, y);
  return z;
}

// Inverse of cde, result reduced to the fundamental period rectangle.
inline cplx acde(cplx w, double k, double kp) {
  const auto v = landen(k, kp);
  double prev = k;
  for (double vn : v) {
    w = w / (1.0 + std::sqrt(1.0 - w * w * (prev * prev))) * 2.0 / (1.0 + vn);
    prev = vn;
  }
  cplx u = 2.0 * std::acos(w) / std::numbers::pi;
  const double ratio = ellipk(kp, k) / ellipk(k, kp);
  return {srem(u.real(), 4.0), srem(u.imag(), 2.0 * ratio)};
}

inline cplx asne(cplx w, double k, double kp) { return 1.0 - acde(w, k, kp); }

// Solves the degree equation for the selectivity modulus k given N and the
// discrimination modulus k1.
inline double elliptic_degree(int order, double k1, double k1p) {
  const int half = order / 2;
  double prod = 1.0;
  for (int i = 1; i <= half; ++i) {
    const double ui = (2.0 * i - 1.0) / order;
    prod *= sne(ui, k1p, k1).real();
  }
  const double kp = std::pow(k1p, order) * std::pow(prod, 4);
  return std::sqrt((1.0 - kp) * (1.0 + kp));
}

}  // namespace detail

/// Order-N elliptic high-pass whose passband starts at spec.cutoff_hz.
inline SosFilter design_elliptic_highpass(const EllipticSpec& spec) {
  using detail::cplx;
  spec.validate();
  const int n = spec.order;
  const double ep = std::sqrt(std::pow(10.0, spec.passband_ripple_db / 10.0) - 1.0);
  const double es = std::sqrt(std::pow(10.0, spec.stopband_atten_db / 10.0) - 1.0);
  const double k1 = ep / es;
  const double k1p = std::sqrt((1.0 - k1) * (1.0 + k1));
  const double k = detail::elliptic_degree(n, k1, k1p);
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));

  // Low-pass prototype, passband edge at 1 rad/s.
  const int half = n / 2;
  const bool odd = (n % 2) == 1;
  const double v0 =
      (cplx(0.0, -1.0) * detail::asne(cplx(0.0, 1.0 / ep), k1, k1p)).real() / n;
  std::vector<cplx> lp_zeros, lp_poles;
  for (int i = 1; i <= half; ++i) {
    const double ui = (2.0 * i - 1.0) / n;
    const cplx zeta = detail::cde(ui, k, kp);
    lp_zeros.push_back(cplx(0.0, 1.0) / (k * zeta));
    lp_poles.push_back(cplx(0.0, 1.0) * detail::cde(cplx(ui, -v0), k, kp));
  }
  const double lp_real_pole =
      odd ? (cplx(0.0, 1.0) * detail::sne(cplx(0.0, v0), k, kp)).real() : 0.0;

  // Low-pass -> high-pass (s -> wc/s), then bilinear s = (1 - z^-1)/(1 + z^-1).
  const double wc = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate);
  auto bilinear = [](cplx s) { return (1.0 + s) / (1.0 - s); };

  std::vector<Biquad> sections;
  if (odd) {
    const double pd = bilinear(wc / lp_real_pole).real();
    // Prototype zero at infinity maps to s = 0, i.e. z = 1.
    sections.push_back(Biquad{1.0, -1.0, 0.0, -pd, 0.0});
  }
  for (int i = 0; i < half; ++i) {
    const cplx zd = bilinear(wc / lp_zeros[static_cast<std::size_t>(i)]);
    const cplx pd = bilinear(wc / lp_poles[static_cast<std::size_t>(i)]);
    sections.push_back(Biquad{1.0, -2.0 * zd.real(), std::norm(zd),
                              -2.0 * pd.real(), std::norm(pd)});
  }

  // At Nyquist the high-pass sees the prototype's DC gain.
  const double target = odd ? 1.0 : std::pow(10.0, -spec.passband_ripple_db / 20.0);
  double gain = 1.0;
  for (const Biquad& s : sections) {
    gain *= (s.b0 - s.b1 + s.b2) / (1.0 - s.a1 + s.a2);
  }
  const double per_section =
      std::pow(target / std::abs(gain), 1.0 / static_cast<double>(sections.size()));
  const double sign = gain < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    double g = per_section * (i == 0 ? sign : 1.0);
    sections[i].b0 *= g;
    sections[i].b1 *= g;
    sections[i].b2 *= g;
  }
  return SosFilter(std::move(sections));
}

}  // namespace reskew
