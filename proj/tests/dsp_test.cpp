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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "reskew/dsp.hpp"
#include "test_util.hpp"

namespace reskew {
namespace {

using testing::gaussian;
using testing::naive_skewness;
using testing::relative_error;

TEST(Skewness, SymmetricSequenceIsZero) {
  EXPECT_EQ(skewness(std::vector<double>{-1.0, 0.0, 1.0}), 0.0);
}

TEST(Skewness, HandComputedValue) {
  // mean 1/3, m2 = 2/9, m3 = 2/27  ->  (2/27) / (2/9)^1.5 = 1/sqrt(2)
  EXPECT_NEAR(skewness(std::vector<double>{0.0, 0.0, 1.0}), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Skewness, Errors) {
  try {
    skewness(std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
  try {
    skewness(std::vector<double>{0.1, 0.1, 0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVariance);
  }
}

TEST(Skewness, FloatInput) {
  EXPECT_NEAR(skewness(std::vector<float>{0.0f, 0.0f, 1.0f}), 1.0 / std::sqrt(2.0), 1e-7);
}

TEST(Skewness, AgreesWithThreePassOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(2, 5000);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = gaussian(len(rng), 100 + trial);
    for (double& v : x) v = std::exp(v);  // lognormal: clearly skewed
    EXPECT_LE(relative_error(skewness(x), naive_skewness(x)), 1e-10) << trial;
  }
}

TEST(Skewness, SymmetryProperties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = gaussian(300, 400 + trial);
    for (double& v : x) v = v * v * v + v;
    const double base = skewness(x);

    std::vector<double> neg(x), scaled(x), shifted(x);
    const double c = scale(rng);
    const double shift = scale(rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      neg[i] = -x[i];
      scaled[i] = c * x[i];
      shifted[i] = x[i] + shift;
    }
    EXPECT_LE(relative_error(skewness(neg), -base), 1e-12);
    EXPECT_LE(relative_error(skewness(scaled), std::copysign(1.0, c) * base), 1e-9);
    EXPECT_LE(relative_error(skewness(shifted), base), 1e-9);
  }
}

TEST(HanningWindow, ClosedForms) {
  EXPECT_EQ(hanning_window(1), std::vector<double>{1.0});
  const auto w3 = hanning_window(3);
  ASSERT_EQ(w3.size(), 3u);
  EXPECT_EQ(w3[0], 0.0);
  EXPECT_NEAR(w3[1], 1.0, 1e-15);
  EXPECT_EQ(w3[2], 0.0);

  const std::vector<double> want5{0.0, 0.5, 1.0, 0.5, 0.0};
  const auto w5 = hanning_window(5);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(w5[k], want5[k], 1e-15);
  EXPECT_THROW(hanning_window(0), Error);
}

TEST(HanningWindow, SymmetricAndMatchesFormula) {
  const std::size_t n = 400;
  const auto w = hanning_window(n);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_EQ(w[k], w[n - 1 - k]);
    const double want = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (n - 1.0)));
    EXPECT_NEAR(w[k], want, 1e-15);
  }
}

TEST(Autocorrelation, Examples) {
  EXPECT_EQ(autocorrelation(std::vector<double>{1, 0, 0}, 2), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(autocorrelation(std::vector<double>{1, 1}, 1), (std::vector<double>{2, 1}));
  try {
    autocorrelation(std::vector<double>{1, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLagTooLarge);
  }
}

TEST(Autocorrelation, WhiteNoiseStatistics) {
  // For N iid unit-variance draws: E R[0] = N, sd sqrt(2N); sd of R[t]/R[0]
  // is about 1/sqrt(N). Bounds are 5 standard deviations.
  const std::size_t n = 400;
  const auto x = gaussian(n, 77);
  const auto r = autocorrelation(x, 20);
  EXPECT_NEAR(r[0], static_cast<double>(n), 5.0 * std::sqrt(2.0 * n));
  for (std::size_t lag = 1; lag <= 20; ++lag) {
    EXPECT_LT(std::abs(r[lag] / r[0]), 5.0 / std::sqrt(static_cast<double>(n))) << lag;
  }
}

TEST(LevinsonDurbin, WhiteNeedsNoPredictor) {
  const auto lp = levinson_durbin(std::vector<double>{1, 0, 0}, 2);
  EXPECT_EQ(lp.coeffs, (std::vector<double>{0.0, 0.0}));
}

TEST(LevinsonDurbin, SilenceGivesTrivialPredictor) {
  const auto lp = levinson_durbin(std::vector<double>{0, 0, 0, 0}, 3);
  EXPECT_EQ(lp.coeffs, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(lp.gain, 0.0);
}

TEST(LevinsonDurbin, RecoversAr1) {
  const auto x = testing::ar_process({0.9}, 20000, 3);
  const auto lp = levinson_durbin(autocorrelation(x, 1), 1);
  EXPECT_NEAR(lp.coeffs[0], 0.9, 0.02);
}

TEST(LevinsonDurbin, RecoversAr2) {
  const double r = 0.8;
  const std::vector<double> want{2.0 * r * std::cos(std::numbers::pi / 4), -r * r};
  const auto x = testing::ar_process(want, 20000, 4);
  const auto lp = levinson_durbin(autocorrelation(x, 2), 2);
  EXPECT_NEAR(lp.coeffs[0], want[0], 0.02);
  EXPECT_NEAR(lp.coeffs[1], want[1], 0.02);
}

TEST(LevinsonDurbin, MatchesDirectToeplitzSolve) {
  for (std::size_t order = 1; order <= 20; ++order) {
    auto x = gaussian(256, 900 + order);
    // Colour the noise so the system is not trivially diagonal.
    for (std::size_t i = x.size(); i-- > 1;) x[i] += 0.7 * x[i - 1];
    const auto acf = autocorrelation(x, order);
    const auto lp = levinson_durbin(acf, order);

    std::vector<std::vector<double>> t(order, std::vector<double>(order));
    std::vector<double> rhs(order);
    for (std::size_t i = 0; i < order; ++i) {
      for (std::size_t j = 0; j < order; ++j) {
        const std::size_t lag = i > j ? i - j : j - i;
        t[i][j] = lag == 0 ? acf[0] * (1.0 + kLpRidge) : acf[lag];
      }
      rhs[i] = acf[i + 1];
    }
    const auto want = testing::solve_dense(t, rhs);
    for (std::size_t k = 0; k < order; ++k) EXPECT_NEAR(lp.coeffs[k], want[k], 1e-6);
  }
}

TEST(LevinsonDurbin, Errors) {
  EXPECT_THROW(levinson_durbin(std::vector<double>{1, 0}, 2), Error);
  try {
    levinson_durbin(std::vector<double>{-1, 0, 0}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularToeplitz);
  }
  try {
    levinson_durbin(std::vector<double>{1, NAN, 0}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularToeplitz);
  }
}

TEST(IirFilter, Identity) {
  const Signal x(gaussian(100, 1), 8000);
  const auto y = iir_filter(x, IirCoeffs({1.0}, {1.0}));
  EXPECT_EQ(y.output.vector(), x.vector());
}

TEST(IirFilter, DifferencerKillsDc) {
  const Signal x(std::vector<double>(50, 0.3), 8000);
  const auto y = iir_filter(x, IirCoeffs({1.0, -1.0}, {1.0}));
  EXPECT_EQ(y.output[0], 0.3);
  for (std::size_t i = 1; i < y.output.size(); ++i) EXPECT_EQ(y.output[i], 0.0);
}

TEST(IirFilter, GeometricImpulseResponse) {
  std::vector<double> impulse(10, 0.0);
  impulse[0] = 1.0;
  const auto y = iir_filter(Signal(impulse, 8000), IirCoeffs({1.0}, {1.0, -0.5}));
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(y.output[i], std::ldexp(1.0, -static_cast<int>(i)));
}

TEST(IirFilter, NormalisesLeadingCoefficient) {
  const IirCoeffs c({2.0, 4.0}, {2.0, -1.0});
  EXPECT_EQ(c.a(), (std::vector<double>{1.0, -0.5}));
  EXPECT_EQ(c.b(), (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(IirCoeffs({1.0}, {0.0}), Error);
  EXPECT_THROW(IirCoeffs({}, {1.0}), Error);
}

TEST(IirFilter, SegmentedFilteringMatchesWhole) {
  const IirCoeffs c({0.2, 0.3, -0.1, 0.05}, {1.0, -1.2, 0.5});
  const auto data = gaussian(1000, 21);
  const auto whole = iir_filter(Signal(data, 16000), c).output;

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> cuts{0, data.size()};
    std::uniform_int_distribution<std::size_t> pick(1, data.size() - 1);
    for (int k = 0; k < 5; ++k) cuts.push_back(pick(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> state(c.state_size(), 0.0), joined;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      std::vector<double> seg(data.begin() + static_cast<long>(cuts[s]),
                              data.begin() + static_cast<long>(cuts[s + 1]));
      if (seg.empty()) continue;
      auto res = iir_filter(Signal(seg, 16000), c, state);
      state = res.state;
      joined.insert(joined.end(), res.output.samples().begin(), res.output.samples().end());
    }
    ASSERT_EQ(joined.size(), whole.size());
    for (std::size_t i = 0; i < joined.size(); ++i) EXPECT_NEAR(joined[i], whole[i], 1e-12);
  }
}

TEST(IirFilter, RejectsWrongStateSize) {
  EXPECT_THROW(iir_filter(Signal({1.0, 2.0}, 8000), IirCoeffs({1.0}, {1.0, 0.5}),
                          std::vector<double>{0.0, 0.0}),
               Error);
}

TEST(FirConvolve, Examples) {
  const Signal x({1.0, 2.0, 3.0}, 8000);
  EXPECT_EQ(fir_convolve(x, std::vector<double>{1.0}).vector(), x.vector());
  EXPECT_EQ(fir_convolve(x, std::vector<double>{0.0, 1.0}).vector(),
            (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_EQ(fir_convolve(Signal({1.0, 2.0}, 8000), std::vector<double>{1.0, 1.0}).vector(),
            (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(fir_convolve(Signal({1.0}, 8000), std::vector<double>{2.0, 5.0, 7.0}).vector(),
            (std::vector<double>{2.0}));
  EXPECT_THROW(fir_convolve(x, std::vector<double>{}), Error);
}

TEST(RemoveDc, Examples) {
  EXPECT_EQ(remove_dc(Signal({1.0, 1.0, 1.0}, 8000)).vector(), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(remove_dc(Signal({0.0, 2.0}, 8000)).vector(), (std::vector<double>{-1.0, 1.0}));
  const Signal zero_mean({-0.25, 0.5, -0.25}, 8000);
  const auto y = remove_dc(zero_mean);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(y[i], zero_mean[i], 1e-12);
}

TEST(RemoveDc, OutputHasZeroMean) {
  auto x = gaussian(5000, 9);
  for (double& v : x) v = 0.3 + 0.1 * v;
  const auto y = remove_dc(Signal(x, 16000));
  double sum = 0.0;
  for (double v : y.samples()) sum += v;
  EXPECT_LT(std::abs(sum / 5000.0), 1e-12);
}

TEST(Signal, RejectsNonFiniteAndBadRate) {
  EXPECT_THROW(Signal({1.0, NAN}, 8000), Error);
  EXPECT_THROW(Signal({1.0, INFINITY}, 8000), Error);
  EXPECT_THROW(Signal({1.0}, 0), Error);
}

}  // namespace
}  // namespace reskew
