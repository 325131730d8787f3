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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "reskew/synth.hpp"

namespace reskew {
namespace {

VoiceSpec spec_with(double f0, double jitter, Polarity pol = Polarity::kPositive) {
  VoiceSpec s;
  s.f0_hz = f0;
  s.jitter_pct = jitter;
  s.polarity = pol;
  s.seed = 42;
  return s;
}

TEST(GlottalSource, DominantNegativePeakPerCycle) {
  const Signal g = glottal_source(spec_with(100.0, 0.0), 16000);
  const std::size_t period = 160;
  for (std::size_t start = 0; start + period <= g.size(); start += period) {
    const auto cycle = g.samples().subspan(start, period);
    const double lo = *std::min_element(cycle.begin(), cycle.end());
    const double hi = *std::max_element(cycle.begin(), cycle.end());
    EXPECT_LT(lo, 0.0);
    EXPECT_GT(std::abs(lo), std::abs(hi)) << start;
  }
  EXPECT_LT(skewness(g), 0.0);
}

TEST(GlottalSource, PeaksExactlyOnePeriodApart) {
  const Signal g = glottal_source(spec_with(100.0, 0.0), 16000);
  std::vector<std::size_t> peaks;
  for (std::size_t start = 0; start + 160 <= g.size(); start += 160) {
    const auto cycle = g.samples().subspan(start, 160);
    peaks.push_back(start + static_cast<std::size_t>(
                                std::min_element(cycle.begin(), cycle.end()) - cycle.begin()));
  }
  ASSERT_GT(peaks.size(), 10u);
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_EQ(peaks[i] - peaks[i - 1], 160u);
  // Closure at 0.6 + 0.3 of the period: sample 144, with unit magnitude.
  EXPECT_EQ(peaks[0], 144u);
  EXPECT_DOUBLE_EQ(g[144], -1.0);
}

TEST(GlottalSource, NegativePolarityIsExactNegation) {
  const Signal pos = glottal_source(spec_with(173.0, 2.0), 16000);
  const Signal neg = glottal_source(spec_with(173.0, 2.0, Polarity::kNegative), 16000);
  ASSERT_EQ(pos.size(), neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i) EXPECT_EQ(neg[i], -pos[i]);
}

TEST(GlottalSource, JitterDependsOnSeed) {
  VoiceSpec a = spec_with(120.0, 2.0);
  VoiceSpec b = a;
  b.seed = 43;
  EXPECT_EQ(glottal_source(a, 16000).vector(), glottal_source(a, 16000).vector());
  EXPECT_NE(glottal_source(a, 16000).vector(), glottal_source(b, 16000).vector());
}

TEST(SynthesizeVoice, PeakNormalisedAndSignExact) {
  const Signal pos = synthesize_voice(spec_with(120.0, 1.0), 16000);
  const Signal neg = synthesize_voice(spec_with(120.0, 1.0, Polarity::kNegative), 16000);
  double peak = 0.0;
  for (double v : pos.samples()) peak = std::max(peak, std::abs(v));
  EXPECT_DOUBLE_EQ(peak, 0.5);
  EXPECT_EQ(pos.size(), 16000u);
  for (std::size_t i = 0; i < pos.size(); ++i) EXPECT_EQ(neg[i], -pos[i]);
}

TEST(SynthesizeVoice, FirstFormantShapesSpectrum) {
  // f0 = 110 Hz puts the 6th harmonic on the 660 Hz formant. Harmonic
  // magnitudes are evaluated directly by a single-bin DFT.
  VoiceSpec spec = spec_with(110.0, 0.0);
  const Signal s = synthesize_voice(spec, 16000);
  auto magnitude = [&](double freq) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      acc += s[n] * std::polar(1.0, -2.0 * std::numbers::pi * freq * n / 16000.0);
    }
    return std::abs(acc);
  };
  double best_freq = 0.0, best = 0.0;
  for (int h = 3; h <= 10; ++h) {  // 330 .. 1100 Hz
    const double m = magnitude(110.0 * h);
    if (m > best) {
      best = m;
      best_freq = 110.0 * h;
    }
  }
  EXPECT_NEAR(best_freq, 660.0, 50.0);
}

TEST(SynthesizeVoice, DetectedPolarityMatchesSpec) {
  for (Polarity pol : {Polarity::kPositive, Polarity::kNegative}) {
    const Signal s = synthesize_voice(spec_with(120.0, 1.0, pol), 16000);
    EXPECT_EQ(detect_polarity(s).polarity, pol);
  }
}

TEST(FormantResonator, UnitDcGain) {
  const IirCoeffs c = formant_resonator({660.0, 80.0}, 16000);
  const double dc = (c.b()[0]) / (c.a()[0] + c.a()[1] + c.a()[2]);
  EXPECT_NEAR(dc, 1.0, 1e-12);
}

TEST(StandardGrid, ShapeAndUniqueness) {
  const auto grid = standard_grid();
  ASSERT_EQ(grid.size(), 150u);
  std::set<std::string> names;
  int positives = 0;
  for (const auto& e : grid) {
    names.insert(e.name);
    positives += e.spec.polarity == Polarity::kPositive;
    EXPECT_NO_THROW(e.spec.validate(16000));
  }
  EXPECT_EQ(names.size(), 150u);
  EXPECT_EQ(positives, 75);
}

TEST(VoiceSpec, RejectsInvalid) {
  auto invalid = [](VoiceSpec s) {
    try {
      glottal_source(s, 16000);
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidSpec;
    }
    return false;
  };
  VoiceSpec s;
  s.f0_hz = 40.0;
  EXPECT_TRUE(invalid(s));
  s = VoiceSpec{};
  s.f0_hz = 600.0;
  EXPECT_TRUE(invalid(s));
  s = VoiceSpec{};
  s.formants = {{9000.0, 100.0}};
  EXPECT_TRUE(invalid(s));
  s = VoiceSpec{};
  s.formants = {{500.0, 0.0}};
  EXPECT_TRUE(invalid(s));
  s = VoiceSpec{};
  s.open_fraction = 0.8;
  EXPECT_TRUE(invalid(s));
}

}  // namespace
}  // namespace reskew
