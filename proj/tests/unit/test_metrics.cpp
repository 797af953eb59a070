// Copyright 2026 The echotrace Authors.
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

#include <doctest.h>

#include <cmath>

#include "echotrace/metrics.h"
#include "echotrace/rng.h"

using namespace echotrace;

namespace {

// Deterministic pressure envelope exp(-t / tau) with alternating sign so the
// squared signal decays exactly exponentially.
std::vector<double> ExponentialIr(double tau, double seconds, int fs) {
  std::vector<double> ir(static_cast<size_t>(seconds * fs));
  Pcg32 rng(17, 2);
  for (size_t i = 0; i < ir.size(); ++i) {
    const double env = std::exp(-static_cast<double>(i) / (tau * fs));
    ir[i] = env * (rng.NextDouble() < 0.5 ? -1.0 : 1.0);
  }
  return ir;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("edc of a unit impulse steps to silence") {
  std::vector<double> ir(1000, 0.0);
  ir[0] = 1.0;
  const EnergyDecayCurve edc = SchroederEdc(ir, 44100);
  REQUIRE(edc.valid);
  CHECK(edc.db[0] == doctest::Approx(0.0));
  CHECK(edc.db[1] < -250.0);  // numerically negative infinity

  // All-zero IRs are flagged invalid.
  std::vector<double> silent(100, 0.0);
  CHECK(!SchroederEdc(silent, 44100).valid);
}

TEST_CASE("edc of an exponential envelope is the analytic line") {
  const int fs = 44100;
  const double tau = 0.1;
  const auto ir = ExponentialIr(tau, 1.5, fs);
  const EnergyDecayCurve edc = SchroederEdc(ir, fs);
  REQUIRE(edc.valid);
  // EDC(t) = -8.6859 t / tau dB away from the truncated end.
  for (double t : {0.05, 0.1, 0.2, 0.4, 0.6}) {
    const size_t i = static_cast<size_t>(t * fs);
    CHECK(edc.db[i] == doctest::Approx(-8.685889 * t / tau).epsilon(0.01));
  }
  // Non-increasing by construction.
  for (size_t i = 1; i < edc.db.size(); i += 97)
    CHECK(edc.db[i] <= edc.db[i - 1] + 1e-12);
}

TEST_CASE("edc passes -3.01 dB between two equal-energy segments") {
  const int fs = 44100;
  std::vector<double> ir(2000, 0.0);
  for (int i = 0; i < 1000; ++i) ir[i] = 0.03;
  for (int i = 1000; i < 2000; ++i) ir[i] = 0.03;  // equal halves
  const EnergyDecayCurve edc = SchroederEdc(ir, fs);
  CHECK(edc.db[1000] == doctest::Approx(-3.0103).epsilon(1e-3));
}

TEST_CASE("rt60 recovers the analytic decay time") {
  const int fs = 44100;
  const Rt60Result a = Rt60(ExponentialIr(0.1, 1.5, fs), fs);
  REQUIRE(a.valid);
  CHECK(a.seconds == doctest::Approx(0.69078).epsilon(0.02));
  const Rt60Result b = Rt60(ExponentialIr(0.05, 1.0, fs), fs);
  REQUIRE(b.valid);
  CHECK(b.seconds == doctest::Approx(0.34539).epsilon(0.02));
  // T20 agrees on a clean exponential.
  const Rt60Result t20 =
      Rt60(ExponentialIr(0.1, 1.5, fs), fs, Rt60Method::kT20);
  REQUIRE(t20.valid);
  CHECK(t20.seconds == doctest::Approx(0.69078).epsilon(0.02));

  // A pure impulse has no decay to fit.
  std::vector<double> impulse(4410, 0.0);
  impulse[0] = 1.0;
  CHECK(!Rt60(impulse, fs).valid);
}

TEST_CASE("rt60 is invariant to overall gain") {
  const int fs = 44100;
  auto ir = ExponentialIr(0.08, 1.2, fs);
  const double base = Rt60(ir, fs).seconds;
  for (auto& s : ir) s *= 10.0;
  const double scaled = Rt60(ir, fs).seconds;
  CHECK(std::abs(scaled - base) / base < 0.001);
}

TEST_CASE("drr of a constructed 10 dB ratio and its gain behavior") {
  const int fs = 44100;
  std::vector<double> ir(fs, 0.0);
  const int onset = 441;
  ir[onset] = 1.0;
  const int tail_begin = onset + static_cast<int>(0.0025 * fs) + 2;
  const int tail_len = fs / 2;
  const double amp = std::sqrt(0.1 / tail_len);
  for (int i = 0; i < tail_len; ++i) ir[tail_begin + i] = amp;

  const DrrResult base = Drr(ir, fs);
  REQUIRE(base.valid);
  CHECK(base.db == doctest::Approx(10.0).epsilon(0.001));

  // Global gain leaves DRR unchanged.
  auto scaled = ir;
  for (auto& s : scaled) s *= 3.7;
  CHECK(Drr(scaled, fs).db == doctest::Approx(base.db).epsilon(1e-9));

  // Scaling only the direct window shifts DRR by +20 log10(g).
  auto boosted = ir;
  for (int i = 0; i < tail_begin; ++i) boosted[i] *= 2.0;
  CHECK(Drr(boosted, fs).db ==
        doctest::Approx(base.db + 20.0 * std::log10(2.0)).epsilon(1e-3));

  // Direct-only IR sets the flag.
  std::vector<double> direct_only(fs, 0.0);
  direct_only[onset] = 1.0;
  const DrrResult d = Drr(direct_only, fs);
  CHECK(d.valid);
  CHECK(d.direct_only);
}

TEST_CASE("relative rt60 error over paired sets") {
  const int fs = 44100;
  std::vector<std::vector<double>> base_set;
  for (double tau : {0.06, 0.08, 0.1, 0.12, 0.14})
    base_set.push_back(ExponentialIr(tau, 1.6, fs));

  // Identical sets: zero error.
  const RelativeRt60Error zero =
      ComputeRelativeRt60Error(base_set, base_set, fs);
  CHECK(zero.percent == doctest::Approx(0.0));
  CHECK(zero.pairs_used == 5);

  // Decay stretched by 1.1: ten percent error within fitting tolerance.
  std::vector<std::vector<double>> stretched;
  for (double tau : {0.06, 0.08, 0.1, 0.12, 0.14})
    stretched.push_back(ExponentialIr(tau * 1.1, 1.6, fs));
  const RelativeRt60Error ten =
      ComputeRelativeRt60Error(stretched, base_set, fs);
  CHECK(ten.percent == doctest::Approx(10.0).epsilon(0.05));

  // One invalid pair among five: mean over four, one exclusion.
  auto broken = base_set;
  std::fill(broken[2].begin(), broken[2].end(), 0.0);
  const RelativeRt60Error partial =
      ComputeRelativeRt60Error(broken, base_set, fs);
  CHECK(partial.pairs_used == 4);
  CHECK(partial.pairs_excluded == 1);

  CHECK_THROWS_AS(ComputeRelativeRt60Error({}, {}, fs), ConfigError);
}

TEST_CASE("summary reports per-band values when requested") {
  const int fs = 44100;
  const auto ir = ExponentialIr(0.1, 1.5, fs);
  const FrequencyBands bands = FrequencyBands::Default();
  const AcousticSummary s = Summarize(ir, fs, &bands);
  CHECK(s.broadband_rt60_valid);
  CHECK(s.band_rt60.size() == static_cast<size_t>(bands.size()));
  // Mid bands of a broadband exponential share the broadband decay.
  for (int m = 2; m <= 5; ++m) {
    REQUIRE(s.band_rt60_valid[m]);
    CHECK(s.band_rt60[m] ==
          doctest::Approx(s.broadband_rt60).epsilon(0.08));
  }
}

TEST_SUITE_END();
