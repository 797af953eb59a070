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

#ifndef ECHOTRACE_METRICS_H_
#define ECHOTRACE_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "echotrace/bands.h"
#include "echotrace/spatial.h"

namespace echotrace {

// Schroeder backward-integrated energy decay, normalized to 0 dB at t = 0.
struct EnergyDecayCurve {
  double dt = 0.0;              // seconds per point
  std::vector<double> db;      // non-increasing by construction
  bool valid = false;
};

EnergyDecayCurve SchroederEdc(std::span<const double> ir, int sampling_rate);

enum class Rt60Method { kT20, kT30 };

struct Rt60Result {
  double seconds = 0.0;
  double fit_r2 = 0.0;
  bool valid = false;
};

// Least-squares line fit to the EDC over [-5, -35] dB (T30) or [-5, -25] dB
// (T20), extrapolated to -60 dB. Requires the fitted range to sit at least
// 10 dB above the measured tail floor; flagged invalid otherwise.
Rt60Result Rt60(std::span<const double> ir, int sampling_rate,
                Rt60Method method = Rt60Method::kT30);

struct DrrResult {
  double db = 0.0;
  bool valid = false;
  bool direct_only = false;  // no energy after the direct window
};

// Direct-to-reverberant ratio. The direct window is
// [onset - 0.5 ms, onset + direct_window_s]; onset detection finds the first
// sample within 20 dB of the peak, refined to the local energy maximum
// within 1 ms.
DrrResult Drr(std::span<const double> ir, int sampling_rate,
              double direct_window_s = 0.0025);

struct RelativeRt60Error {
  double percent = 0.0;
  int pairs_used = 0;
  int pairs_excluded = 0;
  bool valid = false;
};

// Mean of |RT60_a - RT60_b| / RT60_b * 100 over paired channels; pairs with
// an invalid RT60 on either side are excluded and counted.
RelativeRt60Error ComputeRelativeRt60Error(
    const std::vector<std::vector<double>>& set_a,
    const std::vector<std::vector<double>>& set_b, int sampling_rate,
    Rt60Method method = Rt60Method::kT30);

struct AcousticSummary {
  std::vector<double> band_rt60;        // per analysis band, NaN if invalid
  std::vector<bool> band_rt60_valid;
  double broadband_rt60 = 0.0;
  bool broadband_rt60_valid = false;
  double drr_db = 0.0;
  bool drr_valid = false;
  bool drr_direct_only = false;
  double direct_window_s = 0.0025;
};

// Per-channel metric report; band RT60s computed through the filter bank
// when bands is non-null.
AcousticSummary Summarize(std::span<const double> ir, int sampling_rate,
                          const FrequencyBands* bands = nullptr,
                          Rt60Method method = Rt60Method::kT30);

}  // namespace echotrace

#endif  // ECHOTRACE_METRICS_H_
