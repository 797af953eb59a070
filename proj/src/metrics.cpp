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

#include "echotrace/metrics.h"

#include <algorithm>
#include <cmath>

#include "echotrace/filterbank.h"

namespace echotrace {

namespace {

constexpr double kSilenceFloor = 1e-300;

double TotalEnergy(std::span<const double> ir) {
  double e = 0.0;
  for (double s : ir) e += s * s;
  return e;
}

}  // namespace

EnergyDecayCurve SchroederEdc(std::span<const double> ir, int sampling_rate) {
  EnergyDecayCurve edc;
  edc.dt = 1.0 / sampling_rate;
  const double total = TotalEnergy(ir);
  if (total <= kSilenceFloor) return edc;  // all-zero: invalid flag

  edc.db.resize(ir.size());
  double tail = total;
  for (size_t i = 0; i < ir.size(); ++i) {
    edc.db[i] = 10.0 * std::log10(std::max(tail / total, 1e-30));
    tail -= ir[i] * ir[i];
  }
  edc.valid = true;
  return edc;
}

namespace {

struct LineFit {
  double slope = 0.0;      // dB per point
  double intercept = 0.0;  // dB
  double r2 = 0.0;
  bool valid = false;
};

LineFit FitLine(const std::vector<double>& y, size_t begin, size_t end) {
  LineFit fit;
  const size_t n = end - begin;
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = begin; i < end; ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
    syy += y[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (size_t i = begin; i < end; ++i) {
    const double pred = fit.intercept + fit.slope * static_cast<double>(i);
    ss_res += (y[i] - pred) * (y[i] - pred);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.valid = true;
  return fit;
}

size_t FirstBelow(const std::vector<double>& db, double level, size_t from) {
  for (size_t i = from; i < db.size(); ++i)
    if (db[i] <= level) return i;
  return db.size();
}

}  // namespace

Rt60Result Rt60(std::span<const double> ir, int sampling_rate,
                Rt60Method method) {
  Rt60Result result;
  const EnergyDecayCurve edc = SchroederEdc(ir, sampling_rate);
  if (!edc.valid) return result;

  const double fit_floor = method == Rt60Method::kT30 ? -35.0 : -25.0;
  const size_t begin = FirstBelow(edc.db, -5.0, 0);
  const size_t end = FirstBelow(edc.db, fit_floor, begin);
  if (begin >= edc.db.size() || end >= edc.db.size() || end <= begin + 4)
    return result;  // not enough usable decay

  // The fitted range must sit 10 dB above the measured tail floor;
  // the last tenth of the curve is treated as the truncation dive and
  // excluded from the floor estimate.
  const size_t floor_idx =
      std::max<size_t>(end, edc.db.size() - edc.db.size() / 10 - 1);
  const double tail_floor = edc.db[floor_idx];
  if (tail_floor > fit_floor - 10.0) return result;

  const LineFit fit = FitLine(edc.db, begin, end);
  if (!fit.valid || fit.slope >= 0.0) return result;

  result.seconds = -60.0 / fit.slope / sampling_rate;
  result.fit_r2 = fit.r2;
  result.valid = true;
  return result;
}

DrrResult Drr(std::span<const double> ir, int sampling_rate,
              double direct_window_s) {
  DrrResult result;
  double peak = 0.0;
  for (double s : ir) peak = std::max(peak, std::abs(s));
  if (peak <= kSilenceFloor) return result;

  // Onset: first sample within 20 dB of the peak, refined to the local
  // energy maximum within the following millisecond.
  const double threshold = peak * std::pow(10.0, -20.0 / 20.0);
  size_t onset = 0;
  while (onset < ir.size() && std::abs(ir[onset]) < threshold) ++onset;
  const size_t search_end =
      std::min(ir.size(), onset + static_cast<size_t>(sampling_rate / 1000));
  size_t peak_idx = onset;
  for (size_t i = onset; i < search_end; ++i)
    if (std::abs(ir[i]) > std::abs(ir[peak_idx])) peak_idx = i;

  const long long lead = llround(0.0005 * sampling_rate);
  const long long window = llround(direct_window_s * sampling_rate);
  const size_t direct_begin =
      static_cast<size_t>(std::max<long long>(0, static_cast<long long>(peak_idx) - lead));
  const size_t direct_end =
      std::min(ir.size(), static_cast<size_t>(peak_idx + window + 1));

  double direct = 0.0, tail = 0.0;
  for (size_t i = direct_begin; i < direct_end; ++i) direct += ir[i] * ir[i];
  for (size_t i = direct_end; i < ir.size(); ++i) tail += ir[i] * ir[i];

  if (tail <= kSilenceFloor) {
    result.direct_only = true;
    result.valid = true;
    result.db = std::numeric_limits<double>::infinity();
    return result;
  }
  result.db = Db(direct / tail);
  result.valid = true;
  return result;
}

RelativeRt60Error ComputeRelativeRt60Error(
    const std::vector<std::vector<double>>& set_a,
    const std::vector<std::vector<double>>& set_b, int sampling_rate,
    Rt60Method method) {
  RelativeRt60Error result;
  if (set_a.size() != set_b.size() || set_a.empty())
    throw ConfigError("relative RT60 error needs paired, non-empty sets");
  double sum = 0.0;
  for (size_t i = 0; i < set_a.size(); ++i) {
    const Rt60Result ra = Rt60(set_a[i], sampling_rate, method);
    const Rt60Result rb = Rt60(set_b[i], sampling_rate, method);
    if (!ra.valid || !rb.valid || rb.seconds <= 0.0) {
      ++result.pairs_excluded;
      continue;
    }
    sum += std::abs(ra.seconds - rb.seconds) / rb.seconds * 100.0;
    ++result.pairs_used;
  }
  if (result.pairs_used == 0)
    throw SimulationError("relative RT60 error: no valid pairs");
  result.percent = sum / result.pairs_used;
  result.valid = true;
  return result;
}

AcousticSummary Summarize(std::span<const double> ir, int sampling_rate,
                          const FrequencyBands* bands, Rt60Method method) {
  AcousticSummary summary;
  const Rt60Result broadband = Rt60(ir, sampling_rate, method);
  summary.broadband_rt60 = broadband.seconds;
  summary.broadband_rt60_valid = broadband.valid;
  const DrrResult drr = Drr(ir, sampling_rate, summary.direct_window_s);
  summary.drr_db = drr.db;
  summary.drr_valid = drr.valid;
  summary.drr_direct_only = drr.direct_only;

  if (bands != nullptr) {
    const FilterBank fb(*bands, sampling_rate);
    for (int m = 0; m < bands->size(); ++m) {
      const std::vector<double> filtered = fb.Apply(ir, m);
      const Rt60Result r = Rt60(filtered, sampling_rate, method);
      summary.band_rt60.push_back(r.valid ? r.seconds
                                          : std::numeric_limits<double>::quiet_NaN());
      summary.band_rt60_valid.push_back(r.valid);
    }
  }
  return summary;
}

}  // namespace echotrace
