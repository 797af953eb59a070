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

#include "echotrace/histogram.h"

#include <cmath>

namespace echotrace {

EnergyHistogram::EnergyHistogram(double bin_seconds, double max_seconds,
                                 int num_bands, int sh_order)
    : bin_seconds_(bin_seconds),
      num_bins_(static_cast<size_t>(std::ceil(max_seconds / bin_seconds))),
      num_bands_(num_bands),
      sh_order_(sh_order),
      sh_count_(ShCount(sh_order)) {
  if (bin_seconds <= 0.0 || max_seconds <= 0.0)
    throw ConfigError("EnergyHistogram: durations must be positive");
  if (num_bands < 1 || num_bands > kMaxBands)
    throw ConfigError("EnergyHistogram: bad band count");
  energy_.assign(num_bins_ * num_bands_, 0.0);
  sh_.assign(num_bins_ * sh_count_, 0.0);
}

void EnergyHistogram::Accumulate(double delay_s,
                                 std::span<const double> band_energy,
                                 const Vec3& direction) {
  const auto bin = static_cast<long long>(std::floor(delay_s / bin_seconds_));
  if (bin < 0 || bin >= static_cast<long long>(num_bins_)) {
    ++dropped_deposits;
    return;
  }
  double total = 0.0;
  double* e = energy_.data() + static_cast<size_t>(bin) * num_bands_;
  for (int m = 0; m < num_bands_; ++m) {
    e[m] += band_energy[m];
    total += band_energy[m];
  }
  double basis[ShCount(kMaxShOrder)];
  EvalRealSh(sh_order_, direction, basis);
  double* s = sh_.data() + static_cast<size_t>(bin) * sh_count_;
  for (int k = 0; k < sh_count_; ++k) s[k] += total * basis[k];
}

double EnergyHistogram::BandTotal(int band) const {
  double total = 0.0;
  for (size_t b = 0; b < num_bins_; ++b) total += Energy(b, band);
  return total;
}

double EnergyHistogram::Total() const {
  double total = 0.0;
  for (double e : energy_) total += e;
  return total;
}

void EnergyHistogram::MergeFrom(const EnergyHistogram& other) {
  if (other.num_bins_ != num_bins_ || other.num_bands_ != num_bands_ ||
      other.sh_count_ != sh_count_)
    throw SimulationError("EnergyHistogram::MergeFrom: layout mismatch");
  for (size_t i = 0; i < energy_.size(); ++i) energy_[i] += other.energy_[i];
  for (size_t i = 0; i < sh_.size(); ++i) sh_[i] += other.sh_[i];
  early_reflections.insert(early_reflections.end(),
                           other.early_reflections.begin(),
                           other.early_reflections.end());
  dropped_deposits += other.dropped_deposits;
  if (!direct && other.direct) direct = other.direct;
}

}  // namespace echotrace
