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

#ifndef ECHOTRACE_HISTOGRAM_H_
#define ECHOTRACE_HISTOGRAM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "echotrace/common.h"
#include "echotrace/sh.h"

namespace echotrace {

// Discrete specular-cluster reflection event (paths with <= 2 bounces).
struct EarlyReflection {
  double delay_s = 0.0;
  std::vector<double> band_energy;
  Vec3 direction;  // unit, points from the listener toward the arrival
  // Reflecting plane equations (unit normal, offset), ordered along the path.
  std::vector<std::array<double, 4>> planes;
  int bounce_count = 0;
};

enum class OcclusionState { kVisible, kDiffracted, kTransmitted, kBlocked };

struct DirectSound {
  double delay_s = 0.0;
  std::vector<double> band_energy;
  Vec3 direction;  // unit, points from the listener toward the source
  OcclusionState state = OcclusionState::kVisible;
};

// Time-binned, frequency-banded arrival energy with per-bin spherical
// harmonic directivity, plus the discrete direct and early-reflection
// events. Bin width is one audio sample unless configured coarser.
class EnergyHistogram {
 public:
  EnergyHistogram() = default;
  EnergyHistogram(double bin_seconds, double max_seconds, int num_bands,
                  int sh_order);

  int num_bands() const { return num_bands_; }
  int sh_order() const { return sh_order_; }
  size_t num_bins() const { return num_bins_; }
  double bin_seconds() const { return bin_seconds_; }

  // Adds an arrival. Deposits beyond the histogram length are dropped and
  // counted. The SH vector of the bin is incremented by total energy times
  // the SH basis at the arrival direction, so the order-0 coefficient equals
  // the bin's accumulated (broadband) energy.
  void Accumulate(double delay_s, std::span<const double> band_energy,
                  const Vec3& direction);

  double Energy(size_t bin, int band) const {
    return energy_[bin * num_bands_ + band];
  }
  std::span<const double> BinSh(size_t bin) const {
    return {sh_.data() + bin * sh_count_, static_cast<size_t>(sh_count_)};
  }
  double BandTotal(int band) const;
  double Total() const;

  // Ordered reduction used by the deterministic merge: adds `other`
  // element-wise and appends its events.
  void MergeFrom(const EnergyHistogram& other);

  std::vector<EarlyReflection> early_reflections;
  std::optional<DirectSound> direct;
  uint64_t dropped_deposits = 0;

 private:
  double bin_seconds_ = 0.0;
  size_t num_bins_ = 0;
  int num_bands_ = 0;
  int sh_order_ = 0;
  int sh_count_ = 1;
  std::vector<double> energy_;  // [bin][band]
  std::vector<double> sh_;      // [bin][coeff]
};

}  // namespace echotrace

#endif  // ECHOTRACE_HISTOGRAM_H_
