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

#ifndef ECHOTRACE_BANDS_H_
#define ECHOTRACE_BANDS_H_

#include <vector>

namespace echotrace {

// Logarithmically spaced analysis bands. Band m is centered at centers[m];
// adjacent bands meet at the geometric midpoint of their centers.
class FrequencyBands {
 public:
  FrequencyBands() = default;
  explicit FrequencyBands(std::vector<double> centers);

  // M octave bands starting at first_center_hz (default layout:
  // 8 bands, 62.5 Hz .. 8 kHz centers, covering up to the Nyquist edge).
  static FrequencyBands Octaves(double first_center_hz, int count);
  static FrequencyBands Default();

  int size() const { return static_cast<int>(centers_.size()); }
  double Center(int band) const { return centers_[band]; }
  const std::vector<double>& centers() const { return centers_; }

  // Crossover frequencies between adjacent bands (size M-1).
  const std::vector<double>& crossovers() const { return crossovers_; }

  bool operator==(const FrequencyBands& other) const {
    return centers_ == other.centers_;
  }

 private:
  std::vector<double> centers_;
  std::vector<double> crossovers_;
};

}  // namespace echotrace

#endif  // ECHOTRACE_BANDS_H_
