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

#include "echotrace/bands.h"

#include <cmath>

#include "echotrace/common.h"

namespace echotrace {

FrequencyBands::FrequencyBands(std::vector<double> centers)
    : centers_(std::move(centers)) {
  if (centers_.empty())
    throw ConfigError("FrequencyBands: need at least one band");
  for (size_t i = 1; i < centers_.size(); ++i) {
    if (centers_[i] <= centers_[i - 1])
      throw ConfigError("FrequencyBands: centers must be strictly increasing");
  }
  if (centers_.size() > static_cast<size_t>(kMaxBands))
    throw ConfigError("FrequencyBands: too many bands");
  crossovers_.resize(centers_.size() - 1);
  for (size_t i = 0; i + 1 < centers_.size(); ++i)
    crossovers_[i] = std::sqrt(centers_[i] * centers_[i + 1]);
}

FrequencyBands FrequencyBands::Octaves(double first_center_hz, int count) {
  std::vector<double> centers(count);
  for (int i = 0; i < count; ++i)
    centers[i] = first_center_hz * std::pow(2.0, i);
  return FrequencyBands(std::move(centers));
}

FrequencyBands FrequencyBands::Default() { return Octaves(62.5, 8); }

}  // namespace echotrace
