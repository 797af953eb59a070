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

#ifndef ECHOTRACE_AIR_H_
#define ECHOTRACE_AIR_H_

#include <vector>

#include "echotrace/bands.h"

namespace echotrace {

struct AirModel {
  double temperature_c = 20.0;
  double humidity_percent = 50.0;
  double pressure_kpa = 101.325;

  void Validate() const;
};

// ISO 9613-1 analytical atmospheric attenuation, dB per meter.
// Valid for frequencies in [20, 40000] Hz.
double AirAttenuation(const AirModel& air, double frequency_hz);

std::vector<double> BandAirAttenuation(const AirModel& air,
                                       const FrequencyBands& bands);

}  // namespace echotrace

#endif  // ECHOTRACE_AIR_H_
