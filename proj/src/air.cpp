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

#include "echotrace/air.h"

#include <cmath>

#include "echotrace/common.h"

namespace echotrace {

void AirModel::Validate() const {
  if (humidity_percent < 0.0 || humidity_percent > 100.0)
    throw ConfigError("AirModel: humidity must be in [0, 100] %");
  if (temperature_c < -20.0 || temperature_c > 50.0)
    throw ConfigError("AirModel: temperature must be in [-20, 50] degC");
  if (pressure_kpa <= 0.0)
    throw ConfigError("AirModel: pressure must be positive");
}

// ISO 9613-1 pure-tone attenuation: classical (thermo-viscous) losses plus
// the oxygen and nitrogen vibrational relaxation terms.
double AirAttenuation(const AirModel& air, double frequency_hz) {
  air.Validate();
  if (frequency_hz < 20.0 || frequency_hz > 40000.0)
    throw ConfigError("AirAttenuation: frequency must be in [20, 40000] Hz");

  const double t_kelvin = air.temperature_c + 273.15;
  const double t_rel = t_kelvin / 293.15;           // T / T20
  const double p_rel = air.pressure_kpa / 101.325;  // p / p_ref

  // Molar concentration of water vapor (%), from relative humidity via the
  // saturation vapor pressure exponent.
  const double c_sat = -6.8346 * std::pow(273.16 / t_kelvin, 1.261) + 4.6151;
  const double h = air.humidity_percent * std::pow(10.0, c_sat) / p_rel;

  const double f_rel_o = p_rel * (24.0 + 4.04e4 * h * (0.02 + h) / (0.391 + h));
  const double f_rel_n =
      p_rel * std::pow(t_rel, -0.5) *
      (9.0 + 280.0 * h * std::exp(-4.170 * (std::pow(t_rel, -1.0 / 3.0) - 1.0)));

  const double f2 = frequency_hz * frequency_hz;
  const double classical = 1.84e-11 / p_rel * std::sqrt(t_rel);
  const double oxygen = 0.01275 * std::exp(-2239.1 / t_kelvin) /
                        (f_rel_o + f2 / f_rel_o);
  const double nitrogen = 0.1068 * std::exp(-3352.0 / t_kelvin) /
                          (f_rel_n + f2 / f_rel_n);
  const double relaxation = std::pow(t_rel, -2.5) * (oxygen + nitrogen);
  return 8.686 * f2 * (classical + relaxation);
}

std::vector<double> BandAirAttenuation(const AirModel& air,
                                       const FrequencyBands& bands) {
  std::vector<double> out(bands.size());
  for (int m = 0; m < bands.size(); ++m) {
    const double f = std::clamp(bands.Center(m), 20.0, 40000.0);
    out[m] = AirAttenuation(air, f);
  }
  return out;
}

}  // namespace echotrace
