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

#ifndef ECHOTRACE_COMMON_H_
#define ECHOTRACE_COMMON_H_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace echotrace {

using Vec3 = Eigen::Vector3d;

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s at 20 degC
inline constexpr double kPi = 3.14159265358979323846;

// Maximum number of frequency bands the tracer supports per ray.
inline constexpr int kMaxBands = 16;

// Configuration/input problems (bad files, bad parameters). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parse failures in external file formats, with position info when known.
class FormatError : public ConfigError {
 public:
  explicit FormatError(const std::string& what) : ConfigError(what) {}
};

// Runtime simulation failures. CLI exit code 3.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what)
      : std::runtime_error(what) {}
};

inline double DegToRad(double deg) { return deg * kPi / 180.0; }
inline double RadToDeg(double rad) { return rad * 180.0 / kPi; }

inline double Db(double energy_ratio) { return 10.0 * std::log10(energy_ratio); }

}  // namespace echotrace

#endif  // ECHOTRACE_COMMON_H_
