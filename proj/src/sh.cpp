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

#include "echotrace/sh.h"

#include <cmath>

namespace echotrace {

void EvalRealSh(int order, const Vec3& d, double* out) {
  if (order < 0 || order > kMaxShOrder)
    throw ConfigError("EvalRealSh: order must be in [0, 3]");
  const double x = d.x(), y = d.y(), z = d.z();
  out[0] = 1.0;
  if (order >= 1) {
    out[1] = y;
    out[2] = z;
    out[3] = x;
  }
  if (order >= 2) {
    const double s3 = std::sqrt(3.0);
    out[4] = s3 * x * y;
    out[5] = s3 * y * z;
    out[6] = 0.5 * (3.0 * z * z - 1.0);
    out[7] = s3 * x * z;
    out[8] = 0.5 * s3 * (x * x - y * y);
  }
  if (order >= 3) {
    const double s58 = std::sqrt(5.0 / 8.0);
    const double s15 = std::sqrt(15.0);
    const double s38 = std::sqrt(3.0 / 8.0);
    out[9] = s58 * y * (3.0 * x * x - y * y);
    out[10] = s15 * x * y * z;
    out[11] = s38 * y * (5.0 * z * z - 1.0);
    out[12] = 0.5 * z * (5.0 * z * z - 3.0);
    out[13] = s38 * x * (5.0 * z * z - 1.0);
    out[14] = 0.5 * s15 * z * (x * x - y * y);
    out[15] = s58 * x * (x * x - 3.0 * y * y);
  }
}

}  // namespace echotrace
