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

#ifndef ECHOTRACE_POSE_H_
#define ECHOTRACE_POSE_H_

#include <cmath>

#include "echotrace/common.h"

namespace echotrace {

// Listener pose in the world frame: z is up, heading is the yaw angle about
// +z measured counter-clockwise from +x.
struct ListenerPose {
  Vec3 position{0, 0, 0};
  double heading_rad = 0.0;

  Vec3 Forward() const {
    return Vec3(std::cos(heading_rad), std::sin(heading_rad), 0.0);
  }
  Vec3 Up() const { return Vec3(0, 0, 1); }
  Vec3 Right() const { return Forward().cross(Up()); }

  // Azimuth of a world direction relative to the heading, positive toward
  // the right ear; elevation positive upward.
  double AzimuthOf(const Vec3& world_dir) const {
    return std::atan2(world_dir.dot(Right()), world_dir.dot(Forward()));
  }
  double ElevationOf(const Vec3& world_dir) const {
    const double horiz = std::hypot(world_dir.dot(Forward()),
                                    world_dir.dot(Right()));
    return std::atan2(world_dir.dot(Up()), horiz);
  }

  // Counter-clockwise rotation from the heading (dataset polar convention),
  // wrapped to [0, 2 pi).
  double CcwAngleOf(const Vec3& world_dir) const {
    double a = std::atan2(world_dir.y(), world_dir.x()) - heading_rad;
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a;
  }
};

}  // namespace echotrace

#endif  // ECHOTRACE_POSE_H_
