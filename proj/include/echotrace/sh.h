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

#ifndef ECHOTRACE_SH_H_
#define ECHOTRACE_SH_H_

#include "echotrace/common.h"

namespace echotrace {

// Real spherical harmonics in ambisonic ACN channel order with SN3D
// normalization (Y_0 == 1), supported through order 3 (16 channels).
inline constexpr int kMaxShOrder = 3;

constexpr int ShCount(int order) { return (order + 1) * (order + 1); }

// Evaluates Y_0..Y_{(order+1)^2-1} at a unit direction into out[].
void EvalRealSh(int order, const Vec3& unit_dir, double* out);

}  // namespace echotrace

#endif  // ECHOTRACE_SH_H_
