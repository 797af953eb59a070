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

#ifndef ECHOTRACE_ORACLE_H_
#define ECHOTRACE_ORACLE_H_

#include <array>
#include <vector>

#include "echotrace/common.h"

namespace echotrace {

// Analytic references for rectangular rooms. These are validation-only
// models: they assume ideal specular walls, a point source with unit energy
// per band, and no scattering, diffraction, transmission, or air absorption.

struct Shoebox {
  Vec3 dimensions;  // box spans [0,Lx] x [0,Ly] x [0,Lz]
  // Wall absorption in order x=0, x=Lx, y=0, y=Ly, z=0, z=Lz.
  std::array<double, 6> absorption{};
  Vec3 source;
  Vec3 receiver;
  double speed_of_sound = kDefaultSpeedOfSound;

  static Shoebox Uniform(const Vec3& dimensions, double alpha,
                         const Vec3& source, const Vec3& receiver);
  double Volume() const;
  double SurfaceArea() const;
};

struct ImageArrival {
  double delay_s = 0.0;
  double energy = 0.0;  // received flux, 1/(4 pi r^2) * prod(1 - alpha_i)
  Vec3 image_position;
  int order = 0;  // total number of wall reflections
};

// All image sources with reflection order <= max_order, sorted by delay.
std::vector<ImageArrival> ImageSourceArrivals(const Shoebox& box,
                                              int max_order);

// Number of distinct images of exact order k in 3-D (combinatorial check).
long ImageCountOfOrder(int order);

struct SurfaceAbsorption {
  double area_m2 = 0.0;
  double alpha = 0.0;
};

// Sabine: T = 0.161 V / sum(S_i a_i).
double SabineRt60(double volume_m3,
                  const std::vector<SurfaceAbsorption>& surfaces);

// Eyring: T = 0.161 V / (-S ln(1 - mean_alpha)).
double EyringRt60(double volume_m3,
                  const std::vector<SurfaceAbsorption>& surfaces);

double SabineRt60(const Shoebox& box);
double EyringRt60(const Shoebox& box);

// Direct-to-reverberant ratio implied by an arrival list: arrivals within
// direct_window_s after the first one count as direct.
double OracleDrr(const std::vector<ImageArrival>& arrivals,
                 double direct_window_s);

// Total received energy of arrivals with the given exact reflection order.
double OrderEnergy(const std::vector<ImageArrival>& arrivals, int order);

}  // namespace echotrace

#endif  // ECHOTRACE_ORACLE_H_
