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

#include "echotrace/oracle.h"

#include <algorithm>
#include <cmath>

namespace echotrace {

Shoebox Shoebox::Uniform(const Vec3& dimensions, double alpha,
                         const Vec3& source, const Vec3& receiver) {
  Shoebox box;
  box.dimensions = dimensions;
  box.absorption.fill(alpha);
  box.source = source;
  box.receiver = receiver;
  return box;
}

double Shoebox::Volume() const {
  return dimensions.x() * dimensions.y() * dimensions.z();
}

double Shoebox::SurfaceArea() const {
  const double lx = dimensions.x(), ly = dimensions.y(), lz = dimensions.z();
  return 2.0 * (lx * ly + ly * lz + lx * lz);
}

namespace {

// One axis of the lattice of mirror images. An image is indexed by
// (u, k): coordinate = (1-2u) s + 2 k L. The straight segment from the
// receiver to the image crosses the planes x = n L strictly between them;
// each crossing with n even is a reflection at the lower wall (x = 0) and
// each crossing with n odd a reflection at the upper wall (x = L).
struct AxisImage {
  double coordinate = 0.0;
  int low_wall_reflections = 0;
  int high_wall_reflections = 0;
  int order = 0;
};

void AxisImages(double source, double receiver, double length, int max_order,
                std::vector<AxisImage>& out) {
  out.clear();
  for (int k = -(max_order / 2 + 1); k <= max_order / 2 + 1; ++k) {
    for (int u = 0; u <= 1; ++u) {
      AxisImage img;
      img.coordinate = (u == 0 ? source : -source) + 2.0 * k * length;
      const double lo = std::min(receiver, img.coordinate);
      const double hi = std::max(receiver, img.coordinate);
      const int n_min = static_cast<int>(std::ceil(lo / length + 1e-12));
      const int n_max = static_cast<int>(std::floor(hi / length - 1e-12));
      for (int n = n_min; n <= n_max; ++n) {
        const double plane = n * length;
        if (plane <= lo || plane >= hi) continue;
        if ((n % 2 + 2) % 2 == 0)
          ++img.low_wall_reflections;
        else
          ++img.high_wall_reflections;
      }
      img.order = img.low_wall_reflections + img.high_wall_reflections;
      if (img.order > max_order) continue;
      // (u=1, k=0) with s==0 would duplicate (u=0, k=0); positions are
      // strictly inside the box so the pair is always distinct except for
      // the unreflected identity, which only u=0,k=0 produces.
      if (u == 1 && img.order == 0) continue;
      out.push_back(img);
    }
  }
}

}  // namespace

std::vector<ImageArrival> ImageSourceArrivals(const Shoebox& box,
                                              int max_order) {
  std::vector<AxisImage> xs, ys, zs;
  AxisImages(box.source.x(), box.receiver.x(), box.dimensions.x(), max_order,
             xs);
  AxisImages(box.source.y(), box.receiver.y(), box.dimensions.y(), max_order,
             ys);
  AxisImages(box.source.z(), box.receiver.z(), box.dimensions.z(), max_order,
             zs);

  std::vector<ImageArrival> arrivals;
  for (const auto& ix : xs) {
    for (const auto& iy : ys) {
      const int partial = ix.order + iy.order;
      if (partial > max_order) continue;
      for (const auto& iz : zs) {
        const int order = partial + iz.order;
        if (order > max_order) continue;
        ImageArrival a;
        a.image_position =
            Vec3(ix.coordinate, iy.coordinate, iz.coordinate);
        const double r = (a.image_position - box.receiver).norm();
        a.delay_s = r / box.speed_of_sound;
        double gain = 1.0;
        gain *= std::pow(1.0 - box.absorption[0], ix.low_wall_reflections);
        gain *= std::pow(1.0 - box.absorption[1], ix.high_wall_reflections);
        gain *= std::pow(1.0 - box.absorption[2], iy.low_wall_reflections);
        gain *= std::pow(1.0 - box.absorption[3], iy.high_wall_reflections);
        gain *= std::pow(1.0 - box.absorption[4], iz.low_wall_reflections);
        gain *= std::pow(1.0 - box.absorption[5], iz.high_wall_reflections);
        a.energy = gain / (4.0 * kPi * r * r);
        a.order = order;
        arrivals.push_back(a);
      }
    }
  }
  std::sort(arrivals.begin(), arrivals.end(),
            [](const ImageArrival& a, const ImageArrival& b) {
              return a.delay_s < b.delay_s;
            });
  return arrivals;
}

long ImageCountOfOrder(int order) {
  if (order == 0) return 1;
  // Per axis there is 1 image with zero reflections and 2 with m >= 1.
  long count = 0;
  for (int mx = 0; mx <= order; ++mx) {
    for (int my = 0; my + mx <= order; ++my) {
      const int mz = order - mx - my;
      long ways = 1;
      ways *= (mx == 0) ? 1 : 2;
      ways *= (my == 0) ? 1 : 2;
      ways *= (mz == 0) ? 1 : 2;
      count += ways;
    }
  }
  return count;
}

double SabineRt60(double volume_m3,
                  const std::vector<SurfaceAbsorption>& surfaces) {
  double total = 0.0;
  for (const auto& s : surfaces) total += s.area_m2 * s.alpha;
  if (total <= 0.0)
    throw ConfigError("SabineRt60: total absorption must be positive");
  return 0.161 * volume_m3 / total;
}

double EyringRt60(double volume_m3,
                  const std::vector<SurfaceAbsorption>& surfaces) {
  double area = 0.0, total = 0.0;
  for (const auto& s : surfaces) {
    area += s.area_m2;
    total += s.area_m2 * s.alpha;
  }
  if (area <= 0.0) throw ConfigError("EyringRt60: no surfaces");
  const double mean_alpha = total / area;
  if (mean_alpha >= 1.0)
    throw ConfigError("EyringRt60: mean absorption must be < 1");
  if (mean_alpha <= 0.0)
    throw ConfigError("EyringRt60: mean absorption must be > 0");
  return 0.161 * volume_m3 / (-area * std::log(1.0 - mean_alpha));
}

namespace {

std::vector<SurfaceAbsorption> BoxSurfaces(const Shoebox& box) {
  const double lx = box.dimensions.x(), ly = box.dimensions.y(),
               lz = box.dimensions.z();
  return {
      {ly * lz, box.absorption[0]}, {ly * lz, box.absorption[1]},
      {lx * lz, box.absorption[2]}, {lx * lz, box.absorption[3]},
      {lx * ly, box.absorption[4]}, {lx * ly, box.absorption[5]},
  };
}

}  // namespace

double SabineRt60(const Shoebox& box) {
  return SabineRt60(box.Volume(), BoxSurfaces(box));
}

double EyringRt60(const Shoebox& box) {
  return EyringRt60(box.Volume(), BoxSurfaces(box));
}

double OracleDrr(const std::vector<ImageArrival>& arrivals,
                 double direct_window_s) {
  if (arrivals.empty()) throw ConfigError("OracleDrr: no arrivals");
  double first = arrivals.front().delay_s;
  for (const auto& a : arrivals) first = std::min(first, a.delay_s);
  double direct = 0.0, tail = 0.0;
  for (const auto& a : arrivals) {
    if (a.delay_s <= first + direct_window_s)
      direct += a.energy;
    else
      tail += a.energy;
  }
  if (tail <= 0.0) return std::numeric_limits<double>::infinity();
  return Db(direct / tail);
}

double OrderEnergy(const std::vector<ImageArrival>& arrivals, int order) {
  double e = 0.0;
  for (const auto& a : arrivals)
    if (a.order == order) e += a.energy;
  return e;
}

}  // namespace echotrace
