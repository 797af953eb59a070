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

#ifndef ECHOTRACE_BVH_H_
#define ECHOTRACE_BVH_H_

#include <optional>
#include <vector>

#include "echotrace/mesh.h"

namespace echotrace {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length

  void ValidateDirection() const;
};

struct Hit {
  int triangle = -1;
  double distance = 0.0;
  double u = 0.0, v = 0.0;  // barycentric (b, c) weights
  Vec3 normal;              // geometric normal from winding (not flipped)
};

// Axis-aligned BVH over mesh triangles with binned surface-area-heuristic
// splits. Intersection is two-sided (scan meshes have unreliable winding)
// and deterministic: ties in hit distance resolve to the lower triangle id.
class Bvh {
 public:
  Bvh() = default;
  static Bvh Build(const TriangleMesh& mesh);

  std::optional<Hit> Intersect(const TriangleMesh& mesh, const Ray& ray,
                               double max_distance) const;
  bool AnyHit(const TriangleMesh& mesh, const Ray& ray,
              double max_distance) const;
  // All hits along the ray up to max_distance, sorted by distance.
  void AllHits(const TriangleMesh& mesh, const Ray& ray, double max_distance,
               std::vector<Hit>& out) const;

  size_t NumIndexedTriangles() const { return triangle_order_.size(); }

 private:
  struct Node {
    Vec3 bounds_min, bounds_max;
    int left = -1;     // internal: child index; leaf: first triangle slot
    int count = 0;     // leaf triangle count, 0 for internal nodes
    int right = -1;
  };

  template <typename Visitor>
  void Traverse(const TriangleMesh& mesh, const Ray& ray, double max_distance,
                Visitor&& visit) const;

  std::vector<Node> nodes_;
  std::vector<int> triangle_order_;
};

// Reference nearest-hit by exhaustive scan; shared by tests as the oracle
// and by Bvh leaves for the per-triangle test.
std::optional<Hit> IntersectTriangle(const TriangleMesh& mesh, int tri,
                                     const Ray& ray, double max_distance);

}  // namespace echotrace

#endif  // ECHOTRACE_BVH_H_
