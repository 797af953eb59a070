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

#include "echotrace/bvh.h"

#include <algorithm>
#include <cmath>

namespace echotrace {

void Ray::ValidateDirection() const {
  if (std::abs(direction.norm() - 1.0) > 1e-6)
    throw SimulationError("Ray direction must be unit length");
}

std::optional<Hit> IntersectTriangle(const TriangleMesh& mesh, int tri,
                                     const Ray& ray, double max_distance) {
  // Moller-Trumbore, two-sided.
  const Vec3 a = mesh.TriangleVertex(tri, 0);
  const Vec3 e1 = mesh.TriangleVertex(tri, 1) - a;
  const Vec3 e2 = mesh.TriangleVertex(tri, 2) - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv_det;
  if (t <= 1e-9 || t > max_distance) return std::nullopt;
  Hit hit;
  hit.triangle = tri;
  hit.distance = t;
  hit.u = u;
  hit.v = v;
  Vec3 n = e1.cross(e2);
  const double len = n.norm();
  hit.normal = len > 0.0 ? Vec3(n / len) : Vec3(0, 0, 1);
  return hit;
}

namespace {

struct BuildEntry {
  int triangle = 0;
  Vec3 bounds_min, bounds_max, centroid;
};

double HalfArea(const Vec3& lo, const Vec3& hi) {
  const Vec3 d = (hi - lo).cwiseMax(0.0);
  return d.x() * d.y() + d.y() * d.z() + d.z() * d.x();
}

constexpr int kNumBins = 16;
constexpr int kLeafSize = 4;

}  // namespace

Bvh Bvh::Build(const TriangleMesh& mesh) {
  Bvh bvh;
  const int n = static_cast<int>(mesh.NumTriangles());
  if (n == 0) return bvh;

  std::vector<BuildEntry> entries(n);
  for (int t = 0; t < n; ++t) {
    BuildEntry& e = entries[t];
    e.triangle = t;
    const Vec3 a = mesh.TriangleVertex(t, 0);
    const Vec3 b = mesh.TriangleVertex(t, 1);
    const Vec3 c = mesh.TriangleVertex(t, 2);
    e.bounds_min = a.cwiseMin(b).cwiseMin(c);
    e.bounds_max = a.cwiseMax(b).cwiseMax(c);
    e.centroid = (a + b + c) / 3.0;
  }

  bvh.nodes_.reserve(static_cast<size_t>(2 * n));
  bvh.triangle_order_.reserve(n);

  // Iterative build over [begin, end) ranges of `entries`.
  struct Task {
    int node = 0, begin = 0, end = 0;
  };
  std::vector<Task> stack;
  bvh.nodes_.emplace_back();
  stack.push_back({0, 0, n});

  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    Vec3 clo = lo, chi = hi;
    for (int i = task.begin; i < task.end; ++i) {
      lo = lo.cwiseMin(entries[i].bounds_min);
      hi = hi.cwiseMax(entries[i].bounds_max);
      clo = clo.cwiseMin(entries[i].centroid);
      chi = chi.cwiseMax(entries[i].centroid);
    }
    Node& node = bvh.nodes_[task.node];
    node.bounds_min = lo;
    node.bounds_max = hi;

    const int count = task.end - task.begin;
    int axis = 0;
    const Vec3 extent = chi - clo;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;

    bool make_leaf = count <= kLeafSize || extent[axis] < 1e-12;
    int mid = task.begin;
    if (!make_leaf) {
      // Binned SAH along the widest centroid axis.
      struct Bin {
        Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
        Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
        int count = 0;
      };
      Bin bins[kNumBins];
      const double scale = kNumBins / extent[axis];
      auto bin_of = [&](const BuildEntry& e) {
        int b = static_cast<int>((e.centroid[axis] - clo[axis]) * scale);
        return std::clamp(b, 0, kNumBins - 1);
      };
      for (int i = task.begin; i < task.end; ++i) {
        Bin& b = bins[bin_of(entries[i])];
        b.lo = b.lo.cwiseMin(entries[i].bounds_min);
        b.hi = b.hi.cwiseMax(entries[i].bounds_max);
        ++b.count;
      }
      double best_cost = std::numeric_limits<double>::infinity();
      int best_split = -1;
      for (int split = 1; split < kNumBins; ++split) {
        Vec3 llo = Vec3::Constant(std::numeric_limits<double>::infinity());
        Vec3 lhi = -llo, rlo = llo, rhi = -llo;
        int lcount = 0, rcount = 0;
        for (int b = 0; b < split; ++b) {
          if (bins[b].count == 0) continue;
          llo = llo.cwiseMin(bins[b].lo);
          lhi = lhi.cwiseMax(bins[b].hi);
          lcount += bins[b].count;
        }
        for (int b = split; b < kNumBins; ++b) {
          if (bins[b].count == 0) continue;
          rlo = rlo.cwiseMin(bins[b].lo);
          rhi = rhi.cwiseMax(bins[b].hi);
          rcount += bins[b].count;
        }
        if (lcount == 0 || rcount == 0) continue;
        const double cost =
            HalfArea(llo, lhi) * lcount + HalfArea(rlo, rhi) * rcount;
        if (cost < best_cost) {
          best_cost = cost;
          best_split = split;
        }
      }
      if (best_split < 0 ||
          best_cost >= HalfArea(lo, hi) * (count - 0.5)) {
        make_leaf = count <= 8 * kLeafSize ? true : false;
        if (!make_leaf) best_split = kNumBins / 2;  // fall back to median bin
      }
      if (!make_leaf) {
        auto* first = entries.data() + task.begin;
        auto* last = entries.data() + task.end;
        auto* pivot = std::stable_partition(
            first, last,
            [&](const BuildEntry& e) { return bin_of(e) < best_split; });
        mid = task.begin + static_cast<int>(pivot - first);
        if (mid == task.begin || mid == task.end) make_leaf = true;
      }
    }

    if (make_leaf) {
      Node& leaf = bvh.nodes_[task.node];
      leaf.left = static_cast<int>(bvh.triangle_order_.size());
      leaf.count = count;
      for (int i = task.begin; i < task.end; ++i)
        bvh.triangle_order_.push_back(entries[i].triangle);
      continue;
    }

    const int left = static_cast<int>(bvh.nodes_.size());
    bvh.nodes_.emplace_back();
    bvh.nodes_.emplace_back();
    bvh.nodes_[task.node].left = left;
    bvh.nodes_[task.node].right = left + 1;
    bvh.nodes_[task.node].count = 0;
    stack.push_back({left, task.begin, mid});
    stack.push_back({left + 1, mid, task.end});
  }
  return bvh;
}

namespace {

inline bool RayBoxHit(const Vec3& lo, const Vec3& hi, const Vec3& origin,
                      const Vec3& inv_dir, double max_distance) {
  double t0 = 0.0, t1 = max_distance;
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(inv_dir[a])) {
      // Axis-parallel ray: slab reduces to a containment test.
      if (origin[a] < lo[a] || origin[a] > hi[a]) return false;
      continue;
    }
    double near = (lo[a] - origin[a]) * inv_dir[a];
    double far = (hi[a] - origin[a]) * inv_dir[a];
    if (near > far) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

template <typename Visitor>
void Bvh::Traverse(const TriangleMesh& mesh, const Ray& ray,
                   double max_distance, Visitor&& visit) const {
  if (nodes_.empty()) return;
  const Vec3 inv_dir(1.0 / ray.direction.x(), 1.0 / ray.direction.y(),
                     1.0 / ray.direction.z());
  double limit = max_distance;  // visitors may shrink this
  int stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!RayBoxHit(node.bounds_min, node.bounds_max, ray.origin, inv_dir,
                   limit))
      continue;
    if (node.count > 0) {
      for (int i = 0; i < node.count; ++i) {
        if (!visit(triangle_order_[node.left + i], limit)) return;
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
  (void)mesh;
}

std::optional<Hit> Bvh::Intersect(const TriangleMesh& mesh, const Ray& ray,
                                  double max_distance) const {
  std::optional<Hit> best;
  Traverse(mesh, ray, max_distance, [&](int tri, double& limit) {
    auto hit = IntersectTriangle(mesh, tri, ray, limit);
    if (hit) {
      if (!best || hit->distance < best->distance ||
          (hit->distance == best->distance && hit->triangle < best->triangle)) {
        best = hit;
        // Keep the limit slightly beyond the best hit so exact ties on
        // distance can still resolve to the lower triangle id.
        limit = best->distance;
      }
    }
    return true;
  });
  return best;
}

bool Bvh::AnyHit(const TriangleMesh& mesh, const Ray& ray,
                 double max_distance) const {
  bool found = false;
  Traverse(mesh, ray, max_distance, [&](int tri, double& limit) {
    if (IntersectTriangle(mesh, tri, ray, limit)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

void Bvh::AllHits(const TriangleMesh& mesh, const Ray& ray,
                  double max_distance, std::vector<Hit>& out) const {
  out.clear();
  Traverse(mesh, ray, max_distance, [&](int tri, double& limit) {
    auto hit = IntersectTriangle(mesh, tri, ray, limit);
    if (hit) out.push_back(*hit);
    return true;
  });
  std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) {
    return a.distance != b.distance ? a.distance < b.distance
                                    : a.triangle < b.triangle;
  });
}

}  // namespace echotrace
