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

#include "echotrace/scene.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace echotrace {

namespace {

constexpr double kWedgeThreshold = kPi + 1e-3;
constexpr double kOcclusionEpsilon = 1e-6;

// Vertices are welded on a fine grid so duplicated positions (common in
// exported meshes) still produce shared edges.
int64_t Quantize(double v) { return llround(v * 1e6); }

struct WeldKey {
  int64_t x, y, z;
  bool operator<(const WeldKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

struct EdgeFaces {
  std::vector<int> faces;
  std::vector<std::pair<int, int>> corner_pairs;  // welded (from,to) per face
  Vec3 a, b;  // representative endpoint positions
};

}  // namespace

std::vector<DiffractionEdge> BuildDiffractionEdges(const TriangleMesh& mesh,
                                                   EdgeBuildStats* stats) {
  EdgeBuildStats local;
  std::map<WeldKey, int> weld;
  std::vector<Vec3> welded_pos;
  auto weld_id = [&](const Vec3& p) {
    WeldKey key{Quantize(p.x()), Quantize(p.y()), Quantize(p.z())};
    auto [it, inserted] =
        weld.emplace(key, static_cast<int>(welded_pos.size()));
    if (inserted) welded_pos.push_back(p);
    return it->second;
  };

  std::map<std::pair<int, int>, EdgeFaces> edges;
  for (int t = 0; t < static_cast<int>(mesh.NumTriangles()); ++t) {
    int ids[3] = {weld_id(mesh.TriangleVertex(t, 0)),
                  weld_id(mesh.TriangleVertex(t, 1)),
                  weld_id(mesh.TriangleVertex(t, 2))};
    for (int c = 0; c < 3; ++c) {
      const int from = ids[c];
      const int to = ids[(c + 1) % 3];
      if (from == to) continue;
      const std::pair<int, int> key{std::min(from, to), std::max(from, to)};
      EdgeFaces& ef = edges[key];
      if (ef.faces.empty()) {
        ef.a = welded_pos[key.first];
        ef.b = welded_pos[key.second];
      }
      ef.faces.push_back(t);
      ef.corner_pairs.emplace_back(from, to);
    }
  }

  std::vector<DiffractionEdge> out;
  for (const auto& [key, ef] : edges) {
    if (ef.faces.size() > 2) {
      ++local.nonmanifold_skipped;
      continue;
    }
    if (ef.faces.size() == 1) {
      // Open boundary: sound can bend around it from either side.
      DiffractionEdge e;
      e.start = ef.a;
      e.end = ef.b;
      e.normal_a = e.normal_b = mesh.GeometricNormal(ef.faces[0]);
      e.exterior_wedge_angle = 2.0 * kPi;
      e.face_a = ef.faces[0];
      e.face_b = -1;
      out.push_back(e);
      continue;
    }

    const int fa = ef.faces[0], fb = ef.faces[1];
    // Consistent winding traverses a shared edge in opposite directions.
    if (ef.corner_pairs[0] == ef.corner_pairs[1]) ++local.winding_conflicts;

    const Vec3 na = mesh.GeometricNormal(fa);
    const Vec3 nb = mesh.GeometricNormal(fb);
    const Vec3 edge_dir = (ef.b - ef.a).normalized();

    // In-plane directions perpendicular to the edge, pointing into each face.
    auto into_face = [&](int face) {
      const Vec3 centroid = mesh.Centroid(face);
      const Vec3 mid = 0.5 * (ef.a + ef.b);
      Vec3 v = centroid - mid;
      v -= v.dot(edge_dir) * edge_dir;
      const double len = v.norm();
      return len > 0.0 ? Vec3(v / len) : Vec3(0, 0, 0);
    };
    const Vec3 ta = into_face(fa);
    const Vec3 tb = into_face(fb);

    const double cos_phi = std::clamp(ta.dot(tb), -1.0, 1.0);
    const double phi = std::acos(cos_phi);  // angle between the half-planes
    // Convex from the normals' side when the faces bend away from it.
    const bool convex = na.dot(tb) < -1e-9;
    const double wedge = convex ? 2.0 * kPi - phi : phi;
    if (wedge <= kWedgeThreshold) continue;

    DiffractionEdge e;
    e.start = ef.a;
    e.end = ef.b;
    e.normal_a = na;
    e.normal_b = nb;
    e.exterior_wedge_angle = wedge;
    e.face_a = fa;
    e.face_b = fb;
    out.push_back(e);
  }

  // Canonical endpoint order and list order, independent of triangle
  // enumeration and vertex numbering.
  auto position_less = [](const Vec3& x, const Vec3& y) {
    for (int i = 0; i < 3; ++i) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
    return false;
  };
  for (DiffractionEdge& e : out) {
    if (position_less(e.end, e.start)) std::swap(e.start, e.end);
  }
  std::sort(out.begin(), out.end(),
            [](const DiffractionEdge& x, const DiffractionEdge& y) {
              for (int i = 0; i < 3; ++i) {
                if (x.start[i] != y.start[i]) return x.start[i] < y.start[i];
              }
              for (int i = 0; i < 3; ++i) {
                if (x.end[i] != y.end[i]) return x.end[i] < y.end[i];
              }
              return false;
            });
  if (stats != nullptr) *stats = local;
  return out;
}

std::optional<Hit> Scene::Intersect(const Ray& ray, double max_distance) const {
  return bvh.Intersect(mesh, ray, max_distance);
}

bool Scene::Occluded(const Vec3& from, const Vec3& to) const {
  const Vec3 delta = to - from;
  const double dist = delta.norm();
  if (dist <= 2.0 * kOcclusionEpsilon) return false;
  Ray ray{from, delta / dist};
  return bvh.AnyHit(mesh, ray, dist - kOcclusionEpsilon);
}

void Scene::AllHitsBetween(const Vec3& from, const Vec3& to,
                           std::vector<Hit>& out) const {
  const Vec3 delta = to - from;
  const double dist = delta.norm();
  if (dist <= 2.0 * kOcclusionEpsilon) {
    out.clear();
    return;
  }
  Ray ray{from, delta / dist};
  bvh.AllHits(mesh, ray, dist - kOcclusionEpsilon, out);
}

bool Scene::InsideBounds(const Vec3& p) const {
  const Vec3 lo = BoundsMin(), hi = BoundsMax();
  return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
}

Scene BuildScene(TriangleMesh mesh, MaterialTable materials,
                 double speed_of_sound) {
  if (speed_of_sound <= 0.0)
    throw ConfigError("BuildScene: speed of sound must be positive");
  if (materials.triangle_material.size() != mesh.NumTriangles())
    throw ConfigError("BuildScene: material table does not cover the mesh");
  for (int idx : materials.triangle_material) {
    if (idx < 0 || idx >= static_cast<int>(materials.materials.size()))
      throw ConfigError("BuildScene: material index out of range");
  }
  Scene scene;
  scene.mesh = std::move(mesh);
  scene.materials = std::move(materials);
  scene.speed_of_sound = speed_of_sound;
  scene.bvh = Bvh::Build(scene.mesh);
  scene.diffraction_edges =
      BuildDiffractionEdges(scene.mesh, &scene.edge_stats);

  scene.triangle_edges.assign(scene.mesh.NumTriangles(), {});
  for (size_t e = 0; e < scene.diffraction_edges.size(); ++e) {
    const DiffractionEdge& edge = scene.diffraction_edges[e];
    if (edge.face_a >= 0)
      scene.triangle_edges[edge.face_a].push_back(static_cast<int>(e));
    if (edge.face_b >= 0)
      scene.triangle_edges[edge.face_b].push_back(static_cast<int>(e));
  }
  return scene;
}

Scene BuildSceneWithMaterial(TriangleMesh mesh, const AcousticMaterial& m,
                             double speed_of_sound) {
  MaterialTable table;
  table.materials.push_back(m);
  table.triangle_material.assign(mesh.NumTriangles(), 0);
  return BuildScene(std::move(mesh), std::move(table), speed_of_sound);
}

}  // namespace echotrace
