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

#ifndef ECHOTRACE_SCENE_H_
#define ECHOTRACE_SCENE_H_

#include <optional>
#include <vector>

#include "echotrace/bvh.h"
#include "echotrace/materials.h"
#include "echotrace/mesh.h"

namespace echotrace {

// Convex (sound-occluding) wedge edge usable for diffraction. Boundary edges
// of open surfaces count as the extreme wedge (angle 2 pi).
struct DiffractionEdge {
  Vec3 start, end;
  Vec3 normal_a, normal_b;  // adjacent face normals (normal_b==a for open)
  double exterior_wedge_angle = 0.0;  // radians, > pi for a convex wedge
  int face_a = -1, face_b = -1;       // face_b == -1 for boundary edges
};

struct EdgeBuildStats {
  int nonmanifold_skipped = 0;
  int winding_conflicts = 0;
};

// Immutable after construction; safe for concurrent reads.
struct Scene {
  TriangleMesh mesh;
  MaterialTable materials;
  Bvh bvh;
  std::vector<DiffractionEdge> diffraction_edges;
  // Per-triangle indices into diffraction_edges for edges the triangle
  // touches (used by the tracer's probabilistic edge capture).
  std::vector<std::vector<int>> triangle_edges;
  double speed_of_sound = kDefaultSpeedOfSound;
  EdgeBuildStats edge_stats;

  std::optional<Hit> Intersect(const Ray& ray,
                               double max_distance =
                                   std::numeric_limits<double>::infinity())
      const;
  // True when the open segment between two points hits any geometry.
  bool Occluded(const Vec3& from, const Vec3& to) const;
  void AllHitsBetween(const Vec3& from, const Vec3& to,
                      std::vector<Hit>& out) const;

  const AcousticMaterial& TriangleMaterial(int tri) const {
    return materials.materials[materials.triangle_material[tri]];
  }

  Vec3 BoundsMin() const { return mesh.BoundsMin(); }
  Vec3 BoundsMax() const { return mesh.BoundsMax(); }
  bool InsideBounds(const Vec3& p) const;
};

// Builds the acceleration structure and diffraction edges. The material
// table must cover every triangle (ResolveAssignment guarantees this).
Scene BuildScene(TriangleMesh mesh, MaterialTable materials,
                 double speed_of_sound = kDefaultSpeedOfSound);

// Convenience: one material for the whole mesh.
Scene BuildSceneWithMaterial(TriangleMesh mesh, const AcousticMaterial& m,
                             double speed_of_sound = kDefaultSpeedOfSound);

// Constructs the convex-wedge diffraction edge set. Edges shared by more
// than two faces are skipped and counted; faces with conflicting winding are
// counted and their edges classified best-effort.
std::vector<DiffractionEdge> BuildDiffractionEdges(const TriangleMesh& mesh,
                                                   EdgeBuildStats* stats);

}  // namespace echotrace

#endif  // ECHOTRACE_SCENE_H_
