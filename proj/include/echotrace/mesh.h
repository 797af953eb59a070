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

#ifndef ECHOTRACE_MESH_H_
#define ECHOTRACE_MESH_H_

#include <array>
#include <string>
#include <vector>

#include "echotrace/common.h"

namespace echotrace {

struct TriangleMesh {
  std::vector<Vec3> vertices;                    // meters
  std::vector<std::array<int, 3>> triangles;     // vertex indices
  std::vector<std::string> categories;           // per triangle, may be ""
  int degenerate_dropped = 0;

  size_t NumTriangles() const { return triangles.size(); }
  Vec3 TriangleVertex(int tri, int corner) const {
    return vertices[triangles[tri][corner]];
  }
  Vec3 GeometricNormal(int tri) const;  // unit, from winding
  double TriangleArea(int tri) const;
  Vec3 Centroid(int tri) const;

  Vec3 BoundsMin() const;
  Vec3 BoundsMax() const;
};

// Loads the Wavefront OBJ subset: v records, f records (triangles and fans
// of larger polygons, any of the v / v/vt / v//vn / v/vt/vn index forms),
// usemtl names carried as per-triangle category labels. All coordinates are
// multiplied by unit_scale; degenerate (zero-area) triangles are dropped and
// counted. Parse errors report the 1-based line number.
TriangleMesh LoadMesh(const std::string& path, double unit_scale = 1.0);
TriangleMesh LoadMeshFromText(const std::string& text, double unit_scale = 1.0,
                              const std::string& origin = "<memory>");

// Replaces per-triangle categories from a sidecar file with one label per
// line (triangle order), blank lines keeping the existing label.
void ApplyCategorySidecar(TriangleMesh& mesh, const std::string& path);

// Axis-aligned box of the given inner dimensions spanning [0,L] per axis,
// triangulated with normals facing inward. Faces are labeled "floor"
// (z=0), "ceiling" (z=Lz), and "wall".
TriangleMesh MakeShoeboxMesh(const Vec3& dimensions);

// Serializes a mesh as OBJ text (used by tests and the dataset tooling).
std::string MeshToObjText(const TriangleMesh& mesh);

}  // namespace echotrace

#endif  // ECHOTRACE_MESH_H_
