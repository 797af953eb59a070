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

#include "echotrace/mesh.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace echotrace {

Vec3 TriangleMesh::GeometricNormal(int tri) const {
  const Vec3 a = TriangleVertex(tri, 0);
  const Vec3 b = TriangleVertex(tri, 1);
  const Vec3 c = TriangleVertex(tri, 2);
  Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3(0, 0, 1);
}

double TriangleMesh::TriangleArea(int tri) const {
  const Vec3 a = TriangleVertex(tri, 0);
  const Vec3 b = TriangleVertex(tri, 1);
  const Vec3 c = TriangleVertex(tri, 2);
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 TriangleMesh::Centroid(int tri) const {
  return (TriangleVertex(tri, 0) + TriangleVertex(tri, 1) +
          TriangleVertex(tri, 2)) /
         3.0;
}

Vec3 TriangleMesh::BoundsMin() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  for (const auto& v : vertices) lo = lo.cwiseMin(v);
  return lo;
}

Vec3 TriangleMesh::BoundsMax() const {
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const auto& v : vertices) hi = hi.cwiseMax(v);
  return hi;
}

namespace {

// First integer of an OBJ face token ("7", "7/1", "7//2", "7/1/2").
int ParseFaceIndex(const std::string& token, int num_vertices, int line,
                   const std::string& origin) {
  int value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin || (ptr != end && *ptr != '/'))
    throw FormatError(origin + ":" + std::to_string(line) +
                      ": bad face index '" + token + "'");
  if (value < 0) value = num_vertices + value + 1;  // negative = relative
  if (value < 1 || value > num_vertices)
    throw FormatError(origin + ":" + std::to_string(line) +
                      ": face index out of range: " + token);
  return value - 1;
}

constexpr double kDegenerateArea = 1e-12;

}  // namespace

TriangleMesh LoadMeshFromText(const std::string& text, double unit_scale,
                              const std::string& origin) {
  if (unit_scale <= 0.0)
    throw ConfigError("LoadMesh: unit_scale must be positive");
  TriangleMesh mesh;
  std::string current_category;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw FormatError(origin + ":" + std::to_string(line_no) +
                          ": malformed vertex record");
      mesh.vertices.emplace_back(x * unit_scale, y * unit_scale,
                                 z * unit_scale);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string token;
      while (ls >> token)
        corners.push_back(ParseFaceIndex(
            token, static_cast<int>(mesh.vertices.size()), line_no, origin));
      if (corners.size() < 3)
        throw FormatError(origin + ":" + std::to_string(line_no) +
                          ": face needs at least 3 vertices");
      for (size_t i = 1; i + 1 < corners.size(); ++i) {
        mesh.triangles.push_back({corners[0], corners[i], corners[i + 1]});
        mesh.categories.push_back(current_category);
      }
    } else if (tag == "usemtl") {
      ls >> current_category;
    }
    // vn / vt / o / g / s / mtllib records are accepted and ignored.
  }
  if (mesh.triangles.empty())
    throw ConfigError("LoadMesh: " + origin + " contains no triangles");

  // Drop degenerate triangles.
  TriangleMesh out;
  out.vertices = mesh.vertices;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] ||
        mesh.TriangleArea(static_cast<int>(t)) < kDegenerateArea) {
      ++out.degenerate_dropped;
      continue;
    }
    out.triangles.push_back(tri);
    out.categories.push_back(mesh.categories[t]);
  }
  if (out.triangles.empty())
    throw ConfigError("LoadMesh: " + origin +
                      " contains only degenerate triangles");
  return out;
}

TriangleMesh LoadMesh(const std::string& path, double unit_scale) {
  std::ifstream file(path);
  if (!file) throw ConfigError("LoadMesh: cannot open " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  return LoadMeshFromText(ss.str(), unit_scale, path);
}

void ApplyCategorySidecar(TriangleMesh& mesh, const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open category sidecar " + path);
  std::string line;
  size_t i = 0;
  while (std::getline(file, line) && i < mesh.categories.size()) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) mesh.categories[i] = line;
    ++i;
  }
}

TriangleMesh MakeShoeboxMesh(const Vec3& d) {
  TriangleMesh mesh;
  const double x = d.x(), y = d.y(), z = d.z();
  mesh.vertices = {
      {0, 0, 0}, {x, 0, 0}, {x, y, 0}, {0, y, 0},  // bottom ring
      {0, 0, z}, {x, 0, z}, {x, y, z}, {0, y, z},  // top ring
  };
  auto quad = [&](int a, int b, int c, int e, const char* category) {
    mesh.triangles.push_back({a, b, c});
    mesh.categories.emplace_back(category);
    mesh.triangles.push_back({a, c, e});
    mesh.categories.emplace_back(category);
  };
  // Wound counter-clockwise as seen from inside the box.
  quad(0, 1, 2, 3, "floor");    // z = 0, normal +z
  quad(4, 7, 6, 5, "ceiling");  // z = Lz, normal -z
  quad(0, 4, 5, 1, "wall");     // y = 0, normal +y
  quad(2, 6, 7, 3, "wall");     // y = Ly, normal -y
  quad(0, 3, 7, 4, "wall");     // x = 0, normal +x
  quad(1, 5, 6, 2, "wall");     // x = Lx, normal -x
  return mesh;
}

std::string MeshToObjText(const TriangleMesh& mesh) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& v : mesh.vertices)
    os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  std::string current;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.categories[t] != current) {
      current = mesh.categories[t];
      if (!current.empty()) os << "usemtl " << current << "\n";
    }
    const auto& tri = mesh.triangles[t];
    os << "f " << tri[0] + 1 << " " << tri[1] + 1 << " " << tri[2] + 1 << "\n";
  }
  return os.str();
}

}  // namespace echotrace
