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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "echotrace/bvh.h"
#include "echotrace/mesh.h"
#include "echotrace/rng.h"
#include "echotrace/scene.h"

using namespace echotrace;

namespace {

const char* kUnitCubeObj = R"(# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
)";

std::optional<Hit> BruteForceNearest(const TriangleMesh& mesh, const Ray& ray,
                                     double max_distance) {
  std::optional<Hit> best;
  for (int t = 0; t < static_cast<int>(mesh.NumTriangles()); ++t) {
    auto hit = IntersectTriangle(mesh, t, ray, max_distance);
    if (!hit) continue;
    if (!best || hit->distance < best->distance ||
        (hit->distance == best->distance && hit->triangle < best->triangle))
      best = hit;
  }
  return best;
}

AcousticMaterial DummyMaterial() {
  AcousticMaterial m;
  m.name = "dummy";
  m.absorption = CoefficientList::FromPairs({1000, 0.2});
  m.scattering = CoefficientList::FromPairs({1000, 0.0});
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("scene");

TEST_CASE("unit cube loads with 12 triangles and 8 vertices") {
  const TriangleMesh mesh = LoadMeshFromText(kUnitCubeObj, 1.0);
  CHECK(mesh.NumTriangles() == 12);
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.degenerate_dropped == 0);
}

TEST_CASE("unit scale doubles the bounding box diagonal") {
  const TriangleMesh one = LoadMeshFromText(kUnitCubeObj, 1.0);
  const TriangleMesh two = LoadMeshFromText(kUnitCubeObj, 2.0);
  const double d1 = (one.BoundsMax() - one.BoundsMin()).norm();
  const double d2 = (two.BoundsMax() - two.BoundsMin()).norm();
  CHECK(d2 == doctest::Approx(2.0 * d1));
}

TEST_CASE("degenerate triangles are dropped and counted") {
  std::string obj = kUnitCubeObj;
  obj += "f 1 1 2\n";           // zero-area by repeated index
  obj += "v 0 0 0\nf 1 9 2\n";  // zero-area by coincident position
  const TriangleMesh mesh = LoadMeshFromText(obj, 1.0);
  CHECK(mesh.NumTriangles() == 12);
  CHECK(mesh.degenerate_dropped == 2);
}

TEST_CASE("parse errors carry the line number; empty meshes are rejected") {
  CHECK_THROWS_WITH_AS(LoadMeshFromText("v 0 0\n", 1.0, "bad.obj"),
                       doctest::Contains("bad.obj:1"), FormatError);
  CHECK_THROWS_WITH_AS(LoadMeshFromText("v 0 0 0\nf 1 2 9\n", 1.0, "x.obj"),
                       doctest::Contains("x.obj:2"), FormatError);
  CHECK_THROWS_AS(LoadMeshFromText("v 0 0 0\nv 1 0 0\nv 0 1 0\n", 1.0),
                  ConfigError);
  CHECK_THROWS_AS(LoadMeshFromText(kUnitCubeObj, 0.0), ConfigError);
}

TEST_CASE("usemtl labels become per-triangle categories") {
  const std::string obj =
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "usemtl floor\nf 1 2 3\nusemtl wall\nf 1 3 4\n";
  const TriangleMesh mesh = LoadMeshFromText(obj, 1.0);
  REQUIRE(mesh.NumTriangles() == 2);
  CHECK(mesh.categories[0] == "floor");
  CHECK(mesh.categories[1] == "wall");
}

TEST_CASE("shoebox with per-face categories resolves three materials") {
  const TriangleMesh mesh = MakeShoeboxMesh({4, 3, 2.5});
  const MaterialDatabase db = MaterialDatabase::BuiltIn();
  const MaterialTable table =
      ResolveAssignment(db, mesh.categories, AssignmentPolicy::kFixed, 0);
  Scene scene = BuildScene(mesh, table);
  std::set<int> indices(scene.materials.triangle_material.begin(),
                        scene.materials.triangle_material.end());
  CHECK(indices.size() == 3);  // floor, ceiling, wall

  // Single material covers everything.
  Scene uniform = BuildSceneWithMaterial(mesh, DummyMaterial());
  for (int idx : uniform.materials.triangle_material) CHECK(idx == 0);
}

TEST_CASE("unmapped category without a default is a configuration error") {
  MaterialDatabase db;  // empty: no default material
  AcousticMaterial m = DummyMaterial();
  db.Add(m);
  // Default name left unset.
  CHECK_THROWS_AS(
      ResolveAssignment(db, {"mystery"}, AssignmentPolicy::kFixed, 0),
      ConfigError);
}

TEST_CASE("ray from the box center hits the +x wall at half extent") {
  // Box centered at the origin, 4 x 3 x 2.5.
  TriangleMesh mesh = MakeShoeboxMesh({4, 3, 2.5});
  for (auto& v : mesh.vertices) v -= Vec3(2.0, 1.5, 1.25);
  Scene scene = BuildSceneWithMaterial(mesh, DummyMaterial());
  const auto hit = scene.Intersect({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  REQUIRE(hit.has_value());
  CHECK(hit->distance == doctest::Approx(2.0).epsilon(1e-12));

  // A ray pointing away from an open scene hits nothing.
  TriangleMesh panel;
  panel.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  panel.triangles = {{0, 1, 2}};
  panel.categories = {""};
  Scene open_scene = BuildSceneWithMaterial(panel, DummyMaterial());
  CHECK(!open_scene.Intersect({Vec3(0, 0, 1), Vec3(0, 0, 1)}).has_value());
}

TEST_CASE("bvh nearest hits match brute force on random rays") {
  // A 50-triangle jumble.
  TriangleMesh mesh;
  Pcg32 rng(2024, 1);
  for (int t = 0; t < 50; ++t) {
    const int base = static_cast<int>(mesh.vertices.size());
    const Vec3 center(4.0 * rng.NextDouble() - 2.0,
                      4.0 * rng.NextDouble() - 2.0,
                      4.0 * rng.NextDouble() - 2.0);
    for (int k = 0; k < 3; ++k)
      mesh.vertices.push_back(center + 0.8 * rng.NextUnitVector());
    mesh.triangles.push_back({base, base + 1, base + 2});
    mesh.categories.emplace_back("");
  }
  Scene scene = BuildSceneWithMaterial(mesh, DummyMaterial());
  CHECK(scene.bvh.NumIndexedTriangles() == mesh.NumTriangles());

  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    Ray ray{Vec3(6.0 * rng.NextDouble() - 3.0, 6.0 * rng.NextDouble() - 3.0,
                 6.0 * rng.NextDouble() - 3.0),
            rng.NextUnitVector()};
    const auto fast = scene.Intersect(ray);
    const auto slow = BruteForceNearest(scene.mesh, ray,
                                        std::numeric_limits<double>::infinity());
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      ++hits;
      CHECK(fast->triangle == slow->triangle);
      CHECK(fast->distance ==
            doctest::Approx(slow->distance).epsilon(1e-9));
    }
  }
  CHECK(hits > 1000);  // the scene is dense enough for the test to bite
}

TEST_CASE("closed convex box has no diffraction edges") {
  const TriangleMesh mesh = MakeShoeboxMesh({4, 3, 2.5});
  EdgeBuildStats stats;
  const auto edges = BuildDiffractionEdges(mesh, &stats);
  CHECK(edges.empty());
  CHECK(stats.nonmanifold_skipped == 0);
  CHECK(stats.winding_conflicts == 0);
}

TEST_CASE("free-standing panel exposes its four boundary edges") {
  TriangleMesh panel;
  panel.vertices = {{0, -2, 0}, {0, 2, 0}, {0, 2, 3}, {0, -2, 3}};
  panel.triangles = {{0, 1, 2}, {0, 2, 3}};
  panel.categories = {"", ""};
  const auto edges = BuildDiffractionEdges(panel, nullptr);
  REQUIRE(edges.size() == 4);
  for (const auto& e : edges) {
    CHECK(e.exterior_wedge_angle == doctest::Approx(2.0 * kPi));
    CHECK(e.face_b == -1);
  }
}

TEST_CASE("l-shaped room flags the interior corner column edge") {
  // An L-shaped prism: a 4x4 square with a 2x2 bite removed, extruded in z.
  // The re-entrant corner at (2,2) is convex seen from inside the room.
  std::vector<std::array<double, 2>> outline = {
      {0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  TriangleMesh mesh;
  const double height = 2.5;
  const int n = static_cast<int>(outline.size());
  for (const auto& p : outline) mesh.vertices.push_back({p[0], p[1], 0.0});
  for (const auto& p : outline) mesh.vertices.push_back({p[0], p[1], height});
  // Side walls, wound to face inward (the outline runs counter-clockwise).
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    mesh.triangles.push_back({i, n + j, j});
    mesh.triangles.push_back({i, n + i, n + j});
    mesh.categories.emplace_back("wall");
    mesh.categories.emplace_back("wall");
  }
  // Floor (+z into the room) and ceiling (-z) as fans from vertex 0, which
  // sees the whole outline.
  for (int i = 1; i + 1 < n; ++i) {
    mesh.triangles.push_back({0, i, i + 1});
    mesh.categories.emplace_back("floor");
    mesh.triangles.push_back({n, n + i + 1, n + i});
    mesh.categories.emplace_back("ceiling");
  }
  const auto edges = BuildDiffractionEdges(mesh, nullptr);
  bool found_column = false;
  for (const auto& e : edges) {
    const bool vertical = std::abs(e.start.x() - 2.0) < 1e-9 &&
                          std::abs(e.start.y() - 2.0) < 1e-9 &&
                          std::abs(e.end.x() - 2.0) < 1e-9 &&
                          std::abs(e.end.y() - 2.0) < 1e-9;
    if (vertical) {
      found_column = true;
      CHECK(e.exterior_wedge_angle == doctest::Approx(1.5 * kPi));
    }
  }
  CHECK(found_column);
}

TEST_CASE("edge set is independent of triangle enumeration order") {
  TriangleMesh panel;
  panel.vertices = {{0, -2, 0}, {0, 2, 0}, {0, 2, 3}, {0, -2, 3},
                    {1, 0, 0},  {2, 0, 0}, {2, 1, 0}};
  panel.triangles = {{0, 1, 2}, {0, 2, 3}, {4, 5, 6}};
  panel.categories = {"", "", ""};

  auto key_set = [](const std::vector<DiffractionEdge>& edges) {
    std::set<std::array<long long, 6>> keys;
    for (const auto& e : edges)
      keys.insert({llround(e.start.x() * 1e9), llround(e.start.y() * 1e9),
                   llround(e.start.z() * 1e9), llround(e.end.x() * 1e9),
                   llround(e.end.y() * 1e9), llround(e.end.z() * 1e9)});
    return keys;
  };
  const auto base = key_set(BuildDiffractionEdges(panel, nullptr));

  TriangleMesh shuffled = panel;
  std::reverse(shuffled.triangles.begin(), shuffled.triangles.end());
  CHECK(key_set(BuildDiffractionEdges(shuffled, nullptr)) == base);
}

TEST_CASE("winding conflicts are detected and counted") {
  TriangleMesh mesh = MakeShoeboxMesh({2, 2, 2});
  std::swap(mesh.triangles[0][1], mesh.triangles[0][2]);  // flip one face
  EdgeBuildStats stats;
  BuildDiffractionEdges(mesh, &stats);
  CHECK(stats.winding_conflicts > 0);
}

TEST_CASE("non-manifold edges are skipped and counted") {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
  // Three triangles sharing the edge (0,1).
  mesh.triangles = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
  mesh.categories = {"", "", ""};
  EdgeBuildStats stats;
  BuildDiffractionEdges(mesh, &stats);
  CHECK(stats.nonmanifold_skipped == 1);
}

TEST_SUITE_END();
