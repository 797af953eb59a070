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

#include <cmath>

#include "echotrace/oracle.h"
#include "echotrace/propagation.h"
#include "echotrace/rng.h"
#include "echotrace/sh.h"

using namespace echotrace;

namespace {

AcousticMaterial FlatMaterial(double absorption, double scattering,
                              double transmission = 0.0) {
  AcousticMaterial m;
  m.name = "flat";
  m.absorption = CoefficientList::FromPairs({1000, absorption});
  m.scattering = CoefficientList::FromPairs({1000, scattering});
  if (transmission > 0.0)
    m.transmission = CoefficientList::FromPairs({1000, transmission});
  return m;
}

Scene BoxScene(const Vec3& dims, double absorption, double scattering) {
  return BuildSceneWithMaterial(MakeShoeboxMesh(dims),
                                FlatMaterial(absorption, scattering));
}

SimulationParams BareParams() {
  SimulationParams p;
  p.diffraction_enabled = false;
  p.transmission_enabled = false;
  p.air_absorption_enabled = false;
  p.indirect_sh_order = 0;
  p.direct_sh_order = 0;
  return p;
}

// The energy Phong lobe used by the engine, re-stated for the quadrature
// oracles (exponent 1 at full scattering).
double Lobe(double exponent, const Vec3& mirror, const Vec3& out) {
  const double c = mirror.dot(out);
  if (c <= 0.0) return 0.0;
  return (exponent + 1.0) / (2.0 * kPi) * std::pow(c, exponent);
}

double TotalIndirect(const EnergyHistogram& hist) {
  double total = hist.BandTotal(0);
  for (const auto& er : hist.early_reflections) total += er.band_energy[0];
  return total;
}

}  // namespace

TEST_SUITE_BEGIN("propagation");

TEST_CASE("zero scattering reflects exactly into the mirror direction") {
  // A big floor panel; every bounce of every path must satisfy the mirror
  // law when scattering is zero.
  TriangleMesh floor_mesh;
  floor_mesh.vertices = {{-50, -50, 0}, {50, -50, 0}, {50, 50, 0},
                         {-50, 50, 0},
                         // catch plane so reflected rays produce a vertex
                         {-500, -500, 60}, {500, -500, 60}, {500, 500, 60},
                         {-500, 500, 60}};
  floor_mesh.triangles = {{0, 1, 2}, {0, 2, 3}, {4, 6, 5}, {4, 7, 6}};
  floor_mesh.categories = {"", "", "", ""};
  Scene scene = BuildSceneWithMaterial(floor_mesh, FlatMaterial(0.2, 0.0));

  SimulationParams params = BareParams();
  params.num_source_rays = 64;
  params.max_source_depth = 2;
  const auto paths =
      TraceSourcePaths(scene, Vec3(0, 0, 2), params);
  int checked = 0;
  for (const auto& path : paths) {
    if (path.size() < 2) continue;
    if (std::abs(path[0].position.z()) > 1e-9) continue;
    const Vec3 in = path[0].incoming;
    const Vec3 n = path[0].normal;
    const Vec3 mirror = in - 2.0 * in.dot(n) * n;
    const Vec3 out = (path[1].position - path[0].position).normalized();
    CHECK((mirror - out).norm() < 1e-9);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("zero transmission keeps every path inside a closed box") {
  Scene scene = BoxScene({4, 3, 2.5}, 0.2, 0.3);
  SimulationParams params = BareParams();
  params.num_source_rays = 512;
  params.max_source_depth = 16;
  const auto paths = TraceSourcePaths(scene, Vec3(1, 1, 1), params);
  const Vec3 lo(-1e-6, -1e-6, -1e-6), hi(4.0 + 1e-6, 3.0 + 1e-6, 2.5 + 1e-6);
  for (const auto& path : paths) {
    for (const auto& v : path) {
      CHECK(!v.transmission);
      CHECK((v.position.array() >= lo.array()).all());
      CHECK((v.position.array() <= hi.array()).all());
    }
  }
}

TEST_CASE("full scattering scatters on the cosine hemisphere at normal "
          "incidence (chi-square over 100 bins)") {
  // Tiny floor far below the source: incidence is within a few degrees of
  // normal, where the engine's lobe must reduce to the cosine hemisphere.
  TriangleMesh mesh;
  mesh.vertices = {{-0.03, -0.03, 0}, {0.03, -0.03, 0}, {0.03, 0.03, 0},
                   {-0.03, 0.03, 0},
                   // A huge catch plane above records outgoing directions.
                   {-3000, -3000, 3}, {3000, -3000, 3}, {3000, 3000, 3},
                   {-3000, 3000, 3}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}, {4, 6, 5}, {4, 7, 6}};
  mesh.categories = {"", "", "", ""};
  Scene scene = BuildSceneWithMaterial(mesh, FlatMaterial(0.0, 1.0));

  SimulationParams params = BareParams();
  params.num_source_rays = 1 << 22;
  params.max_source_depth = 2;
  params.rng_seed = 12;
  const auto paths = TraceSourcePaths(scene, Vec3(0, 0, 1), params);

  std::vector<int> counts(100, 0);
  int total = 0;
  for (const auto& path : paths) {
    if (path.size() < 2) continue;
    if (std::abs(path[0].position.z()) > 1e-9) continue;  // must hit floor
    const Vec3 out = (path[1].position - path[0].position).normalized();
    if (out.z() <= 0.0) continue;
    // Equal-probability cells under the cosine-weighted density:
    // cos^2(theta) deciles x 10 azimuth sectors.
    const double u = out.z() * out.z();
    const double phi = std::atan2(out.y(), out.x()) + kPi;
    int iu = std::min(9, static_cast<int>(u * 10.0));
    int ip = std::min(9, static_cast<int>(phi / (2.0 * kPi) * 10.0));
    ++counts[iu * 10 + ip];
    ++total;
  }
  REQUIRE(total > 800);
  const double expected = static_cast<double>(total) / 100.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 95th percentile of chi-square with 99 degrees of freedom.
  CHECK(chi2 < 123.22);
}

TEST_CASE("empty-space listener tracing reduces to the direct connection") {
  // A remote panel far from both endpoints: effectively free space.
  TriangleMesh mesh;
  mesh.vertices = {{100, 100, 100}, {101, 100, 100}, {100, 101, 100}};
  mesh.triangles = {{0, 1, 2}};
  mesh.categories = {""};
  Scene scene = BuildSceneWithMaterial(mesh, FlatMaterial(0.2, 1.0));

  SimulationParams params = BareParams();
  params.num_listener_rays = 256;
  params.max_listener_depth = 2;
  const Vec3 source(0, 0, 0);
  const ListenerPose listener{Vec3(2, 0, 0), 0.0};
  const auto contributions = TraceListenerPaths(
      scene, listener, {}, source, params);
  REQUIRE(contributions.size() == 1);
  CHECK(contributions[0].bounce_count == 0);
  CHECK(contributions[0].band_energy[0] ==
        doctest::Approx(1.0 / (4.0 * kPi * 4.0)).epsilon(1e-9));
  CHECK(contributions[0].delay_s == doctest::Approx(2.0 / 343.0));

  // Occluded direct connection contributes zero (no 0-bounce entry).
  TriangleMesh wall;
  wall.vertices = {{1, -5, -5}, {1, 5, -5}, {1, 5, 5}, {1, -5, 5}};
  wall.triangles = {{0, 1, 2}, {0, 2, 3}};
  wall.categories = {"", ""};
  Scene blocked = BuildSceneWithMaterial(wall, FlatMaterial(1.0, 1.0));
  const auto blocked_contributions = TraceListenerPaths(
      blocked, listener, {}, source, params);
  for (const auto& c : blocked_contributions) CHECK(c.bounce_count != 0);
}

TEST_CASE("one-bounce connection estimate matches panel quadrature") {
  // Single diffuse panel: the source-point connection strategy is the only
  // estimator, and the true reflected energy is a smooth area integral.
  TriangleMesh mesh;
  mesh.vertices = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.categories = {"", ""};
  const double absorption = 0.4;
  Scene scene = BuildSceneWithMaterial(mesh, FlatMaterial(absorption, 1.0));

  const Vec3 source(0.3, -0.2, 0.8);
  const Vec3 listener(-0.4, 0.1, 0.6);

  SimulationParams params = BareParams();
  params.direct_enabled = false;
  params.num_source_rays = 1024;
  params.max_source_depth = 1;
  params.num_listener_rays = 1 << 17;
  params.max_listener_depth = 1;
  params.max_ir_seconds = 0.2;
  params.rng_seed = 5;
  EnergyHistogram hist =
      Simulate(scene, source, ListenerPose{listener, 0.0}, params);
  const double estimate = TotalIndirect(hist);

  // Midpoint quadrature of the one-bounce transport integral.
  const double reflectance = 1.0 - absorption;
  const int n = 400;
  double integral = 0.0;
  const double cell = 2.0 / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec3 p(-1.0 + (i + 0.5) * cell, -1.0 + (j + 0.5) * cell, 0.0);
      const Vec3 to_p = p - source;
      const double r_s = to_p.norm();
      const Vec3 in = to_p / r_s;
      const double cos_s = std::abs(in.z());
      const Vec3 n_up(0, 0, 1);
      const Vec3 mirror = in - 2.0 * in.dot(n_up) * n_up;
      const Vec3 to_l = listener - p;
      const double r_l = to_l.norm();
      const Vec3 out = to_l / r_l;
      integral += 1.0 / (4.0 * kPi) * cos_s / (r_s * r_s) * reflectance *
                  Lobe(1.0, mirror, out) / (r_l * r_l) * cell * cell;
    }
  }
  CHECK(estimate == doctest::Approx(integral).epsilon(0.03));
}

TEST_CASE("two-bounce paths match double quadrature (connections + pool)") {
  // Floor plus side wall, both fully scattering. Two-bounce families
  // exercise the source-vertex pool, the split strategies, and the balance
  // weighting between them.
  TriangleMesh mesh;
  mesh.vertices = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0},
                   {-1, -1, 0}, {-1, 1, 0}, {-1, 1, 2}, {-1, -1, 2}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}, {4, 5, 6}, {4, 6, 7}};
  mesh.categories = {"", "", "", ""};
  const double absorption = 0.3;
  Scene scene = BuildSceneWithMaterial(mesh, FlatMaterial(absorption, 1.0));

  const Vec3 source(0.45, 0.1, 0.9);
  const Vec3 listener(0.2, -0.3, 0.7);

  SimulationParams params = BareParams();
  params.direct_enabled = false;
  params.num_source_rays = 1 << 16;
  params.max_source_depth = 2;
  params.num_listener_rays = 1 << 16;
  params.max_listener_depth = 2;
  params.max_ir_seconds = 0.2;
  params.rng_seed = 9;
  EnergyHistogram hist =
      Simulate(scene, source, ListenerPose{listener, 0.0}, params);
  const double estimate = TotalIndirect(hist);

  // Quadrature over both panels: one-bounce off each plus both two-bounce
  // orderings. Panels: A = floor (z=0), B = wall (x=-1).
  const double reflectance = 1.0 - absorption;
  const int n = 72;
  const double cell_a = 2.0 / n, cell_b = 2.0 / n;
  auto point_a = [&](int i, int j) {
    return Vec3(-1.0 + (i + 0.5) * cell_a, -1.0 + (j + 0.5) * cell_a, 0.0);
  };
  auto point_b = [&](int i, int j) {
    return Vec3(-1.0, -1.0 + (i + 0.5) * cell_b, (j + 0.5) * cell_b);
  };
  const Vec3 normal_a(0, 0, 1), normal_b(1, 0, 0);

  auto lobe_turn = [&](const Vec3& in, const Vec3& n_surf, const Vec3& out) {
    const Vec3 oriented = in.dot(n_surf) < 0 ? n_surf : -n_surf;
    const Vec3 mirror = in - 2.0 * in.dot(oriented) * oriented;
    return Lobe(1.0, mirror, out);
  };

  auto one_bounce = [&](auto point, const Vec3& n_surf, double area_cell) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Vec3 p = point(i, j);
        const Vec3 d_in = (p - source).normalized();
        const double r_s = (p - source).norm();
        const double r_l = (listener - p).norm();
        sum += 1.0 / (4.0 * kPi) * std::abs(d_in.dot(n_surf)) / (r_s * r_s) *
               reflectance *
               lobe_turn(d_in, n_surf, (listener - p).normalized()) /
               (r_l * r_l) * area_cell;
      }
    }
    return sum;
  };

  auto two_bounce = [&](auto first, const Vec3& n1, double cell1, auto second,
                        const Vec3& n2, double cell2) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Vec3 p1 = first(i, j);
        const Vec3 in1 = (p1 - source).normalized();
        const double r_s = (p1 - source).norm();
        const double f1 = std::abs(in1.dot(n1)) / (r_s * r_s) * reflectance;
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            const Vec3 p2 = second(k, l);
            const double r12 = (p2 - p1).norm();
            if (r12 < 1e-9) continue;  // coplanar self-pair, exactly zero
            const Vec3 d12 = (p2 - p1) / r12;
            const Vec3 out2 = (listener - p2).normalized();
            const double r_l = (listener - p2).norm();
            sum += 1.0 / (4.0 * kPi) * f1 * lobe_turn(in1, n1, d12) *
                   std::abs(d12.dot(n2)) / (r12 * r12) * reflectance *
                   lobe_turn(d12, n2, out2) / (r_l * r_l) * cell1 * cell2;
          }
        }
      }
    }
    return sum;
  };

  const double q_one = one_bounce(point_a, normal_a, cell_a * cell_a) +
                       one_bounce(point_b, normal_b, cell_b * cell_b);
  const double q_two =
      two_bounce(point_a, normal_a, cell_a * cell_a, point_b, normal_b,
                 cell_b * cell_b) +
      two_bounce(point_b, normal_b, cell_b * cell_b, point_a, normal_a,
                 cell_a * cell_a) +
      two_bounce(point_a, normal_a, cell_a * cell_a, point_a, normal_a,
                 cell_a * cell_a) +
      two_bounce(point_b, normal_b, cell_b * cell_b, point_b, normal_b,
                 cell_b * cell_b);
  const double truth = q_one + q_two;
  CHECK(estimate == doctest::Approx(truth).epsilon(0.06));
}

TEST_CASE("one-bounce shoebox energy matches the image-source sum within 2%") {
  const Vec3 dims(4, 3, 2.5);
  const Vec3 source(1.2, 1.1, 1.3), receiver(2.6, 1.9, 1.2);
  Scene scene = BoxScene(dims, 0.2, 0.0);
  SimulationParams params = BareParams();
  params.num_source_rays = 1000000;
  params.max_source_depth = 1;
  params.num_listener_rays = 256;
  params.max_listener_depth = 1;
  params.max_ir_seconds = 0.1;
  params.rng_seed = 3;
  EnergyHistogram hist =
      Simulate(scene, source, ListenerPose{receiver, 0.0}, params);
  double estimate = 0.0;
  for (const auto& er : hist.early_reflections)
    if (er.bounce_count == 1) estimate += er.band_energy[0];
  Shoebox box = Shoebox::Uniform(dims, 0.2, source, receiver);
  const double truth = OrderEnergy(ImageSourceArrivals(box, 1), 1);
  CHECK(estimate == doctest::Approx(truth).epsilon(0.02));
}

TEST_CASE("path energy follows the inverse square law and bounce losses") {
  Scene scene = BoxScene({10, 10, 10}, 0.5, 0.0);
  SimulationParams params = BareParams();

  // Direct path: intensity proportional to 1/r^2.
  const auto near =
      PathEnergy(scene, Vec3(1, 1, 1), {}, Vec3(2, 1, 1), params);
  const auto far =
      PathEnergy(scene, Vec3(1, 1, 1), {}, Vec3(3, 1, 1), params);
  CHECK(near.band_energy[0] ==
        doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
  const double drop_db =
      10.0 * std::log10(far.band_energy[0] / near.band_energy[0]);
  CHECK(drop_db == doctest::Approx(-6.0206).epsilon(1e-3));
  CHECK(near.delay_s == doctest::Approx(1.0 / 343.0));

  // One bounce on a half-absorbing wall halves the energy relative to a
  // lossless bounce of the same geometry.
  PathVertex bounce;
  bounce.position = Vec3(5, 5, 0);
  bounce.normal = Vec3(0, 0, 1);
  bounce.material = 0;
  const auto lossy =
      PathEnergy(scene, Vec3(4, 5, 1), {bounce}, Vec3(6, 5, 1), params);
  Scene lossless = BoxScene({10, 10, 10}, 0.0, 0.0);
  const auto free =
      PathEnergy(lossless, Vec3(4, 5, 1), {bounce}, Vec3(6, 5, 1), params);
  CHECK(lossy.band_energy[0] ==
        doctest::Approx(0.5 * free.band_energy[0]).epsilon(1e-12));
}

TEST_CASE("air damping applies ten to the minus d L over ten") {
  Scene scene = BoxScene({100, 100, 100}, 0.0, 0.0);
  SimulationParams with_air = BareParams();
  with_air.air_absorption_enabled = true;
  with_air.bands = FrequencyBands::Octaves(8000.0, 1);
  SimulationParams vacuum = with_air;
  vacuum.air_absorption_enabled = false;

  const Vec3 src(1, 1, 1), dst(11, 1, 1);  // 10 m path
  const auto damped = PathEnergy(scene, src, {}, dst, with_air);
  const auto clean = PathEnergy(scene, src, {}, dst, vacuum);
  const double d = AirAttenuation(with_air.air, 8000.0);
  CHECK(damped.band_energy[0] / clean.band_energy[0] ==
        doctest::Approx(std::pow(10.0, -10.0 * d / 10.0)).epsilon(1e-9));
}

TEST_CASE("histogram accumulation tracks energy and directions") {
  // Single arrival from +z at order 1.
  EnergyHistogram hist(1.0 / 44100, 0.1, 2, 1);
  std::vector<double> e = {0.3, 0.5};
  hist.Accumulate(0.01, e, Vec3(0, 0, 1));
  const size_t bin = static_cast<size_t>(0.01 * 44100);
  CHECK(hist.Energy(bin, 0) == doctest::Approx(0.3));
  CHECK(hist.Energy(bin, 1) == doctest::Approx(0.5));
  auto sh = hist.BinSh(bin);
  CHECK(sh[0] == doctest::Approx(0.8));   // order-0 equals bin energy
  CHECK(sh[1] == doctest::Approx(0.0));   // y
  CHECK(sh[2] == doctest::Approx(0.8));   // z
  CHECK(sh[3] == doctest::Approx(0.0));   // x

  // Two equal arrivals from +x and -x cancel the x dipole.
  EnergyHistogram sym(1.0 / 44100, 0.1, 1, 1);
  std::vector<double> one = {1.0};
  sym.Accumulate(0.01, one, Vec3(1, 0, 0));
  sym.Accumulate(0.01, one, Vec3(-1, 0, 0));
  CHECK(sym.BinSh(bin)[3] == doctest::Approx(0.0));
  CHECK(sym.BinSh(bin)[0] == doctest::Approx(2.0));

  // Random arrivals match the brute-force weighted sum.
  EnergyHistogram rnd(1.0 / 44100, 0.1, 1, 2);
  Pcg32 rng(7, 1);
  std::array<double, 9> brute{};
  for (int i = 0; i < 200; ++i) {
    const Vec3 dir = rng.NextUnitVector();
    const double energy = rng.NextDouble();
    std::vector<double> be = {energy};
    rnd.Accumulate(0.01, be, dir);
    double basis[9];
    EvalRealSh(2, dir, basis);
    for (int k = 0; k < 9; ++k) brute[k] += energy * basis[k];
  }
  auto got = rnd.BinSh(bin);
  for (int k = 0; k < 9; ++k)
    CHECK(got[k] == doctest::Approx(brute[k]).epsilon(1e-9));

  // Beyond-length deposits are dropped and counted.
  EnergyHistogram drop(1.0 / 44100, 0.1, 1, 0);
  std::vector<double> late = {1.0};
  drop.Accumulate(0.2, late, Vec3(0, 0, 1));
  CHECK(drop.dropped_deposits == 1);
  CHECK(drop.Total() == doctest::Approx(0.0));
}

TEST_CASE("direct solve: delay, occlusion states") {
  Scene open_box = BoxScene({10, 10, 10}, 0.2, 0.0);
  SimulationParams params = BareParams();
  const auto direct = ComputeDirect(open_box, Vec3(1, 1, 1),
                                    Vec3(1.0 + 3.43, 1, 1), params);
  REQUIRE(direct.has_value());
  CHECK(direct->delay_s == doctest::Approx(0.01));
  CHECK(direct->state == OcclusionState::kVisible);

  // Occluder with diffraction and transmission off: blocked, zero energy.
  TriangleMesh wall;
  wall.vertices = {{5, -20, -20}, {5, 20, -20}, {5, 20, 20}, {5, -20, 20}};
  wall.triangles = {{0, 1, 2}, {0, 2, 3}};
  wall.categories = {"", ""};
  Scene blocked = BuildSceneWithMaterial(wall, FlatMaterial(0.2, 0.0));
  const auto hard = ComputeDirect(blocked, Vec3(0, 0, 0), Vec3(10, 0, 0),
                                  params);
  REQUIRE(hard.has_value());
  CHECK(hard->state == OcclusionState::kBlocked);
  for (double e : hard->band_energy) CHECK(e == 0.0);

  // With transmission enabled and a transmissive material, energy passes.
  Scene window = BuildSceneWithMaterial(wall, FlatMaterial(0.2, 0.0, 0.3));
  SimulationParams with_trans = BareParams();
  with_trans.transmission_enabled = true;
  const auto through = ComputeDirect(window, Vec3(0, 0, 0), Vec3(10, 0, 0),
                                     with_trans);
  REQUIRE(through.has_value());
  CHECK(through->state == OcclusionState::kTransmitted);
  CHECK(through->band_energy[0] > 0.0);
}

TEST_CASE("early reflection clusters merge by ordered plane sequences") {
  const std::array<double, 4> floor_plane = {0, 0, 1, 0};
  const std::array<double, 4> wall_plane = {1, 0, 0, 4};

  std::vector<PathContribution> contributions;
  Pcg32 rng(3, 9);
  for (int i = 0; i < 100; ++i) {
    PathContribution c;
    c.delay_s = 0.01 + 1e-5 * rng.NextDouble();
    c.band_energy[0] = 0.001;
    c.arrival_direction = Vec3(0, 0, 1);
    c.bounce_count = 1;
    c.planes = {floor_plane};
    contributions.push_back(c);
  }
  auto events = ClusterEarlyReflections(contributions, 1);
  REQUIRE(events.size() == 1);
  CHECK(events[0].band_energy[0] == doctest::Approx(0.1));
  CHECK(events[0].bounce_count == 1);

  // Order matters: floor-then-wall differs from wall-then-floor.
  PathContribution fw, wf;
  fw.delay_s = wf.delay_s = 0.02;
  fw.band_energy[0] = wf.band_energy[0] = 1.0;
  fw.arrival_direction = wf.arrival_direction = Vec3(1, 0, 0);
  fw.bounce_count = wf.bounce_count = 2;
  fw.planes = {floor_plane, wall_plane};
  wf.planes = {wall_plane, floor_plane};
  auto two = ClusterEarlyReflections({fw, wf}, 1);
  CHECK(two.size() == 2);
}

TEST_CASE("indirect energy is monotone non-increasing in absorption") {
  const Vec3 dims(4, 3, 2.5);
  SimulationParams params = BareParams();
  params.direct_enabled = false;
  params.num_source_rays = 4096;
  params.max_source_depth = 32;
  params.num_listener_rays = 1024;
  params.max_listener_depth = 2;
  params.max_ir_seconds = 0.6;
  params.rng_seed = 21;

  double previous = std::numeric_limits<double>::infinity();
  for (double alpha : {0.1, 0.2, 0.4, 1.0}) {
    Scene scene = BoxScene(dims, alpha, 0.3);
    EnergyHistogram hist = Simulate(scene, Vec3(1, 1, 1),
                                    ListenerPose{Vec3(3, 2, 1.5), 0.0},
                                    params);
    const double total = TotalIndirect(hist);
    CHECK(total <= previous * (1.0 + 1e-12));
    previous = total;
    if (alpha == 1.0) CHECK(total == 0.0);  // full absorption kills all
  }
}

TEST_CASE("disabled stages produce an empty histogram") {
  Scene scene = BoxScene({4, 3, 2.5}, 0.2, 0.0);
  SimulationParams params = BareParams();
  params.direct_enabled = false;
  params.indirect_enabled = false;
  EnergyHistogram hist = Simulate(scene, Vec3(1, 1, 1),
                                  ListenerPose{Vec3(3, 2, 1.5), 0.0}, params);
  CHECK(hist.Total() == 0.0);
  CHECK(!hist.direct.has_value());
  CHECK(hist.early_reflections.empty());

  // Full absorption: only the direct event remains.
  Scene dead = BoxScene({4, 3, 2.5}, 1.0, 0.0);
  SimulationParams full = BareParams();
  full.num_source_rays = 4096;
  full.max_source_depth = 8;
  full.num_listener_rays = 512;
  full.max_listener_depth = 2;
  EnergyHistogram direct_only = Simulate(
      dead, Vec3(1, 1, 1), ListenerPose{Vec3(3, 2, 1.5), 0.0}, full);
  CHECK(direct_only.direct.has_value());
  CHECK(direct_only.Total() == 0.0);
  CHECK(direct_only.early_reflections.empty());
}

TEST_CASE("simulate is bitwise deterministic across admissible thread counts") {
  Scene scene = BoxScene({4, 3, 2.5}, 0.25, 0.5);
  SimulationParams params = BareParams();
  params.num_source_rays = 4096;
  params.max_source_depth = 16;
  params.num_listener_rays = 2048;
  params.max_listener_depth = 4;
  params.max_ir_seconds = 0.4;
  params.rng_seed = 33;

  auto run = [&](int threads) {
    SimulationParams p = params;
    p.thread_count = threads;
    return Simulate(scene, Vec3(1, 1, 1.2),
                    ListenerPose{Vec3(3, 2, 1.5), 0.0}, p);
  };
  const EnergyHistogram a = run(1);
  const EnergyHistogram b = run(4);
  REQUIRE(a.num_bins() == b.num_bins());
  for (size_t bin = 0; bin < a.num_bins(); ++bin)
    for (int m = 0; m < a.num_bands(); ++m)
      CHECK(a.Energy(bin, m) == b.Energy(bin, m));
  REQUIRE(a.early_reflections.size() == b.early_reflections.size());
  for (size_t i = 0; i < a.early_reflections.size(); ++i) {
    CHECK(a.early_reflections[i].delay_s == b.early_reflections[i].delay_s);
    CHECK(a.early_reflections[i].band_energy[0] ==
          b.early_reflections[i].band_energy[0]);
  }
}

TEST_CASE("estimator families agree across the connectability threshold") {
  // Just below scattering 0.1 the gather family owns everything; just above
  // it the connection strategies take over shallow paths. The physical
  // change is tiny, so the totals must stay close.
  const Vec3 dims(4, 3, 2.5);
  SimulationParams params = BareParams();
  params.direct_enabled = false;
  params.num_source_rays = 65536;
  params.max_source_depth = 24;
  params.num_listener_rays = 32768;
  params.max_listener_depth = 4;
  params.max_ir_seconds = 0.6;
  params.rng_seed = 8;

  Scene below = BoxScene(dims, 0.25, 0.095);
  Scene above = BoxScene(dims, 0.25, 0.105);
  const double e_below = TotalIndirect(Simulate(
      below, Vec3(1, 1, 1.2), ListenerPose{Vec3(3, 2, 1.5), 0.0}, params));
  const double e_above = TotalIndirect(Simulate(
      above, Vec3(1, 1, 1.2), ListenerPose{Vec3(3, 2, 1.5), 0.0}, params));
  CHECK(e_above == doctest::Approx(e_below).epsilon(0.10));
}

TEST_CASE("path cache: cold cache reproduces the cache-disabled result") {
  Scene scene = BoxScene({4, 3, 2.5}, 0.2, 0.0);
  SimulationParams params = BareParams();
  params.num_source_rays = 8192;
  params.max_source_depth = 8;
  params.num_listener_rays = 512;
  params.max_listener_depth = 2;
  params.path_cache_enabled = true;
  PathCache cache;  // empty

  EnergyHistogram with_cache = Simulate(
      scene, Vec3(1, 1, 1), ListenerPose{Vec3(3, 2, 1.5), 0.0}, params,
      &cache);
  SimulationParams no_cache = params;
  no_cache.path_cache_enabled = false;
  EnergyHistogram plain = Simulate(
      scene, Vec3(1, 1, 1), ListenerPose{Vec3(3, 2, 1.5), 0.0}, no_cache,
      nullptr);
  REQUIRE(with_cache.early_reflections.size() ==
          plain.early_reflections.size());
  for (size_t i = 0; i < with_cache.early_reflections.size(); ++i)
    CHECK(with_cache.early_reflections[i].band_energy[0] ==
          plain.early_reflections[i].band_energy[0]);
  CHECK(!cache.Empty());  // the run populated it for the next frame
}

TEST_CASE("presets scale the ray budget down eightfold") {
  const SimulationParams hq = Preset(RenderMode::kHighQuality);
  const SimulationParams hs = Preset(RenderMode::kHighSpeed);
  CHECK(hs.num_source_rays * 8 == hq.num_source_rays);
  CHECK(hs.num_listener_rays * 8 == hq.num_listener_rays);
  CHECK(hs.max_source_depth == hq.max_source_depth);
}

TEST_SUITE_END();
