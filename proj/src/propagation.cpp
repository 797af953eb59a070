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
//
// Bidirectional energy tracer.
//
// Indirect sound is estimated by two families with disjoint ownership over
// path configurations:
//
//  * Gathering: source-ray packets crossing a detection sphere around the
//    listener deposit flux (energy / (pi rho^2)). Deposit delays use the
//    exact hypotenuse from the unfolded arc length to the listener, so
//    specular chains reproduce the image-source delay to floating point
//    accuracy. Gathering owns every path no connection strategy can sample:
//    chains through specular (delta-lobe) or transmission vertices without a
//    connectable split, diffracted chains, and chains beyond the connection
//    depth limits.
//
//  * Connections: listener-ray chains connect each vertex to the source
//    point and to one uniformly drawn stored source-path vertex. A path
//    reachable by several strategies (the source-point bridge or any
//    source/listener split) is weighted by the balance heuristic over the
//    strategy sampling rates; the combined deposit then reduces to
//    integrand / (sum of strategy rates). Delta kernels at specular and
//    transmission vertices appear in the integrand and in every eligible
//    strategy rate and cancel, so they are carried symbolically as 1.
//
// Direct sound (zero reflections, including purely transmitted or
// diffracted sight lines) is solved deterministically in ComputeDirect and
// excluded from both families.
//
// Determinism: rays are processed in fixed-size batches; batch b writes
// only into accumulation slot (b mod 8), threads own batches with
// b mod thread_count == thread id, and thread counts are restricted to
// divisors of 8. Slot contents and their final merge order are therefore
// identical for every admissible thread count.

#include "echotrace/propagation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include "echotrace/rng.h"

namespace echotrace {

namespace {

constexpr int kNumSlots = 8;
constexpr int kBatchSize = 512;
constexpr double kThroughputCutoff = 1e-4;
constexpr double kGlossyMin = 0.1;  // connection-capable scattering
constexpr int kPoolMaxDepth = 8;
constexpr double kEdgeCaptureRadius = 0.1;  // m
constexpr double kEdgeCaptureProb = 0.5;
constexpr double kRayEpsilon = 1e-6;
constexpr int kMaxErBounces = 2;

thread_local double g_last_simulate_seconds = 0.0;

struct MaterialBands {
  std::array<double, kMaxBands> reflect{};     // 1 - absorption - transmission
  std::array<double, kMaxBands> transmit{};
  std::array<double, kMaxBands> trans_loss{};  // through-material damping
  std::array<double, kMaxBands> diff_share{};  // redirected share near edges
  double phong_exponent = -1.0;                // < 0 means ideal specular
  double p_transmit = 0.0;                     // transmission branch prob
  bool glossy = false;                         // scattering >= kGlossyMin
};

enum class VertexKind : uint8_t { kReflection, kTransmission, kDiffraction };

struct WalkVertex {
  Vec3 position;
  Vec3 normal;  // oriented against the incoming ray
  int material = -1;
  VertexKind kind = VertexKind::kReflection;
  bool glossy_refl = false;
};

struct TraceContext {
  const Scene* scene = nullptr;
  const SimulationParams* params = nullptr;
  std::vector<MaterialBands> mats;
  std::array<double, kMaxBands> air_db_per_m{};
  int num_bands = 0;
  double speed = kDefaultSpeedOfSound;
  double max_path_len = 0.0;
  double emitted = 1.0;
  double rho = 0.25;
  double inv_rho_area = 0.0;
  Vec3 source{0, 0, 0};
  Vec3 listener{0, 0, 0};
  bool diffraction = false;
  bool transmission = false;
  int listener_depth_max = 8;
};

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double PhongExponent(double scattering) {
  if (scattering <= 0.0) return -1.0;
  const double s = std::min(1.0, scattering);
  return std::max(1.0, 2.0 / (s * s) - 2.0);
}

// Barrier insertion loss versus signed Fresnel number (positive in shadow).
double BarrierDb(double signed_fresnel) {
  if (signed_fresnel <= -0.1) return 0.0;
  return std::max(0.0, 10.0 * std::log10(3.0 + 20.0 * signed_fresnel));
}

TraceContext MakeContext(const Scene& scene, const Vec3& source,
                         const Vec3& listener,
                         const SimulationParams& params) {
  TraceContext ctx;
  ctx.scene = &scene;
  ctx.params = &params;
  ctx.num_bands = params.bands.size();
  ctx.speed = scene.speed_of_sound;
  ctx.max_path_len = ctx.speed * params.max_ir_seconds + 1.0;
  ctx.emitted = params.EmittedEnergy();
  ctx.rho = params.receiver_radius_m;
  ctx.inv_rho_area = 1.0 / (kPi * ctx.rho * ctx.rho);
  ctx.source = source;
  ctx.listener = listener;
  ctx.diffraction = params.diffraction_enabled;
  ctx.transmission = params.transmission_enabled;
  ctx.listener_depth_max = params.max_listener_depth;

  if (params.air_absorption_enabled) {
    const auto att = BandAirAttenuation(params.air, params.bands);
    for (int m = 0; m < ctx.num_bands; ++m) ctx.air_db_per_m[m] = att[m];
  }

  ctx.mats.resize(scene.materials.materials.size());
  for (size_t i = 0; i < scene.materials.materials.size(); ++i) {
    const AcousticMaterial& mat = scene.materials.materials[i];
    MaterialBands& mb = ctx.mats[i];
    const auto absorb =
        BandCoefficients(mat, CoefficientKind::kAbsorption, params.bands);
    const auto scatter =
        BandCoefficients(mat, CoefficientKind::kScattering, params.bands);
    auto transmit =
        BandCoefficients(mat, CoefficientKind::kTransmission, params.bands);
    const auto damp =
        BandCoefficients(mat, CoefficientKind::kDamping, params.bands);
    if (!params.transmission_enabled)
      std::fill(transmit.begin(), transmit.end(), 0.0);
    for (int m = 0; m < ctx.num_bands; ++m) {
      mb.transmit[m] = transmit[m];
      mb.reflect[m] = std::max(0.0, 1.0 - absorb[m] - transmit[m]);
      mb.trans_loss[m] =
          std::pow(10.0, -damp[m] * params.transmission_thickness_m / 10.0);
      // Redirected share for near-edge hits: the barrier curve at a nominal
      // 5 cm detour (this engine's stand-in wedge kernel).
      const double fresnel = 2.0 * 0.05 * params.bands.Center(m) / ctx.speed;
      mb.diff_share[m] = std::pow(10.0, -BarrierDb(fresnel) / 10.0);
    }
    const double mean_scatter = MeanOf(scatter);
    mb.phong_exponent = PhongExponent(mean_scatter);
    mb.glossy = mean_scatter >= kGlossyMin;
    mb.p_transmit = std::clamp(MeanOf(transmit), 0.0, 0.9);
  }
  return ctx;
}

inline double AirLoss(const TraceContext& ctx, int band, double length_m) {
  const double db = ctx.air_db_per_m[band] * length_m;
  return db == 0.0 ? 1.0 : std::pow(10.0, -db / 10.0);
}

inline Vec3 MirrorDirection(const Vec3& incoming, const Vec3& normal) {
  return incoming - 2.0 * incoming.dot(normal) * normal;
}

// Energy Phong lobe (per steradian) around the mirror direction; integrates
// to one over the unclipped lobe so a reflection keeps exactly the
// material's reflected energy share. Delta kernels return 1 symbolically.
inline double LobeValue(double phong_exponent, const Vec3& mirror,
                        const Vec3& outgoing) {
  if (phong_exponent < 0.0) return 1.0;
  const double c = mirror.dot(outgoing);
  if (c <= 0.0) return 0.0;
  return (phong_exponent + 1.0) / (2.0 * kPi) * std::pow(c, phong_exponent);
}

bool SampleLobe(double phong_exponent, const Vec3& mirror, const Vec3& normal,
                Pcg32& rng, Vec3* out) {
  if (phong_exponent < 0.0) {
    *out = mirror;
    return mirror.dot(normal) > 0.0;
  }
  Vec3 t1 = std::abs(mirror.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  t1 = (t1 - t1.dot(mirror) * mirror).normalized();
  const Vec3 t2 = mirror.cross(t1);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double cos_theta =
        std::pow(rng.NextDouble(), 1.0 / (phong_exponent + 1.0));
    const double sin_theta =
        std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * kPi * rng.NextDouble();
    const Vec3 dir = cos_theta * mirror +
                     sin_theta * (std::cos(phi) * t1 + std::sin(phi) * t2);
    if (dir.dot(normal) > 1e-9) {
      *out = dir;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Assembled-path integrand and strategy rates.
// ---------------------------------------------------------------------------

constexpr int kMaxPathVerts = 80;

struct PathGeometry {
  int k = 0;
  double total_length = 0.0;
  double r_listener_sq = 1.0;
  std::array<double, kMaxPathVerts> area_fwd;  // cos into v_i from source side / r^2
  std::array<double, kMaxPathVerts> area_bwd;  // cos into v_i from listener side / r^2
  std::array<double, kMaxPathVerts> lobe;      // physical lobe at v_i (delta = 1)
  std::array<double, kMaxPathVerts> branch;    // walk branch probability at v_i
  bool valid = true;
  bool has_diffraction = false;
};

PathGeometry AssemblePathGeometry(const TraceContext& ctx, const Vec3& source,
                                  const WalkVertex* const* v, int k,
                                  const Vec3& listener) {
  PathGeometry g;
  g.k = k;
  if (k > kMaxPathVerts) {
    g.valid = false;
    return g;
  }
  std::array<Vec3, kMaxPathVerts + 1> seg_dir;
  std::array<double, kMaxPathVerts + 1> seg_len;
  Vec3 prev = source;
  for (int i = 0; i <= k; ++i) {
    const Vec3 target = i < k ? v[i]->position : listener;
    const Vec3 d = target - prev;
    const double len = std::max(d.norm(), 1e-9);
    seg_len[i] = len;
    seg_dir[i] = d / len;
    g.total_length += len;
    prev = target;
  }
  g.r_listener_sq = seg_len[k] * seg_len[k];

  for (int i = 0; i < k; ++i) {
    const double cos_in = std::abs(v[i]->normal.dot(seg_dir[i]));
    const double cos_out = std::abs(v[i]->normal.dot(seg_dir[i + 1]));
    g.area_fwd[i] = cos_in / (seg_len[i] * seg_len[i]);
    g.area_bwd[i] = cos_out / (seg_len[i + 1] * seg_len[i + 1]);
    const MaterialBands& mb = ctx.mats[v[i]->material];
    switch (v[i]->kind) {
      case VertexKind::kReflection: {
        if (mb.phong_exponent >= 0.0) {
          const Vec3 n = v[i]->normal.dot(seg_dir[i]) < 0.0 ? v[i]->normal
                                                            : -v[i]->normal;
          const Vec3 mirror = MirrorDirection(seg_dir[i], n);
          g.lobe[i] = LobeValue(mb.phong_exponent, mirror, seg_dir[i + 1]);
          if (g.lobe[i] <= 0.0) g.valid = false;
        } else {
          g.lobe[i] = 1.0;
        }
        g.branch[i] = ctx.transmission
                          ? std::max(1e-12, 1.0 - mb.p_transmit)
                          : 1.0;
        break;
      }
      case VertexKind::kTransmission:
        g.lobe[i] = 1.0;
        g.branch[i] = std::max(1e-12, mb.p_transmit);
        break;
      case VertexKind::kDiffraction:
        g.lobe[i] = 1.0;
        g.branch[i] = 1.0;
        g.has_diffraction = true;
        break;
    }
  }
  return g;
}

void PathIntegrand(const TraceContext& ctx, const PathGeometry& g,
                   const WalkVertex* const* v,
                   std::array<double, kMaxBands>& out) {
  double geom = 1.0 / (4.0 * kPi);
  for (int i = 0; i < g.k; ++i) geom *= g.area_fwd[i] * g.lobe[i];
  geom /= g.r_listener_sq;
  for (int m = 0; m < ctx.num_bands; ++m) {
    double material = 1.0;
    for (int i = 0; i < g.k; ++i) {
      const MaterialBands& mb = ctx.mats[v[i]->material];
      material *= v[i]->kind == VertexKind::kTransmission
                      ? mb.transmit[m] * mb.trans_loss[m]
                      : mb.reflect[m];
    }
    out[m] = ctx.emitted * geom * material * AirLoss(ctx, m, g.total_length);
  }
}

inline bool Connectable(const WalkVertex& v) {
  return v.kind == VertexKind::kReflection && v.glossy_refl;
}

// Sum of the balance-heuristic strategy rates able to sample this path.
// Strategy "a" (j = 0): full listener chain bridged to the source point.
// Strategy "b" (j in [1, k-1]): source prefix v[0..j-1] bridged from the
// vertex pool to the listener suffix v[j..k-1]. The common listener-ray
// count factor is dropped; the deposit divides by it separately.
double SumStrategyRates(const TraceContext& ctx, const PathGeometry& g,
                        const WalkVertex* const* v, int k, double n_source,
                        double pool_size) {
  if (!g.valid || g.has_diffraction) return 0.0;
  const double inv4pi = 1.0 / (4.0 * kPi);
  double total = 0.0;
  if (k <= ctx.listener_depth_max && Connectable(*v[0])) {
    double rate = inv4pi;
    for (int i = 0; i < k; ++i) rate *= g.area_bwd[i];
    for (int i = 1; i < k; ++i) rate *= g.lobe[i] * g.branch[i];
    total += rate;
  }
  if (pool_size > 0.0) {
    const int j_max = std::min(k - 1, kPoolMaxDepth);
    for (int j = 1; j <= j_max; ++j) {
      if (k - j > ctx.listener_depth_max) continue;
      if (!Connectable(*v[j - 1]) || !Connectable(*v[j])) continue;
      double rate = n_source * inv4pi * inv4pi / pool_size;
      for (int i = 0; i < j; ++i) rate *= g.area_fwd[i];
      for (int i = 0; i + 1 < j; ++i) rate *= g.lobe[i] * g.branch[i];
      for (int i = j; i < k; ++i) rate *= g.area_bwd[i];
      for (int i = j + 1; i < k; ++i) rate *= g.lobe[i] * g.branch[i];
      total += rate;
    }
  }
  return total;
}

// True when no connection strategy can sample the chain (the gather family
// then owns it). Must mirror SumStrategyRates' eligibility exactly.
bool GatherOwned(const TraceContext& ctx, const WalkVertex* const* v, int k,
                 bool pool_nonempty) {
  for (int i = 0; i < k; ++i)
    if (v[i]->kind == VertexKind::kDiffraction) return true;
  if (k <= ctx.listener_depth_max && Connectable(*v[0])) return false;
  if (pool_nonempty) {
    const int j_max = std::min(k - 1, kPoolMaxDepth);
    for (int j = 1; j <= j_max; ++j) {
      if (k - j > ctx.listener_depth_max) continue;
      if (Connectable(*v[j - 1]) && Connectable(*v[j])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Deposits and sinks.
// ---------------------------------------------------------------------------

using ClusterKeyItem = std::array<int64_t, 5>;

ClusterKeyItem PlaneKeyOf(const Vec3& normal, const Vec3& point,
                          VertexKind kind) {
  return {llround(normal.x() * 1e4), llround(normal.y() * 1e4),
          llround(normal.z() * 1e4), llround(normal.dot(point) * 1e4),
          kind == VertexKind::kTransmission ? 1 : 0};
}

struct Deposit {
  double delay_s = 0.0;
  std::array<double, kMaxBands> energy{};
  Vec3 direction;  // from the listener toward the arrival
  int refl_count = 0;
  bool force_histogram = false;
  std::vector<ClusterKeyItem> key;
  std::vector<std::array<double, 4>> refl_planes;
};

struct SlotSink {
  EnergyHistogram* histogram = nullptr;
  std::vector<Deposit>* early = nullptr;
  int num_bands = 0;

  void Add(Deposit&& d) const {
    if (!d.force_histogram && d.refl_count >= 1 &&
        d.refl_count <= kMaxErBounces) {
      early->push_back(std::move(d));
    } else {
      histogram->Accumulate(
          d.delay_s,
          std::span<const double>(d.energy.data(),
                                  static_cast<size_t>(num_bands)),
          d.direction);
    }
  }
};

// ---------------------------------------------------------------------------
// Emission lattice (jittered equal-solid-angle stratification).
// ---------------------------------------------------------------------------

struct EmissionLattice {
  int n1 = 1, n2 = 1;
  bool stratified = false;
};

EmissionLattice MakeLattice(int count, bool stratified) {
  EmissionLattice lat;
  lat.stratified = stratified && count > 4;
  if (!lat.stratified) return lat;
  int best = 1;
  for (int d = 1; static_cast<long long>(d) * d <= count; ++d)
    if (count % d == 0) best = d;
  lat.n1 = best;
  lat.n2 = count / best;
  return lat;
}

Vec3 EmitDirection(const EmissionLattice& lat, int ray_index, Pcg32& rng) {
  double u1, u2;
  if (lat.stratified) {
    const int a = ray_index % lat.n1;
    const int b = ray_index / lat.n1;
    u1 = (a + rng.NextDouble()) / lat.n1;
    u2 = (b + rng.NextDouble()) / lat.n2;
  } else {
    u1 = rng.NextDouble();
    u2 = rng.NextDouble();
  }
  const double z = 1.0 - 2.0 * u1;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * kPi * u2;
  return Vec3(s * std::cos(phi), s * std::sin(phi), z);
}

// ---------------------------------------------------------------------------
// Shared stochastic walk.
// ---------------------------------------------------------------------------

// SegmentFn(origin, direction, seg_len, throughput, path_len_at_start,
//           bounces_before_segment)
// VertexFn(vertex, arrival_throughput, path_length, depth) -> keep going?
template <typename SegmentFn, typename VertexFn>
void WalkRay(const TraceContext& ctx, Vec3 origin, Vec3 direction,
             int max_depth, Pcg32& rng, SegmentFn&& on_segment,
             VertexFn&& on_vertex) {
  const Scene& scene = *ctx.scene;
  std::array<double, kMaxBands> throughput;
  throughput.fill(1.0);
  double path_length = 0.0;

  for (int depth = 1; depth <= max_depth + 1; ++depth) {
    Ray ray{origin, direction};
    const double remaining = ctx.max_path_len - path_length;
    if (remaining <= 0.0) return;
    auto hit = scene.Intersect(ray, remaining);
    const double seg_len = hit ? hit->distance : remaining;
    on_segment(origin, direction, seg_len, throughput, path_length,
               depth - 1);
    if (!hit || depth > max_depth) return;

    const Vec3 point = origin + direction * hit->distance;
    path_length += hit->distance;

    const int material = scene.materials.triangle_material[hit->triangle];
    const MaterialBands& mb = ctx.mats[material];
    Vec3 normal = hit->normal;
    if (normal.dot(direction) > 0.0) normal = -normal;

    WalkVertex vertex;
    vertex.position = point;
    vertex.normal = normal;
    vertex.material = material;
    vertex.glossy_refl = mb.glossy;

    // Probabilistic edge capture: near a convex edge part of the reflected
    // energy is redirected around it on the Keller cone. The uncaptured
    // branch removes the redirected share from the reflection so the split
    // conserves energy in expectation.
    bool near_edge = false;
    const DiffractionEdge* edge = nullptr;
    if (ctx.diffraction && !scene.triangle_edges[hit->triangle].empty()) {
      for (int ei : scene.triangle_edges[hit->triangle]) {
        const DiffractionEdge& cand = scene.diffraction_edges[ei];
        const Vec3 ab = cand.end - cand.start;
        const double t = std::clamp(
            (point - cand.start).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        if ((point - (cand.start + t * ab)).norm() < kEdgeCaptureRadius) {
          near_edge = true;
          edge = &cand;
          break;
        }
      }
    }
    bool diffract_now = false;
    if (near_edge) {
      if (rng.NextDouble() < kEdgeCaptureProb) {
        diffract_now = true;
      } else {
        for (int m = 0; m < ctx.num_bands; ++m)
          throughput[m] *= 1.0 / (1.0 - kEdgeCaptureProb);
      }
    }

    if (diffract_now) {
      vertex.kind = VertexKind::kDiffraction;
      const Vec3 axis = (edge->end - edge->start).normalized();
      const Vec3 par = direction.dot(axis) * axis;
      Vec3 perp = direction - par;
      const double perp_len = perp.norm();
      if (perp_len > 1e-9) {
        const Vec3 a = perp / perp_len;
        const Vec3 b = axis.cross(a);
        for (int attempt = 0; attempt < 8; ++attempt) {
          const double psi = 2.0 * kPi * rng.NextDouble();
          const Vec3 cand =
              par + perp_len * (std::cos(psi) * a + std::sin(psi) * b);
          const bool outside_a = cand.dot(edge->normal_a) > 1e-9;
          const bool outside_b =
              edge->face_b < 0 || cand.dot(edge->normal_b) > 1e-9;
          if (outside_a || outside_b) {
            direction = cand.normalized();
            break;
          }
        }
      }
      for (int m = 0; m < ctx.num_bands; ++m)
        throughput[m] *=
            mb.reflect[m] * mb.diff_share[m] / kEdgeCaptureProb;
      if (!on_vertex(vertex, throughput, path_length, depth)) return;
      origin = point + direction * kRayEpsilon;
      continue;
    }

    const bool transmit = ctx.transmission && mb.p_transmit > 0.0 &&
                          rng.NextDouble() < mb.p_transmit;
    if (transmit) {
      vertex.kind = VertexKind::kTransmission;
      std::array<double, kMaxBands> arrival = throughput;
      for (int m = 0; m < ctx.num_bands; ++m)
        throughput[m] *= mb.transmit[m] * mb.trans_loss[m] / mb.p_transmit;
      if (!on_vertex(vertex, arrival, path_length, depth)) return;
      origin = point + direction * kRayEpsilon;
      continue;
    }

    vertex.kind = VertexKind::kReflection;
    const double p_reflect = ctx.transmission ? 1.0 - mb.p_transmit : 1.0;
    std::array<double, kMaxBands> arrival = throughput;
    for (int m = 0; m < ctx.num_bands; ++m) {
      double r = mb.reflect[m];
      if (near_edge) r *= 1.0 - mb.diff_share[m];
      throughput[m] *= r / p_reflect;
    }
    if (!on_vertex(vertex, arrival, path_length, depth)) return;

    double max_throughput = 0.0;
    for (int m = 0; m < ctx.num_bands; ++m)
      max_throughput = std::max(max_throughput, throughput[m]);
    if (max_throughput < kThroughputCutoff) return;

    const Vec3 mirror = MirrorDirection(direction, normal);
    Vec3 next;
    if (!SampleLobe(mb.phong_exponent, mirror, normal, rng, &next)) return;
    direction = next;
    origin = point + direction * kRayEpsilon;
  }
}

// ---------------------------------------------------------------------------
// Source stage.
// ---------------------------------------------------------------------------

struct ArenaVertex {
  WalkVertex vertex;
  int parent = -1;
  int depth = 0;
};

struct PoolView {
  const ArenaVertex* arena = nullptr;
  const int* entries = nullptr;       // arena indices of connectable verts
  const float* throughput = nullptr;  // [entry][band] arrival throughput
  const float* lengths = nullptr;     // [entry] path length
  int size = 0;
};

void EmitConnectionDeposit(const TraceContext& ctx, const SlotSink& sink,
                           const WalkVertex* const* path, int k,
                           double n_source, double pool_size,
                           double inv_rays) {
  PathGeometry g = AssemblePathGeometry(ctx, ctx.source, path, k, ctx.listener);
  if (!g.valid) return;
  const double rates = SumStrategyRates(ctx, g, path, k, n_source, pool_size);
  if (rates <= 0.0) return;
  std::array<double, kMaxBands> f{};
  PathIntegrand(ctx, g, path, f);

  Deposit d;
  d.delay_s = g.total_length / ctx.speed;
  int refl = 0;
  for (int i = 0; i < k; ++i)
    if (path[i]->kind == VertexKind::kReflection) ++refl;
  d.refl_count = refl;
  for (int m = 0; m < ctx.num_bands; ++m)
    d.energy[m] = f[m] * inv_rays / rates;
  const Vec3 last = path[k - 1]->position;
  d.direction = (last - ctx.listener).normalized();
  if (refl >= 1 && refl <= kMaxErBounces) {
    for (int i = 0; i < k; ++i) {
      if (path[i]->kind == VertexKind::kDiffraction) continue;
      d.key.push_back(
          PlaneKeyOf(path[i]->normal, path[i]->position, path[i]->kind));
      if (path[i]->kind == VertexKind::kReflection) {
        const Vec3& n = path[i]->normal;
        d.refl_planes.push_back(
            {n.x(), n.y(), n.z(), n.dot(path[i]->position)});
      }
    }
  }
  sink.Add(std::move(d));
}

struct SourceBatchOutput {
  std::vector<ArenaVertex>* arena = nullptr;
  std::vector<int>* pool = nullptr;
  std::vector<float>* pool_throughput = nullptr;  // num_bands per entry
  std::vector<float>* pool_lengths = nullptr;
};

void RunSourceBatch(const TraceContext& ctx, int batch,
                    const EmissionLattice& lattice, const SlotSink& sink,
                    const SourceBatchOutput& out, bool build_pool) {
  const SimulationParams& params = *ctx.params;
  const int ray_begin = batch * kBatchSize;
  const int ray_end = std::min(params.num_source_rays, ray_begin + kBatchSize);
  const double packet = 1.0 / params.num_source_rays;

  std::vector<WalkVertex> chain;
  chain.reserve(params.max_source_depth + 2);
  std::vector<const WalkVertex*> chain_ptrs;
  chain_ptrs.reserve(params.max_source_depth + 2);
  std::vector<ClusterKeyItem> key;
  std::vector<std::array<double, 4>> planes;

  for (int ray = ray_begin; ray < ray_end; ++ray) {
    Pcg32 rng(CombineSeed(params.rng_seed, 0x51ce0000ULL + ray), 2 * ray + 1);
    const Vec3 dir = EmitDirection(lattice, ray, rng);
    chain.clear();
    key.clear();
    planes.clear();
    int refl_count = 0;
    bool has_diffraction = false;
    int arena_parent = -1;
    bool arena_open = build_pool;

    auto on_segment = [&](const Vec3& origin, const Vec3& direction,
                          double seg_len,
                          const std::array<double, kMaxBands>& throughput,
                          double path_length, int bounces) {
      if (bounces < 1 || refl_count < 1) return;
      const Vec3 to_listener = ctx.listener - origin;
      const double t_foot = to_listener.dot(direction);
      if (t_foot <= 0.0 || t_foot >= seg_len) return;
      const double b2 = (to_listener - t_foot * direction).squaredNorm();
      if (b2 >= ctx.rho * ctx.rho) return;
      chain_ptrs.clear();
      for (auto& v : chain) chain_ptrs.push_back(&v);
      if (!GatherOwned(ctx, chain_ptrs.data(),
                       static_cast<int>(chain_ptrs.size()),
                       /*pool_nonempty=*/build_pool))
        return;
      const double arc = path_length + t_foot;
      const double hypot_len = std::sqrt(arc * arc + b2);
      Deposit d;
      d.delay_s = hypot_len / ctx.speed;
      for (int m = 0; m < ctx.num_bands; ++m)
        d.energy[m] = ctx.emitted * packet * throughput[m] *
                      AirLoss(ctx, m, hypot_len) * ctx.inv_rho_area;
      d.direction = -direction;
      d.refl_count = refl_count;
      d.force_histogram = has_diffraction;
      if (!d.force_histogram && refl_count <= kMaxErBounces) {
        d.key = key;
        d.refl_planes = planes;
      }
      sink.Add(std::move(d));
    };
    auto on_vertex = [&](const WalkVertex& vertex,
                         const std::array<double, kMaxBands>& arrival,
                         double path_length, int depth) {
      chain.push_back(vertex);
      if (vertex.kind == VertexKind::kReflection) ++refl_count;
      if (vertex.kind == VertexKind::kDiffraction) has_diffraction = true;
      if (!has_diffraction && refl_count <= kMaxErBounces) {
        key.push_back(
            PlaneKeyOf(vertex.normal, vertex.position, vertex.kind));
        if (vertex.kind == VertexKind::kReflection) {
          const Vec3& n = vertex.normal;
          planes.push_back({n.x(), n.y(), n.z(), n.dot(vertex.position)});
        }
      }
      if (arena_open && depth <= kPoolMaxDepth && !has_diffraction) {
        ArenaVertex av;
        av.vertex = vertex;
        av.parent = arena_parent;
        av.depth = depth;
        out.arena->push_back(av);
        arena_parent = static_cast<int>(out.arena->size()) - 1;
        if (Connectable(vertex)) {
          out.pool->push_back(arena_parent);
          for (int m = 0; m < ctx.num_bands; ++m)
            out.pool_throughput->push_back(static_cast<float>(arrival[m]));
          out.pool_lengths->push_back(static_cast<float>(path_length));
        }
      } else {
        arena_open = false;
      }
      return true;
    };
    WalkRay(ctx, ctx.source, dir, params.max_source_depth, rng, on_segment,
            on_vertex);
  }
}

// ---------------------------------------------------------------------------
// Listener stage.
// ---------------------------------------------------------------------------

void RunListenerBatch(const TraceContext& ctx, int batch,
                      const EmissionLattice& lattice, const SlotSink& sink,
                      const PoolView& pool) {
  const SimulationParams& params = *ctx.params;
  const int ray_begin = batch * kBatchSize;
  const int ray_end =
      std::min(params.num_listener_rays, ray_begin + kBatchSize);
  const double inv_rays = 1.0 / params.num_listener_rays;
  const double n_source = params.num_source_rays;

  std::vector<WalkVertex> z_chain;
  std::vector<const WalkVertex*> path;

  for (int ray = ray_begin; ray < ray_end; ++ray) {
    Pcg32 rng(CombineSeed(params.rng_seed, 0x7a110000ULL + ray), 2 * ray + 7);
    const Vec3 dir = EmitDirection(lattice, ray, rng);
    z_chain.clear();
    z_chain.reserve(params.max_listener_depth + 1);
    bool has_diffraction = false;

    auto on_segment = [](const Vec3&, const Vec3&, double,
                         const std::array<double, kMaxBands>&, double, int) {};
    auto on_vertex = [&](const WalkVertex& vertex,
                         const std::array<double, kMaxBands>& arrival,
                         double path_length, int depth) {
      (void)arrival;
      (void)path_length;
      (void)depth;
      z_chain.push_back(vertex);
      if (vertex.kind == VertexKind::kDiffraction) has_diffraction = true;
      if (has_diffraction) return true;

      const WalkVertex& zk = z_chain.back();
      const int k_listener = static_cast<int>(z_chain.size());

      if (Connectable(zk) &&
          !ctx.scene->Occluded(ctx.source, zk.position)) {
        path.clear();
        for (int i = k_listener - 1; i >= 0; --i) path.push_back(&z_chain[i]);
        EmitConnectionDeposit(ctx, sink, path.data(),
                              static_cast<int>(path.size()), n_source,
                              pool.size, inv_rays);
      }

      if (Connectable(zk) && pool.size > 0) {
        const int pick =
            static_cast<int>(rng.NextBelow(static_cast<uint32_t>(pool.size)));
        const int arena_idx = pool.entries[pick];
        const ArenaVertex& yj = pool.arena[arena_idx];
        if (Connectable(yj.vertex) &&
            !ctx.scene->Occluded(yj.vertex.position, zk.position)) {
          path.clear();
          int count = 0;
          for (int idx = arena_idx; idx >= 0; idx = pool.arena[idx].parent)
            ++count;
          path.resize(count);
          int write = count - 1;
          for (int idx = arena_idx; idx >= 0; idx = pool.arena[idx].parent)
            path[write--] = &pool.arena[idx].vertex;
          for (int i = k_listener - 1; i >= 0; --i)
            path.push_back(&z_chain[i]);
          EmitConnectionDeposit(ctx, sink, path.data(),
                                static_cast<int>(path.size()), n_source,
                                pool.size, inv_rays);
        }
      }
      return true;
    };
    WalkRay(ctx, ctx.listener, dir, params.max_listener_depth, rng,
            on_segment, on_vertex);
  }
}

// ---------------------------------------------------------------------------
// Cluster accumulation shared by Simulate and ClusterEarlyReflections.
// ---------------------------------------------------------------------------

struct ClusterAccumulator {
  std::array<double, kMaxBands> energy{};
  double weighted_delay = 0.0;
  Vec3 weighted_direction{0, 0, 0};
  double total = 0.0;
  std::vector<std::array<double, 4>> refl_planes;
  int refl_count = 0;
};

using ClusterMap = std::map<std::vector<ClusterKeyItem>, ClusterAccumulator>;

void AccumulateCluster(ClusterMap& clusters, const Deposit& d, int num_bands) {
  ClusterAccumulator& acc = clusters[d.key];
  double total = 0.0;
  for (int m = 0; m < num_bands; ++m) {
    acc.energy[m] += d.energy[m];
    total += d.energy[m];
  }
  acc.weighted_delay += total * d.delay_s;
  acc.weighted_direction += total * d.direction;
  acc.total += total;
  if (acc.refl_planes.empty()) {
    acc.refl_planes = d.refl_planes;
    acc.refl_count = d.refl_count;
  }
}

std::vector<EarlyReflection> FinishClusters(ClusterMap& clusters,
                                            int num_bands) {
  std::vector<EarlyReflection> events;
  events.reserve(clusters.size());
  for (auto& [key, acc] : clusters) {
    (void)key;
    if (acc.total <= 0.0) continue;
    EarlyReflection er;
    er.delay_s = acc.weighted_delay / acc.total;
    er.band_energy.assign(acc.energy.begin(), acc.energy.begin() + num_bands);
    const double norm = acc.weighted_direction.norm();
    er.direction =
        norm > 1e-12 ? Vec3(acc.weighted_direction / norm) : Vec3(0, 0, 1);
    er.planes = acc.refl_planes;
    er.bounce_count = acc.refl_count;
    events.push_back(std::move(er));
  }
  std::sort(events.begin(), events.end(),
            [](const EarlyReflection& a, const EarlyReflection& b) {
              return a.delay_s != b.delay_s ? a.delay_s < b.delay_s
                                            : a.bounce_count < b.bounce_count;
            });
  return events;
}

int ClampThreads(int requested) {
  for (int cand : {8, 4, 2}) {
    if (requested >= cand) return cand;
  }
  return 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComputeDirect.
// ---------------------------------------------------------------------------

namespace {

struct EdgeDetour {
  double detour = std::numeric_limits<double>::infinity();
  double bent_length = 0.0;
  Vec3 bend_point{0, 0, 0};
  bool valid = false;
};

// In-plane direction pointing out of the wedge (away from both adjacent
// faces), used to lift bend points off the geometry for visibility tests.
Vec3 EdgeOutwardDirection(const Scene& scene, const DiffractionEdge& edge,
                          const Vec3& point_on_edge) {
  const Vec3 axis = (edge.end - edge.start).normalized();
  auto into_face = [&](int face) {
    Vec3 v = scene.mesh.Centroid(face) - point_on_edge;
    v -= v.dot(axis) * axis;
    const double len = v.norm();
    return len > 1e-12 ? Vec3(v / len) : Vec3(0, 0, 0);
  };
  Vec3 away = -into_face(edge.face_a);
  if (edge.face_b >= 0) away -= into_face(edge.face_b);
  const double len = away.norm();
  return len > 1e-9 ? Vec3(away / len) : edge.normal_a;
}

EdgeDetour DetourAroundEdge(const Scene& scene, const DiffractionEdge& edge,
                            const Vec3& s, const Vec3& l,
                            bool check_visibility) {
  EdgeDetour result;
  auto cost = [&](double t) {
    const Vec3 p = edge.start + t * (edge.end - edge.start);
    return (p - s).norm() + (l - p).norm();
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 48; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) <= cost(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double t = 0.5 * (lo + hi);
  const Vec3 bend = edge.start + t * (edge.end - edge.start);
  const double bent = cost(t);
  if (check_visibility) {
    const Vec3 lifted =
        bend + 1e-3 * EdgeOutwardDirection(scene, edge, bend);
    if (scene.Occluded(s, lifted) || scene.Occluded(lifted, l)) return result;
  }
  result.detour = bent - (l - s).norm();
  result.bent_length = bent;
  result.bend_point = bend;
  result.valid = true;
  return result;
}

}  // namespace

std::optional<DirectSound> ComputeDirect(const Scene& scene,
                                         const Vec3& source,
                                         const Vec3& listener,
                                         const SimulationParams& params) {
  if (!params.direct_enabled) return std::nullopt;
  const int num_bands = params.bands.size();
  const double c = scene.speed_of_sound;
  const double distance = (source - listener).norm();
  if (distance < 1e-9) return std::nullopt;

  std::array<double, kMaxBands> air_db{};
  if (params.air_absorption_enabled) {
    const auto att = BandAirAttenuation(params.air, params.bands);
    for (int m = 0; m < num_bands; ++m) air_db[m] = att[m];
  }
  auto air_loss = [&](int m, double len) {
    return air_db[m] == 0.0 ? 1.0 : std::pow(10.0, -air_db[m] * len / 10.0);
  };
  const double base =
      params.EmittedEnergy() / (4.0 * kPi * distance * distance);

  const bool visible = !scene.Occluded(source, listener);

  DirectSound direct;
  direct.band_energy.assign(num_bands, 0.0);
  direct.direction = (source - listener).normalized();
  direct.delay_s = distance / c;

  // Smallest-detour edge, evaluated on both sides of the shadow boundary so
  // the received level varies continuously across it.
  EdgeDetour best;
  if (params.diffraction_enabled) {
    for (const DiffractionEdge& edge : scene.diffraction_edges) {
      EdgeDetour d = DetourAroundEdge(scene, edge, source, listener,
                                      /*check_visibility=*/!visible);
      if (d.valid && d.detour < best.detour) best = d;
    }
  }

  if (visible) {
    for (int m = 0; m < num_bands; ++m) {
      double att_db = 0.0;
      if (best.valid) {
        const double fresnel =
            -2.0 * std::max(0.0, best.detour) * params.bands.Center(m) / c;
        att_db = BarrierDb(fresnel);
      }
      direct.band_energy[m] =
          base * air_loss(m, distance) * std::pow(10.0, -att_db / 10.0);
    }
    direct.state = OcclusionState::kVisible;
    return direct;
  }

  std::vector<double> diffracted(num_bands, 0.0), transmitted(num_bands, 0.0);
  bool has_diff = false, has_trans = false;

  if (params.diffraction_enabled && best.valid) {
    const double bent_base = params.EmittedEnergy() /
                             (4.0 * kPi * best.bent_length * best.bent_length);
    for (int m = 0; m < num_bands; ++m) {
      const double fresnel = 2.0 * best.detour * params.bands.Center(m) / c;
      diffracted[m] = bent_base * air_loss(m, best.bent_length) *
                      std::pow(10.0, -BarrierDb(fresnel) / 10.0);
      if (diffracted[m] > 0.0) has_diff = true;
    }
  }

  if (params.transmission_enabled) {
    std::vector<Hit> hits;
    scene.AllHitsBetween(source, listener, hits);
    std::vector<double> gain(num_bands, base);
    for (const Hit& h : hits) {
      const AcousticMaterial& mat = scene.TriangleMaterial(h.triangle);
      for (int m = 0; m < num_bands; ++m) {
        const double t = CoefficientAt(mat, CoefficientKind::kTransmission,
                                       params.bands.Center(m));
        const double damp = CoefficientAt(mat, CoefficientKind::kDamping,
                                          params.bands.Center(m));
        gain[m] *=
            t * std::pow(10.0, -damp * params.transmission_thickness_m / 10.0);
      }
    }
    for (int m = 0; m < num_bands; ++m) {
      transmitted[m] = gain[m] * air_loss(m, distance);
      if (transmitted[m] > 0.0) has_trans = true;
    }
  }

  if (!has_diff && !has_trans) {
    direct.state = OcclusionState::kBlocked;
    return direct;
  }
  double diff_total = 0.0, trans_total = 0.0;
  for (int m = 0; m < num_bands; ++m) {
    direct.band_energy[m] = diffracted[m] + transmitted[m];
    diff_total += diffracted[m];
    trans_total += transmitted[m];
  }
  if (has_diff && diff_total >= trans_total) {
    direct.delay_s = best.bent_length / c;
    direct.direction = (best.bend_point - listener).normalized();
    direct.state = OcclusionState::kDiffracted;
  } else {
    direct.state = OcclusionState::kTransmitted;
  }
  return direct;
}

// ---------------------------------------------------------------------------
// Op-level tracing API.
// ---------------------------------------------------------------------------

std::vector<std::vector<PathVertex>> TraceSourcePaths(
    const Scene& scene, const Vec3& source, const SimulationParams& params) {
  params.Validate();
  TraceContext ctx =
      MakeContext(scene, source, source + Vec3(0, 0, 1e9), params);
  // Listener far away: gathering never triggers during op-level tracing.
  const EmissionLattice lattice =
      MakeLattice(params.num_source_rays, params.stratified_emission);

  std::vector<std::vector<PathVertex>> paths(params.num_source_rays);
  for (int ray = 0; ray < params.num_source_rays; ++ray) {
    Pcg32 rng(CombineSeed(params.rng_seed, 0x51ce0000ULL + ray), 2 * ray + 1);
    const Vec3 dir = EmitDirection(lattice, ray, rng);
    std::vector<PathVertex>& out = paths[ray];
    auto on_segment = [](const Vec3&, const Vec3&, double,
                         const std::array<double, kMaxBands>&, double, int) {};
    Vec3 prev = source;
    auto on_vertex = [&](const WalkVertex& vertex,
                         const std::array<double, kMaxBands>& arrival,
                         double path_length, int depth) {
      PathVertex pv;
      pv.position = vertex.position;
      pv.normal = vertex.normal;
      pv.incoming = (vertex.position - prev).normalized();
      pv.triangle = -1;
      pv.material = vertex.material;
      pv.depth = depth;
      pv.transmission = vertex.kind == VertexKind::kTransmission;
      pv.arrival_throughput = arrival;
      pv.path_length = path_length;
      out.push_back(pv);
      prev = vertex.position;
      return true;
    };
    WalkRay(ctx, source, dir, params.max_source_depth, rng, on_segment,
            on_vertex);
  }
  return paths;
}

std::vector<PathContribution> TraceListenerPaths(
    const Scene& scene, const ListenerPose& listener,
    const std::vector<std::vector<PathVertex>>& source_paths,
    const Vec3& source, const SimulationParams& params) {
  params.Validate();
  TraceContext ctx = MakeContext(scene, source, listener.position, params);

  // Rebuild an arena/pool from the op-level source paths.
  std::vector<ArenaVertex> arena;
  std::vector<int> pool_entries;
  for (const auto& path : source_paths) {
    int parent = -1;
    for (const PathVertex& pv : path) {
      if (pv.depth > kPoolMaxDepth) break;
      ArenaVertex av;
      av.vertex.position = pv.position;
      av.vertex.normal = pv.normal;
      av.vertex.material = pv.material;
      av.vertex.kind = pv.transmission ? VertexKind::kTransmission
                                       : VertexKind::kReflection;
      av.vertex.glossy_refl =
          pv.material >= 0 && ctx.mats[pv.material].glossy;
      av.parent = parent;
      av.depth = pv.depth;
      arena.push_back(av);
      parent = static_cast<int>(arena.size()) - 1;
      if (Connectable(av.vertex)) pool_entries.push_back(parent);
    }
  }
  PoolView pool;
  pool.arena = arena.data();
  pool.entries = pool_entries.data();
  pool.size = static_cast<int>(pool_entries.size());

  std::vector<PathContribution> contributions;
  EnergyHistogram scratch(params.BinSeconds(), params.max_ir_seconds,
                          ctx.num_bands, 0);
  std::vector<Deposit> deposits;
  SlotSink sink{&scratch, &deposits, ctx.num_bands};

  // 0-bounce next-event estimation to the source point.
  if (!scene.Occluded(source, listener.position)) {
    const double d = (source - listener.position).norm();
    PathContribution c;
    c.delay_s = d / ctx.speed;
    for (int m = 0; m < ctx.num_bands; ++m)
      c.band_energy[m] =
          ctx.emitted / (4.0 * kPi * d * d) * AirLoss(ctx, m, d);
    c.arrival_direction = (source - listener.position).normalized();
    c.bounce_count = 0;
    contributions.push_back(c);
  }

  const EmissionLattice lattice =
      MakeLattice(params.num_listener_rays, params.stratified_emission);
  const int num_batches =
      (params.num_listener_rays + kBatchSize - 1) / kBatchSize;
  for (int b = 0; b < num_batches; ++b)
    RunListenerBatch(ctx, b, lattice, sink, pool);

  for (const Deposit& d : deposits) {
    PathContribution c;
    c.delay_s = d.delay_s;
    c.band_energy = d.energy;
    c.arrival_direction = d.direction;
    c.bounce_count = d.refl_count;
    c.planes = d.refl_planes;
    contributions.push_back(c);
  }
  // Histogram-routed deposits (deep paths) are reported without planes.
  // The op-level API exposes only the contribution list; Simulate bins them.
  return contributions;
}

PathEnergyResult PathEnergy(const Scene& scene, const Vec3& source,
                            const std::vector<PathVertex>& vertices,
                            const Vec3& listener,
                            const SimulationParams& params,
                            double mis_weight) {
  const int num_bands = params.bands.size();
  PathEnergyResult result;
  double length = 0.0;
  Vec3 prev = source;
  for (const PathVertex& v : vertices) {
    length += (v.position - prev).norm();
    prev = v.position;
  }
  length += (listener - prev).norm();
  result.delay_s = length / scene.speed_of_sound;

  std::array<double, kMaxBands> e{};
  const double spread =
      params.EmittedEnergy() / (4.0 * kPi * length * length);
  for (int m = 0; m < num_bands; ++m) e[m] = spread * mis_weight;
  for (const PathVertex& v : vertices) {
    const AcousticMaterial& mat =
        scene.materials.materials[v.material >= 0
                                      ? v.material
                                      : scene.materials.triangle_material[0]];
    for (int m = 0; m < num_bands; ++m) {
      const double f = params.bands.Center(m);
      const double a = CoefficientAt(mat, CoefficientKind::kAbsorption, f);
      const double t = params.transmission_enabled
                           ? CoefficientAt(mat, CoefficientKind::kTransmission, f)
                           : 0.0;
      if (v.transmission) {
        const double damp = CoefficientAt(mat, CoefficientKind::kDamping, f);
        e[m] *= t * std::pow(10.0,
                             -damp * params.transmission_thickness_m / 10.0);
      } else {
        e[m] *= std::max(0.0, 1.0 - a - t);
      }
    }
  }
  if (params.air_absorption_enabled) {
    const auto att = BandAirAttenuation(params.air, params.bands);
    for (int m = 0; m < num_bands; ++m)
      e[m] *= std::pow(10.0, -att[m] * length / 10.0);
  }
  result.band_energy = e;
  return result;
}

// ---------------------------------------------------------------------------
// Early-reflection clustering (public op).
// ---------------------------------------------------------------------------

std::vector<EarlyReflection> ClusterEarlyReflections(
    const std::vector<PathContribution>& contributions, int num_bands) {
  ClusterMap clusters;
  for (const PathContribution& c : contributions) {
    if (c.bounce_count < 1 || c.bounce_count > kMaxErBounces) continue;
    Deposit d;
    d.delay_s = c.delay_s;
    d.energy = c.band_energy;
    d.direction = c.arrival_direction;
    d.refl_count = c.bounce_count;
    d.refl_planes = c.planes;
    for (const auto& p : c.planes)
      d.key.push_back({llround(p[0] * 1e4), llround(p[1] * 1e4),
                       llround(p[2] * 1e4), llround(p[3] * 1e4), 0});
    AccumulateCluster(clusters, d, num_bands);
  }
  return FinishClusters(clusters, num_bands);
}

// ---------------------------------------------------------------------------
// Path cache.
// ---------------------------------------------------------------------------

void PathCache::Remember(const std::vector<EarlyReflection>& events) {
  for (const EarlyReflection& er : events) {
    if (er.planes.empty()) continue;
    bool known = false;
    for (const auto& seq : sequences_)
      if (seq == er.planes) known = true;
    if (!known) sequences_.push_back(er.planes);
  }
}

namespace {

// Deterministic image-method validation of a cached reflecting-plane
// sequence: mirror the source across the planes in order, walk the specular
// chain back from the listener, and require every bounce point to lie on
// scene geometry in the expected plane with clear connecting segments.
std::optional<EarlyReflection> ValidateSequence(
    const Scene& scene, const TraceContext& ctx,
    const std::vector<std::array<double, 4>>& planes) {
  const int k = static_cast<int>(planes.size());
  std::vector<Vec3> images(k + 1);
  images[0] = ctx.source;
  for (int i = 0; i < k; ++i) {
    const Vec3 n(planes[i][0], planes[i][1], planes[i][2]);
    const double off = planes[i][3];
    const Vec3& p = images[i];
    images[i + 1] = p - 2.0 * (n.dot(p) - off) * n;
  }
  std::vector<Vec3> points(k);
  Vec3 to = ctx.listener;
  for (int i = k - 1; i >= 0; --i) {
    const Vec3 n(planes[i][0], planes[i][1], planes[i][2]);
    const double off = planes[i][3];
    const Vec3& img = images[i + 1];
    const Vec3 d = to - img;
    const double denom = n.dot(d);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = (off - n.dot(img)) / denom;
    if (t <= 0.0 || t >= 1.0) return std::nullopt;
    points[i] = img + t * d;
    // The bounce point must land on real geometry in this plane.
    const Vec3 probe_dir = (points[i] - to).normalized();
    Ray probe{to, probe_dir};
    auto hit = scene.Intersect(probe, (points[i] - to).norm() + 1e-3);
    if (!hit) return std::nullopt;
    const Vec3 hit_point = to + probe_dir * hit->distance;
    if ((hit_point - points[i]).norm() > 1e-3) return std::nullopt;
    to = points[i];
  }
  if (scene.Occluded(ctx.source, points.empty() ? ctx.listener : points[0]))
    return std::nullopt;

  const double total_len = (images[k] - ctx.listener).norm();
  EarlyReflection er;
  er.delay_s = total_len / ctx.speed;
  er.band_energy.assign(ctx.num_bands, 0.0);
  for (int m = 0; m < ctx.num_bands; ++m) {
    er.band_energy[m] = ctx.emitted / (4.0 * kPi * total_len * total_len) *
                        AirLoss(ctx, m, total_len);
  }
  // Per-bounce reflectivity from the materials found at the bounce points.
  for (int i = 0; i < k; ++i) {
    const Vec3 from = i == 0 ? ctx.source : points[i - 1];
    const Vec3 d = (points[i] - from);
    const double len = d.norm();
    if (len < 1e-9) return std::nullopt;
    Ray probe{from, d / len};
    auto hit = scene.Intersect(probe, len + 1e-3);
    if (!hit) return std::nullopt;
    const MaterialBands& mb =
        ctx.mats[scene.materials.triangle_material[hit->triangle]];
    for (int m = 0; m < ctx.num_bands; ++m)
      er.band_energy[m] *= mb.reflect[m];
  }
  er.direction = ((k > 0 ? points[k - 1] : ctx.source) - ctx.listener)
                     .normalized();
  er.planes = planes;
  er.bounce_count = k;
  return er;
}

}  // namespace

// ---------------------------------------------------------------------------
// Simulate.
// ---------------------------------------------------------------------------

EnergyHistogram Simulate(const Scene& scene, const Vec3& source,
                         const ListenerPose& listener,
                         const SimulationParams& params, PathCache* cache) {
  params.Validate();
  const auto start_time = std::chrono::steady_clock::now();

  const int num_bands = params.bands.size();
  EnergyHistogram result(params.BinSeconds(), params.max_ir_seconds,
                         num_bands, params.indirect_sh_order);

  if (params.direct_enabled) {
    result.direct = ComputeDirect(scene, source, listener.position, params);
  }

  if (params.indirect_enabled) {
    TraceContext ctx = MakeContext(scene, source, listener.position, params);
    const int threads = ClampThreads(params.thread_count);

    // --- Source stage ---
    const EmissionLattice src_lattice =
        MakeLattice(params.num_source_rays, params.stratified_emission);
    const int src_batches =
        (params.num_source_rays + kBatchSize - 1) / kBatchSize;

    std::vector<EnergyHistogram> slot_hist;
    std::vector<std::vector<Deposit>> slot_early(kNumSlots);
    slot_hist.reserve(kNumSlots);
    for (int s = 0; s < kNumSlots; ++s)
      slot_hist.emplace_back(params.BinSeconds(), params.max_ir_seconds,
                             num_bands, params.indirect_sh_order);

    std::vector<std::vector<ArenaVertex>> slot_arena(kNumSlots);
    std::vector<std::vector<int>> slot_pool(kNumSlots);
    std::vector<std::vector<float>> slot_pool_tp(kNumSlots);
    std::vector<std::vector<float>> slot_pool_len(kNumSlots);

    auto source_worker = [&](int tid) {
      for (int b = tid; b < src_batches; b += threads) {
        const int slot = b % kNumSlots;
        SlotSink sink{&slot_hist[slot], &slot_early[slot], num_bands};
        SourceBatchOutput out{&slot_arena[slot], &slot_pool[slot],
                              &slot_pool_tp[slot], &slot_pool_len[slot]};
        RunSourceBatch(ctx, b, src_lattice, sink, out, /*build_pool=*/true);
      }
    };
    if (threads == 1) {
      source_worker(0);
    } else {
      std::vector<std::thread> workers;
      for (int t = 0; t < threads; ++t)
        workers.emplace_back(source_worker, t);
      for (auto& w : workers) w.join();
    }

    // Concatenate arenas and pools in slot order (deterministic).
    std::vector<ArenaVertex> arena;
    std::vector<int> pool_entries;
    for (int s = 0; s < kNumSlots; ++s) {
      const int base = static_cast<int>(arena.size());
      for (ArenaVertex av : slot_arena[s]) {
        if (av.parent >= 0) av.parent += base;
        arena.push_back(av);
      }
      for (int idx : slot_pool[s]) pool_entries.push_back(idx + base);
    }
    PoolView pool;
    pool.arena = arena.data();
    pool.entries = pool_entries.data();
    pool.size = static_cast<int>(pool_entries.size());

    // --- Listener stage ---
    const EmissionLattice lis_lattice =
        MakeLattice(params.num_listener_rays, params.stratified_emission);
    const int lis_batches =
        (params.num_listener_rays + kBatchSize - 1) / kBatchSize;
    auto listener_worker = [&](int tid) {
      for (int b = tid; b < lis_batches; b += threads) {
        const int slot = b % kNumSlots;
        SlotSink sink{&slot_hist[slot], &slot_early[slot], num_bands};
        RunListenerBatch(ctx, b, lis_lattice, sink, pool);
      }
    };
    if (threads == 1) {
      listener_worker(0);
    } else {
      std::vector<std::thread> workers;
      for (int t = 0; t < threads; ++t)
        workers.emplace_back(listener_worker, t);
      for (auto& w : workers) w.join();
    }

    // --- Deterministic merge and clustering ---
    for (int s = 0; s < kNumSlots; ++s) result.MergeFrom(slot_hist[s]);

    ClusterMap clusters;
    for (int s = 0; s < kNumSlots; ++s)
      for (const Deposit& d : slot_early[s])
        AccumulateCluster(clusters, d, num_bands);
    std::vector<EarlyReflection> events = FinishClusters(clusters, num_bands);

    if (cache != nullptr && params.path_cache_enabled) {
      // Validated cached sequences replace matching stochastic clusters.
      std::vector<EarlyReflection> merged;
      for (const auto& seq : cache->sequences()) {
        TraceContext vctx = ctx;
        if (auto er = ValidateSequence(scene, vctx, seq)) merged.push_back(*er);
      }
      for (EarlyReflection& er : events) {
        bool replaced = false;
        for (const EarlyReflection& cached : merged)
          if (cached.planes == er.planes) replaced = true;
        if (!replaced) merged.push_back(std::move(er));
      }
      std::sort(merged.begin(), merged.end(),
                [](const EarlyReflection& a, const EarlyReflection& b) {
                  return a.delay_s < b.delay_s;
                });
      events = std::move(merged);
      cache->Remember(events);
    }
    result.early_reflections = std::move(events);
  }

  g_last_simulate_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_time)
          .count();
  return result;
}

double LastSimulateSeconds() { return g_last_simulate_seconds; }

}  // namespace echotrace
