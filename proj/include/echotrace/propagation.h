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

#ifndef ECHOTRACE_PROPAGATION_H_
#define ECHOTRACE_PROPAGATION_H_

#include <array>
#include <optional>
#include <vector>

#include "echotrace/histogram.h"
#include "echotrace/params.h"
#include "echotrace/pose.h"
#include "echotrace/scene.h"

namespace echotrace {

// One surface interaction along a traced path.
struct PathVertex {
  Vec3 position;
  Vec3 normal;    // geometric normal oriented against the incoming ray
  Vec3 incoming;  // unit direction of propagation into the vertex
  int triangle = -1;
  int material = -1;
  int depth = 0;              // 1-based bounce index along the walk
  bool transmission = false;  // straight through-surface crossing
  // Per-band throughput accumulated before this vertex's interaction,
  // relative to the emitted energy.
  std::array<double, kMaxBands> arrival_throughput{};
  double path_length = 0.0;  // meters from the walk origin
};

// A full source->listener path contribution (used by the op-level tracing
// API and tests; the production tracer streams these into the histogram).
struct PathContribution {
  double delay_s = 0.0;
  std::array<double, kMaxBands> band_energy{};
  Vec3 arrival_direction;  // from the listener toward the arrival
  int bounce_count = 0;
  std::vector<std::array<double, 4>> planes;  // reflection planes, in order
};

// Traces num_source_rays paths from the source and returns the vertex
// chains (empty chains for rays that immediately escape).
std::vector<std::vector<PathVertex>> TraceSourcePaths(
    const Scene& scene, const Vec3& source, const SimulationParams& params);

// Traces listener rays; at each vertex attempts one connection to the
// source and one to a uniformly sampled stored source-path vertex, weighting
// overlapping strategies by the balance heuristic. Includes the 0-bounce
// direct connection term when the straight path is clear.
std::vector<PathContribution> TraceListenerPaths(
    const Scene& scene, const ListenerPose& listener,
    const std::vector<std::vector<PathVertex>>& source_paths,
    const Vec3& source, const SimulationParams& params);

// Deterministic specular-convention energy of a complete path through the
// given vertices: emitted energy spread over the unfolded length, times the
// per-bounce reflection (or transmission) factors, times air damping.
struct PathEnergyResult {
  std::array<double, kMaxBands> band_energy{};
  double delay_s = 0.0;
};
PathEnergyResult PathEnergy(const Scene& scene, const Vec3& source,
                            const std::vector<PathVertex>& vertices,
                            const Vec3& listener,
                            const SimulationParams& params,
                            double mis_weight = 1.0);

// Deterministic direct-sound solve with smooth diffraction around convex
// edges and through-surface transmission.
std::optional<DirectSound> ComputeDirect(const Scene& scene,
                                         const Vec3& source,
                                         const Vec3& listener,
                                         const SimulationParams& params);

// Merges <=2 bounce contributions that share an ordered reflecting-plane
// sequence into discrete events (summed energy, energy-weighted delay and
// direction).
std::vector<EarlyReflection> ClusterEarlyReflections(
    const std::vector<PathContribution>& contributions, int num_bands);

// Reusable early-reflection candidates along a trajectory (high-speed mode).
// Cleared caches reproduce the cache-disabled result exactly.
class PathCache {
 public:
  void Clear() { sequences_.clear(); }
  bool Empty() const { return sequences_.empty(); }
  void Remember(const std::vector<EarlyReflection>& events);
  const std::vector<std::vector<std::array<double, 4>>>& sequences() const {
    return sequences_;
  }

 private:
  std::vector<std::vector<std::array<double, 4>>> sequences_;
};

// Full bidirectional simulation: direct solve, source tracing, listener
// tracing with connections, early-reflection clustering, and the time-binned
// histogram with spherical-harmonic directivity. Deterministic in
// (scene, positions, params) for any thread count that divides 8.
EnergyHistogram Simulate(const Scene& scene, const Vec3& source,
                         const ListenerPose& listener,
                         const SimulationParams& params,
                         PathCache* cache = nullptr);

// Wall-clock of the last Simulate call on this thread, for benchmarking.
double LastSimulateSeconds();

}  // namespace echotrace

#endif  // ECHOTRACE_PROPAGATION_H_
