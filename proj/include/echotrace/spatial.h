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

#ifndef ECHOTRACE_SPATIAL_H_
#define ECHOTRACE_SPATIAL_H_

#include <optional>
#include <string>
#include <vector>

#include "echotrace/filterbank.h"
#include "echotrace/histogram.h"
#include "echotrace/params.h"
#include "echotrace/pose.h"
#include "echotrace/propagation.h"
#include "echotrace/scene.h"

namespace echotrace {

enum class ChannelLayout {
  kMono,
  kStereo,
  kBinaural,
  kQuad,
  kSurround51,
  kSurround71,
  kAmbisonics,
  kArray,
};

std::string ToString(ChannelLayout layout);
ChannelLayout ChannelLayoutFromString(const std::string& name);

struct MicrophoneConfig {
  ChannelLayout layout = ChannelLayout::kMono;
  int ambisonics_order = 1;               // for kAmbisonics
  std::vector<Vec3> capsule_offsets;      // for kArray, listener frame, m

  int ChannelCount() const;
  void Validate() const;
};

// Parametric listener head: Woodworth time difference plus a first-order
// high-frequency shadow for the level difference.
struct HeadModel {
  double radius_m = 0.0875;
  double max_shadow_db = 12.0;   // far-ear attenuation at high frequency
  double shadow_corner_hz = 1500.0;
};

// Interaural time difference (seconds, positive = right ear leads) for a
// source direction expressed in the listener frame.
double WoodworthItd(const HeadModel& head, double azimuth_rad,
                    double elevation_rad, double speed_of_sound);

struct ImpulseResponse {
  int sampling_rate = 44100;
  ChannelLayout layout = ChannelLayout::kMono;
  int ambisonics_order = 0;
  std::vector<std::vector<double>> channels;

  size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
  double TotalEnergy() const;
};

struct SynthesisOptions {
  uint64_t noise_seed = 0;
  // Gain applied to the reverberant (histogram + early reflection) pressure
  // but not the direct sound. Unity in normal operation; the validation
  // suite injects a bias here to prove the level calibration is live.
  double indirect_pressure_scale = 1.0;
};

// Energy histogram -> mono pressure IR: per band, sqrt-energy envelopes
// modulate independent unit-variance band-limited noise; discrete direct and
// early-reflection events are added as band-shaped positive pulses.
ImpulseResponse SynthesizePressure(const EnergyHistogram& hist,
                                   const FrequencyBands& bands,
                                   int sampling_rate,
                                   const SynthesisOptions& options);

// Ambisonic expansion of a mono pressure IR by the histogram's per-bin
// SH coefficients, normalized so channel 0 equals the input exactly.
ImpulseResponse ToAmbisonic(const EnergyHistogram& hist,
                            const ImpulseResponse& mono, int order);

// Parametric binaural decode of an ambisonic IR (order >= 1): virtual
// cardioids at the ears. Use RenderIr for the full pipeline in which the
// direct sound is rendered from its exact arrival direction instead.
ImpulseResponse ToBinaural(const ImpulseResponse& ambisonic,
                           const HeadModel& head, const ListenerPose& pose);

// Fixed virtual-speaker decodes (stereo/quad/5.1/7.1) of an order-1 IR.
ImpulseResponse DecodeSpeakers(const ImpulseResponse& ambisonic,
                               ChannelLayout layout, const ListenerPose& pose);

struct RenderResult {
  ImpulseResponse ir;
  EnergyHistogram histogram;
};

// Full render: simulate, synthesize, and spatialize to the microphone
// configuration. For custom arrays one independent mono simulation runs per
// capsule (same seed, offset positions). Deterministic given
// (scene, positions, params).
RenderResult RenderIr(const Scene& scene, const Vec3& source,
                      const ListenerPose& listener,
                      const MicrophoneConfig& mic,
                      const SimulationParams& params,
                      PathCache* cache = nullptr,
                      const SynthesisOptions* synthesis_override = nullptr);

}  // namespace echotrace

#endif  // ECHOTRACE_SPATIAL_H_
