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

#ifndef ECHOTRACE_AUDIO_H_
#define ECHOTRACE_AUDIO_H_

#include <string>
#include <vector>

#include "echotrace/spatial.h"

namespace echotrace {

struct AudioClip {
  int sampling_rate = 44100;
  std::vector<std::vector<double>> channels;

  size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
  static AudioClip FromWavFile(const std::string& path);
  void ToWavFile(const std::string& path) const;
};

// Full linear convolution of a mono source with each IR channel
// (output length N + L - 1), FFT-backed.
AudioClip Convolve(const AudioClip& source, const ImpulseResponse& ir);

struct TrajectoryStep {
  double time_s = 0.0;
  Vec3 position{0, 0, 0};
  double heading_rad = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  double step_seconds = 0.15;      // uniform step interval
  double crossfade_seconds = 0.05; // overlap window T < step interval

  static Trajectory FromFile(const std::string& path, double crossfade_s);
  void Validate() const;
};

// Linear crossfade weight of the incoming step at offset t into the window
// [0, T]; the outgoing step gets 1 - w. w(0)=0, w(T/2)=0.5, w(T)=1.
double CrossfadeWeight(double t, double window_seconds);

// Renders continuous audio for a listener moving along the trajectory: one
// IR per step, per-step "valid" convolution of the source history (no zero
// padding), and linear crossfading of the first crossfade_seconds of each
// step with the previous step's extended rendering.
AudioClip RenderTrajectory(const AudioClip& source, const Scene& scene,
                           const Vec3& source_position,
                           const Trajectory& trajectory,
                           const MicrophoneConfig& mic,
                           const SimulationParams& params);

// Band-limited resampling (windowed sinc, DC-exact). Rates in [8k, 96k].
AudioClip Resample(const AudioClip& clip, int target_rate);

}  // namespace echotrace

#endif  // ECHOTRACE_AUDIO_H_
