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

#include "echotrace/audio.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "echotrace/fft.h"
#include "echotrace/wav.h"

namespace echotrace {

AudioClip AudioClip::FromWavFile(const std::string& path) {
  WavData wav = ReadWav(path);
  AudioClip clip;
  clip.sampling_rate = wav.sampling_rate;
  clip.channels = std::move(wav.channels);
  return clip;
}

void AudioClip::ToWavFile(const std::string& path) const {
  WriteWav(path, channels, sampling_rate);
}

AudioClip Convolve(const AudioClip& source, const ImpulseResponse& ir) {
  if (source.sampling_rate != ir.sampling_rate)
    throw ConfigError("Convolve: sampling rate mismatch");
  if (source.channels.size() != 1)
    throw ConfigError("Convolve: source must be mono");
  AudioClip out;
  out.sampling_rate = source.sampling_rate;
  for (const auto& channel : ir.channels)
    out.channels.push_back(FftConvolve(source.channels[0], channel));
  return out;
}

double CrossfadeWeight(double t, double window_seconds) {
  if (window_seconds <= 0.0) return 1.0;
  return std::clamp(t / window_seconds, 0.0, 1.0);
}

void Trajectory::Validate() const {
  if (steps.size() < 1) throw ConfigError("trajectory needs at least 1 step");
  if (step_seconds <= 0.0)
    throw ConfigError("trajectory step interval must be positive");
  if (crossfade_seconds < 0.0 || crossfade_seconds >= step_seconds)
    throw ConfigError("crossfade window must be in [0, step interval)");
  for (size_t i = 1; i < steps.size(); ++i) {
    const double dt = steps[i].time_s - steps[i - 1].time_s;
    if (dt <= 0.0)
      throw ConfigError("trajectory times must be strictly increasing");
    if (std::abs(dt - step_seconds) > 1e-6)
      throw ConfigError("trajectory step intervals must be uniform");
  }
}

Trajectory Trajectory::FromFile(const std::string& path, double crossfade_s) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open trajectory file " + path);
  Trajectory traj;
  traj.crossfade_seconds = crossfade_s;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    TrajectoryStep step;
    double heading_deg;
    if (!(ls >> step.time_s >> step.position.x() >> step.position.y() >>
          step.position.z() >> heading_deg))
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 'time x y z heading_deg'");
    step.heading_rad = DegToRad(heading_deg);
    traj.steps.push_back(step);
  }
  if (traj.steps.empty())
    throw ConfigError("trajectory file " + path + " has no steps");
  if (traj.steps.size() >= 2)
    traj.step_seconds = traj.steps[1].time_s - traj.steps[0].time_s;
  traj.Validate();
  return traj;
}

AudioClip RenderTrajectory(const AudioClip& source, const Scene& scene,
                           const Vec3& source_position,
                           const Trajectory& trajectory,
                           const MicrophoneConfig& mic,
                           const SimulationParams& params) {
  trajectory.Validate();
  if (source.channels.size() != 1)
    throw ConfigError("RenderTrajectory: source must be mono");
  if (source.sampling_rate != params.sampling_rate)
    throw ConfigError("RenderTrajectory: source rate must match params");

  const int fs = params.sampling_rate;
  const int step_samples =
      static_cast<int>(llround(trajectory.step_seconds * fs));
  const int fade_samples =
      static_cast<int>(llround(trajectory.crossfade_seconds * fs));
  const size_t num_steps = trajectory.steps.size();
  const size_t total = num_steps * static_cast<size_t>(step_samples);
  if (source.length() < total)
    std::cerr << "warning: source shorter than the trajectory; "
                 "missing history is zero-padded\n";

  const int num_channels = mic.ChannelCount();
  AudioClip out;
  out.sampling_rate = fs;
  out.channels.assign(num_channels, std::vector<double>(total, 0.0));

  PathCache cache;
  // Previous step's rendering extended into the current crossfade window.
  std::vector<std::vector<double>> prev_ext(
      num_channels, std::vector<double>(fade_samples, 0.0));
  bool have_prev = false;

  for (size_t i = 0; i < num_steps; ++i) {
    ListenerPose pose{trajectory.steps[i].position,
                      trajectory.steps[i].heading_rad};
    // Every step uses the same seed, so a static trajectory renders
    // identical IRs and the crossfade reduces to the identity.
    RenderResult render = RenderIr(scene, source_position, pose, mic, params,
                                   params.path_cache_enabled ? &cache
                                                             : nullptr);
    const size_t window_begin = i * static_cast<size_t>(step_samples);
    for (int ch = 0; ch < num_channels; ++ch) {
      // Full convolution values on [window, window + step + fade): the
      // "valid" per-step segment rule evaluated in absolute sample time.
      std::vector<double> conv =
          FftConvolve(source.channels[0], render.ir.channels[ch]);
      auto conv_at = [&](size_t idx) {
        return idx < conv.size() ? conv[idx] : 0.0;
      };
      for (int n = 0; n < step_samples; ++n) {
        const size_t idx = window_begin + n;
        double value = conv_at(idx);
        if (have_prev && n < fade_samples) {
          const double w =
              CrossfadeWeight(static_cast<double>(n) / fs,
                              trajectory.crossfade_seconds);
          value = (1.0 - w) * prev_ext[ch][n] + w * value;
        }
        out.channels[ch][idx] = value;
      }
      // Extend this step's rendering into the next crossfade window.
      for (int n = 0; n < fade_samples; ++n)
        prev_ext[ch][n] = conv_at(window_begin + step_samples + n);
    }
    have_prev = true;
  }
  return out;
}

AudioClip Resample(const AudioClip& clip, int target_rate) {
  if (clip.sampling_rate < 8000 || clip.sampling_rate > 96000 ||
      target_rate < 8000 || target_rate > 96000)
    throw ConfigError("Resample: rates must be in [8000, 96000] Hz");
  if (target_rate == clip.sampling_rate) return clip;

  const double ratio = static_cast<double>(clip.sampling_rate) / target_rate;
  // Band-limit to the smaller Nyquist with margin; Blackman-windowed sinc.
  const double cutoff =
      0.96 * std::min(clip.sampling_rate, target_rate) /
      (2.0 * clip.sampling_rate);  // cycles per input sample, in (0, 0.5]
  const int half_width = static_cast<int>(std::ceil(32.0 * 0.5 / cutoff));

  auto kernel = [&](double x) {
    if (std::abs(x) >= half_width) return 0.0;
    const double t = x / half_width;  // [-1, 1]
    const double window =
        0.42 + 0.5 * std::cos(kPi * t) + 0.08 * std::cos(2.0 * kPi * t);
    const double arg = 2.0 * cutoff * x;
    const double sinc =
        arg == 0.0 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
    return sinc * window;
  };

  AudioClip out;
  out.sampling_rate = target_rate;
  const size_t out_len = static_cast<size_t>(
      std::floor(static_cast<double>(clip.length()) / ratio));
  for (const auto& src : clip.channels) {
    std::vector<double> dst(out_len, 0.0);
    for (size_t j = 0; j < out_len; ++j) {
      const double center = j * ratio;
      const int k0 = static_cast<int>(std::floor(center)) - half_width + 1;
      const int k1 = static_cast<int>(std::floor(center)) + half_width;
      double acc = 0.0, norm = 0.0;
      for (int k = k0; k <= k1; ++k) {
        const double w = kernel(center - k);
        norm += w;
        if (k >= 0 && k < static_cast<int>(src.size())) acc += w * src[k];
      }
      dst[j] = norm != 0.0 ? acc / norm : 0.0;  // DC-exact normalization
    }
    out.channels.push_back(std::move(dst));
  }
  return out;
}

}  // namespace echotrace
