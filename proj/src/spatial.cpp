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

#include "echotrace/spatial.h"

#include <algorithm>
#include <cmath>

#include "echotrace/rng.h"

namespace echotrace {

std::string ToString(ChannelLayout layout) {
  switch (layout) {
    case ChannelLayout::kMono: return "mono";
    case ChannelLayout::kStereo: return "stereo";
    case ChannelLayout::kBinaural: return "binaural";
    case ChannelLayout::kQuad: return "quad";
    case ChannelLayout::kSurround51: return "surround_5_1";
    case ChannelLayout::kSurround71: return "surround_7_1";
    case ChannelLayout::kAmbisonics: return "ambisonics";
    case ChannelLayout::kArray: return "array";
  }
  return "mono";
}

ChannelLayout ChannelLayoutFromString(const std::string& name) {
  if (name == "mono") return ChannelLayout::kMono;
  if (name == "stereo") return ChannelLayout::kStereo;
  if (name == "binaural") return ChannelLayout::kBinaural;
  if (name == "quad") return ChannelLayout::kQuad;
  if (name == "surround_5_1") return ChannelLayout::kSurround51;
  if (name == "surround_7_1") return ChannelLayout::kSurround71;
  if (name == "ambisonics") return ChannelLayout::kAmbisonics;
  if (name == "array") return ChannelLayout::kArray;
  throw ConfigError("unknown microphone type '" + name + "'");
}

int MicrophoneConfig::ChannelCount() const {
  switch (layout) {
    case ChannelLayout::kMono: return 1;
    case ChannelLayout::kStereo: return 2;
    case ChannelLayout::kBinaural: return 2;
    case ChannelLayout::kQuad: return 4;
    case ChannelLayout::kSurround51: return 6;
    case ChannelLayout::kSurround71: return 8;
    case ChannelLayout::kAmbisonics:
      return ShCount(ambisonics_order);
    case ChannelLayout::kArray:
      return static_cast<int>(capsule_offsets.size());
  }
  return 1;
}

void MicrophoneConfig::Validate() const {
  if (layout == ChannelLayout::kAmbisonics &&
      (ambisonics_order < 0 || ambisonics_order > kMaxShOrder))
    throw ConfigError("ambisonics order must be in [0, 3]");
  if (layout == ChannelLayout::kArray) {
    if (capsule_offsets.empty())
      throw ConfigError("custom array needs at least one capsule");
    for (const Vec3& offset : capsule_offsets) {
      if (offset.norm() > 1.0)
        throw ConfigError("capsule offsets must be within 1 m of the origin");
    }
  }
}

double WoodworthItd(const HeadModel& head, double azimuth_rad,
                    double elevation_rad, double speed_of_sound) {
  double az = std::abs(azimuth_rad);
  if (az > kPi / 2.0) az = kPi - az;  // rear symmetry
  const double itd = head.radius_m * (az + std::sin(az)) / speed_of_sound *
                     std::cos(elevation_rad);
  return azimuth_rad >= 0.0 ? itd : -itd;
}

double ImpulseResponse::TotalEnergy() const {
  double e = 0.0;
  for (const auto& c : channels)
    for (double s : c) e += s * s;
  return e;
}

namespace {

// Discrete (direct or early-reflection) event in synthesis form.
struct EventPulse {
  double delay_s = 0.0;
  std::array<double, kMaxBands> amplitude{};  // per band, sqrt(energy)
  Vec3 direction;
  bool is_direct = false;
};

struct SynthesisParts {
  std::vector<double> indirect;      // stochastic reverberant pressure
  std::vector<EventPulse> events;    // direct + early reflections
  // Joint gain on the event pulses. Band-limited pulses of nearby events
  // overlap coherently at low frequencies, so the group is normalized to
  // carry exactly the summed event energy.
  double event_gain = 1.0;
  size_t length = 0;
};

void AddPulse(std::vector<double>& target, const FilterBank& fb,
              const std::array<double, kMaxBands>& amplitude, int num_bands,
              double delay_s, int sampling_rate, double gain) {
  const int center = static_cast<int>(llround(delay_s * sampling_rate));
  const int half = fb.fir_length() / 2;
  for (int m = 0; m < num_bands; ++m) {
    const double a = amplitude[m] * gain;
    if (a == 0.0) continue;
    const std::vector<double>& taps = fb.PulseTaps(m);
    const double inv_norm = 1.0 / fb.PulseNorm(m);
    for (int n = 0; n < fb.fir_length(); ++n) {
      const int idx = center - half + n;
      if (idx < 0 || idx >= static_cast<int>(target.size())) continue;
      target[idx] += a * taps[n] * inv_norm;
    }
  }
}

SynthesisParts BuildParts(const EnergyHistogram& hist,
                          const FrequencyBands& bands, int sampling_rate,
                          const FilterBank& fb,
                          const SynthesisOptions& options) {
  const int num_bands = bands.size();
  SynthesisParts parts;
  const int samples_per_bin = std::max(
      1, static_cast<int>(llround(hist.bin_seconds() * sampling_rate)));
  parts.length = hist.num_bins() * samples_per_bin;
  parts.indirect.assign(parts.length, 0.0);

  // Reverberant part: per band, sqrt-energy envelope times independent
  // band-limited noise. Each band's modulated noise is then rescaled so it
  // carries exactly the band's histogram energy; independent per-band noise
  // keeps the bands uncorrelated.
  std::vector<double> noise(parts.length);
  std::vector<double> banded(parts.length);
  for (int m = 0; m < num_bands; ++m) {
    Pcg32 rng(CombineSeed(options.noise_seed, 0xA0D10000ULL + m), 77 + m);
    for (size_t i = 0; i < parts.length; ++i) noise[i] = rng.NextGaussian();
    std::vector<double> band_noise = fb.Apply(noise, m);
    double band_total = 0.0;
    double raw_energy = 0.0;
    std::fill(banded.begin(), banded.end(), 0.0);
    for (size_t bin = 0; bin < hist.num_bins(); ++bin) {
      const double e = hist.Energy(bin, m) / samples_per_bin;
      if (e <= 0.0) continue;
      const double env = std::sqrt(e);
      for (int s = 0; s < samples_per_bin; ++s) {
        const size_t idx = bin * samples_per_bin + s;
        banded[idx] = env * band_noise[idx];
        raw_energy += banded[idx] * banded[idx];
      }
      band_total += hist.Energy(bin, m);
    }
    if (raw_energy <= 0.0) continue;
    const double scale = std::sqrt(band_total / raw_energy) *
                         options.indirect_pressure_scale;
    for (size_t i = 0; i < parts.length; ++i)
      parts.indirect[i] += banded[i] * scale;
  }

  if (hist.direct && hist.direct->state != OcclusionState::kBlocked) {
    EventPulse ev;
    ev.delay_s = hist.direct->delay_s;
    for (int m = 0; m < num_bands; ++m)
      ev.amplitude[m] = std::sqrt(std::max(0.0, hist.direct->band_energy[m]));
    ev.direction = hist.direct->direction;
    ev.is_direct = true;
    parts.events.push_back(ev);
  }
  for (const EarlyReflection& er : hist.early_reflections) {
    EventPulse ev;
    ev.delay_s = er.delay_s;
    for (int m = 0; m < num_bands && m < static_cast<int>(er.band_energy.size());
         ++m)
      ev.amplitude[m] = std::sqrt(std::max(0.0, er.band_energy[m])) *
                        options.indirect_pressure_scale;
    ev.direction = er.direction;
    parts.events.push_back(ev);
  }

  // Joint event normalization (see SynthesisParts::event_gain).
  if (!parts.events.empty()) {
    std::vector<double> scratch(parts.length, 0.0);
    double budget = 0.0;
    for (const EventPulse& ev : parts.events) {
      AddPulse(scratch, fb, ev.amplitude, num_bands, ev.delay_s,
               sampling_rate, 1.0);
      for (int m = 0; m < num_bands; ++m)
        budget += ev.amplitude[m] * ev.amplitude[m];
    }
    double actual = 0.0;
    for (double s : scratch) actual += s * s;
    if (actual > 0.0) parts.event_gain = std::sqrt(budget / actual);
  }
  return parts;
}

}  // namespace

ImpulseResponse SynthesizePressure(const EnergyHistogram& hist,
                                   const FrequencyBands& bands,
                                   int sampling_rate,
                                   const SynthesisOptions& options) {
  const FilterBank fb(bands, sampling_rate);
  SynthesisParts parts = BuildParts(hist, bands, sampling_rate, fb, options);
  ImpulseResponse ir;
  ir.sampling_rate = sampling_rate;
  ir.layout = ChannelLayout::kMono;
  ir.channels.assign(1, std::move(parts.indirect));
  for (const EventPulse& ev : parts.events)
    AddPulse(ir.channels[0], fb, ev.amplitude, bands.size(), ev.delay_s,
             sampling_rate, parts.event_gain);
  return ir;
}

ImpulseResponse ToAmbisonic(const EnergyHistogram& hist,
                            const ImpulseResponse& mono, int order) {
  if (order > hist.sh_order())
    throw ConfigError("ToAmbisonic: order exceeds the histogram SH order");
  if (mono.channels.size() != 1)
    throw ConfigError("ToAmbisonic: input must be mono");
  const int num_channels = ShCount(order);
  const size_t length = mono.length();
  ImpulseResponse out;
  out.sampling_rate = mono.sampling_rate;
  out.layout = ChannelLayout::kAmbisonics;
  out.ambisonics_order = order;
  out.channels.assign(num_channels, std::vector<double>(length, 0.0));
  out.channels[0] = mono.channels[0];

  const double samples_per_bin =
      hist.bin_seconds() * mono.sampling_rate;
  for (size_t i = 0; i < length; ++i) {
    const size_t bin = std::min(
        hist.num_bins() - 1,
        static_cast<size_t>(static_cast<double>(i) / samples_per_bin));
    std::span<const double> sh = hist.BinSh(bin);
    const double denom = sh[0];
    if (denom <= 0.0) continue;
    const double p = mono.channels[0][i];
    for (int k = 1; k < num_channels; ++k)
      out.channels[k][i] = p * sh[k] / denom;
  }
  return out;
}

namespace {

// Rotates the order-1 horizontal dipoles from world frame into the listener
// frame: x' = forward, y' = left.
void ListenerFrameDipoles(const ImpulseResponse& ambi,
                          const ListenerPose& pose, size_t i, double* x_out,
                          double* y_out) {
  const double wy = ambi.channels[1][i];  // world y dipole (ACN 1)
  const double wx = ambi.channels[3][i];  // world x dipole (ACN 3)
  const double c = std::cos(pose.heading_rad), s = std::sin(pose.heading_rad);
  *x_out = c * wx + s * wy;
  *y_out = -s * wx + c * wy;
}

ImpulseResponse DecodeCardioids(const ImpulseResponse& ambi,
                                const ListenerPose& pose,
                                const std::vector<double>& azimuths_ccw,
                                ChannelLayout layout,
                                const std::vector<bool>& silent) {
  if (ambi.layout != ChannelLayout::kAmbisonics || ambi.ambisonics_order < 1)
    throw ConfigError("speaker decode needs an ambisonic IR of order >= 1");
  const size_t length = ambi.length();
  ImpulseResponse out;
  out.sampling_rate = ambi.sampling_rate;
  out.layout = layout;
  out.channels.assign(azimuths_ccw.size(), std::vector<double>(length, 0.0));
  for (size_t i = 0; i < length; ++i) {
    const double w = ambi.channels[0][i];
    double x, y;
    ListenerFrameDipoles(ambi, pose, i, &x, &y);
    for (size_t c = 0; c < azimuths_ccw.size(); ++c) {
      if (silent[c]) continue;
      out.channels[c][i] = 0.5 * (w + std::cos(azimuths_ccw[c]) * x +
                                  std::sin(azimuths_ccw[c]) * y);
    }
  }
  return out;
}

}  // namespace

ImpulseResponse DecodeSpeakers(const ImpulseResponse& ambisonic,
                               ChannelLayout layout,
                               const ListenerPose& pose) {
  const double d30 = DegToRad(30), d45 = DegToRad(45), d90 = DegToRad(90),
               d110 = DegToRad(110), d135 = DegToRad(135),
               d150 = DegToRad(150);
  switch (layout) {
    case ChannelLayout::kStereo:
      return DecodeCardioids(ambisonic, pose, {d30, -d30}, layout,
                             {false, false});
    case ChannelLayout::kQuad:
      return DecodeCardioids(ambisonic, pose, {d45, -d45, d135, -d135},
                             layout, {false, false, false, false});
    case ChannelLayout::kSurround51:
      // L R C LFE Ls Rs; the LFE channel carries no decoded signal.
      return DecodeCardioids(ambisonic, pose,
                             {d30, -d30, 0.0, 0.0, d110, -d110}, layout,
                             {false, false, false, true, false, false});
    case ChannelLayout::kSurround71:
      // L R C LFE Lss Rss Lrs Rrs.
      return DecodeCardioids(
          ambisonic, pose, {d30, -d30, 0.0, 0.0, d90, -d90, d150, -d150},
          layout,
          {false, false, false, true, false, false, false, false});
    default:
      throw ConfigError("DecodeSpeakers: unsupported layout");
  }
}

ImpulseResponse ToBinaural(const ImpulseResponse& ambisonic,
                           const HeadModel& head, const ListenerPose& pose) {
  (void)head;
  if (ambisonic.layout != ChannelLayout::kAmbisonics ||
      ambisonic.ambisonics_order < 1)
    throw ConfigError("ToBinaural needs an ambisonic IR of order >= 1");
  // Virtual cardioids at the ears (+90 deg = left in CCW convention).
  ImpulseResponse out = DecodeCardioids(
      ambisonic, pose, {DegToRad(90), -DegToRad(90)}, ChannelLayout::kBinaural,
      {false, false});
  out.layout = ChannelLayout::kBinaural;
  return out;
}

namespace {

// Renders one event binaurally: per-ear delay from the Woodworth formula and
// per-band head-shadow gains (far ear attenuated, near ear slightly boosted).
void AddBinauralPulse(std::vector<std::vector<double>>& ears,
                      const FilterBank& fb, const FrequencyBands& bands,
                      const EventPulse& ev, const HeadModel& head,
                      const ListenerPose& pose, int sampling_rate,
                      double speed_of_sound, double gain) {
  const double azimuth = pose.AzimuthOf(ev.direction);  // + = right
  const double elevation = pose.ElevationOf(ev.direction);
  const double itd = WoodworthItd(head, azimuth, elevation, speed_of_sound);
  // Right leads for positive azimuth: right delay -itd/2, left +itd/2.
  const double left_delay = ev.delay_s + 0.5 * itd;
  const double right_delay = ev.delay_s - 0.5 * itd;
  const double shadow = std::abs(std::sin(azimuth)) * std::cos(elevation);

  std::array<double, kMaxBands> left_amp{}, right_amp{};
  for (int m = 0; m < bands.size(); ++m) {
    const double f = bands.Center(m);
    const double ild_db = head.max_shadow_db * shadow * f /
                          (f + head.shadow_corner_hz);
    const double near_gain = std::pow(10.0, 0.25 * ild_db / 20.0);
    const double far_gain = std::pow(10.0, -0.75 * ild_db / 20.0);
    const bool source_right = azimuth >= 0.0;
    left_amp[m] = ev.amplitude[m] * (source_right ? far_gain : near_gain);
    right_amp[m] = ev.amplitude[m] * (source_right ? near_gain : far_gain);
  }
  AddPulse(ears[0], fb, left_amp, bands.size(), left_delay, sampling_rate,
           gain);
  AddPulse(ears[1], fb, right_amp, bands.size(), right_delay, sampling_rate,
           gain);
}

}  // namespace

RenderResult RenderIr(const Scene& scene, const Vec3& source,
                      const ListenerPose& listener,
                      const MicrophoneConfig& mic,
                      const SimulationParams& params, PathCache* cache,
                      const SynthesisOptions* synthesis_override) {
  mic.Validate();
  SynthesisOptions options;
  options.noise_seed = params.rng_seed;
  if (synthesis_override != nullptr) options = *synthesis_override;

  if (mic.layout == ChannelLayout::kArray) {
    // One independent mono simulation per capsule (same seed).
    RenderResult result;
    const double c = std::cos(listener.heading_rad);
    const double s = std::sin(listener.heading_rad);
    bool first = true;
    for (const Vec3& offset : mic.capsule_offsets) {
      const Vec3 world_offset(c * offset.x() - s * offset.y(),
                              s * offset.x() + c * offset.y(), offset.z());
      ListenerPose capsule = listener;
      capsule.position += world_offset;
      EnergyHistogram hist = Simulate(scene, source, capsule, params, cache);
      ImpulseResponse mono =
          SynthesizePressure(hist, params.bands, params.sampling_rate, options);
      if (first) {
        result.histogram = std::move(hist);
        result.ir.sampling_rate = params.sampling_rate;
        result.ir.layout = ChannelLayout::kArray;
        first = false;
      }
      result.ir.channels.push_back(std::move(mono.channels[0]));
    }
    return result;
  }

  // The histogram must carry at least the SH order the output needs.
  SimulationParams sim_params = params;
  if (mic.layout == ChannelLayout::kAmbisonics)
    sim_params.indirect_sh_order =
        std::max(sim_params.indirect_sh_order, mic.ambisonics_order);
  else if (mic.layout != ChannelLayout::kMono)
    sim_params.indirect_sh_order = std::max(sim_params.indirect_sh_order, 1);

  RenderResult result;
  result.histogram = Simulate(scene, source, listener, sim_params, cache);
  const EnergyHistogram& hist = result.histogram;
  const FilterBank fb(params.bands, params.sampling_rate);
  SynthesisParts parts =
      BuildParts(hist, params.bands, params.sampling_rate, fb, options);
  const size_t length = parts.length;

  auto make_mono = [&]() {
    std::vector<double> mono = parts.indirect;
    for (const EventPulse& ev : parts.events)
      AddPulse(mono, fb, ev.amplitude, params.bands.size(), ev.delay_s,
               params.sampling_rate, parts.event_gain);
    return mono;
  };

  switch (mic.layout) {
    case ChannelLayout::kMono: {
      result.ir.sampling_rate = params.sampling_rate;
      result.ir.layout = ChannelLayout::kMono;
      result.ir.channels.assign(1, make_mono());
      break;
    }
    case ChannelLayout::kAmbisonics: {
      const int order = mic.ambisonics_order;
      ImpulseResponse indirect_mono;
      indirect_mono.sampling_rate = params.sampling_rate;
      indirect_mono.layout = ChannelLayout::kMono;
      indirect_mono.channels.assign(1, parts.indirect);
      ImpulseResponse ambi = ToAmbisonic(hist, indirect_mono, order);
      // Events encoded at their exact directions (direct at the direct SH
      // order budget, capped by the output order).
      double basis[ShCount(kMaxShOrder)];
      for (const EventPulse& ev : parts.events) {
        const int ev_order =
            ev.is_direct ? std::min(order, params.direct_sh_order) : order;
        EvalRealSh(ev_order, ev.direction, basis);
        for (int k = 0; k < ShCount(ev_order); ++k) {
          std::array<double, kMaxBands> amp{};
          for (int m = 0; m < params.bands.size(); ++m)
            amp[m] = ev.amplitude[m] * basis[k];
          AddPulse(ambi.channels[k], fb, amp, params.bands.size(), ev.delay_s,
                   params.sampling_rate, parts.event_gain);
        }
      }
      result.ir = std::move(ambi);
      break;
    }
    case ChannelLayout::kBinaural: {
      // Reverberant field decoded from order-1 ambisonics; events rendered
      // from their exact arrival directions with ITD/ILD.

      ImpulseResponse indirect_mono;
      indirect_mono.sampling_rate = params.sampling_rate;
      indirect_mono.layout = ChannelLayout::kMono;
      indirect_mono.channels.assign(1, parts.indirect);
      ImpulseResponse ambi = ToAmbisonic(hist, indirect_mono, 1);
      ImpulseResponse ears = ToBinaural(ambi, HeadModel{}, listener);
      HeadModel head;
      for (const EventPulse& ev : parts.events)
        AddBinauralPulse(ears.channels, fb, params.bands, ev, head, listener,
                         params.sampling_rate, scene.speed_of_sound,
                         parts.event_gain);
      result.ir = std::move(ears);
      break;
    }
    case ChannelLayout::kStereo:
    case ChannelLayout::kQuad:
    case ChannelLayout::kSurround51:
    case ChannelLayout::kSurround71: {

      ImpulseResponse mono_all;
      mono_all.sampling_rate = params.sampling_rate;
      mono_all.layout = ChannelLayout::kMono;
      mono_all.channels.assign(1, make_mono());
      // Events are encoded into the order-1 field before decoding.
      ImpulseResponse indirect_mono;
      indirect_mono.sampling_rate = params.sampling_rate;
      indirect_mono.layout = ChannelLayout::kMono;
      indirect_mono.channels.assign(1, parts.indirect);
      ImpulseResponse ambi = ToAmbisonic(hist, indirect_mono, 1);
      double basis[4];
      for (const EventPulse& ev : parts.events) {
        EvalRealSh(1, ev.direction, basis);
        for (int k = 0; k < 4; ++k) {
          std::array<double, kMaxBands> amp{};
          for (int m = 0; m < params.bands.size(); ++m)
            amp[m] = ev.amplitude[m] * basis[k];
          AddPulse(ambi.channels[k], fb, amp, params.bands.size(), ev.delay_s,
                   params.sampling_rate, parts.event_gain);
        }
      }
      result.ir = DecodeSpeakers(ambi, mic.layout, listener);
      break;
    }
    case ChannelLayout::kArray:
      break;  // handled above
  }
  (void)length;
  return result;
}

}  // namespace echotrace
