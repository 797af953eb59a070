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
// End-to-end validation checks. Every tolerance here is part of the
// project's acceptance contract and is fixed in code, not configurable.

#include "echotrace/validation.h"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "echotrace/audio.h"
#include "echotrace/metrics.h"
#include "echotrace/oracle.h"
#include "echotrace/propagation.h"
#include "echotrace/rng.h"
#include "echotrace/spatial.h"
#include "echotrace/wav.h"

namespace echotrace {

namespace {

std::string Format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

AcousticMaterial FlatMaterial(double absorption, double scattering,
                              double transmission = 0.0) {
  AcousticMaterial m;
  m.name = "flat";
  m.absorption = CoefficientList::FromPairs({1000.0, absorption});
  m.scattering = CoefficientList::FromPairs({1000.0, scattering});
  if (transmission > 0.0)
    m.transmission = CoefficientList::FromPairs({1000.0, transmission});
  return m;
}

Scene MakeBoxScene(const Vec3& dims, double absorption, double scattering) {
  return BuildSceneWithMaterial(MakeShoeboxMesh(dims),
                                FlatMaterial(absorption, scattering));
}

// Oracle-comparison parameter base: specular surfaces, no diffraction,
// transmission, or air absorption (the analytic references exclude them).
SimulationParams OracleParams() {
  SimulationParams p;
  p.diffraction_enabled = false;
  p.transmission_enabled = false;
  p.air_absorption_enabled = false;
  p.indirect_sh_order = 0;
  p.direct_sh_order = 0;
  return p;
}

struct PassTracker {
  bool ok = true;
  std::string first_failure;

  void Expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

}  // namespace

// --------------------------------------------------------------------------
// c01: specular shoebox against the image-source oracle.
// --------------------------------------------------------------------------
CheckResult CheckShoeboxOracle(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c01", "shoebox-oracle", false, ""};

  const Vec3 dims(4.0, 3.0, 2.5);
  const Vec3 source(1.2, 1.1, 1.3);
  const Vec3 receiver(2.6, 1.9, 1.2);
  Scene scene = MakeBoxScene(dims, 0.2, 0.0);

  SimulationParams params = OracleParams();
  params.num_source_rays = 1000000;
  params.max_source_depth = 2;
  params.num_listener_rays = 1024;
  params.max_listener_depth = 2;
  params.max_ir_seconds = 0.2;
  params.thread_count = 1;
  params.rng_seed = 7;

  ListenerPose pose{receiver, 0.0};
  EnergyHistogram hist = Simulate(scene, source, pose, params);
  const double elapsed = LastSimulateSeconds();

  Shoebox box = Shoebox::Uniform(dims, 0.2, source, receiver);
  const auto arrivals = ImageSourceArrivals(box, 2);
  const double bin = params.BinSeconds();

  PassTracker t;
  t.Expect(elapsed < 60.0, Format("runtime %.1fs >= 60s", elapsed));

  // Direct delay.
  t.Expect(hist.direct.has_value(), "missing direct sound");
  const double direct_delay = (source - receiver).norm() / scene.speed_of_sound;
  if (hist.direct)
    t.Expect(std::abs(hist.direct->delay_s - direct_delay) <= bin,
             "direct delay off by more than one bin");

  // First-order clusters against the six first-order images.
  std::vector<const EarlyReflection*> first_order;
  for (const auto& er : hist.early_reflections)
    if (er.bounce_count == 1) first_order.push_back(&er);
  t.Expect(first_order.size() == 6,
           Format("first-order cluster count %zu != 6", first_order.size()));

  int images_checked = 0;
  double worst_energy_err = 0.0, worst_delay_err = 0.0;
  for (const auto& a : arrivals) {
    if (a.order != 1) continue;
    ++images_checked;
    const EarlyReflection* match = nullptr;
    double best = 1e9;
    for (const auto* er : first_order) {
      const double d = std::abs(er->delay_s - a.delay_s);
      if (d < best) {
        best = d;
        match = er;
      }
    }
    t.Expect(match != nullptr && best <= bin,
             Format("no cluster within one bin of image at %.4fms",
                    a.delay_s * 1e3));
    worst_delay_err = std::max(worst_delay_err, best);
    if (match != nullptr) {
      const double energy = match->band_energy[0];
      const double rel = std::abs(energy - a.energy) / a.energy;
      worst_energy_err = std::max(worst_energy_err, rel);
      t.Expect(rel <= 0.05,
               Format("first-order energy off by %.1f%% (> 5%%)", rel * 100));
    }
  }
  t.Expect(images_checked == 6, "oracle image enumeration failed");

  result.passed = t.ok;
  result.detail =
      t.ok ? Format("6/6 first-order clusters; worst energy err %.2f%%, "
                    "worst delay err %.2f bins; %.1fs single-threaded",
                    worst_energy_err * 100, worst_delay_err / bin, elapsed)
           : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c02: broadband RT60 versus the Eyring prediction.
// --------------------------------------------------------------------------
CheckResult CheckReverberationSanity(const ValidationOptions& options) {
  CheckResult result{"c02", "reverberation-sanity", false, ""};
  PassTracker t;
  double worst_rel = 0.0;

  // Eyring is a diffuse-field prediction; the comparison runs with fully
  // scattering walls so the field is ergodic. (Specular boxes develop
  // slow axial flutter families that no statistical formula models.)
  const std::vector<Vec3> sizes = {{4.0, 3.0, 2.5}, {7.0, 5.0, 3.0}};
  const std::vector<double> alphas = {0.1, 0.2, 0.4};
  for (const Vec3& dims : sizes) {
    double previous_rt60 = 1e9;
    for (double alpha : alphas) {
      Scene scene = MakeBoxScene(dims, alpha, 1.0);
      Shoebox box = Shoebox::Uniform(dims, alpha, 0.3 * dims, 0.7 * dims);
      const double eyring = EyringRt60(box);

      SimulationParams params = OracleParams();
      params.bands = FrequencyBands::Octaves(1000.0, 1);
      params.num_source_rays = 65536;
      params.max_source_depth = 96;
      params.num_listener_rays = 1024;
      params.max_listener_depth = 2;
      params.max_ir_seconds = std::clamp(1.8 * eyring, 0.5, 2.5);
      params.thread_count = options.thread_count;
      params.rng_seed = 11;
      params.direct_enabled = false;  // tail only

      EnergyHistogram hist =
          Simulate(scene, 0.3 * dims, ListenerPose{0.7 * dims, 0.0}, params);
      SynthesisOptions synth;
      synth.noise_seed = 5;
      ImpulseResponse ir = SynthesizePressure(hist, params.bands,
                                              params.sampling_rate, synth);
      const Rt60Result rt = Rt60(ir.channels[0], params.sampling_rate);
      t.Expect(rt.valid, Format("RT60 invalid for box %.0fx%.0fx%.1f a=%.1f",
                                dims.x(), dims.y(), dims.z(), alpha));
      if (!rt.valid) continue;
      const double rel = std::abs(rt.seconds - eyring) / eyring;
      worst_rel = std::max(worst_rel, rel);
      t.Expect(rel <= 0.25,
               Format("RT60 %.3fs vs Eyring %.3fs (%.0f%% > 25%%), a=%.1f",
                      rt.seconds, eyring, rel * 100, alpha));
      t.Expect(rt.seconds < previous_rt60,
               Format("RT60 not strictly decreasing in absorption (a=%.1f)",
                      alpha));
      previous_rt60 = rt.seconds;
    }
  }
  result.passed = t.ok;
  result.detail = t.ok ? Format("6/6 boxes within 25%% of Eyring (worst %.0f%%),"
                                " monotone in absorption",
                                worst_rel * 100)
                       : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c03: DRR against the image-source oracle, with the bias canary.
// --------------------------------------------------------------------------
CheckResult CheckDrrUnbiased(const ValidationOptions& options) {
  CheckResult result{"c03", "drr-unbiased", false, ""};
  const Vec3 dims(4.0, 3.0, 2.5);
  const Vec3 source(1.2, 1.1, 1.3);
  const Vec3 receiver(2.6, 1.9, 1.2);
  Scene scene = MakeBoxScene(dims, 0.2, 0.0);

  SimulationParams params = OracleParams();
  params.num_source_rays = 65536;
  params.max_source_depth = 96;
  params.num_listener_rays = 1024;
  params.max_listener_depth = 2;
  params.max_ir_seconds = 1.0;
  params.thread_count = options.thread_count;
  params.rng_seed = 13;

  EnergyHistogram hist =
      Simulate(scene, source, ListenerPose{receiver, 0.0}, params);

  // The oracle arrivals run through the same synthesis and the same DRR
  // measurement as the simulation, so the comparison isolates the energy
  // calibration of the tracer rather than the measurement operator.
  constexpr double kWindow = 0.0025;
  Shoebox box = Shoebox::Uniform(dims, 0.2, source, receiver);
  const auto arrivals = ImageSourceArrivals(box, 10);
  EnergyHistogram oracle_hist(params.BinSeconds(), params.max_ir_seconds,
                              params.bands.size(), 0);
  for (const ImageArrival& a : arrivals) {
    if (a.order == 0) {
      DirectSound direct;
      direct.delay_s = a.delay_s;
      direct.band_energy.assign(params.bands.size(), a.energy);
      direct.direction = (a.image_position - receiver).normalized();
      oracle_hist.direct = direct;
    } else if (a.order <= 2) {
      // Same representation as the tracer output: discrete events for the
      // early orders, noise-modulated bins for the rest.
      EarlyReflection er;
      er.delay_s = a.delay_s;
      er.band_energy.assign(params.bands.size(), a.energy);
      er.direction = (a.image_position - receiver).normalized();
      er.bounce_count = a.order;
      oracle_hist.early_reflections.push_back(er);
    } else {
      std::vector<double> e(params.bands.size(), a.energy);
      oracle_hist.Accumulate(a.delay_s, e,
                             (a.image_position - receiver).normalized());
    }
  }
  SynthesisOptions oracle_synth;
  oracle_synth.noise_seed = 4242;
  ImpulseResponse oracle_ir = SynthesizePressure(
      oracle_hist, params.bands, params.sampling_rate, oracle_synth);
  const DrrResult oracle =
      Drr(oracle_ir.channels[0], params.sampling_rate, kWindow);
  const double oracle_drr = oracle.db;

  SynthesisOptions synth;
  synth.noise_seed = 21;
  synth.indirect_pressure_scale = options.inject_indirect_bias;
  ImpulseResponse ir =
      SynthesizePressure(hist, params.bands, params.sampling_rate, synth);
  const DrrResult drr = Drr(ir.channels[0], params.sampling_rate, kWindow);

  SynthesisOptions biased = synth;
  biased.indirect_pressure_scale *= std::sqrt(4.0 * kPi);
  ImpulseResponse ir_biased =
      SynthesizePressure(hist, params.bands, params.sampling_rate, biased);
  const DrrResult drr_biased =
      Drr(ir_biased.channels[0], params.sampling_rate, kWindow);

  PassTracker t;
  t.Expect(oracle.valid, "oracle DRR computation failed");
  t.Expect(drr.valid && drr_biased.valid, "DRR computation failed");
  const double err = std::abs(drr.db - oracle_drr);
  const double biased_err = std::abs(drr_biased.db - oracle_drr);
  t.Expect(err <= 1.5,
           Format("DRR %.2f dB vs oracle %.2f dB: |err| %.2f > 1.5 dB",
                  drr.db, oracle_drr, err));
  t.Expect(biased_err >= 9.0,
           Format("sqrt(4pi) canary moved DRR only %.1f dB (< 9 dB)",
                  biased_err));

  result.passed = t.ok;
  result.detail =
      t.ok ? Format("DRR %.2f dB vs oracle %.2f dB (err %.2f dB); canary "
                    "fails by %.1f dB as required",
                    drr.db, oracle_drr, err, biased_err)
           : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c04: high-speed versus high-quality tradeoff.
// --------------------------------------------------------------------------
CheckResult CheckSpeedQualityTradeoff(const ValidationOptions& options) {
  CheckResult result{"c04", "speed-quality-tradeoff", false, ""};
  Pcg32 rng(424242, 5);

  std::vector<std::vector<double>> irs_hq, irs_hs;
  double time_hq = 0.0, time_hs = 0.0;
  int sampling_rate = 0;

  for (int i = 0; i < 10; ++i) {
    const Vec3 dims(3.0 + 5.0 * rng.NextDouble(), 2.5 + 3.5 * rng.NextDouble(),
                    2.4 + 1.1 * rng.NextDouble());
    const double alpha = 0.1 + 0.3 * rng.NextDouble();
    Scene scene = MakeBoxScene(dims, alpha, 1.0);
    const Vec3 source(0.25 * dims.x(), 0.3 * dims.y(), 0.5 * dims.z());
    const Vec3 receiver(0.7 * dims.x(), 0.65 * dims.y(), 0.55 * dims.z());
    const double eyring =
        EyringRt60(Shoebox::Uniform(dims, alpha, source, receiver));

    for (RenderMode mode : {RenderMode::kHighQuality, RenderMode::kHighSpeed}) {
      SimulationParams params = Preset(mode);
      params.diffraction_enabled = false;
      params.transmission_enabled = false;
      params.air_absorption_enabled = false;
      params.indirect_sh_order = 0;
      params.direct_sh_order = 0;
      params.bands = FrequencyBands::Octaves(1000.0, 1);
      params.max_source_depth = 96;
      params.num_listener_rays = std::max(512, params.num_listener_rays / 64);
      params.max_listener_depth = 2;
      params.max_ir_seconds = std::clamp(1.8 * eyring, 0.5, 2.5);
      params.thread_count = options.thread_count;
      params.rng_seed = 1000 + i;
      params.direct_enabled = false;
      sampling_rate = params.sampling_rate;

      EnergyHistogram hist =
          Simulate(scene, source, ListenerPose{receiver, 0.0}, params);
      (mode == RenderMode::kHighQuality ? time_hq : time_hs) +=
          LastSimulateSeconds();
      SynthesisOptions synth;
      synth.noise_seed = 5;
      ImpulseResponse ir = SynthesizePressure(hist, params.bands,
                                              params.sampling_rate, synth);
      (mode == RenderMode::kHighQuality ? irs_hq : irs_hs)
          .push_back(std::move(ir.channels[0]));
    }
  }

  std::vector<double> errors;
  for (size_t i = 0; i < irs_hq.size(); ++i) {
    const Rt60Result hq = Rt60(irs_hq[i], sampling_rate);
    const Rt60Result hs = Rt60(irs_hs[i], sampling_rate);
    if (hq.valid && hs.valid)
      errors.push_back(std::abs(hs.seconds - hq.seconds) / hq.seconds * 100.0);
  }
  PassTracker t;
  t.Expect(errors.size() >= 8, "too many invalid RT60 pairs");
  std::sort(errors.begin(), errors.end());
  const double median =
      errors.empty() ? 1e9 : errors[errors.size() / 2];
  t.Expect(median <= 20.0,
           Format("median relative RT60 error %.1f%% > 20%%", median));
  const double speedup = time_hq / std::max(1e-9, time_hs);
  t.Expect(speedup >= 4.0, Format("speedup %.1fx < 4x", speedup));

  result.passed = t.ok;
  result.detail =
      t.ok ? Format("median relative RT60 error %.1f%%; high-speed %.1fx "
                    "faster (%.2fs vs %.2fs, reported not asserted beyond 4x)",
                    median, speedup, time_hs, time_hq)
           : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c05: metric suite on synthetic decays.
// --------------------------------------------------------------------------
CheckResult CheckSyntheticDecayMetrics(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c05", "synthetic-decay-metrics", false, ""};
  PassTracker t;

  const int fs = 44100;
  const double tau = 0.1;
  FrequencyBands bands = FrequencyBands::Default();
  EnergyHistogram hist(1.0 / fs, 1.2, bands.size(), 0);
  {
    std::vector<double> e(bands.size());
    for (int i = 0; i < static_cast<int>(1.2 * fs); ++i) {
      const double energy = std::exp(-2.0 * i / (tau * fs));
      std::fill(e.begin(), e.end(), energy);
      hist.Accumulate(i / static_cast<double>(fs), e, Vec3(0, 0, 1));
    }
  }
  SynthesisOptions synth;
  synth.noise_seed = 33;
  ImpulseResponse ir = SynthesizePressure(hist, bands, fs, synth);

  const Rt60Result rt = Rt60(ir.channels[0], fs);
  t.Expect(rt.valid, "RT60 invalid on synthetic exponential IR");
  const double expected_rt = 6.9078 * tau;
  if (rt.valid)
    t.Expect(std::abs(rt.seconds - expected_rt) / expected_rt <= 0.02,
             Format("RT60 %.4fs vs %.4fs (>2%%)", rt.seconds, expected_rt));

  // EDC linearity and slope.
  const EnergyDecayCurve edc = SchroederEdc(ir.channels[0], fs);
  t.Expect(edc.valid, "EDC invalid");
  double slope = 0.0, r2 = 0.0;
  if (edc.valid) {
    size_t begin = 0, end = 0;
    for (size_t i = 0; i < edc.db.size(); ++i) {
      if (begin == 0 && edc.db[i] <= -5.0) begin = i;
      if (edc.db[i] <= -35.0) {
        end = i;
        break;
      }
    }
    t.Expect(end > begin + 100, "EDC fit range too short");
    if (end > begin + 100) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
      const double n = static_cast<double>(end - begin);
      for (size_t i = begin; i < end; ++i) {
        const double x = i / static_cast<double>(fs);
        sx += x;
        sy += edc.db[i];
        sxx += x * x;
        sxy += x * edc.db[i];
        syy += edc.db[i] * edc.db[i];
      }
      slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double ss_tot = syy - sy * sy / n;
      double ss_res = 0.0;
      const double intercept = (sy - slope * sx) / n;
      for (size_t i = begin; i < end; ++i) {
        const double x = i / static_cast<double>(fs);
        const double r = edc.db[i] - (intercept + slope * x);
        ss_res += r * r;
      }
      r2 = 1.0 - ss_res / ss_tot;
      const double expected_slope = -86.8589;  // -8.6859 / tau dB per second
      t.Expect(std::abs(slope - expected_slope) / std::abs(expected_slope) <=
                   0.05,
               Format("EDC slope %.1f dB/s vs %.1f dB/s", slope,
                      expected_slope));
      t.Expect(r2 > 0.99, Format("EDC linearity R^2 %.4f <= 0.99", r2));
    }
  }

  // Constructed 10 dB DRR.
  {
    std::vector<double> drr_ir(fs, 0.0);
    const int onset = 441;
    drr_ir[onset] = 1.0;  // direct energy 1.0
    const int tail_begin = onset + static_cast<int>(0.0025 * fs) + 2;
    const int tail_len = fs / 2;
    const double amp = std::sqrt(0.1 / tail_len);
    for (int i = 0; i < tail_len; ++i) drr_ir[tail_begin + i] = amp;
    const DrrResult drr = Drr(drr_ir, fs);
    t.Expect(drr.valid && std::abs(drr.db - 10.0) <= 0.1,
             Format("constructed DRR %.2f dB != 10 +- 0.1 dB", drr.db));
    result.detail = Format(
        "RT60 %.4fs (expect %.4fs), EDC slope %.1f dB/s (R^2=%.4f), "
        "constructed DRR %.2f dB",
        rt.seconds, expected_rt, slope, r2, drr.db);
  }

  result.passed = t.ok;
  if (!t.ok) result.detail = t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c06: byte-identical renders across repeats and thread counts.
// --------------------------------------------------------------------------
CheckResult CheckDeterminism(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c06", "determinism", false, ""};
  const Vec3 dims(4.0, 3.0, 2.5);
  Scene scene = MakeBoxScene(dims, 0.3, 0.4);
  const Vec3 source(1.0, 1.0, 1.2);
  const ListenerPose pose{Vec3(3.0, 2.0, 1.5), DegToRad(30)};

  MicrophoneConfig mic;
  mic.layout = ChannelLayout::kBinaural;

  auto render_to_file = [&](int threads, const std::string& path) {
    SimulationParams params;
    params.num_source_rays = 8192;
    params.max_source_depth = 24;
    params.num_listener_rays = 4096;
    params.max_listener_depth = 4;
    params.max_ir_seconds = 0.5;
    params.thread_count = threads;
    params.rng_seed = 99;
    RenderResult render = RenderIr(scene, source, pose, mic, params);
    WriteWav(path, render.ir.channels, params.sampling_rate);
  };

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "echotrace_validate";
  fs::create_directories(dir);
  const std::string a = (dir / "det_t1_a.wav").string();
  const std::string b = (dir / "det_t1_b.wav").string();
  const std::string c = (dir / "det_t4.wav").string();
  render_to_file(1, a);
  render_to_file(1, b);
  render_to_file(4, c);

  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
  };
  const std::string bytes_a = slurp(a), bytes_b = slurp(b), bytes_c = slurp(c);
  PassTracker t;
  t.Expect(!bytes_a.empty(), "render produced no bytes");
  t.Expect(bytes_a == bytes_b, "repeat render differs (same thread count)");
  t.Expect(bytes_a == bytes_c, "thread count 4 differs from thread count 1");
  result.passed = t.ok;
  result.detail = t.ok ? Format("byte-identical across repeats and threads "
                                "{1,4} (%zu bytes)",
                                bytes_a.size())
                       : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c07: acoustic continuity suite.
// --------------------------------------------------------------------------
CheckResult CheckContinuity(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c07", "continuity", false, ""};
  PassTracker t;

  // Crossfade weights: exact endpoints, midpoint, and complement sum.
  t.Expect(CrossfadeWeight(0.0, 0.05) == 0.0, "crossfade w(0) != 0");
  t.Expect(CrossfadeWeight(0.05, 0.05) == 1.0, "crossfade w(T) != 1");
  t.Expect(CrossfadeWeight(0.025, 0.05) == 0.5, "crossfade w(T/2) != 0.5");
  for (int i = 0; i <= 20; ++i) {
    const double w = CrossfadeWeight(i * 0.0025, 0.05);
    t.Expect(w + (1.0 - w) == 1.0, "crossfade complement sum != 1");
  }

  const Vec3 dims(5.0, 4.0, 3.0);
  Scene scene = MakeBoxScene(dims, 0.35, 0.0);
  const Vec3 source(1.0, 2.0, 1.5);

  SimulationParams params;
  params.diffraction_enabled = false;
  params.transmission_enabled = false;
  params.air_absorption_enabled = false;
  params.num_source_rays = 16384;
  params.max_source_depth = 48;
  params.num_listener_rays = 1024;
  params.max_listener_depth = 2;
  params.max_ir_seconds = 0.4;
  params.rng_seed = 3;
  params.indirect_sh_order = 1;
  MicrophoneConfig mono;

  // Band-limited source: sum of tones below 5 kHz.
  AudioClip src;
  src.sampling_rate = params.sampling_rate;
  src.channels.assign(1, std::vector<double>(params.sampling_rate * 2, 0.0));
  for (size_t i = 0; i < src.channels[0].size(); ++i) {
    const double ts = static_cast<double>(i) / params.sampling_rate;
    src.channels[0][i] = 0.4 * std::sin(2 * kPi * 313.0 * ts) +
                         0.3 * std::sin(2 * kPi * 997.0 * ts + 1.0) +
                         0.2 * std::sin(2 * kPi * 3203.0 * ts + 2.0);
  }

  // Static trajectory equals whole-signal convolution.
  {
    Trajectory traj;
    traj.step_seconds = 0.15;
    traj.crossfade_seconds = 0.05;
    for (int i = 0; i < 5; ++i)
      traj.steps.push_back(
          {i * 0.15, Vec3(3.5, 2.5, 1.5), DegToRad(10)});
    AudioClip moved = RenderTrajectory(src, scene, source, traj, mono, params);
    RenderResult ref =
        RenderIr(scene, source, ListenerPose{Vec3(3.5, 2.5, 1.5), DegToRad(10)},
                 mono, params);
    AudioClip whole = Convolve(src, ref.ir);
    double peak = 0.0, worst = 0.0;
    for (size_t i = 0; i < moved.length(); ++i)
      peak = std::max(peak, std::abs(whole.channels[0][i]));
    for (size_t i = 0; i < moved.length(); ++i)
      worst = std::max(worst, std::abs(moved.channels[0][i] -
                                       whole.channels[0][i]));
    t.Expect(worst <= 1e-6 * std::max(peak, 1e-12),
             Format("static trajectory differs from whole convolution "
                    "(rel %.2e)",
                    worst / std::max(peak, 1e-12)));
  }

  // Moving trajectory: step-boundary jumps bounded by intra-step jumps.
  {
    Trajectory traj;
    traj.step_seconds = 0.15;
    traj.crossfade_seconds = 0.05;
    for (int i = 0; i < 8; ++i)
      traj.steps.push_back(
          {i * 0.15, Vec3(1.5 + 0.3 * i, 2.0, 1.5), 0.0});
    AudioClip moved = RenderTrajectory(src, scene, source, traj, mono, params);
    const int step_samples = static_cast<int>(0.15 * params.sampling_rate);
    double max_intra = 0.0, max_boundary = 0.0;
    for (size_t i = 1; i < moved.length(); ++i) {
      const double jump =
          std::abs(moved.channels[0][i] - moved.channels[0][i - 1]);
      if (i % step_samples == 0)
        max_boundary = std::max(max_boundary, jump);
      else
        max_intra = std::max(max_intra, jump);
    }
    t.Expect(max_boundary <= 2.0 * max_intra,
             Format("boundary jump %.3e > 2x intra-step jump %.3e",
                    max_boundary, max_intra));
  }

  // Binaural ITD at +90 degrees azimuth.
  {
    Scene anechoic = MakeBoxScene(Vec3(10, 10, 4), 1.0, 0.0);
    SimulationParams ap = params;
    ap.num_source_rays = 1024;
    ap.max_ir_seconds = 0.1;
    MicrophoneConfig ears;
    ears.layout = ChannelLayout::kBinaural;
    // Listener faces +x; the source sits 2 m to the right (-y side).
    const ListenerPose pose{Vec3(5, 5, 1.5), 0.0};
    const Vec3 right_source(5, 3, 1.5);
    RenderResult render = RenderIr(anechoic, right_source, pose, ears, ap);
    auto peak_index = [](const std::vector<double>& x) {
      size_t best = 0;
      for (size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[best])) best = i;
      return static_cast<long long>(best);
    };
    const long long left = peak_index(render.ir.channels[0]);
    const long long right = peak_index(render.ir.channels[1]);
    const long long itd_samples = left - right;  // right leads
    t.Expect(std::abs(itd_samples - 29) <= 2,
             Format("ITD %lld samples != 29 +- 2", itd_samples));
    double left_e = 0.0, right_e = 0.0;
    for (double s : render.ir.channels[0]) left_e += s * s;
    for (double s : render.ir.channels[1]) right_e += s * s;
    t.Expect(right_e > left_e, "right ear not louder for a right source");
    if (t.ok)
      result.detail = Format(
          "static-trajectory identity within 1e-6; weights exact; boundary "
          "jumps bounded; ITD %lld samples",
          itd_samples);
  }

  result.passed = t.ok;
  if (!t.ok) result.detail = t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c08: smooth direct-sound diffraction across a shadow boundary.
// --------------------------------------------------------------------------
CheckResult CheckDiffractionSmoothness(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c08", "diffraction-smoothness", false, ""};

  // Free-standing wall panel at x = 0 spanning y in [-2, 2], z in [0, 3].
  TriangleMesh panel;
  panel.vertices = {{0, -2, 0}, {0, 2, 0}, {0, 2, 3}, {0, -2, 3}};
  panel.triangles = {{0, 1, 2}, {0, 2, 3}};
  panel.categories = {"wall", "wall"};
  Scene scene = BuildSceneWithMaterial(panel, FlatMaterial(0.2, 0.0));

  const Vec3 listener(-2.0, 0.0, 1.5);
  SimulationParams params;
  params.indirect_enabled = false;
  params.transmission_enabled = false;
  params.air_absorption_enabled = false;

  // The source sweeps a constant-radius arc around the listener in 1 cm
  // steps, crossing the shadow boundary of the panel's y=2 edge at 45
  // degrees; constant distance isolates the occlusion transition.
  auto sweep = [&](bool diffraction) {
    SimulationParams p = params;
    p.diffraction_enabled = diffraction;
    std::vector<double> energies;
    const double radius = 5.0;
    const double phi0 = 0.60, phi1 = 1.00;  // radians; boundary at pi/4
    const int steps = static_cast<int>((phi1 - phi0) * radius / 0.01);
    for (int i = 0; i <= steps; ++i) {
      const double phi = phi0 + (phi1 - phi0) * i / steps;
      const Vec3 source(-2.0 + radius * std::cos(phi),
                        radius * std::sin(phi), 1.5);
      auto direct = ComputeDirect(scene, source, listener, p);
      double total = 0.0;
      if (direct) {
        for (double e : direct->band_energy) total += e;
      }
      energies.push_back(total);
    }
    return energies;
  };

  PassTracker t;
  const std::vector<double> smooth = sweep(true);
  const std::vector<double> hard = sweep(false);

  auto step_db = [](double a, double b) {
    if (a <= 0.0 || b <= 0.0) return 200.0;
    return std::abs(10.0 * std::log10(b / a));
  };

  double max_step_on = 0.0;
  bool monotone = true;
  for (size_t i = 1; i < smooth.size(); ++i) {
    max_step_on = std::max(max_step_on, step_db(smooth[i - 1], smooth[i]));
    if (smooth[i] + 1e-15 < smooth[i - 1]) monotone = false;
  }
  double max_step_off = 0.0;
  for (size_t i = 1; i < hard.size(); ++i)
    max_step_off = std::max(max_step_off, step_db(hard[i - 1], hard[i]));

  t.Expect(monotone, "diffracted direct energy not monotone across boundary");
  t.Expect(max_step_on <= 3.0,
           Format("max step %.2f dB > 3 dB with diffraction on", max_step_on));
  t.Expect(max_step_off > 20.0,
           Format("defect case shows only %.1f dB step (<= 20 dB)",
                  max_step_off));

  result.passed = t.ok;
  result.detail =
      t.ok ? Format("monotone sweep, max step %.2f dB with diffraction on; "
                    "%.0f dB step with it off",
                    max_step_on, max_step_off)
           : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c09: material randomization statistics.
// --------------------------------------------------------------------------
CheckResult CheckRandomization(const ValidationOptions& options) {
  (void)options;
  CheckResult result{"c09", "randomization", false, ""};
  PassTracker t;

  MaterialDatabase db;
  AcousticMaterial m;
  m.name = "mid";
  m.absorption = CoefficientList::FromPairs(
      {125, 0.3, 500, 0.4, 1000, 0.5, 2000, 0.6, 4000, 0.7});
  m.scattering = CoefficientList::FromPairs({1000, 0.5});
  db.Add(m);
  db.SetDefaultMaterialName("mid");
  db.SetCategoryCandidates("floor", {"mid"});
  const std::vector<std::string> categories(12, "floor");

  // Reproducibility under a fixed seed.
  const MaterialTable a =
      ResolveAssignment(db, categories, AssignmentPolicy::kRandomized, 77);
  const MaterialTable b =
      ResolveAssignment(db, categories, AssignmentPolicy::kRandomized, 77);
  t.Expect(a.materials.size() == b.materials.size() &&
               a.materials[0].absorption.values ==
                   b.materials[0].absorption.values &&
               a.triangle_material == b.triangle_material,
           "randomized assignment not reproducible under a fixed seed");

  // Clamped-Gaussian statistics over 1000 draws.
  const std::vector<double> base = m.absorption.values;
  std::vector<double> mean(base.size(), 0.0), var(base.size(), 0.0);
  const int draws = 1000;
  std::vector<std::vector<double>> samples(
      base.size(), std::vector<double>());
  for (int d = 0; d < draws; ++d) {
    const MaterialTable table =
        ResolveAssignment(db, categories, AssignmentPolicy::kRandomized, d);
    for (size_t i = 0; i < base.size(); ++i)
      samples[i].push_back(table.materials[0].absorption.values[i]);
  }
  for (size_t i = 0; i < base.size(); ++i) {
    double s = 0.0;
    for (double x : samples[i]) s += x;
    mean[i] = s / draws;
    double v = 0.0;
    for (double x : samples[i]) v += (x - mean[i]) * (x - mean[i]);
    var[i] = v / (draws - 1);
    t.Expect(std::abs(mean[i] - base[i]) <= 0.02,
             Format("coefficient %zu mean %.3f deviates from %.3f by > 0.02",
                    i, mean[i], base[i]));
    const double sd = std::sqrt(var[i]);
    t.Expect(sd >= 0.07 && sd <= 0.13,
             Format("coefficient %zu std %.3f outside [0.07, 0.13]", i, sd));
  }

  result.passed = t.ok;
  result.detail = t.ok ? "reproducible under fixed seed; clamped-Gaussian "
                         "mean/std within bounds over 1000 draws"
                       : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------
// c10: Monte-Carlo convergence of first-order reflected energy.
// --------------------------------------------------------------------------
CheckResult CheckMonteCarloConvergence(const ValidationOptions& options) {
  CheckResult result{"c10", "monte-carlo-convergence", false, ""};
  const Vec3 dims(4.0, 3.0, 2.5);
  const Vec3 source(1.2, 1.1, 1.3);
  const Vec3 receiver(2.6, 1.9, 1.2);
  Scene scene = MakeBoxScene(dims, 0.2, 0.0);

  Shoebox box = Shoebox::Uniform(dims, 0.2, source, receiver);
  const double oracle_first_order =
      OrderEnergy(ImageSourceArrivals(box, 1), 1);

  const std::vector<int> ray_counts = {10000, 100000, 1000000};
  std::vector<double> rms_errors;
  for (int n : ray_counts) {
    double sum_sq = 0.0;
    const int num_seeds = 8;
    for (int seed = 1; seed <= num_seeds; ++seed) {
      SimulationParams params = OracleParams();
      params.num_source_rays = n;
      params.max_source_depth = 2;
      params.num_listener_rays = 64;
      params.max_listener_depth = 2;
      params.max_ir_seconds = 0.2;
      params.thread_count = options.thread_count;
      params.rng_seed = seed;
      params.stratified_emission = false;  // plain MC scaling
      EnergyHistogram hist =
          Simulate(scene, source, ListenerPose{receiver, 0.0}, params);
      double total = 0.0;
      for (const auto& er : hist.early_reflections)
        if (er.bounce_count == 1) total += er.band_energy[0];
      const double rel = (total - oracle_first_order) / oracle_first_order;
      sum_sq += rel * rel;
    }
    rms_errors.push_back(std::sqrt(sum_sq / num_seeds));
  }

  // Log-log slope of error versus ray count.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < ray_counts.size(); ++i) {
    const double x = std::log10(static_cast<double>(ray_counts[i]));
    const double y = std::log10(rms_errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ray_counts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  PassTracker t;
  t.Expect(std::abs(slope + 0.5) <= 0.15,
           Format("log-log error slope %.3f outside -0.5 +- 0.15", slope));
  result.passed = t.ok;
  result.detail =
      t.ok ? Format("slope %.3f (errors %.3g / %.3g / %.3g at 1e4/1e5/1e6)",
                    slope, rms_errors[0], rms_errors[1], rms_errors[2])
           : t.first_failure;
  return result;
}

// --------------------------------------------------------------------------

std::vector<CheckResult> RunValidationSuite(const std::string& suite,
                                            const ValidationOptions& options) {
  using Check = CheckResult (*)(const ValidationOptions&);
  struct Entry {
    const char* id;
    Check fn;
  };
  static const Entry entries[] = {
      {"c01", CheckShoeboxOracle},        {"c02", CheckReverberationSanity},
      {"c03", CheckDrrUnbiased},          {"c04", CheckSpeedQualityTradeoff},
      {"c05", CheckSyntheticDecayMetrics},{"c06", CheckDeterminism},
      {"c07", CheckContinuity},           {"c08", CheckDiffractionSmoothness},
      {"c09", CheckRandomization},        {"c10", CheckMonteCarloConvergence},
  };

  std::vector<std::string> ids;
  if (suite == "all") {
    for (const Entry& e : entries) ids.push_back(e.id);
  } else if (suite == "shoebox") {
    ids = {"c01", "c02", "c03"};
  } else if (suite == "decay") {
    ids = {"c05"};
  } else if (suite == "continuity") {
    ids = {"c07"};
  } else {
    ids = {suite};
  }

  std::vector<CheckResult> results;
  for (const std::string& id : ids) {
    bool found = false;
    for (const Entry& e : entries) {
      if (id == e.id) {
        results.push_back(e.fn(options));
        found = true;
        break;
      }
    }
    if (!found)
      throw ConfigError("unknown validation suite or check '" + id + "'");
  }
  return results;
}

}  // namespace echotrace
