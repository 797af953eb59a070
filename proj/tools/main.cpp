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
// echotrace command-line frontend.
//
// Verbs: render-ir, render-trajectory, metrics, validate, gen-dataset.
// Exit codes: 0 success, 2 configuration error, 3 simulation error,
// 4 validation failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "echotrace/audio.h"
#include "echotrace/config_io.h"
#include "echotrace/metrics.h"
#include "echotrace/validation.h"
#include "echotrace/rng.h"
#include "echotrace/wav.h"

namespace fs = std::filesystem;
using namespace echotrace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitValidation = 4;

struct CommonArgs {
  std::string scene;
  std::string categories;
  std::string materials;
  std::string params_path;
  std::string preset = "high_quality";
  std::string material_policy = "fixed";
  double material_noise_sigma = 0.1;
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out = ".";
};

void AddCommonOptions(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--scene", args->scene, "Scene mesh (OBJ subset)");
  cmd->add_option("--categories", args->categories,
                  "Per-triangle category sidecar (one label per line)");
  cmd->add_option("--materials", args->materials,
                  "Material config JSON (default: built-in database)");
  cmd->add_option("--params", args->params_path, "Simulation params JSON");
  cmd->add_option("--preset", args->preset,
                  "Mode preset: high_quality | high_speed")
      ->check(CLI::IsMember({"high_quality", "high_speed"}));
  cmd->add_option("--material-policy", args->material_policy,
                  "Material assignment policy: fixed | randomized | uniform")
      ->check(CLI::IsMember({"fixed", "randomized", "uniform"}));
  cmd->add_option("--material-noise-sigma", args->material_noise_sigma,
                  "Std of the Gaussian coefficient noise (randomized policy)");
  cmd->add_option("--seed", args->seed, "RNG seed")
      ->each([args](const std::string&) { args->seed_set = true; });
  cmd->add_option("--threads", args->threads,
                  "Worker threads (default: ECHOTRACE_THREADS or 1)");
  cmd->add_option("--out", args->out, "Output directory");
}

int DefaultThreads() {
  const char* env = std::getenv("ECHOTRACE_THREADS");
  if (env == nullptr) return 1;
  const int value = std::atoi(env);
  return value >= 1 ? value : 1;
}

SimulationParams ResolveParams(const CommonArgs& args) {
  SimulationParams params;
  if (!args.params_path.empty())
    params = ParamsFromJsonFile(args.params_path);
  else
    params = Preset(RenderModeFromString(args.preset));
  if (args.seed_set) params.rng_seed = args.seed;
  params.thread_count = args.threads > 0 ? args.threads : DefaultThreads();
  if (!args.materials.empty()) params.custom_materials_enabled = true;
  params.Validate();
  return params;
}

JobConfig MakeJobConfig(const CommonArgs& args, const SimulationParams& params,
                        const Vec3& source, const ListenerPose& listener,
                        const MicrophoneConfig& mic) {
  // Input paths go into the sidecar; store them absolute so re-running the
  // job from the sidecar works regardless of the working directory.
  auto absolute = [](const std::string& p) {
    return p.empty() ? p : fs::absolute(p).string();
  };
  JobConfig config;
  config.scene_path = absolute(args.scene);
  config.category_sidecar_path = absolute(args.categories);
  config.materials_path = absolute(args.materials);
  config.params = params;
  if (args.material_policy == "randomized")
    config.material_policy = AssignmentPolicy::kRandomized;
  else if (args.material_policy == "uniform")
    config.material_policy = AssignmentPolicy::kUniform;
  config.material_noise_sigma = args.material_noise_sigma;
  config.source = source;
  config.listener = listener;
  config.mic = mic;
  return config;
}

MicrophoneConfig ResolveMic(const std::string& mic_name, int ambi_order,
                            const std::string& mic_config_path) {
  if (!mic_config_path.empty()) {
    std::ifstream f(mic_config_path);
    if (!f) throw ConfigError("cannot open mic config " + mic_config_path);
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    return MicrophoneFromJsonText(text);
  }
  MicrophoneConfig mic;
  mic.layout = ChannelLayoutFromString(mic_name);
  mic.ambisonics_order = ambi_order;
  mic.Validate();
  return mic;
}

int RunRenderIr(const CommonArgs& args, const std::string& config_path,
                std::vector<double> source_pos, std::vector<double> listener_pos,
                double heading_deg, const std::string& mic_name,
                int ambi_order, const std::string& mic_config_path,
                const std::string& name) {
  JobConfig config;
  if (!config_path.empty()) {
    config = JobConfigFromJsonFile(config_path);
    if (args.threads > 0) config.params.thread_count = args.threads;
  } else {
    if (args.scene.empty())
      throw ConfigError("render-ir needs --scene (or --config)");
    if (source_pos.size() != 3 || listener_pos.size() != 3)
      throw ConfigError("render-ir needs --source x y z and --listener x y z");
    const SimulationParams params = ResolveParams(args);
    config = MakeJobConfig(
        args, params, Vec3(source_pos[0], source_pos[1], source_pos[2]),
        ListenerPose{
            Vec3(listener_pos[0], listener_pos[1], listener_pos[2]),
            DegToRad(heading_deg)},
        ResolveMic(mic_name, ambi_order, mic_config_path));
  }

  Scene scene = LoadSceneForJob(config);
  if (!scene.InsideBounds(config.source) ||
      !scene.InsideBounds(config.listener.position))
    std::cerr << "warning: source or listener outside the mesh bounds\n";
  if (scene.mesh.degenerate_dropped > 0)
    std::cerr << "note: dropped " << scene.mesh.degenerate_dropped
              << " degenerate triangles\n";

  RenderResult render = RenderIr(scene, config.source, config.listener,
                                 config.mic, config.params);

  fs::create_directories(args.out);
  const std::string stem = name.empty() ? "ir" : name;
  const fs::path wav_path = fs::path(args.out) / (stem + ".wav");
  const fs::path sidecar_path = fs::path(args.out) / (stem + ".json");
  config.output_wav = wav_path.filename().string();
  WriteWav(wav_path.string(), render.ir.channels, config.params.sampling_rate);
  WriteJobSidecar(sidecar_path.string(), config, render.ir);
  std::cout << "wrote " << wav_path.string() << " ("
            << render.ir.channels.size() << " channels, "
            << render.ir.length() << " samples) and "
            << sidecar_path.string() << "\n";
  return kExitOk;
}

int RunRenderTrajectory(const CommonArgs& args,
                        const std::string& trajectory_path,
                        const std::string& source_audio,
                        std::vector<double> source_pos,
                        const std::string& mic_name, int ambi_order,
                        const std::string& mic_config_path,
                        const std::string& name, bool dump_step_irs) {
  if (args.scene.empty())
    throw ConfigError("render-trajectory needs --scene");
  if (trajectory_path.empty() || source_audio.empty())
    throw ConfigError("render-trajectory needs --trajectory and --audio");
  if (source_pos.size() != 3)
    throw ConfigError("render-trajectory needs --source x y z");

  const SimulationParams params = ResolveParams(args);
  MicrophoneConfig mic = ResolveMic(mic_name, ambi_order, mic_config_path);
  JobConfig config =
      MakeJobConfig(args, params, Vec3(source_pos[0], source_pos[1],
                                       source_pos[2]),
                    ListenerPose{}, mic);
  Scene scene = LoadSceneForJob(config);

  AudioClip source = AudioClip::FromWavFile(source_audio);
  if (source.sampling_rate != params.sampling_rate)
    source = Resample(source, params.sampling_rate);
  if (source.channels.size() > 1) source.channels.resize(1);

  Trajectory traj =
      Trajectory::FromFile(trajectory_path, params.crossfade_seconds);

  AudioClip rendered = RenderTrajectory(source, scene, config.source, traj,
                                        mic, params);
  fs::create_directories(args.out);
  const std::string stem = name.empty() ? "trajectory" : name;
  const fs::path wav_path = fs::path(args.out) / (stem + ".wav");
  rendered.ToWavFile(wav_path.string());
  std::cout << "wrote " << wav_path.string() << " (" << rendered.length()
            << " samples)\n";

  if (dump_step_irs) {
    for (size_t i = 0; i < traj.steps.size(); ++i) {
      ListenerPose pose{traj.steps[i].position, traj.steps[i].heading_rad};
      RenderResult step = RenderIr(scene, config.source, pose, mic, params);
      const fs::path step_path =
          fs::path(args.out) /
          (stem + "_step" + std::to_string(i) + ".wav");
      WriteWav(step_path.string(), step.ir.channels, params.sampling_rate);
    }
    std::cout << "wrote " << traj.steps.size() << " per-step IRs\n";
  }
  return kExitOk;
}

int RunMetrics(const std::vector<std::string>& ir_paths,
               const std::string& compare_path, const std::string& report_path,
               bool per_band, const std::string& edc_dir) {
  if (ir_paths.empty()) throw ConfigError("metrics needs at least one IR");
  nlohmann::json report;
  report["schema"] = "echotrace.metrics.v1";
  nlohmann::json entries = nlohmann::json::array();
  const FrequencyBands bands = FrequencyBands::Default();

  std::vector<std::vector<double>> set_a;
  for (const std::string& path : ir_paths) {
    WavData wav = ReadWav(path);
    nlohmann::json entry;
    entry["path"] = path;
    nlohmann::json channels = nlohmann::json::array();
    for (size_t c = 0; c < wav.channels.size(); ++c) {
      const AcousticSummary s =
          Summarize(wav.channels[c], wav.sampling_rate,
                    per_band ? &bands : nullptr);
      nlohmann::json jc;
      jc["channel"] = c;
      jc["rt60_s"] = s.broadband_rt60;
      jc["rt60_valid"] = s.broadband_rt60_valid;
      jc["drr_db"] = s.drr_direct_only ? nlohmann::json("direct_only")
                     : s.drr_valid     ? nlohmann::json(s.drr_db)
                                       : nlohmann::json(nullptr);
      jc["drr_valid"] = s.drr_valid;
      jc["drr_direct_only"] = s.drr_direct_only;
      if (per_band) {
        nlohmann::json b = nlohmann::json::array();
        for (size_t m = 0; m < s.band_rt60.size(); ++m)
          b.push_back(s.band_rt60_valid[m] ? nlohmann::json(s.band_rt60[m])
                                           : nlohmann::json(nullptr));
        jc["band_rt60_s"] = b;
      }
      channels.push_back(jc);
      if (c == 0) set_a.push_back(wav.channels[0]);

      if (!edc_dir.empty()) {
        fs::create_directories(edc_dir);
        const EnergyDecayCurve edc =
            SchroederEdc(wav.channels[c], wav.sampling_rate);
        const fs::path csv =
            fs::path(edc_dir) / (fs::path(path).stem().string() + "_ch" +
                                 std::to_string(c) + "_edc.csv");
        std::ofstream out(csv);
        out << "time_s,edc_db\n";
        for (size_t i = 0; i < edc.db.size(); i += 16)
          out << i * edc.dt << "," << edc.db[i] << "\n";
      }
    }
    entry["channels"] = channels;
    entries.push_back(entry);
  }
  report["irs"] = entries;

  if (!compare_path.empty()) {
    std::ifstream list(compare_path);
    if (!list) throw ConfigError("cannot open compare list " + compare_path);
    std::vector<std::vector<double>> set_b;
    std::string line;
    while (std::getline(list, line)) {
      if (line.empty()) continue;
      set_b.push_back(ReadWav(line).channels[0]);
    }
    WavData first = ReadWav(ir_paths[0]);
    const RelativeRt60Error rel =
        ComputeRelativeRt60Error(set_a, set_b, first.sampling_rate);
    report["relative_rt60_error_percent"] = rel.percent;
    report["relative_rt60_pairs_used"] = rel.pairs_used;
    report["relative_rt60_pairs_excluded"] = rel.pairs_excluded;
  }

  const std::string text = report.dump(2);
  if (report_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(report_path);
    out << text << "\n";
    std::cout << "wrote " << report_path << "\n";
  }
  return kExitOk;
}

int RunValidate(const std::string& suite, double inject_bias, int threads) {
  ValidationOptions options;
  options.inject_indirect_bias = inject_bias;
  options.thread_count = threads;
  const std::vector<CheckResult> results =
      RunValidationSuite(suite, options);
  bool all_ok = true;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
              << ": " << r.detail << "\n";
    all_ok = all_ok && r.passed;
  }
  return all_ok ? kExitOk : kExitValidation;
}

int RunGenDataset(const CommonArgs& args, int count, double max_distance,
                  const std::string& mic_name, int ambi_order) {
  if (args.scene.empty()) throw ConfigError("gen-dataset needs --scene");
  if (count < 1) throw ConfigError("gen-dataset needs --count >= 1");

  SimulationParams params = ResolveParams(args);
  MicrophoneConfig mic = ResolveMic(mic_name, ambi_order, "");
  JobConfig base = MakeJobConfig(args, params, Vec3(0, 0, 0),
                                 ListenerPose{}, mic);
  Scene scene = LoadSceneForJob(base);
  const std::string scene_id = fs::path(args.scene).stem().string();

  const Vec3 lo = scene.BoundsMin(), hi = scene.BoundsMax();
  constexpr double kHeight = 1.5;   // both endpoints at 1.5 m
  constexpr double kMargin = 0.2;   // keep clear of walls
  if (hi.z() - lo.z() < kHeight + kMargin)
    throw ConfigError("scene too low for the 1.5 m placement height");

  fs::create_directories(args.out);
  std::vector<DatasetRecord> records;
  const uint64_t master_seed = params.rng_seed;

  for (int i = 0; i < count; ++i) {
    const uint64_t record_seed = CombineSeed(master_seed, i);
    Pcg32 rng(record_seed, 17);
    auto sample_point = [&](Pcg32& r) {
      return Vec3(lo.x() + kMargin +
                      (hi.x() - lo.x() - 2 * kMargin) * r.NextDouble(),
                  lo.y() + kMargin +
                      (hi.y() - lo.y() - 2 * kMargin) * r.NextDouble(),
                  lo.z() + kHeight);
    };
    Vec3 listener_pos, source_pos;
    double distance = 0.0;
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      listener_pos = sample_point(rng);
      const double angle = 2.0 * kPi * rng.NextDouble();
      const double d = max_distance * std::sqrt(rng.NextDouble());
      source_pos = listener_pos +
                   Vec3(d * std::cos(angle), d * std::sin(angle), 0.0);
      distance = d;
      placed = d > 0.05 && scene.InsideBounds(source_pos) &&
               (source_pos.array() >=
                (lo + Vec3(kMargin, kMargin, 0)).array()).all() &&
               (source_pos.array() <=
                (hi - Vec3(kMargin, kMargin, 0)).array()).all();
    }
    if (!placed)
      throw SimulationError("could not place source/listener pair");
    const double heading = 2.0 * kPi * rng.NextDouble();

    SimulationParams record_params = params;
    record_params.rng_seed = record_seed;
    ListenerPose pose{listener_pos, heading};
    RenderResult render =
        RenderIr(scene, source_pos, pose, mic, record_params);
    const std::string wav_name =
        scene_id + "_" + std::to_string(i) + ".wav";
    WriteWav((fs::path(args.out) / wav_name).string(), render.ir.channels,
             record_params.sampling_rate);

    DatasetRecord record;
    record.ir_path = wav_name;
    record.theta_rad =
        pose.CcwAngleOf((source_pos - listener_pos).normalized());
    record.distance_m = distance;
    record.listener = pose;
    record.source = source_pos;
    record.scene_id = scene_id;
    record.seed = record_seed;
    record.params_hash = ParamsHash(record_params);
    records.push_back(record);
  }

  WriteDatasetManifest((fs::path(args.out) / "manifest.json").string(),
                       records, scene_id, master_seed, max_distance);
  std::cout << "wrote " << records.size() << " IRs and manifest.json to "
            << args.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "echotrace: geometric-acoustics impulse response renderer and toolkit"};
  app.require_subcommand(1);

  CommonArgs render_args, traj_args, dataset_args;

  // render-ir
  auto* render = app.add_subcommand(
      "render-ir", "Render an impulse response to WAV plus a JSON sidecar");
  AddCommonOptions(render, &render_args);
  std::string render_config, render_mic = "mono", render_mic_config,
              render_name = "ir";
  std::vector<double> render_source, render_listener;
  double render_heading = 0.0;
  int render_order = 1;
  render->add_option("--config", render_config,
                     "Job config JSON (a sidecar re-runs the job)");
  render->add_option("--source", render_source, "Source position x y z")
      ->expected(3);
  render->add_option("--listener", render_listener, "Listener position x y z")
      ->expected(3);
  render->add_option("--heading", render_heading,
                     "Listener heading, degrees CCW from +x");
  render->add_option("--mic", render_mic,
                     "mono|stereo|binaural|quad|surround_5_1|surround_7_1|"
                     "ambisonics");
  render->add_option("--order", render_order, "Ambisonics order (0..3)");
  render->add_option("--mic-config", render_mic_config,
                     "Custom array config JSON");
  render->add_option("--name", render_name, "Output file stem");

  // render-trajectory
  auto* traj = app.add_subcommand(
      "render-trajectory",
      "Render continuous audio for a moving listener trajectory");
  AddCommonOptions(traj, &traj_args);
  std::string traj_path, traj_audio, traj_mic = "mono", traj_mic_config,
              traj_name = "trajectory";
  std::vector<double> traj_source;
  int traj_order = 1;
  bool traj_dump_irs = false;
  traj->add_option("--trajectory", traj_path,
                   "Trajectory file: 'time x y z heading_deg' per line");
  traj->add_option("--audio", traj_audio, "Mono source WAV");
  traj->add_option("--source", traj_source, "Source position x y z")
      ->expected(3);
  traj->add_option("--mic", traj_mic, "Microphone type");
  traj->add_option("--order", traj_order, "Ambisonics order");
  traj->add_option("--mic-config", traj_mic_config, "Custom array JSON");
  traj->add_option("--name", traj_name, "Output file stem");
  traj->add_flag("--dump-step-irs", traj_dump_irs,
                 "Also write the per-step IRs");

  // metrics
  auto* metrics = app.add_subcommand(
      "metrics", "RT60 / DRR / EDC report for rendered IRs");
  std::vector<std::string> metrics_irs;
  std::string metrics_compare, metrics_report, metrics_edc_dir;
  bool metrics_bands = false;
  metrics->add_option("irs", metrics_irs, "IR WAV files")->required();
  metrics->add_option("--compare", metrics_compare,
                      "Text file listing a second IR set (relative RT60 "
                      "error table)");
  metrics->add_option("--report", metrics_report,
                      "Write the JSON report here (default: stdout)");
  metrics->add_flag("--bands", metrics_bands, "Include per-band RT60");
  metrics->add_option("--edc-out", metrics_edc_dir,
                      "Directory for EDC CSV exports");

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Run a validation suite and report pass/fail per check");
  std::string validate_suite = "all";
  double validate_bias = 1.0;
  int validate_threads = 1;
  validate->add_option("suite", validate_suite,
                       "all | shoebox | decay | continuity | c01..c10");
  validate->add_option("--inject-drr-bias", validate_bias,
                       "Multiply the reverberant pressure by this factor "
                       "(sqrt(4 pi) reproduces the classic level bias)");
  validate->add_option("--threads", validate_threads, "Worker threads");

  // gen-dataset
  auto* dataset = app.add_subcommand(
      "gen-dataset",
      "Sample source/listener placements and render an IR dataset");
  AddCommonOptions(dataset, &dataset_args);
  int dataset_count = 10;
  double dataset_max_distance = 5.0;
  std::string dataset_mic = "mono";
  int dataset_order = 1;
  dataset->add_option("--count", dataset_count, "Number of records");
  dataset->add_option("--max-distance", dataset_max_distance,
                      "Maximum source distance (m)");
  dataset->add_option("--mic", dataset_mic, "Microphone type");
  dataset->add_option("--order", dataset_order, "Ambisonics order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (render->parsed())
      return RunRenderIr(render_args, render_config, render_source,
                         render_listener, render_heading, render_mic,
                         render_order, render_mic_config, render_name);
    if (traj->parsed())
      return RunRenderTrajectory(traj_args, traj_path, traj_audio,
                                 traj_source, traj_mic, traj_order,
                                 traj_mic_config, traj_name, traj_dump_irs);
    if (metrics->parsed())
      return RunMetrics(metrics_irs, metrics_compare, metrics_report,
                        metrics_bands, metrics_edc_dir);
    if (validate->parsed())
      return RunValidate(validate_suite, validate_bias, validate_threads);
    if (dataset->parsed())
      return RunGenDataset(dataset_args, dataset_count, dataset_max_distance,
                           dataset_mic, dataset_order);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
  return kExitConfig;
}
