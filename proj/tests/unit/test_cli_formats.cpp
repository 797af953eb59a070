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

#include <filesystem>
#include <fstream>

#include "echotrace/config_io.h"
#include "echotrace/params.h"
#include "echotrace/rng.h"

using namespace echotrace;

TEST_SUITE_BEGIN("cli_formats");

TEST_CASE("params json round trip preserves the hash") {
  SimulationParams params = Preset(RenderMode::kHighSpeed);
  params.rng_seed = 123;
  params.max_ir_seconds = 1.5;
  params.bands = FrequencyBands::Octaves(125.0, 6);
  params.air.humidity_percent = 35.0;
  const std::string text = ParamsToJsonText(params);
  const SimulationParams back = ParamsFromJsonText(text);
  CHECK(ParamsHash(back) == ParamsHash(params));
  CHECK(back.num_source_rays == 65536 / 8);
  CHECK(back.bands.size() == 6);
  CHECK(back.air.humidity_percent == 35.0);
}

TEST_CASE("params json is fail-fast on unknown fields and bad schema") {
  CHECK_THROWS_AS(ParamsFromJsonText("{\"no_such_field\": 1}"), ConfigError);
  CHECK_THROWS_AS(ParamsFromJsonText("{\"schema\": \"other.v9\"}"),
                  ConfigError);
  CHECK_THROWS_AS(ParamsFromJsonText("{\"air\": {\"bogus\": 1}}"),
                  ConfigError);
  CHECK_THROWS_AS(ParamsFromJsonText("not json"), FormatError);
  // num_bands conflicting with explicit centers.
  CHECK_THROWS_AS(ParamsFromJsonText(
                      "{\"num_bands\": 4, \"band_centers\": [125, 250]}"),
                  ConfigError);
  // Validation catches out-of-range values.
  CHECK_THROWS_AS(ParamsFromJsonText("{\"sampling_rate\": 1000}"),
                  ConfigError);
  CHECK_THROWS_AS(ParamsFromJsonText("{\"crossfade_seconds\": 0.2}"),
                  ConfigError);
}

TEST_CASE("mode presets determine ray counts unless overridden") {
  const SimulationParams hq =
      ParamsFromJsonText("{\"mode\": \"high_quality\"}");
  CHECK(hq.num_source_rays == 65536);
  const SimulationParams hs = ParamsFromJsonText("{\"mode\": \"high_speed\"}");
  CHECK(hs.num_source_rays == 8192);
  const SimulationParams custom = ParamsFromJsonText(
      "{\"mode\": \"high_speed\", \"num_source_rays\": 1000}");
  CHECK(custom.num_source_rays == 1000);
}

TEST_CASE("microphone config json parses every layout") {
  MicrophoneConfig ambi =
      MicrophoneFromJsonText("{\"type\": \"ambisonics\", \"order\": 2}");
  CHECK(ambi.layout == ChannelLayout::kAmbisonics);
  CHECK(ambi.ChannelCount() == 9);

  MicrophoneConfig array = MicrophoneFromJsonText(
      "{\"type\": \"array\", \"capsules\": [[0, 0, 0], [0.2, 0, 0]]}");
  CHECK(array.ChannelCount() == 2);

  for (const char* name : {"mono", "stereo", "binaural", "quad",
                           "surround_5_1", "surround_7_1"}) {
    const MicrophoneConfig mic =
        MicrophoneFromJsonText("{\"type\": \"" + std::string(name) + "\"}");
    CHECK(mic.ChannelCount() >= 1);
  }
  CHECK_THROWS_AS(MicrophoneFromJsonText("{\"type\": \"laser\"}"),
                  ConfigError);
  CHECK_THROWS_AS(
      MicrophoneFromJsonText(
          "{\"type\": \"array\", \"capsules\": [[5, 0, 0]]}"),
      ConfigError);
}

TEST_CASE("material config json mirrors the pair-list layout") {
  const char* text = R"({
    "materials": {
      "soft": {"absorption": [125, 0.2, 1000, 0.5, 4000, 0.8],
               "scattering": [1000, 0.6],
               "transmission": [1000, 0.1],
               "damping": [1000, 2.0]},
      "hard": {"absorption": [1000, 0.05]}
    },
    "category_to_material": {"floor": ["soft", "hard"]},
    "default_material": "hard"
  })";
  const MaterialDatabase db = MaterialDatabase::FromJsonText(text);
  CHECK(db.materials().size() == 2);
  CHECK(db.DefaultMaterial().name == "hard");
  const AcousticMaterial* soft = db.Find("soft");
  REQUIRE(soft != nullptr);
  CHECK(CoefficientAt(*soft, CoefficientKind::kAbsorption, 1000.0) == 0.5);
  CHECK(CoefficientAt(*soft, CoefficientKind::kDamping, 1000.0) == 2.0);
  CHECK(db.Candidates("floor").size() == 2);

  // Odd pair list.
  CHECK_THROWS_AS(MaterialDatabase::FromJsonText(
                      R"({"materials": {"x": {"absorption": [125, 0.2, 250]}}})"),
                  ConfigError);
  // Absorption + transmission over budget.
  CHECK_THROWS_AS(
      MaterialDatabase::FromJsonText(
          R"({"materials": {"x": {"absorption": [1000, 0.8],
                                   "transmission": [1000, 0.4]}}})"),
      ConfigError);
  // Unknown candidate material.
  CHECK_THROWS_AS(
      MaterialDatabase::FromJsonText(
          R"({"materials": {"x": {}},
              "category_to_material": {"floor": ["ghost"]}})"),
      ConfigError);
}

TEST_CASE("job sidecar round trip reproduces the configuration") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "echotrace_unit";
  fs::create_directories(dir);

  JobConfig config;
  config.scene_path = (dir / "scene.obj").string();
  config.params = Preset(RenderMode::kHighSpeed);
  config.params.rng_seed = 7;
  config.material_policy = AssignmentPolicy::kRandomized;
  config.material_noise_sigma = 0.05;
  config.source = Vec3(1, 2, 1.5);
  config.listener.position = Vec3(3, 1, 1.4);
  config.listener.heading_rad = DegToRad(45);
  config.mic.layout = ChannelLayout::kBinaural;
  config.output_wav = "out.wav";

  ImpulseResponse ir;
  ir.sampling_rate = 44100;
  ir.channels.assign(2, std::vector<double>(100, 0.0));
  const std::string sidecar = (dir / "job.json").string();
  WriteJobSidecar(sidecar, config, ir);

  const JobConfig back = JobConfigFromJsonFile(sidecar);
  CHECK(back.scene_path == config.scene_path);
  CHECK(ParamsHash(back.params) == ParamsHash(config.params));
  CHECK(back.material_policy == AssignmentPolicy::kRandomized);
  CHECK(back.material_noise_sigma == 0.05);
  CHECK((back.source - config.source).norm() < 1e-12);
  CHECK(back.listener.heading_rad ==
        doctest::Approx(config.listener.heading_rad));
  CHECK(back.mic.layout == ChannelLayout::kBinaural);
}

TEST_CASE("dataset polar angle recomputes from the stored poses") {
  Pcg32 rng(5, 8);
  for (int trial = 0; trial < 200; ++trial) {
    ListenerPose pose;
    pose.position = Vec3(rng.NextDouble() * 10, rng.NextDouble() * 10, 1.5);
    pose.heading_rad = 2.0 * kPi * rng.NextDouble() - kPi;
    const double theta = 2.0 * kPi * rng.NextDouble();
    const double d = 0.5 + 4.0 * rng.NextDouble();
    // Place the source at polar (theta, d) counter-clockwise from the
    // heading, then confirm the stored angle is recovered.
    const double world = pose.heading_rad + theta;
    const Vec3 source = pose.position +
                        Vec3(d * std::cos(world), d * std::sin(world), 0.0);
    const double recomputed =
        pose.CcwAngleOf((source - pose.position).normalized());
    double diff = std::abs(recomputed - theta);
    diff = std::min(diff, 2.0 * kPi - diff);
    CHECK(diff < 1e-6);
    CHECK(recomputed >= 0.0);
    CHECK(recomputed < 2.0 * kPi);
  }
}

TEST_SUITE_END();
