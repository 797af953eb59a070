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

#include "echotrace/config_io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace echotrace {

using nlohmann::json;

namespace {

json MicToJson(const MicrophoneConfig& mic) {
  json j;
  j["type"] = ToString(mic.layout);
  if (mic.layout == ChannelLayout::kAmbisonics)
    j["order"] = mic.ambisonics_order;
  if (mic.layout == ChannelLayout::kArray) {
    json capsules = json::array();
    for (const Vec3& c : mic.capsule_offsets)
      capsules.push_back({c.x(), c.y(), c.z()});
    j["capsules"] = capsules;
  }
  return j;
}

MicrophoneConfig MicFromJson(const json& j) {
  MicrophoneConfig mic;
  if (!j.contains("type"))
    throw ConfigError("microphone config: missing 'type'");
  mic.layout = ChannelLayoutFromString(j.at("type").get<std::string>());
  if (j.contains("order")) mic.ambisonics_order = j.at("order").get<int>();
  if (j.contains("capsules")) {
    for (const auto& c : j.at("capsules")) {
      const auto v = c.get<std::vector<double>>();
      if (v.size() != 3)
        throw ConfigError("microphone capsule needs 3 coordinates");
      mic.capsule_offsets.emplace_back(v[0], v[1], v[2]);
    }
  }
  mic.Validate();
  return mic;
}

std::string PolicyName(AssignmentPolicy policy) {
  switch (policy) {
    case AssignmentPolicy::kFixed: return "fixed";
    case AssignmentPolicy::kRandomized: return "randomized";
    case AssignmentPolicy::kUniform: return "uniform";
  }
  return "fixed";
}

AssignmentPolicy PolicyFromName(const std::string& name) {
  if (name == "fixed") return AssignmentPolicy::kFixed;
  if (name == "randomized") return AssignmentPolicy::kRandomized;
  if (name == "uniform") return AssignmentPolicy::kUniform;
  throw ConfigError("unknown material policy '" + name + "'");
}

}  // namespace

MicrophoneConfig MicrophoneFromJsonText(const std::string& text) {
  try {
    return MicFromJson(json::parse(text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("microphone config: ") + e.what());
  }
}

std::string MicrophoneToJsonText(const MicrophoneConfig& mic) {
  return MicToJson(mic).dump(2);
}

JobConfig JobConfigFromJsonFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open job config " + path);
  json j;
  try {
    j = json::parse(file);
  } catch (const json::parse_error& e) {
    throw FormatError("job config " + path + ": " + e.what());
  }
  if (!j.contains("schema") ||
      j["schema"].get<std::string>() != "echotrace.job.v1")
    throw ConfigError("job config " + path +
                      ": missing or unsupported schema");
  JobConfig config;
  try {
    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
      if (p.empty()) return p;
      std::filesystem::path fp(p);
      return fp.is_absolute() ? p : (base / fp).string();
    };
    config.scene_path = resolve(j.at("scene").get<std::string>());
    if (j.contains("category_sidecar"))
      config.category_sidecar_path =
          resolve(j["category_sidecar"].get<std::string>());
    if (j.contains("materials"))
      config.materials_path = resolve(j["materials"].get<std::string>());
    config.params = ParamsFromJsonText(j.at("params").dump());
    if (j.contains("material_policy"))
      config.material_policy =
          PolicyFromName(j["material_policy"].get<std::string>());
    if (j.contains("material_noise_sigma"))
      config.material_noise_sigma = j["material_noise_sigma"].get<double>();
    const auto src = j.at("source").get<std::vector<double>>();
    if (src.size() != 3) throw ConfigError("source needs 3 coordinates");
    config.source = Vec3(src[0], src[1], src[2]);
    const auto lis = j.at("listener").at("position").get<std::vector<double>>();
    if (lis.size() != 3) throw ConfigError("listener needs 3 coordinates");
    config.listener.position = Vec3(lis[0], lis[1], lis[2]);
    config.listener.heading_rad =
        DegToRad(j.at("listener").value("heading_deg", 0.0));
    config.mic = MicFromJson(j.at("microphone"));
    if (j.contains("trajectory"))
      config.trajectory_path = resolve(j["trajectory"].get<std::string>());
    if (j.contains("source_audio"))
      config.source_audio_path =
          resolve(j["source_audio"].get<std::string>());
    if (j.contains("output_wav"))
      config.output_wav = j["output_wav"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError("job config " + path + ": " + e.what());
  }
  return config;
}

void WriteJobSidecar(const std::string& path, const JobConfig& config,
                     const ImpulseResponse& ir) {
  json j;
  j["schema"] = "echotrace.job.v1";
  j["scene"] = config.scene_path;
  if (!config.category_sidecar_path.empty())
    j["category_sidecar"] = config.category_sidecar_path;
  if (!config.materials_path.empty()) j["materials"] = config.materials_path;
  j["params"] = json::parse(ParamsToJsonText(config.params));
  j["material_policy"] = PolicyName(config.material_policy);
  j["material_noise_sigma"] = config.material_noise_sigma;
  j["source"] = {config.source.x(), config.source.y(), config.source.z()};
  j["listener"] = {
      {"position",
       {config.listener.position.x(), config.listener.position.y(),
        config.listener.position.z()}},
      {"heading_deg", RadToDeg(config.listener.heading_rad)}};
  j["microphone"] = MicToJson(config.mic);
  if (!config.trajectory_path.empty())
    j["trajectory"] = config.trajectory_path;
  if (!config.source_audio_path.empty())
    j["source_audio"] = config.source_audio_path;
  j["output_wav"] = config.output_wav;
  j["params_hash"] = ParamsHash(config.params);
  j["channels"] = ir.channels.size();
  j["length_samples"] = ir.length();

  std::ofstream file(path, std::ios::trunc);
  if (!file) throw ConfigError("cannot write sidecar " + path);
  file << j.dump(2) << "\n";
}

Scene LoadSceneForJob(const JobConfig& config) {
  TriangleMesh mesh = LoadMesh(config.scene_path, config.params.unit_scale);
  if (!config.category_sidecar_path.empty())
    ApplyCategorySidecar(mesh, config.category_sidecar_path);
  // A materials path implies the custom-materials toggle.
  MaterialDatabase db = config.materials_path.empty()
                            ? MaterialDatabase::BuiltIn()
                            : MaterialDatabase::FromJsonFile(
                                  config.materials_path);
  MaterialTable table =
      ResolveAssignment(db, mesh.categories, config.material_policy,
                        config.params.rng_seed, config.material_noise_sigma);
  return BuildScene(std::move(mesh), std::move(table));
}

void WriteDatasetManifest(const std::string& path,
                          const std::vector<DatasetRecord>& records,
                          const std::string& scene_id, uint64_t master_seed,
                          double max_distance_m) {
  json j;
  j["schema"] = "echotrace.dataset.v1";
  j["scene_id"] = scene_id;
  j["seed"] = master_seed;
  j["max_distance_m"] = max_distance_m;
  j["count"] = records.size();
  json list = json::array();
  for (const DatasetRecord& r : records) {
    json rec;
    rec["ir"] = r.ir_path;
    rec["theta_rad"] = r.theta_rad;
    rec["distance_m"] = r.distance_m;
    rec["listener"] = {
        {"position",
         {r.listener.position.x(), r.listener.position.y(),
          r.listener.position.z()}},
        {"heading_deg", RadToDeg(r.listener.heading_rad)}};
    rec["source"] = {r.source.x(), r.source.y(), r.source.z()};
    rec["scene_id"] = r.scene_id;
    rec["seed"] = r.seed;
    rec["params_hash"] = r.params_hash;
    list.push_back(rec);
  }
  j["records"] = list;
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw ConfigError("cannot write manifest " + path);
  file << j.dump(2) << "\n";
}

}  // namespace echotrace
