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

#include "echotrace/params.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "echotrace/common.h"
#include "echotrace/rng.h"

namespace echotrace {

namespace {
constexpr const char* kSchema = "echotrace.params.v1";
}

std::string ToString(RenderMode mode) {
  return mode == RenderMode::kHighQuality ? "high_quality" : "high_speed";
}

RenderMode RenderModeFromString(const std::string& name) {
  if (name == "high_quality") return RenderMode::kHighQuality;
  if (name == "high_speed") return RenderMode::kHighSpeed;
  throw ConfigError("unknown render mode '" + name +
                    "' (expected high_quality or high_speed)");
}

void SimulationParams::Validate() const {
  if (sampling_rate < 8000 || sampling_rate > 96000)
    throw ConfigError("params: sampling_rate must be in [8000, 96000]");
  if (bands.size() < 1) throw ConfigError("params: need at least one band");
  if (direct_sh_order < 0 || direct_sh_order > 3 || indirect_sh_order < 0 ||
      indirect_sh_order > 3)
    throw ConfigError("params: SH orders must be in [0, 3]");
  if (direct_enabled && num_direct_rays < 1)
    throw ConfigError("params: num_direct_rays must be >= 1");
  if (indirect_enabled) {
    if (num_source_rays < 1 || num_listener_rays < 1)
      throw ConfigError("params: ray counts must be >= 1 when indirect is on");
    if (max_source_depth < 1 || max_listener_depth < 1)
      throw ConfigError("params: ray depths must be >= 1 when indirect is on");
  }
  if (max_ir_seconds <= 0.0)
    throw ConfigError("params: max_ir_seconds must be positive");
  if (thread_count < 1) throw ConfigError("params: thread_count must be >= 1");
  if (unit_scale <= 0.0) throw ConfigError("params: unit_scale must be > 0");
  if (time_step_seconds <= 0.0)
    throw ConfigError("params: time_step_seconds must be positive");
  if (crossfade_seconds < 0.0 || crossfade_seconds >= time_step_seconds)
    throw ConfigError(
        "params: crossfade_seconds must be in [0, time_step_seconds)");
  if (receiver_radius_m <= 0.0)
    throw ConfigError("params: receiver_radius_m must be positive");
  if (initial_pressure <= 0.0)
    throw ConfigError("params: initial_pressure must be positive");
  air.Validate();
}

SimulationParams Preset(RenderMode mode) {
  SimulationParams p;
  p.mode = mode;
  if (mode == RenderMode::kHighSpeed) {
    p.num_source_rays = 65536 / 8;
    p.num_listener_rays = 65536 / 8;
    p.num_direct_rays = 5000 / 8;
  }
  return p;
}

namespace {

using nlohmann::json;

// Fail-fast schema: unknown keys are configuration errors.
const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "schema", "sampling_rate", "num_bands", "band_centers",
      "direct_sh_order", "indirect_sh_order", "num_direct_rays",
      "num_source_rays", "max_source_depth", "num_listener_rays",
      "max_listener_depth", "max_ir_seconds", "direct_enabled",
      "indirect_enabled", "diffraction_enabled", "transmission_enabled",
      "air_absorption_enabled", "mode", "thread_count", "rng_seed",
      "unit_scale", "time_step_seconds", "crossfade_seconds",
      "initial_pressure", "path_cache_enabled", "custom_materials_enabled",
      "receiver_radius_m", "stratified_emission", "histogram_bin_seconds",
      "transmission_thickness_m", "air"};
  return keys;
}

template <typename T>
void Get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SimulationParams ParamsFromJsonText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("params parse error: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("params: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (KnownKeys().count(key) == 0)
      throw ConfigError("params: unknown field '" + key + "'");
  }
  if (j.contains("schema") && j["schema"].get<std::string>() != kSchema)
    throw ConfigError("params: unsupported schema '" +
                      j["schema"].get<std::string>() + "'");

  SimulationParams p;
  if (j.contains("mode"))
    p = Preset(RenderModeFromString(j["mode"].get<std::string>()));

  try {
    Get(j, "sampling_rate", p.sampling_rate);
    if (j.contains("band_centers")) {
      p.bands = FrequencyBands(j["band_centers"].get<std::vector<double>>());
      if (j.contains("num_bands") &&
          j["num_bands"].get<int>() != p.bands.size())
        throw ConfigError("params: num_bands conflicts with band_centers");
    } else if (j.contains("num_bands")) {
      p.bands = FrequencyBands::Octaves(62.5, j["num_bands"].get<int>());
    }
    Get(j, "direct_sh_order", p.direct_sh_order);
    Get(j, "indirect_sh_order", p.indirect_sh_order);
    Get(j, "num_direct_rays", p.num_direct_rays);
    Get(j, "num_source_rays", p.num_source_rays);
    Get(j, "max_source_depth", p.max_source_depth);
    Get(j, "num_listener_rays", p.num_listener_rays);
    Get(j, "max_listener_depth", p.max_listener_depth);
    Get(j, "max_ir_seconds", p.max_ir_seconds);
    Get(j, "direct_enabled", p.direct_enabled);
    Get(j, "indirect_enabled", p.indirect_enabled);
    Get(j, "diffraction_enabled", p.diffraction_enabled);
    Get(j, "transmission_enabled", p.transmission_enabled);
    Get(j, "air_absorption_enabled", p.air_absorption_enabled);
    Get(j, "thread_count", p.thread_count);
    Get(j, "rng_seed", p.rng_seed);
    Get(j, "unit_scale", p.unit_scale);
    Get(j, "time_step_seconds", p.time_step_seconds);
    Get(j, "crossfade_seconds", p.crossfade_seconds);
    Get(j, "initial_pressure", p.initial_pressure);
    Get(j, "path_cache_enabled", p.path_cache_enabled);
    Get(j, "custom_materials_enabled", p.custom_materials_enabled);
    Get(j, "receiver_radius_m", p.receiver_radius_m);
    Get(j, "stratified_emission", p.stratified_emission);
    Get(j, "histogram_bin_seconds", p.histogram_bin_seconds);
    Get(j, "transmission_thickness_m", p.transmission_thickness_m);
    if (j.contains("air")) {
      const json& a = j["air"];
      for (const auto& [key, value] : a.items()) {
        (void)value;
        if (key != "temperature_c" && key != "humidity_percent" &&
            key != "pressure_kpa")
          throw ConfigError("params: unknown air field '" + key + "'");
      }
      Get(a, "temperature_c", p.air.temperature_c);
      Get(a, "humidity_percent", p.air.humidity_percent);
      Get(a, "pressure_kpa", p.air.pressure_kpa);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  p.Validate();
  return p;
}

SimulationParams ParamsFromJsonFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open params file " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ParamsFromJsonText(ss.str());
}

std::string ParamsToJsonText(const SimulationParams& p) {
  json j;
  j["schema"] = kSchema;
  j["sampling_rate"] = p.sampling_rate;
  j["band_centers"] = p.bands.centers();
  j["direct_sh_order"] = p.direct_sh_order;
  j["indirect_sh_order"] = p.indirect_sh_order;
  j["num_direct_rays"] = p.num_direct_rays;
  j["num_source_rays"] = p.num_source_rays;
  j["max_source_depth"] = p.max_source_depth;
  j["num_listener_rays"] = p.num_listener_rays;
  j["max_listener_depth"] = p.max_listener_depth;
  j["max_ir_seconds"] = p.max_ir_seconds;
  j["direct_enabled"] = p.direct_enabled;
  j["indirect_enabled"] = p.indirect_enabled;
  j["diffraction_enabled"] = p.diffraction_enabled;
  j["transmission_enabled"] = p.transmission_enabled;
  j["air_absorption_enabled"] = p.air_absorption_enabled;
  j["mode"] = ToString(p.mode);
  j["thread_count"] = p.thread_count;
  j["rng_seed"] = p.rng_seed;
  j["unit_scale"] = p.unit_scale;
  j["time_step_seconds"] = p.time_step_seconds;
  j["crossfade_seconds"] = p.crossfade_seconds;
  j["initial_pressure"] = p.initial_pressure;
  j["path_cache_enabled"] = p.path_cache_enabled;
  j["custom_materials_enabled"] = p.custom_materials_enabled;
  j["receiver_radius_m"] = p.receiver_radius_m;
  j["stratified_emission"] = p.stratified_emission;
  j["histogram_bin_seconds"] = p.histogram_bin_seconds;
  j["transmission_thickness_m"] = p.transmission_thickness_m;
  j["air"] = {{"temperature_c", p.air.temperature_c},
              {"humidity_percent", p.air.humidity_percent},
              {"pressure_kpa", p.air.pressure_kpa}};
  return j.dump(2);
}

uint64_t ParamsHash(const SimulationParams& params) {
  return HashString(ParamsToJsonText(params));
}

}  // namespace echotrace
