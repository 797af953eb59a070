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

#ifndef ECHOTRACE_PARAMS_H_
#define ECHOTRACE_PARAMS_H_

#include <cstdint>
#include <string>

#include "echotrace/air.h"
#include "echotrace/bands.h"

namespace echotrace {

enum class RenderMode { kHighQuality, kHighSpeed };

std::string ToString(RenderMode mode);
RenderMode RenderModeFromString(const std::string& name);

struct SimulationParams {
  int sampling_rate = 44100;
  FrequencyBands bands = FrequencyBands::Default();
  int direct_sh_order = 1;
  int indirect_sh_order = 1;

  int num_direct_rays = 5000;
  int num_source_rays = 65536;
  int max_source_depth = 64;
  int num_listener_rays = 65536;
  int max_listener_depth = 8;

  double max_ir_seconds = 1.0;

  bool direct_enabled = true;
  bool indirect_enabled = true;
  bool diffraction_enabled = true;
  bool transmission_enabled = true;
  bool air_absorption_enabled = true;

  RenderMode mode = RenderMode::kHighQuality;
  int thread_count = 1;
  uint64_t rng_seed = 0;
  double unit_scale = 1.0;

  double time_step_seconds = 0.15;   // trajectory step interval
  double crossfade_seconds = 0.05;   // trajectory overlap window
  double initial_pressure = 1.0;     // gain on emitted energy (squared)
  bool path_cache_enabled = false;
  bool custom_materials_enabled = false;

  // Engine details (documented in the README format reference).
  double receiver_radius_m = 0.25;
  bool stratified_emission = true;
  double histogram_bin_seconds = 0.0;  // 0 = one audio sample
  double transmission_thickness_m = 0.1;
  AirModel air;

  void Validate() const;
  double BinSeconds() const {
    return histogram_bin_seconds > 0.0 ? histogram_bin_seconds
                                       : 1.0 / sampling_rate;
  }
  double EmittedEnergy() const { return initial_pressure * initial_pressure; }
};

// Built-in mode presets. High-speed keeps depths but cuts the source and
// listener ray budgets to 1/8 of high quality.
SimulationParams Preset(RenderMode mode);

SimulationParams ParamsFromJsonText(const std::string& text);
SimulationParams ParamsFromJsonFile(const std::string& path);
std::string ParamsToJsonText(const SimulationParams& params);

// Stable content hash over the canonical JSON form.
uint64_t ParamsHash(const SimulationParams& params);

}  // namespace echotrace

#endif  // ECHOTRACE_PARAMS_H_
