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

#ifndef ECHOTRACE_CONFIG_IO_H_
#define ECHOTRACE_CONFIG_IO_H_

#include <optional>
#include <string>

#include "echotrace/audio.h"
#include "echotrace/materials.h"
#include "echotrace/params.h"
#include "echotrace/pose.h"
#include "echotrace/spatial.h"

namespace echotrace {

// One render job: everything required to reproduce an output byte-for-byte.
struct JobConfig {
  std::string scene_path;
  std::string category_sidecar_path;  // optional
  std::string materials_path;         // empty = built-in database
  SimulationParams params;
  AssignmentPolicy material_policy = AssignmentPolicy::kFixed;
  double material_noise_sigma = 0.1;
  Vec3 source{0, 0, 0};
  ListenerPose listener;
  MicrophoneConfig mic;
  std::string trajectory_path;    // render-trajectory jobs
  std::string source_audio_path;  // render-trajectory jobs
  std::string output_wav;  // relative to the sidecar's directory when loaded
};

MicrophoneConfig MicrophoneFromJsonText(const std::string& text);
std::string MicrophoneToJsonText(const MicrophoneConfig& mic);

JobConfig JobConfigFromJsonFile(const std::string& path);
// Writes the job sidecar: the full effective configuration plus the params
// hash. Re-running `render-ir --config <sidecar>` reproduces the WAV.
void WriteJobSidecar(const std::string& path, const JobConfig& config,
                     const ImpulseResponse& ir);

// Scene assembly shared by the CLI commands.
Scene LoadSceneForJob(const JobConfig& config);

struct DatasetRecord {
  std::string ir_path;
  double theta_rad = 0.0;   // CCW rotation of the source from the heading
  double distance_m = 0.0;  // d <= configured maximum
  ListenerPose listener;
  Vec3 source{0, 0, 0};
  std::string scene_id;
  uint64_t seed = 0;
  uint64_t params_hash = 0;
};

void WriteDatasetManifest(const std::string& path,
                          const std::vector<DatasetRecord>& records,
                          const std::string& scene_id, uint64_t master_seed,
                          double max_distance_m);

}  // namespace echotrace

#endif  // ECHOTRACE_CONFIG_IO_H_
