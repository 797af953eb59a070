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

#ifndef ECHOTRACE_WAV_H_
#define ECHOTRACE_WAV_H_

#include <string>
#include <vector>

namespace echotrace {

struct WavData {
  int sampling_rate = 0;
  std::vector<std::vector<double>> channels;  // [channel][sample]
};

// Writes RIFF/WAVE, IEEE float 32-bit, interleaved in channel order.
// Samples are converted from double; the conversion is deterministic.
void WriteWav(const std::string& path,
              const std::vector<std::vector<double>>& channels,
              int sampling_rate);

// Reads 32-bit float or 16-bit PCM WAVE files.
WavData ReadWav(const std::string& path);

}  // namespace echotrace

#endif  // ECHOTRACE_WAV_H_
