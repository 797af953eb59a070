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

#include "echotrace/wav.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "echotrace/common.h"

namespace echotrace {

namespace {

void PutU32(std::string& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.append(b, 4);
}

void PutU16(std::string& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.append(b, 2);
}

uint32_t GetU32(const char* p) {
  return static_cast<uint8_t>(p[0]) | (static_cast<uint8_t>(p[1]) << 8) |
         (static_cast<uint8_t>(p[2]) << 16) |
         (static_cast<uint32_t>(static_cast<uint8_t>(p[3])) << 24);
}

uint16_t GetU16(const char* p) {
  return static_cast<uint16_t>(static_cast<uint8_t>(p[0]) |
                               (static_cast<uint8_t>(p[1]) << 8));
}

}  // namespace

void WriteWav(const std::string& path,
              const std::vector<std::vector<double>>& channels,
              int sampling_rate) {
  if (channels.empty()) throw ConfigError("WriteWav: no channels");
  const size_t num_channels = channels.size();
  const size_t num_frames = channels[0].size();
  for (const auto& c : channels) {
    if (c.size() != num_frames)
      throw ConfigError("WriteWav: channel length mismatch");
  }

  const uint32_t data_bytes =
      static_cast<uint32_t>(num_frames * num_channels * 4);
  std::string out;
  out.reserve(58 + data_bytes);
  out.append("RIFF");
  PutU32(out, 4 + 26 + 12 + 8 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(out, 18);
  PutU16(out, 3);  // IEEE float
  PutU16(out, static_cast<uint16_t>(num_channels));
  PutU32(out, static_cast<uint32_t>(sampling_rate));
  PutU32(out, static_cast<uint32_t>(sampling_rate * num_channels * 4));
  PutU16(out, static_cast<uint16_t>(num_channels * 4));
  PutU16(out, 32);
  PutU16(out, 0);  // cbSize
  out.append("fact");
  PutU32(out, 4);
  PutU32(out, static_cast<uint32_t>(num_frames));
  out.append("data");
  PutU32(out, data_bytes);
  for (size_t i = 0; i < num_frames; ++i) {
    for (size_t c = 0; c < num_channels; ++c) {
      float f = static_cast<float>(channels[c][i]);
      char b[4];
      std::memcpy(b, &f, 4);
      out.append(b, 4);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("WriteWav: cannot open " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw ConfigError("WriteWav: write failed for " + path);
}

WavData ReadWav(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("ReadWav: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(file)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0)
    throw FormatError("ReadWav: not a RIFF/WAVE file: " + path);

  uint16_t format = 0, num_channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id = buf.substr(pos, 4);
    const uint32_t len = GetU32(buf.data() + pos + 4);
    const size_t body = pos + 8;
    if (id == "fmt " && body + 16 <= buf.size()) {
      format = GetU16(buf.data() + body);
      num_channels = GetU16(buf.data() + body + 2);
      rate = GetU32(buf.data() + body + 4);
      bits = GetU16(buf.data() + body + 14);
    } else if (id == "data") {
      data_off = body;
      data_len = std::min<size_t>(len, buf.size() - body);
    }
    pos = body + len + (len & 1);
  }
  if (num_channels == 0 || rate == 0 || data_off == 0)
    throw FormatError("ReadWav: missing fmt/data chunk in " + path);

  WavData wav;
  wav.sampling_rate = static_cast<int>(rate);
  wav.channels.assign(num_channels, {});
  if (format == 3 && bits == 32) {
    const size_t frames = data_len / (4 * num_channels);
    for (auto& c : wav.channels) c.resize(frames);
    for (size_t i = 0; i < frames; ++i) {
      for (size_t c = 0; c < num_channels; ++c) {
        float f;
        std::memcpy(&f, buf.data() + data_off + (i * num_channels + c) * 4, 4);
        wav.channels[c][i] = f;
      }
    }
  } else if (format == 1 && bits == 16) {
    const size_t frames = data_len / (2 * num_channels);
    for (auto& c : wav.channels) c.resize(frames);
    for (size_t i = 0; i < frames; ++i) {
      for (size_t c = 0; c < num_channels; ++c) {
        int16_t s;
        std::memcpy(&s, buf.data() + data_off + (i * num_channels + c) * 2, 2);
        wav.channels[c][i] = s / 32768.0;
      }
    }
  } else {
    throw FormatError("ReadWav: unsupported format (need float32 or pcm16): " +
                      path);
  }
  return wav;
}

}  // namespace echotrace
