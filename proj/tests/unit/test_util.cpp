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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "echotrace/fft.h"
#include "echotrace/rng.h"
#include "echotrace/wav.h"

using namespace echotrace;

namespace {

std::vector<double> DirectConvolve(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("util");

TEST_CASE("fft convolution matches direct summation") {
  Pcg32 rng(123, 1);
  std::vector<double> a(1777), b(301);
  for (auto& x : a) x = rng.NextGaussian();
  for (auto& x : b) x = rng.NextGaussian();

  const auto fast = FftConvolve(a, b);
  const auto slow = DirectConvolve(a, b);
  REQUIRE(fast.size() == slow.size());
  double peak = 0.0;
  for (double x : slow) peak = std::max(peak, std::abs(x));
  for (size_t i = 0; i < fast.size(); ++i)
    CHECK(std::abs(fast[i] - slow[i]) <= 1e-9 * peak);
}

TEST_CASE("fft round trip restores the signal") {
  std::vector<std::complex<double>> data(256);
  Pcg32 rng(9, 2);
  std::vector<std::complex<double>> original(256);
  for (size_t i = 0; i < data.size(); ++i)
    original[i] = data[i] = {rng.NextGaussian(), rng.NextGaussian()};
  Fft(data, false);
  Fft(data, true);
  for (size_t i = 0; i < data.size(); ++i)
    CHECK(std::abs(data[i] - original[i]) < 1e-12);
}

TEST_CASE("pcg32 streams are reproducible and distinct") {
  Pcg32 a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 100; ++i) {
    const uint32_t va = a.NextUInt32();
    CHECK(va == b.NextUInt32());
    CHECK(va != c.NextUInt32());
  }
  Pcg32 g(7, 3);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += g.NextGaussian();
  mean /= n;
  CHECK(std::abs(mean) < 0.03);
}

TEST_CASE("wav float32 round trip and pcm16 read") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "echotrace_unit";
  fs::create_directories(dir);
  const std::string path = (dir / "roundtrip.wav").string();

  std::vector<std::vector<double>> channels(2, std::vector<double>(64));
  Pcg32 rng(5, 1);
  for (auto& c : channels)
    for (auto& s : c) s = rng.NextDouble() * 2.0 - 1.0;
  WriteWav(path, channels, 22050);

  const WavData read = ReadWav(path);
  REQUIRE(read.sampling_rate == 22050);
  REQUIRE(read.channels.size() == 2);
  REQUIRE(read.channels[0].size() == 64);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 64; ++i)
      CHECK(read.channels[c][i] ==
            doctest::Approx(channels[c][i]).epsilon(1e-7));

  // Minimal PCM16 file.
  const std::string pcm_path = (dir / "pcm16.wav").string();
  {
    std::FILE* f = std::fopen(pcm_path.c_str(), "wb");
    REQUIRE(f != nullptr);
    const int16_t samples[4] = {0, 16384, -16384, 32767};
    const uint32_t data_len = sizeof(samples);
    const uint32_t riff_len = 36 + data_len;
    const uint32_t fmt_len = 16, rate = 8000, byte_rate = 16000;
    const uint16_t fmt = 1, ch = 1, block = 2, bits = 16;
    std::fwrite("RIFF", 1, 4, f);
    std::fwrite(&riff_len, 4, 1, f);
    std::fwrite("WAVEfmt ", 1, 8, f);
    std::fwrite(&fmt_len, 4, 1, f);
    std::fwrite(&fmt, 2, 1, f);
    std::fwrite(&ch, 2, 1, f);
    std::fwrite(&rate, 4, 1, f);
    std::fwrite(&byte_rate, 4, 1, f);
    std::fwrite(&block, 2, 1, f);
    std::fwrite(&bits, 2, 1, f);
    std::fwrite("data", 1, 4, f);
    std::fwrite(&data_len, 4, 1, f);
    std::fwrite(samples, sizeof(samples), 1, f);
    std::fclose(f);
  }
  const WavData pcm = ReadWav(pcm_path);
  REQUIRE(pcm.channels.size() == 1);
  REQUIRE(pcm.channels[0].size() == 4);
  CHECK(pcm.channels[0][0] == doctest::Approx(0.0));
  CHECK(pcm.channels[0][1] == doctest::Approx(0.5));
  CHECK(pcm.channels[0][2] == doctest::Approx(-0.5));

  CHECK_THROWS_AS(ReadWav((dir / "missing.wav").string()), ConfigError);
}

TEST_SUITE_END();
