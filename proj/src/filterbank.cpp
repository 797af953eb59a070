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

#include "echotrace/filterbank.h"

#include <cmath>
#include <complex>

#include "echotrace/common.h"
#include "echotrace/fft.h"

namespace echotrace {

namespace {

// Raised-cosine step in log-frequency, 0 below the crossover, 1 above,
// transitioning over +-half_width octaves.
double CrossoverStep(double f, double crossover_hz, double half_width_oct) {
  if (f <= 0.0) return 0.0;
  const double x = std::log2(f / crossover_hz) / (2.0 * half_width_oct) + 0.5;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 - 0.5 * std::cos(kPi * x);
}

constexpr double kHalfWidthOctaves = 0.35;

}  // namespace

FilterBank::FilterBank(const FrequencyBands& bands, int sampling_rate,
                       int fir_length)
    : sampling_rate_(sampling_rate), fir_length_(fir_length | 1) {
  const int M = bands.size();
  const size_t grid = NextPowerOfTwo(
      std::max<size_t>(8192, static_cast<size_t>(2 * fir_length_)));
  const double nyquist = sampling_rate / 2.0;

  // Band weights B_m(f) form a partition of unity: B_m = u_{m-1} - u_m with
  // monotone crossover steps u (u_{-1} = 1, u_{M-1} = 0). The band magnitude
  // is sqrt(B_m).
  const auto& crossovers = bands.crossovers();
  auto band_weight = [&](int m, double f) {
    const double u_prev =
        m == 0 ? 1.0
               : CrossoverStep(f, crossovers[m - 1], kHalfWidthOctaves);
    const double u_next =
        m == M - 1 ? 0.0 : CrossoverStep(f, crossovers[m], kHalfWidthOctaves);
    return std::max(0.0, u_prev - u_next);
  };

  taps_.resize(M);
  norms_.resize(M);
  const int half = fir_length_ / 2;
  for (int m = 0; m < M; ++m) {
    // Zero-phase frequency sampling of sqrt(B_m), then a Hann window.
    std::vector<std::complex<double>> spec(grid);
    for (size_t i = 0; i <= grid / 2; ++i) {
      const double f = nyquist * static_cast<double>(i) /
                       static_cast<double>(grid / 2);
      const double mag = std::sqrt(band_weight(m, f));
      spec[i] = mag;
      if (i > 0 && i < grid / 2) spec[grid - i] = mag;
    }
    Fft(spec, true);
    std::vector<double>& taps = taps_[m];
    taps.resize(fir_length_);
    double norm2 = 0.0;
    for (int n = -half; n <= half; ++n) {
      const size_t idx = (n + grid) % grid;
      const double w =
          0.5 + 0.5 * std::cos(kPi * static_cast<double>(n) / (half + 1));
      const double v = spec[idx].real() * w;
      taps[n + half] = v;
      norm2 += v * v;
    }
    norms_[m] = std::sqrt(norm2);
  }
}

std::vector<double> FilterBank::Apply(std::span<const double> x,
                                      int band) const {
  std::vector<double> y = FftConvolve(x, taps_[band]);
  const int half = fir_length_ / 2;
  // Remove the linear-phase group delay.
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = y[i + half];
  return out;
}

double FilterBank::PowerFlatnessErrorDb(double lo_hz, double hi_hz) const {
  const size_t grid = 16384;
  const double nyquist = sampling_rate_ / 2.0;
  // Evaluate sum_m |H_m|^2 on a frequency grid from the actual taps.
  std::vector<std::vector<std::complex<double>>> spectra(taps_.size());
  for (size_t m = 0; m < taps_.size(); ++m) {
    spectra[m].assign(grid, 0.0);
    for (int i = 0; i < fir_length_; ++i) spectra[m][i] = taps_[m][i];
    Fft(spectra[m], false);
  }
  double worst = 0.0;
  for (size_t i = 0; i <= grid / 2; ++i) {
    const double f = nyquist * static_cast<double>(i) /
                     static_cast<double>(grid / 2);
    if (f < lo_hz || f > hi_hz) continue;
    double power = 0.0;
    for (const auto& spec : spectra) power += std::norm(spec[i]);
    worst = std::max(worst, std::abs(10.0 * std::log10(power)));
  }
  return worst;
}

}  // namespace echotrace
