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

#ifndef ECHOTRACE_FFT_H_
#define ECHOTRACE_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace echotrace {

// In-place radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>>& data, bool inverse);

size_t NextPowerOfTwo(size_t n);

// Full linear convolution (length a+b-1) via zero-padded FFT.
std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b);

}  // namespace echotrace

#endif  // ECHOTRACE_FFT_H_
