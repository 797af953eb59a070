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

#ifndef ECHOTRACE_VALIDATION_H_
#define ECHOTRACE_VALIDATION_H_

#include <string>
#include <vector>

namespace echotrace {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  // Pressure gain injected into the reverberant part of the DRR check;
  // sqrt(4 pi) reproduces the classic level bias and must make the check
  // fail by a wide margin.
  double inject_indirect_bias = 1.0;
  int thread_count = 1;
};

// Individual validation checks. IDs: c01..c10.
CheckResult CheckShoeboxOracle(const ValidationOptions& options);       // c01
CheckResult CheckReverberationSanity(const ValidationOptions& options); // c02
CheckResult CheckDrrUnbiased(const ValidationOptions& options);         // c03
CheckResult CheckSpeedQualityTradeoff(const ValidationOptions& options);// c04
CheckResult CheckSyntheticDecayMetrics(const ValidationOptions& options);//c05
CheckResult CheckDeterminism(const ValidationOptions& options);         // c06
CheckResult CheckContinuity(const ValidationOptions& options);          // c07
CheckResult CheckDiffractionSmoothness(const ValidationOptions& options);//c08
CheckResult CheckRandomization(const ValidationOptions& options);       // c09
CheckResult CheckMonteCarloConvergence(const ValidationOptions& options);//c10

// Runs a named suite: "shoebox" (c01+c02+c03), "decay" (c05),
// "continuity" (c07), "all" (c01..c10), or a single id like "c04".
std::vector<CheckResult> RunValidationSuite(const std::string& suite,
                                            const ValidationOptions& options);

}  // namespace echotrace

#endif  // ECHOTRACE_VALIDATION_H_
