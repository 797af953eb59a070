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
//
// Acceptance suite runner: one pass/fail line per criterion.
// Usage: acceptance [all | c01 .. c10]

#include <iostream>
#include <string>

#include "echotrace/validation.h"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  echotrace::ValidationOptions options;
  try {
    const auto results = echotrace::RunValidationSuite(suite, options);
    bool all_ok = true;
    for (const auto& r : results) {
      std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " "
                << r.name << ": " << r.detail << std::endl;
      all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance runner error: " << e.what() << std::endl;
    return 2;
  }
}
