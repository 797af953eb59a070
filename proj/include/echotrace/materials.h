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

#ifndef ECHOTRACE_MATERIALS_H_
#define ECHOTRACE_MATERIALS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echotrace/bands.h"

namespace echotrace {

enum class CoefficientKind { kAbsorption, kScattering, kTransmission, kDamping };

// Frequency-tagged coefficient list, the (f1,c1,f2,c2,...) pair format.
struct CoefficientList {
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<double> values;

  bool empty() const { return frequencies.empty(); }
  static CoefficientList FromPairs(const std::vector<double>& flat);
  std::vector<double> ToPairs() const;
};

struct AcousticMaterial {
  std::string name;
  CoefficientList absorption;
  CoefficientList scattering;
  CoefficientList transmission;
  CoefficientList damping;  // dB per meter

  // Checks coefficient ranges and the per-frequency absorption+transmission
  // budget; throws ConfigError on violation.
  void Validate() const;
};

// Interpolated coefficient lookup: linear in log-frequency between listed
// points, constant beyond the endpoints. Empty lists fall back to
// kind-specific defaults (absorption 0.1, scattering 0.5, transmission 0,
// damping 0).
double CoefficientAt(const AcousticMaterial& material, CoefficientKind kind,
                     double frequency_hz);

std::vector<double> BandCoefficients(const AcousticMaterial& material,
                                     CoefficientKind kind,
                                     const FrequencyBands& bands);

class MaterialDatabase {
 public:
  // The built-in database: 29 architectural materials plus the category map.
  static MaterialDatabase BuiltIn();
  static MaterialDatabase FromJsonFile(const std::string& path);
  static MaterialDatabase FromJsonText(const std::string& text);

  void Add(AcousticMaterial material);
  const AcousticMaterial* Find(const std::string& name) const;
  const AcousticMaterial& DefaultMaterial() const;

  const std::vector<AcousticMaterial>& materials() const { return materials_; }
  const std::map<std::string, std::vector<std::string>>& category_map() const {
    return category_map_;
  }
  void SetCategoryCandidates(const std::string& category,
                             std::vector<std::string> names);
  void SetDefaultMaterialName(const std::string& name);
  const std::string& default_material_name() const { return default_name_; }

  // Candidate materials for a category; empty if the category is unknown.
  std::vector<const AcousticMaterial*> Candidates(
      const std::string& category) const;

  void Validate() const;

 private:
  std::vector<AcousticMaterial> materials_;
  std::map<std::string, int> index_;
  std::map<std::string, std::vector<std::string>> category_map_;
  std::string default_name_;
};

enum class AssignmentPolicy {
  kFixed,       // first candidate of each category, no noise
  kRandomized,  // uniform candidate choice + clamped Gaussian noise
  kUniform,     // ablation: coefficients drawn uniformly from [0,1]
};

// Result of resolving per-triangle category labels against a database.
struct MaterialTable {
  std::vector<AcousticMaterial> materials;  // resolved (possibly perturbed)
  std::vector<int> triangle_material;       // index into materials
  int unknown_category_count = 0;
};

// Deterministic in (db, categories, policy, seed, noise_sigma). The material
// choice is drawn once per category; Gaussian noise (std noise_sigma) is then
// added to every coefficient of the chosen material and clamped to [0,1]
// (damping clamps to [0, inf)).
MaterialTable ResolveAssignment(const MaterialDatabase& db,
                                const std::vector<std::string>& categories,
                                AssignmentPolicy policy, uint64_t seed,
                                double noise_sigma = 0.1);

}  // namespace echotrace

#endif  // ECHOTRACE_MATERIALS_H_
