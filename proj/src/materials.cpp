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

#include "echotrace/materials.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "echotrace/common.h"
#include "echotrace/rng.h"

namespace echotrace {

CoefficientList CoefficientList::FromPairs(const std::vector<double>& flat) {
  if (flat.size() % 2 != 0)
    throw ConfigError("coefficient list must have an even number of entries");
  CoefficientList list;
  for (size_t i = 0; i < flat.size(); i += 2) {
    list.frequencies.push_back(flat[i]);
    list.values.push_back(flat[i + 1]);
  }
  for (size_t i = 1; i < list.frequencies.size(); ++i) {
    if (list.frequencies[i] <= list.frequencies[i - 1])
      throw ConfigError("coefficient frequencies must be strictly increasing");
  }
  return list;
}

std::vector<double> CoefficientList::ToPairs() const {
  std::vector<double> flat;
  flat.reserve(frequencies.size() * 2);
  for (size_t i = 0; i < frequencies.size(); ++i) {
    flat.push_back(frequencies[i]);
    flat.push_back(values[i]);
  }
  return flat;
}

namespace {

double DefaultCoefficient(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::kAbsorption:
      return 0.1;
    case CoefficientKind::kScattering:
      return 0.5;
    case CoefficientKind::kTransmission:
      return 0.0;
    case CoefficientKind::kDamping:
      return 0.0;
  }
  return 0.0;
}

const CoefficientList& ListFor(const AcousticMaterial& m,
                               CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::kAbsorption:
      return m.absorption;
    case CoefficientKind::kScattering:
      return m.scattering;
    case CoefficientKind::kTransmission:
      return m.transmission;
    case CoefficientKind::kDamping:
      return m.damping;
  }
  return m.absorption;
}

void ValidateList(const std::string& name, const char* kind,
                  const CoefficientList& list, double max_value) {
  if (list.frequencies.size() != list.values.size())
    throw ConfigError("material " + name + ": malformed " + kind + " list");
  for (size_t i = 0; i < list.values.size(); ++i) {
    if (list.frequencies[i] <= 0.0)
      throw ConfigError("material " + name + ": non-positive frequency in " +
                        kind);
    if (list.values[i] < 0.0 || list.values[i] > max_value)
      throw ConfigError("material " + name + ": " + kind +
                        " coefficient out of range");
  }
}

}  // namespace

void AcousticMaterial::Validate() const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  ValidateList(name, "absorption", absorption, 1.0);
  ValidateList(name, "scattering", scattering, 1.0);
  ValidateList(name, "transmission", transmission, 1.0);
  ValidateList(name, "damping", damping, kInf);
  // Per frequency: absorbed + transmitted energy cannot exceed the budget.
  std::set<double> freqs(absorption.frequencies.begin(),
                         absorption.frequencies.end());
  freqs.insert(transmission.frequencies.begin(),
               transmission.frequencies.end());
  for (double f : freqs) {
    const double a = CoefficientAt(*this, CoefficientKind::kAbsorption, f);
    const double t = CoefficientAt(*this, CoefficientKind::kTransmission, f);
    if (a + t > 1.0 + 1e-9)
      throw ConfigError("material " + name +
                        ": absorption + transmission exceeds 1");
  }
}

double CoefficientAt(const AcousticMaterial& material, CoefficientKind kind,
                     double frequency_hz) {
  if (frequency_hz <= 0.0)
    throw ConfigError("CoefficientAt: frequency must be positive");
  const CoefficientList& list = ListFor(material, kind);
  if (list.empty()) return DefaultCoefficient(kind);
  const auto& f = list.frequencies;
  const auto& v = list.values;
  if (frequency_hz <= f.front()) return v.front();
  if (frequency_hz >= f.back()) return v.back();
  const auto it = std::upper_bound(f.begin(), f.end(), frequency_hz);
  const size_t hi = static_cast<size_t>(it - f.begin());
  const size_t lo = hi - 1;
  const double t = (std::log(frequency_hz) - std::log(f[lo])) /
                   (std::log(f[hi]) - std::log(f[lo]));
  return v[lo] + t * (v[hi] - v[lo]);
}

std::vector<double> BandCoefficients(const AcousticMaterial& material,
                                     CoefficientKind kind,
                                     const FrequencyBands& bands) {
  std::vector<double> out(bands.size());
  for (int m = 0; m < bands.size(); ++m)
    out[m] = CoefficientAt(material, kind, bands.Center(m));
  return out;
}

void MaterialDatabase::Add(AcousticMaterial material) {
  material.Validate();
  auto it = index_.find(material.name);
  if (it != index_.end()) {
    materials_[it->second] = std::move(material);
    return;
  }
  index_[material.name] = static_cast<int>(materials_.size());
  materials_.push_back(std::move(material));
}

const AcousticMaterial* MaterialDatabase::Find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &materials_[it->second];
}

const AcousticMaterial& MaterialDatabase::DefaultMaterial() const {
  const AcousticMaterial* m = Find(default_name_);
  if (m == nullptr)
    throw ConfigError("material database has no default material '" +
                      default_name_ + "'");
  return *m;
}

void MaterialDatabase::SetCategoryCandidates(const std::string& category,
                                             std::vector<std::string> names) {
  if (names.empty())
    throw ConfigError("category '" + category + "' has no candidates");
  category_map_[category] = std::move(names);
}

void MaterialDatabase::SetDefaultMaterialName(const std::string& name) {
  default_name_ = name;
}

std::vector<const AcousticMaterial*> MaterialDatabase::Candidates(
    const std::string& category) const {
  std::vector<const AcousticMaterial*> out;
  auto it = category_map_.find(category);
  if (it == category_map_.end()) return out;
  for (const auto& name : it->second) {
    const AcousticMaterial* m = Find(name);
    if (m == nullptr)
      throw ConfigError("category '" + category +
                        "' references unknown material '" + name + "'");
    out.push_back(m);
  }
  return out;
}

void MaterialDatabase::Validate() const {
  DefaultMaterial();
  for (const auto& [category, names] : category_map_) {
    if (names.empty())
      throw ConfigError("category '" + category + "' has no candidates");
    Candidates(category);
  }
}

MaterialDatabase MaterialDatabase::FromJsonFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open material config " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  try {
    return FromJsonText(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("material config " + path + ": " + e.what());
  }
}

MaterialDatabase MaterialDatabase::FromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("material config parse error: ") + e.what());
  }
  MaterialDatabase db;
  if (!j.contains("materials") || !j["materials"].is_object())
    throw FormatError("material config: missing 'materials' object");
  for (const auto& [name, body] : j["materials"].items()) {
    AcousticMaterial m;
    m.name = name;
    auto read_list = [&](const char* key) -> CoefficientList {
      if (!body.contains(key)) return {};
      return CoefficientList::FromPairs(
          body[key].get<std::vector<double>>());
    };
    m.absorption = read_list("absorption");
    m.scattering = read_list("scattering");
    m.transmission = read_list("transmission");
    m.damping = read_list("damping");
    db.Add(std::move(m));
  }
  if (j.contains("category_to_material")) {
    for (const auto& [category, names] : j["category_to_material"].items())
      db.SetCategoryCandidates(category,
                               names.get<std::vector<std::string>>());
  }
  if (j.contains("default_material"))
    db.SetDefaultMaterialName(j["default_material"].get<std::string>());
  else if (!db.materials().empty())
    db.SetDefaultMaterialName(db.materials().front().name);
  db.Validate();
  return db;
}

namespace {

void PerturbList(CoefficientList& list, double sigma, double max_value,
                 Pcg32& rng) {
  for (auto& v : list.values)
    v = std::clamp(v + sigma * rng.NextGaussian(), 0.0, max_value);
}

void UniformList(CoefficientList& list, Pcg32& rng) {
  for (auto& v : list.values) v = rng.NextDouble();
}

}  // namespace

MaterialTable ResolveAssignment(const MaterialDatabase& db,
                                const std::vector<std::string>& categories,
                                AssignmentPolicy policy, uint64_t seed,
                                double noise_sigma) {
  MaterialTable table;
  table.triangle_material.resize(categories.size(), -1);

  // One resolved material instance per distinct category, chosen in sorted
  // category order so the result only depends on the category SET and seed.
  std::set<std::string> distinct(categories.begin(), categories.end());
  std::map<std::string, int> resolved;
  for (const auto& category : distinct) {
    std::vector<const AcousticMaterial*> candidates = db.Candidates(category);
    AcousticMaterial chosen;
    if (candidates.empty()) {
      chosen = db.DefaultMaterial();
      ++table.unknown_category_count;
    } else if (policy == AssignmentPolicy::kFixed) {
      chosen = *candidates.front();
    } else {
      Pcg32 pick_rng(CombineSeed(seed, HashString(category)),
                     0x9d2c);
      chosen = *candidates[pick_rng.NextBelow(
          static_cast<uint32_t>(candidates.size()))];
    }
    if (policy == AssignmentPolicy::kRandomized) {
      Pcg32 noise_rng(
          CombineSeed(seed, HashString(category) ^ 0x5bd1e995ULL),
          0x1357);
      constexpr double kInf = std::numeric_limits<double>::infinity();
      PerturbList(chosen.absorption, noise_sigma, 1.0, noise_rng);
      PerturbList(chosen.scattering, noise_sigma, 1.0, noise_rng);
      PerturbList(chosen.transmission, noise_sigma, 1.0, noise_rng);
      PerturbList(chosen.damping, noise_sigma, kInf, noise_rng);
    } else if (policy == AssignmentPolicy::kUniform) {
      Pcg32 noise_rng(
          CombineSeed(seed, HashString(category) ^ 0x5bd1e995ULL),
          0x1357);
      UniformList(chosen.absorption, noise_rng);
      UniformList(chosen.scattering, noise_rng);
      UniformList(chosen.transmission, noise_rng);
      // Keep the absorption+transmission budget valid in the ablation mode.
      for (size_t i = 0; i < chosen.transmission.values.size(); ++i) {
        const double f = chosen.transmission.frequencies[i];
        const double a =
            CoefficientAt(chosen, CoefficientKind::kAbsorption, f);
        chosen.transmission.values[i] =
            std::min(chosen.transmission.values[i], 1.0 - a);
      }
      for (size_t i = 0; i < chosen.absorption.values.size(); ++i) {
        const double f = chosen.absorption.frequencies[i];
        const double t =
            CoefficientAt(chosen, CoefficientKind::kTransmission, f);
        chosen.absorption.values[i] =
            std::min(chosen.absorption.values[i], 1.0 - t);
      }
    }
    chosen.name += "@" + category;
    resolved[category] = static_cast<int>(table.materials.size());
    table.materials.push_back(std::move(chosen));
  }
  for (size_t i = 0; i < categories.size(); ++i)
    table.triangle_material[i] = resolved.at(categories[i]);
  return table;
}

}  // namespace echotrace
