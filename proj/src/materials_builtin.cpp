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
// Built-in acoustic material database.
//
// Octave-band absorption coefficients (125 Hz .. 4 kHz) are transcribed from
// the standard published compilations of architectural-acoustics measurement
// tables: Kuttruff, "Room Acoustics" (5th ed.), appendix; Long,
// "Architectural Acoustics" (2nd ed.), appendix; Vorlaender, "Auralization",
// appendix B. Scattering and transmission coefficients are representative
// engineering estimates for the surface types; damping values (dB/m through
// the material) are rough estimates used for transmitted paths only.

#include "echotrace/materials.h"

namespace echotrace {

namespace {

AcousticMaterial Make(const char* name, std::vector<double> absorption,
                      std::vector<double> scattering,
                      std::vector<double> transmission = {},
                      std::vector<double> damping = {}) {
  AcousticMaterial m;
  m.name = name;
  m.absorption = CoefficientList::FromPairs(absorption);
  m.scattering = CoefficientList::FromPairs(scattering);
  m.transmission = CoefficientList::FromPairs(transmission);
  m.damping = CoefficientList::FromPairs(damping);
  return m;
}

}  // namespace

MaterialDatabase MaterialDatabase::BuiltIn() {
  MaterialDatabase db;

  // Hard structural surfaces.
  db.Add(Make("concrete",
              {125, 0.01, 250, 0.01, 500, 0.02, 1000, 0.02, 2000, 0.02, 4000, 0.03},
              {125, 0.10, 1000, 0.10, 4000, 0.15}));
  db.Add(Make("concrete_block_painted",
              {125, 0.10, 250, 0.05, 500, 0.06, 1000, 0.07, 2000, 0.09, 4000, 0.08},
              {125, 0.10, 1000, 0.15, 4000, 0.20}));
  db.Add(Make("brick",
              {125, 0.03, 250, 0.03, 500, 0.03, 1000, 0.04, 2000, 0.05, 4000, 0.07},
              {125, 0.15, 1000, 0.20, 4000, 0.25}));
  db.Add(Make("rough_stone",
              {125, 0.02, 250, 0.02, 500, 0.03, 1000, 0.04, 2000, 0.05, 4000, 0.05},
              {125, 0.20, 1000, 0.35, 4000, 0.50}));
  db.Add(Make("plaster",
              {125, 0.013, 250, 0.015, 500, 0.02, 1000, 0.03, 2000, 0.04, 4000, 0.05},
              {125, 0.05, 1000, 0.08, 4000, 0.10}));
  db.Add(Make("gypsum_board",
              {125, 0.29, 250, 0.10, 500, 0.05, 1000, 0.04, 2000, 0.07, 4000, 0.09},
              {125, 0.05, 1000, 0.08, 4000, 0.10},
              {125, 0.05, 1000, 0.03, 4000, 0.02}));
  db.Add(Make("marble_tile",
              {125, 0.01, 250, 0.01, 500, 0.01, 1000, 0.01, 2000, 0.02, 4000, 0.02},
              {125, 0.05, 1000, 0.05, 4000, 0.05}));
  db.Add(Make("ceramic_tile",
              {125, 0.01, 250, 0.01, 500, 0.01, 1000, 0.02, 2000, 0.02, 4000, 0.02},
              {125, 0.05, 1000, 0.08, 4000, 0.10}));
  db.Add(Make("linoleum",
              {125, 0.02, 250, 0.03, 500, 0.03, 1000, 0.03, 2000, 0.03, 4000, 0.02},
              {125, 0.05, 1000, 0.05, 4000, 0.08}));

  // Wood.
  db.Add(Make("wood_panel",
              {125, 0.28, 250, 0.22, 500, 0.17, 1000, 0.09, 2000, 0.10, 4000, 0.11},
              {125, 0.10, 1000, 0.10, 4000, 0.15},
              {125, 0.06, 1000, 0.04, 4000, 0.03}));
  db.Add(Make("wood_floor",
              {125, 0.15, 250, 0.11, 500, 0.10, 1000, 0.07, 2000, 0.06, 4000, 0.07},
              {125, 0.05, 1000, 0.10, 4000, 0.15}));
  db.Add(Make("parquet",
              {125, 0.04, 250, 0.04, 500, 0.07, 1000, 0.06, 2000, 0.06, 4000, 0.07},
              {125, 0.05, 1000, 0.08, 4000, 0.10}));
  db.Add(Make("plywood_panel",
              {125, 0.42, 250, 0.21, 500, 0.10, 1000, 0.08, 2000, 0.06, 4000, 0.06},
              {125, 0.05, 1000, 0.10, 4000, 0.10},
              {125, 0.10, 1000, 0.06, 4000, 0.04}));
  db.Add(Make("door_wood",
              {125, 0.14, 250, 0.10, 500, 0.06, 1000, 0.08, 2000, 0.10, 4000, 0.10},
              {125, 0.05, 1000, 0.08, 4000, 0.10},
              {125, 0.08, 1000, 0.05, 4000, 0.03}));

  // Glass and metal.
  db.Add(Make("glass_heavy",
              {125, 0.18, 250, 0.06, 500, 0.04, 1000, 0.03, 2000, 0.02, 4000, 0.02},
              {125, 0.05, 1000, 0.05, 4000, 0.05},
              {125, 0.04, 1000, 0.02, 4000, 0.01}));
  db.Add(Make("window_glass",
              {125, 0.35, 250, 0.25, 500, 0.18, 1000, 0.12, 2000, 0.07, 4000, 0.04},
              {125, 0.05, 1000, 0.05, 4000, 0.05},
              {125, 0.10, 1000, 0.05, 4000, 0.03}));
  db.Add(Make("metal_panel",
              {125, 0.05, 250, 0.10, 500, 0.10, 1000, 0.10, 2000, 0.07, 4000, 0.02},
              {125, 0.05, 1000, 0.05, 4000, 0.08}));
  db.Add(Make("mirror",
              {125, 0.12, 250, 0.10, 500, 0.05, 1000, 0.04, 2000, 0.02, 4000, 0.02},
              {125, 0.05, 1000, 0.05, 4000, 0.05}));

  // Absorbers.
  db.Add(Make("carpet",
              {125, 0.02, 250, 0.06, 500, 0.14, 1000, 0.37, 2000, 0.60, 4000, 0.65},
              {125, 0.10, 1000, 0.15, 4000, 0.25}));
  db.Add(Make("carpet_on_pad",
              {125, 0.08, 250, 0.24, 500, 0.57, 1000, 0.69, 2000, 0.71, 4000, 0.73},
              {125, 0.10, 1000, 0.15, 4000, 0.25}));
  db.Add(Make("curtain_light",
              {125, 0.03, 250, 0.04, 500, 0.11, 1000, 0.17, 2000, 0.24, 4000, 0.35},
              {125, 0.20, 1000, 0.35, 4000, 0.45},
              {125, 0.40, 1000, 0.35, 4000, 0.25},
              {125, 1.0, 1000, 2.0, 4000, 4.0}));
  db.Add(Make("curtain_heavy",
              {125, 0.14, 250, 0.35, 500, 0.55, 1000, 0.72, 2000, 0.70, 4000, 0.65},
              {125, 0.25, 1000, 0.40, 4000, 0.50},
              {125, 0.20, 1000, 0.12, 4000, 0.08},
              {125, 2.0, 1000, 4.0, 4000, 8.0}));
  db.Add(Make("acoustic_tile",
              {125, 0.76, 250, 0.93, 500, 0.83, 1000, 0.99, 2000, 0.99, 4000, 0.94},
              {125, 0.15, 1000, 0.25, 4000, 0.35}));
  db.Add(Make("fiberglass_panel",
              {125, 0.20, 250, 0.55, 500, 0.89, 1000, 0.97, 2000, 0.83, 4000, 0.79},
              {125, 0.15, 1000, 0.25, 4000, 0.35},
              {},
              {125, 10.0, 1000, 30.0, 4000, 60.0}));

  // Furnishings.
  db.Add(Make("upholstered_seat",
              {125, 0.19, 250, 0.37, 500, 0.56, 1000, 0.67, 2000, 0.61, 4000, 0.59},
              {125, 0.30, 1000, 0.50, 4000, 0.60}));
  db.Add(Make("sofa_fabric",
              {125, 0.35, 250, 0.35, 500, 0.45, 1000, 0.55, 2000, 0.60, 4000, 0.60},
              {125, 0.30, 1000, 0.50, 4000, 0.60}));
  db.Add(Make("mattress",
              {125, 0.30, 250, 0.40, 500, 0.60, 1000, 0.70, 2000, 0.75, 4000, 0.80},
              {125, 0.30, 1000, 0.45, 4000, 0.55}));
  db.Add(Make("bookshelf_filled",
              {125, 0.30, 250, 0.40, 500, 0.40, 1000, 0.30, 2000, 0.30, 4000, 0.20},
              {125, 0.30, 1000, 0.60, 4000, 0.70}));
  db.Add(Make("plastic_panel",
              {125, 0.10, 250, 0.07, 500, 0.05, 1000, 0.05, 2000, 0.05, 4000, 0.05},
              {125, 0.05, 1000, 0.08, 4000, 0.10}));

  // Outdoor / miscellaneous (named in the library's example set).
  db.Add(Make("soil",
              {125, 0.15, 250, 0.25, 500, 0.40, 1000, 0.55, 2000, 0.60, 4000, 0.60},
              {125, 0.30, 1000, 0.50, 4000, 0.60}));
  db.Add(Make("grass",
              {125, 0.11, 250, 0.26, 500, 0.60, 1000, 0.69, 2000, 0.92, 4000, 0.99},
              {125, 0.40, 1000, 0.60, 4000, 0.70}));
  db.Add(Make("water_surface",
              {125, 0.008, 250, 0.008, 500, 0.013, 1000, 0.015, 2000, 0.020, 4000, 0.025},
              {125, 0.05, 1000, 0.10, 4000, 0.15}));

  db.SetDefaultMaterialName("concrete");

  db.SetCategoryCandidates("floor", {"carpet", "wood_floor", "parquet",
                                     "marble_tile", "linoleum",
                                     "carpet_on_pad"});
  db.SetCategoryCandidates("ceiling",
                           {"gypsum_board", "acoustic_tile", "concrete",
                            "plaster"});
  db.SetCategoryCandidates("wall", {"gypsum_board", "brick", "plaster",
                                    "concrete_block_painted", "wood_panel"});
  db.SetCategoryCandidates("door", {"door_wood", "plywood_panel"});
  db.SetCategoryCandidates("window", {"window_glass", "glass_heavy"});
  db.SetCategoryCandidates("curtain", {"curtain_heavy", "curtain_light"});
  db.SetCategoryCandidates("blinds", {"curtain_light", "plastic_panel"});
  db.SetCategoryCandidates("table", {"wood_panel", "metal_panel",
                                     "plastic_panel"});
  db.SetCategoryCandidates("chair", {"upholstered_seat", "wood_panel",
                                     "plastic_panel"});
  db.SetCategoryCandidates("sofa", {"sofa_fabric", "upholstered_seat"});
  db.SetCategoryCandidates("couch", {"sofa_fabric", "upholstered_seat"});
  db.SetCategoryCandidates("bed", {"mattress", "sofa_fabric"});
  db.SetCategoryCandidates("cushion", {"sofa_fabric", "mattress"});
  db.SetCategoryCandidates("cabinet", {"wood_panel", "plywood_panel"});
  db.SetCategoryCandidates("chest_of_drawers", {"wood_panel", "plywood_panel"});
  db.SetCategoryCandidates("shelving", {"bookshelf_filled", "wood_panel"});
  db.SetCategoryCandidates("counter", {"wood_panel", "marble_tile"});
  db.SetCategoryCandidates("appliances", {"metal_panel", "plastic_panel"});
  db.SetCategoryCandidates("tv_monitor", {"glass_heavy", "plastic_panel"});
  db.SetCategoryCandidates("mirror", {"mirror"});
  db.SetCategoryCandidates("picture", {"wood_panel", "glass_heavy"});
  db.SetCategoryCandidates("sink", {"ceramic_tile", "metal_panel"});
  db.SetCategoryCandidates("toilet", {"ceramic_tile"});
  db.SetCategoryCandidates("bathtub", {"ceramic_tile", "plastic_panel"});
  db.SetCategoryCandidates("column", {"concrete", "plaster"});
  db.SetCategoryCandidates("stairs", {"wood_floor", "concrete"});
  db.SetCategoryCandidates("railing", {"metal_panel", "wood_panel"});
  db.SetCategoryCandidates("plant", {"grass"});
  db.SetCategoryCandidates("clothes", {"curtain_light", "curtain_heavy"});
  db.SetCategoryCandidates("towel", {"curtain_heavy"});
  db.SetCategoryCandidates("misc", {"concrete"});

  db.Validate();
  return db;
}

}  // namespace echotrace
