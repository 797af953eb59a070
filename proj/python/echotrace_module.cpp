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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "echotrace/audio.h"
#include "echotrace/config_io.h"
#include "echotrace/metrics.h"
#include "echotrace/oracle.h"
#include "echotrace/validation.h"

namespace py = pybind11;
using namespace echotrace;

namespace {

py::array_t<double> ChannelsToArray(
    const std::vector<std::vector<double>>& channels) {
  const size_t c = channels.size();
  const size_t n = channels.empty() ? 0 : channels[0].size();
  py::array_t<double> out({c, n});
  auto view = out.mutable_unchecked<2>();
  for (size_t i = 0; i < c; ++i)
    for (size_t j = 0; j < n; ++j) view(i, j) = channels[i][j];
  return out;
}

std::vector<std::vector<double>> ArrayToChannels(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() == 1) {
    std::vector<std::vector<double>> out(1);
    out[0].assign(a.data(), a.data() + a.shape(0));
    return out;
  }
  if (a.ndim() != 2)
    throw ConfigError("expected a 1-D or 2-D (channels x samples) array");
  std::vector<std::vector<double>> out(a.shape(0));
  auto view = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    out[i].resize(a.shape(1));
    for (py::ssize_t j = 0; j < a.shape(1); ++j) out[i][j] = view(i, j);
  }
  return out;
}

SimulationParams ParamsFromKwargs(const std::string& preset_name,
                                  const std::string& params_json) {
  if (!params_json.empty()) return ParamsFromJsonText(params_json);
  return Preset(RenderModeFromString(preset_name));
}

}  // namespace

PYBIND11_MODULE(_echotrace, m) {
  m.doc() = "Geometry-based room impulse response simulation";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<SimulationError>(m, "SimulationError");

  py::class_<Scene>(m, "Scene")
      .def_property_readonly("num_triangles",
                             [](const Scene& s) { return s.mesh.NumTriangles(); })
      .def_property_readonly(
          "num_diffraction_edges",
          [](const Scene& s) { return s.diffraction_edges.size(); })
      .def_property_readonly("speed_of_sound",
                             [](const Scene& s) { return s.speed_of_sound; });

  m.def(
      "load_scene",
      [](const std::string& path, double unit_scale,
         const std::string& materials_path, const std::string& policy,
         uint64_t seed, double noise_sigma) {
        TriangleMesh mesh = LoadMesh(path, unit_scale);
        MaterialDatabase db = materials_path.empty()
                                  ? MaterialDatabase::BuiltIn()
                                  : MaterialDatabase::FromJsonFile(
                                        materials_path);
        AssignmentPolicy p = AssignmentPolicy::kFixed;
        if (policy == "randomized") p = AssignmentPolicy::kRandomized;
        else if (policy == "uniform") p = AssignmentPolicy::kUniform;
        else if (policy != "fixed")
          throw ConfigError("unknown material policy '" + policy + "'");
        MaterialTable table =
            ResolveAssignment(db, mesh.categories, p, seed, noise_sigma);
        return BuildScene(std::move(mesh), std::move(table));
      },
      py::arg("path"), py::arg("unit_scale") = 1.0,
      py::arg("materials") = "", py::arg("material_policy") = "fixed",
      py::arg("seed") = 0, py::arg("material_noise_sigma") = 0.1,
      "Load an OBJ scene and resolve its materials");

  m.def(
      "make_shoebox",
      [](double lx, double ly, double lz, double absorption,
         double scattering) {
        AcousticMaterial mat;
        mat.name = "uniform";
        mat.absorption = CoefficientList::FromPairs({1000.0, absorption});
        mat.scattering = CoefficientList::FromPairs({1000.0, scattering});
        return BuildSceneWithMaterial(MakeShoeboxMesh(Vec3(lx, ly, lz)), mat);
      },
      py::arg("lx"), py::arg("ly"), py::arg("lz"),
      py::arg("absorption") = 0.2, py::arg("scattering") = 0.0,
      "Axis-aligned box room with a uniform material");

  m.def(
      "render_ir",
      [](const Scene& scene, const std::vector<double>& source,
         const std::vector<double>& listener, double heading_deg,
         const std::string& mic, int order, const std::string& preset,
         const std::string& params_json, uint64_t seed, int threads) {
        if (source.size() != 3 || listener.size() != 3)
          throw ConfigError("source and listener need 3 coordinates");
        SimulationParams params = ParamsFromKwargs(preset, params_json);
        params.rng_seed = seed;
        if (threads > 0) params.thread_count = threads;
        MicrophoneConfig config;
        config.layout = ChannelLayoutFromString(mic);
        config.ambisonics_order = order;
        config.Validate();
        ListenerPose pose{Vec3(listener[0], listener[1], listener[2]),
                          DegToRad(heading_deg)};
        RenderResult render =
            RenderIr(scene, Vec3(source[0], source[1], source[2]), pose,
                     config, params);
        return py::make_tuple(ChannelsToArray(render.ir.channels),
                              params.sampling_rate);
      },
      py::arg("scene"), py::arg("source"), py::arg("listener"),
      py::arg("heading_deg") = 0.0, py::arg("mic") = "mono",
      py::arg("order") = 1, py::arg("preset") = "high_quality",
      py::arg("params_json") = "", py::arg("seed") = 0,
      py::arg("threads") = 0,
      "Render an impulse response; returns (channels x samples, rate)");

  m.def(
      "rt60",
      [](const py::array_t<double, py::array::c_style |
                                       py::array::forcecast>& ir,
         int sampling_rate, const std::string& method) {
        const auto channels = ArrayToChannels(ir);
        const Rt60Result r =
            Rt60(channels[0], sampling_rate,
                 method == "t20" ? Rt60Method::kT20 : Rt60Method::kT30);
        return py::make_tuple(r.seconds, r.valid);
      },
      py::arg("ir"), py::arg("sampling_rate"), py::arg("method") = "t30",
      "Reverberation time from Schroeder backward integration");

  m.def(
      "drr",
      [](const py::array_t<double, py::array::c_style |
                                       py::array::forcecast>& ir,
         int sampling_rate, double direct_window_s) {
        const auto channels = ArrayToChannels(ir);
        const DrrResult r = Drr(channels[0], sampling_rate, direct_window_s);
        return py::make_tuple(r.db, r.valid, r.direct_only);
      },
      py::arg("ir"), py::arg("sampling_rate"),
      py::arg("direct_window_s") = 0.0025,
      "Direct-to-reverberant ratio in dB");

  m.def(
      "schroeder_edc",
      [](const py::array_t<double, py::array::c_style |
                                       py::array::forcecast>& ir,
         int sampling_rate) {
        const auto channels = ArrayToChannels(ir);
        const EnergyDecayCurve edc = SchroederEdc(channels[0], sampling_rate);
        return py::array_t<double>(static_cast<py::ssize_t>(edc.db.size()),
                                   edc.db.data());
      },
      py::arg("ir"), py::arg("sampling_rate"),
      "Energy decay curve in dB, normalized to 0 dB at t=0");

  m.def(
      "convolve",
      [](const py::array_t<double, py::array::c_style |
                                       py::array::forcecast>& source,
         const py::array_t<double, py::array::c_style |
                                       py::array::forcecast>& ir,
         int sampling_rate) {
        AudioClip clip;
        clip.sampling_rate = sampling_rate;
        clip.channels = ArrayToChannels(source);
        ImpulseResponse response;
        response.sampling_rate = sampling_rate;
        response.channels = ArrayToChannels(ir);
        return ChannelsToArray(Convolve(clip, response).channels);
      },
      py::arg("source"), py::arg("ir"), py::arg("sampling_rate") = 44100,
      "Full linear convolution of a mono source with each IR channel");

  m.def(
      "image_source_arrivals",
      [](const std::vector<double>& dims, double absorption,
         const std::vector<double>& source,
         const std::vector<double>& receiver, int max_order) {
        Shoebox box = Shoebox::Uniform(
            Vec3(dims[0], dims[1], dims[2]), absorption,
            Vec3(source[0], source[1], source[2]),
            Vec3(receiver[0], receiver[1], receiver[2]));
        const auto arrivals = ImageSourceArrivals(box, max_order);
        py::list out;
        for (const auto& a : arrivals)
          out.append(py::make_tuple(a.delay_s, a.energy, a.order));
        return out;
      },
      py::arg("dims"), py::arg("absorption"), py::arg("source"),
      py::arg("receiver"), py::arg("max_order") = 2,
      "Analytic shoebox arrivals: (delay_s, energy, order) tuples");

  m.def("sabine_rt60",
        [](double lx, double ly, double lz, double alpha) {
          return SabineRt60(Shoebox::Uniform(Vec3(lx, ly, lz), alpha,
                                             Vec3(1, 1, 1), Vec3(2, 2, 1)));
        },
        py::arg("lx"), py::arg("ly"), py::arg("lz"), py::arg("alpha"));
  m.def("eyring_rt60",
        [](double lx, double ly, double lz, double alpha) {
          return EyringRt60(Shoebox::Uniform(Vec3(lx, ly, lz), alpha,
                                             Vec3(1, 1, 1), Vec3(2, 2, 1)));
        },
        py::arg("lx"), py::arg("ly"), py::arg("lz"), py::arg("alpha"));

  m.def(
      "validate",
      [](const std::string& suite) {
        ValidationOptions options;
        const auto results = RunValidationSuite(suite, options);
        py::list out;
        for (const auto& r : results)
          out.append(py::make_tuple(r.id, r.passed, r.detail));
        return out;
      },
      py::arg("suite") = "decay", "Run a validation suite");

  m.attr("__version__") = "0.1.0";
}
