# Copyright 2026 The echotrace Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import echotrace


PARAMS = """{
  "schema": "echotrace.params.v1",
  "num_source_rays": 8192,
  "max_source_depth": 32,
  "num_listener_rays": 1024,
  "max_listener_depth": 2,
  "max_ir_seconds": 0.5,
  "diffraction_enabled": false,
  "transmission_enabled": false,
  "air_absorption_enabled": false
}"""


@pytest.fixture(scope="module")
def box():
    return echotrace.make_shoebox(4.0, 3.0, 2.5, absorption=0.2,
                                  scattering=0.0)


def test_scene_properties(box):
    assert box.num_triangles == 12
    assert box.num_diffraction_edges == 0
    assert box.speed_of_sound == pytest.approx(343.0)


def test_render_shapes_and_determinism(box):
    ir, rate = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                   params_json=PARAMS, seed=7)
    assert rate == 44100
    assert ir.shape == (1, int(0.5 * rate))
    assert np.isfinite(ir).all()

    again, _ = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                   params_json=PARAMS, seed=7)
    assert np.array_equal(ir, again)

    other, _ = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                   params_json=PARAMS, seed=8)
    assert not np.array_equal(ir, other)


def test_channel_counts(box):
    binaural, _ = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                      mic="binaural", params_json=PARAMS)
    assert binaural.shape[0] == 2
    ambi, _ = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                  mic="ambisonics", order=1,
                                  params_json=PARAMS)
    assert ambi.shape[0] == 4


def test_metrics_against_reverberation_formula(box):
    ir, rate = echotrace.render_ir(box, [1, 1, 1.2], [3, 2, 1.5],
                                   params_json=PARAMS, seed=3)
    rt, valid = echotrace.rt60(ir[0], rate)
    assert valid
    eyring = echotrace.eyring_rt60(4.0, 3.0, 2.5, 0.2)
    assert rt == pytest.approx(eyring, rel=0.35)

    drr, drr_valid, direct_only = echotrace.drr(ir[0], rate)
    assert drr_valid and not direct_only
    edc = echotrace.schroeder_edc(ir[0], rate)
    assert edc[0] == pytest.approx(0.0, abs=1e-9)
    assert (np.diff(edc) <= 1e-9).all()


def test_image_source_oracle_direct_delay():
    arrivals = echotrace.image_source_arrivals(
        [4, 3, 2.5], 0.2, [1, 1, 1], [3, 2, 1.5], max_order=1)
    delays = [a[0] for a in arrivals]
    orders = [a[2] for a in arrivals]
    assert orders.count(0) == 1
    assert orders.count(1) == 6
    direct = min(delays)
    assert direct == pytest.approx(math.sqrt(5.25) / 343.0)


def test_convolve_identity():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(256)
    y = echotrace.convolve(x, np.array([1.0]))
    assert y.shape == (1, 256)
    assert np.allclose(y[0], x)


def test_config_errors_surface_as_exceptions(box):
    with pytest.raises(echotrace.ConfigError):
        echotrace.render_ir(box, [1, 1], [3, 2, 1.5])
    with pytest.raises(echotrace.ConfigError):
        echotrace.render_ir(box, [1, 1, 1], [3, 2, 1.5], mic="laser")
