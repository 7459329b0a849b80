import math

import pytest

from rabigvm import gvm
from rabigvm.exact import ground_state
from rabigvm.grwa import grwa, grwa_energy, grwa_mean_photon
from rabigvm.model import ModelParams


def test_limits():
    assert grwa_energy(ModelParams(1.0, 1.0, 0.0)) == 0.0
    assert grwa_energy(ModelParams(1.0, 0.0, 0.5)) == 0.25
    assert grwa_mean_photon(ModelParams(1.0, 1.7, 0.6)) == pytest.approx(0.36, abs=1e-15)


def test_value():
    p = ModelParams(1.0, 1.0, 0.2)
    assert grwa_energy(p) == pytest.approx(0.5 - 0.04 - 0.5 * math.exp(-0.08), abs=1e-15)
    assert grwa_energy(p) == pytest.approx(-0.0015582, abs=1e-7)


def test_result_bundle():
    p = ModelParams(2.0, 1.0, 0.4)
    r = grwa(p)
    assert r.energy == grwa_energy(p)
    assert r.mean_photon == pytest.approx(0.04)


@pytest.mark.parametrize("g", [0.2, 0.6])
def test_worse_than_variational_above_resonance(g):
    for W in (1.25, 1.5, 2.0):
        p = ModelParams(1.0, W, g)
        e_ns = ground_state(p).ground_energy
        assert abs(gvm.energy_closed_form(p) - e_ns) < abs(grwa_energy(p) - e_ns)
