import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from rabigvm import gvm
from rabigvm.exact import ground_state, mean_photon_exact
from rabigvm.model import BasisIndex, ModelParams
from rabigvm.specfun import displacement_element, laguerre

GRID = [ModelParams(1.0, W, g) for W in (0.0, 0.5, 1.0, 1.5, 2.0) for g in (0.1, 0.3, 0.6, 1.0)]


def _brent_root(p):
    f = lambda x: x * (p.omega + p.Omega * math.exp(-2 * x * x)) + p.g
    return brentq(f, -p.g / p.omega, 0.0, xtol=1e-16, rtol=1e-15)


# --- variational root -------------------------------------------------------


def test_root_examples():
    assert gvm.solve_lambda(ModelParams(1.0, 0.0, 0.5)) == -0.5
    assert gvm.solve_lambda(ModelParams(1.0, 1.0, 0.0)) == 0.0
    assert gvm.solve_lambda(ModelParams(1.0, 1.0, 0.1)) == pytest.approx(-0.050125628668101996, abs=1e-13)


@pytest.mark.parametrize("p", GRID, ids=str)
def test_root_matches_brent_and_bracket(p):
    lam = gvm.solve_lambda(p)
    assert lam == pytest.approx(_brent_root(p), abs=1e-13)
    assert -p.g / p.omega <= lam <= gvm.lambda_closed_form(p) <= 0.0
    assert abs(gvm.variational_condition(p, lam)) <= 1e-12 * p.omega


@pytest.mark.parametrize("p", GRID, ids=str)
def test_one_photon_channel_closes_at_root(p):
    lam = gvm.solve_lambda(p)
    coupling = -(p.g + p.omega * lam) + 2 * lam * gvm.f_lambda(p, lam)
    assert abs(coupling) <= 1e-11 * p.omega


@pytest.mark.parametrize("p", GRID, ids=str)
def test_root_minimizes_unperturbed_energy(p):
    lam = gvm.solve_lambda(p)
    e = gvm.e0_unperturbed(p, lam)
    assert e <= gvm.e0_unperturbed(p, lam + 1e-4)
    assert e <= gvm.e0_unperturbed(p, lam - 1e-4)


def test_closed_form_lambda():
    assert gvm.lambda_closed_form(ModelParams(1.0, 1.0, 0.1)) == -0.05
    assert gvm.lambda_closed_form(ModelParams(1.0, 0.0, 0.5)) == gvm.solve_lambda(ModelParams(1.0, 0.0, 0.5))
    p = ModelParams(1.0, 1.0, 0.6)
    assert gvm.lambda_closed_form(p) == pytest.approx(-0.3)
    assert gvm.solve_lambda(p) - gvm.lambda_closed_form(p) == pytest.approx(-0.03316323899523137, abs=1e-13)


def test_closed_lambda_error_is_third_order():
    ratios = []
    for g in (0.02, 0.04, 0.08):
        p = ModelParams(1.0, 1.0, g)
        ratios.append(abs(gvm.solve_lambda(p) - gvm.lambda_closed_form(p)) / g**3)
    assert max(ratios) / min(ratios) < 1.05


def test_fixed_point_step_beats_closed_form():
    p = ModelParams(1.0, 1.0, 0.6)
    exact = gvm.solve_lambda(p)
    assert abs(gvm.lambda_fixed_point(p) - exact) < abs(gvm.lambda_closed_form(p) - exact)


def test_multiple_roots_are_flagged():
    # strong atom: the condition is non-monotone and has three roots
    p = ModelParams(1.0, 10.0, 2.5)
    assert gvm.count_sign_changes(p) == 3
    with pytest.warns(gvm.MultipleRootsWarning):
        lam = gvm.solve_lambda(p)
    assert abs(gvm.variational_condition(p, lam)) <= 1e-12
    with pytest.warns(gvm.MultipleRootsWarning):
        sol = gvm.solve(p)
    assert sol.multiple_roots
    assert not gvm.solve(ModelParams(1.0, 1.0, 0.5)).multiple_roots


# --- energies ---------------------------------------------------------------


def test_unperturbed_energy_examples():
    assert gvm.e0_unperturbed(ModelParams(1.0, 0.0, 0.5), -0.5) == 0.25
    assert gvm.e0_unperturbed(ModelParams(1.0, 1.0, 0.0), 0.0) == 0.0
    p = ModelParams(1.0, 1.0, 0.2)
    e0 = gvm.e0_unperturbed(p, gvm.solve_lambda(p))
    assert e0 == pytest.approx(-0.0201, abs=5e-4)
    assert abs(e0 - ground_state(p).ground_energy) <= 0.01


@pytest.mark.parametrize("p", GRID, ids=str)
def test_unperturbed_energy_is_upper_bound(p):
    e_ns = ground_state(p).ground_energy
    for lam in np.linspace(-2 * p.g / p.omega, 0.0, 101):
        assert gvm.e0_unperturbed(p, float(lam)) >= e_ns - 1e-9


def test_second_order_vanishes_without_atom():
    for g in (0.1, 0.6, 1.0):
        value, terms = gvm.e0_second_order(ModelParams(1.0, 0.0, g), -g)
        assert value == 0.0


def test_second_order_improves_resonant_point():
    p = ModelParams(1.0, 1.0, 0.6)
    lam = gvm.solve_lambda(p)
    e0 = gvm.e0_unperturbed(p, lam)
    e2, terms = gvm.e0_second_order(p, lam)
    e_ns = ground_state(p).ground_energy
    assert e2 < 0
    assert abs(e0 + e2 - e_ns) < abs(e0 - e_ns)
    assert 2 <= terms < gvm.SERIES_CAP


@pytest.mark.parametrize("p", GRID, ids=str)
def test_second_order_non_positive(p):
    value, _ = gvm.e0_second_order(p, gvm.solve_lambda(p))
    assert value <= 0.0


def test_second_order_series_brute_force():
    # independent sum: couplings from the displacement oracle, levels rebuilt from the Laguerre diagonal
    p = ModelParams(1.0, 1.5, 0.8)
    lam = gvm.solve_lambda(p)
    e0 = gvm.e0_unperturbed(p, lam)
    total = 0.0
    for N in range(1, 80):
        label = "minus" if N % 2 == 0 else "plus"
        sign = -1.0 if label == "minus" else 1.0
        # <N, label| H_Omega |-, 0>
        coupling = -sign * 0.5 * p.Omega * displacement_element(2 * lam, N, 0)
        if N == 1:
            coupling += -(p.g + p.omega * lam)
        F = -0.5 * p.Omega * math.exp(-2 * lam * lam)
        level = lam * lam + 2 * lam * p.g + N + 0.5 - sign * F * laguerre(N, 0, 4 * lam * lam)
        total -= coupling**2 / (level - e0)
    value, _ = gvm.e0_second_order(p, lam)
    assert value == pytest.approx(total, rel=1e-12)


def test_closed_form_energy():
    assert gvm.energy_closed_form(ModelParams(1.0, 0.0, 0.5)) == 0.25
    assert gvm.energy_closed_form(ModelParams(1.0, 1.0, 0.2)) == pytest.approx(
        0.5 - 0.03 - 0.5 * math.exp(-0.02), abs=1e-15
    )
    assert gvm.energy_closed_form(ModelParams(1.0, 1.0, 0.2)) == pytest.approx(-0.020100, abs=1e-6)
    for g in (0.1, 0.4, 0.9):
        assert gvm.energy_closed_form(ModelParams(1.0, 0.0, g)) == 0.5 - g * g


def test_closed_form_weak_atom_reduces_to_grwa():
    from rabigvm.grwa import grwa_energy

    for g in (0.2, 0.6):
        diffs = [
            abs(gvm.energy_closed_form(ModelParams(1.0, W, g)) - grwa_energy(ModelParams(1.0, W, g)))
            for W in (1e-2, 1e-3, 1e-4)
        ]
        assert diffs[2] < diffs[1] < diffs[0]
        assert diffs[2] < 1e-4


# --- matrix elements ---------------------------------------------------------


def test_p_diagonal_at_zero_displacement():
    p = ModelParams(1.0, 1.3, 0.0)
    for M in range(6):
        assert gvm.matrix_element_p(p, 0.0, M, M, "plus") == pytest.approx(0.65)
        assert gvm.matrix_element_p(p, 0.0, M, M, "minus") == pytest.approx(-0.65)


def test_p_first_off_diagonal():
    p = ModelParams(1.0, 1.0, 0.0)
    lam = -0.05
    F = gvm.f_lambda(p, lam)
    assert gvm.matrix_element_p(p, lam, 1, 0, "plus") == pytest.approx(-F * 2 * lam, abs=1e-16)
    assert gvm.matrix_element_p(p, lam, 1, 0, "minus") == pytest.approx(F * 2 * lam, abs=1e-16)


@pytest.mark.parametrize("lam", [-0.05, -0.3, -0.6])
def test_p_matches_displacement_oracle(lam):
    p = ModelParams(1.0, 1.5, 0.0)
    for N in range(21):
        for M in range(max(0, N - 8), N + 1):
            d = displacement_element(2 * lam, N, M)
            assert gvm.matrix_element_p(p, lam, N, M, "plus") == pytest.approx(0.5 * p.Omega * d, abs=1e-10)
            assert gvm.matrix_element_p(p, lam, N, M, "minus") == pytest.approx(-0.5 * p.Omega * d, abs=1e-10)


def test_p_rejects_lower_triangle():
    with pytest.raises(ValueError):
        gvm.matrix_element_p(ModelParams(1.0, 1.0, 0.1), -0.1, 1, 2, "plus")


# --- wavefunction and photon number -----------------------------------------


def test_wavefunction_trivial_cases():
    assert gvm.ground_wavefunction(ModelParams(1.0, 1.0, 0.0), 0.0) == [(BasisIndex("minus", 0), 1.0)]
    p = ModelParams(1.0, 0.0, 0.7)
    assert gvm.ground_wavefunction(p, gvm.solve_lambda(p)) == [(BasisIndex("minus", 0), 1.0)]


def test_wavefunction_structure():
    p = ModelParams(1.0, 1.0, 0.6)
    lam = gvm.solve_lambda(p)
    wf = gvm.ground_wavefunction(p, lam)
    assert wf[0] == (BasisIndex("minus", 0), 1.0)
    for basis, coef in wf[1:]:
        expected = "minus" if basis.photon_n % 2 == 0 else "plus"
        assert basis.spin == expected
    c1 = dict((b, c) for b, c in wf).get(BasisIndex("plus", 1), 0.0)
    assert abs(c1) < 1e-14


def test_wavefunction_fidelity_against_exact():
    p = ModelParams(1.0, 1.0, 0.6)
    res = ground_state(p)
    lam = gvm.solve_lambda(p)
    vec = gvm.lab_frame_vector(p, lam, gvm.ground_wavefunction(p, lam), res.n_max_used)
    assert (vec @ res.ground_vector) ** 2 >= 0.99


def test_photon_full_examples():
    assert gvm.solve(ModelParams(1.0, 1.0, 0.0)).mean_photon == 0.0
    assert gvm.solve(ModelParams(1.0, 0.0, 0.6)).mean_photon == pytest.approx(0.36, abs=1e-15)
    p = ModelParams(1.0, 1.5, 0.6)
    assert abs(gvm.solve(p).mean_photon - mean_photon_exact(ground_state(p))) <= 0.05


def test_photon_full_equals_lab_frame_expectation():
    p = ModelParams(1.0, 1.2, 0.7)
    sol = gvm.solve(p)
    vec = gvm.lab_frame_vector(p, sol.lam, sol.wavefunction, 60)
    photons = np.arange(120) // 2
    assert sol.mean_photon == pytest.approx(float(np.sum(photons * vec**2)), abs=1e-10)


def test_photon_closed_examples():
    assert gvm.mean_photon_closed(ModelParams(1.0, 0.0, 0.6)) == pytest.approx(0.36, abs=1e-15)
    p = ModelParams(1.0, 1.5, 0.6)
    assert gvm.mean_photon_closed(p) == pytest.approx(0.36 / (1 + 1.5 * math.exp(-0.72)) ** 2, abs=1e-15)
    assert gvm.mean_photon_closed(p) == pytest.approx(0.12027, abs=1e-5)
    assert abs(gvm.mean_photon_closed(p) - mean_photon_exact(ground_state(p))) <= 0.05
    assert gvm.mean_photon_closed(ModelParams(1.0, 1.0, 0.0)) == 0.0


def test_photon_closed_variant():
    p = ModelParams(1.0, 1.5, 0.6)
    expected = 0.36 / (1 + 1.5 * math.exp(-0.72 / 6.25)) ** 2
    assert gvm.mean_photon_closed(p, exponent="omega+Omega") == pytest.approx(expected, abs=1e-15)
    with pytest.raises(ValueError):
        gvm.mean_photon_closed(p, exponent="bogus")


@settings(max_examples=50, deadline=None)
@given(g=st.floats(0.01, 2.0), W1=st.floats(0.0, 3.0), dW=st.floats(1e-3, 1.0))
def test_photon_closed_strictly_decreasing(g, W1, dW):
    a = gvm.mean_photon_closed(ModelParams(1.0, W1, g))
    b = gvm.mean_photon_closed(ModelParams(1.0, W1 + dW, g))
    assert b < a


def test_weak_atom_expansion():
    assert gvm.mean_photon_weak_atom(ModelParams(1.0, 0.0, 0.6)) == pytest.approx(0.36, abs=1e-15)
    assert gvm.mean_photon_weak_atom(ModelParams(1.0, 0.1, 0.6)) == pytest.approx(0.324954, abs=1e-6)
    for g in (0.2, 0.6):
        h = 1e-5
        base = ModelParams(1.0, 0.0, g)
        slope = (gvm.mean_photon_closed(ModelParams(1.0, h, g)) - gvm.mean_photon_closed(base)) / h
        analytic = -2 * g * g * math.exp(-2 * g * g)
        assert slope == pytest.approx(analytic, rel=1e-2)


def test_solution_fields_consistent():
    p = ModelParams(1.0, 1.0, 0.6)
    sol = gvm.solve(p)
    assert sol.energy == sol.e0_unperturbed + sol.e0_second
    assert sol.lam_closed == gvm.lambda_closed_form(p)
    assert sol.energy_closed == gvm.energy_closed_form(p)
    assert sol.f_lambda == pytest.approx(-0.5 * math.exp(-2 * sol.lam**2))
    assert sol.wavefunction[0] == (BasisIndex("minus", 0), 1.0)
