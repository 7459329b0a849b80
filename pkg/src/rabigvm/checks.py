"""Self-check suite: every structural invariant of the solvers, run on demand."""

import math
from dataclasses import dataclass

import numpy as np

from . import gvm
from .eigen import eigensolve_symmetric
from .exact import ground_state, solve_at_cutoff
from .grwa import grwa_energy, grwa_mean_photon
from .model import ModelParams, TruncationConfig, build_h_x, build_h_z, parity_operator
from .specfun import displacement_element, laguerre, laguerre_explicit

OMEGA_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)
G_GRID = (0.1, 0.3, 0.6, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(Omegas, gs):
    return [ModelParams(1.0, W, g) for W in Omegas for g in gs]


def check_laguerre_series():
    worst = 0.0
    ok = True
    for n in range(31):
        for k in range(11):
            for x in (0.1, 1.0, 4.0, 16.0):
                a, b = laguerre(n, k, x), laguerre_explicit(n, k, x)
                if abs(a - b) > 1e-10 * abs(b):
                    ok = False
                if b != 0.0:
                    worst = max(worst, abs(a - b) / abs(b))
    return ok, f"max relative deviation {worst:.2e}"


def check_displacement_unitarity():
    worst = 0.0
    for alpha in (-1.5, -0.7, 0.3, 1.0, 1.5):
        for N in range(11):
            total = math.fsum(displacement_element(alpha, N, M) ** 2 for M in range(N + 61))
            worst = max(worst, abs(total - 1.0))
    return worst <= 1e-8, f"max |row norm - 1| {worst:.2e}"


def check_displacement_reflection():
    worst = 0.0
    for alpha in (0.2, 0.9, 1.7):
        for N in range(12):
            for M in range(12):
                lhs = displacement_element(-alpha, N, M)
                rhs = (-1) ** (N - M) * displacement_element(alpha, N, M)
                worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-14, f"max deviation {worst:.2e}"


def check_builder_symmetry(points):
    ok = all(
        np.array_equal(build(p, 20), build(p, 20).T) for p in points for build in (build_h_z, build_h_x)
    )
    return ok, f"{len(points)} points, both frames"


def check_uncoupled_ground(Omegas):
    worst = 0.0
    for W in Omegas:
        p = ModelParams(1.0, W, 0.0)
        for n in (1, 4, 20):
            e, _, _ = solve_at_cutoff(p, n, method="full")
            worst = max(worst, abs(e - 0.5 * (1.0 - W)))
    return worst <= 1e-12, f"max |E - (w - Omega)/2| {worst:.2e}"


def check_frame_equivalence(points, eig_tol):
    worst_ratio = 0.0
    for p in points:
        hz = build_h_z(p, 20)
        ez, _ = eigensolve_symmetric(hz, eig_tol)
        ex, _ = eigensolve_symmetric(build_h_x(p, 20), eig_tol)
        bound = 10.0 * eig_tol * np.linalg.norm(hz)
        worst_ratio = max(worst_ratio, float(np.max(np.abs(ez - ex))) / bound)
    return worst_ratio <= 1.0, f"max deviation / (10 eig_tol ||H||) = {worst_ratio:.2e}"


def check_parity_sector(points):
    worst = 0.0
    for p in points:
        if p.Omega == 0.0:
            continue
        _, vec, _ = solve_at_cutoff(p, 20, method="full")
        pi = parity_operator(20)
        worst = max(worst, abs(abs(vec @ pi @ vec) - 1.0))
    return worst <= 1e-8, f"max ||<Pi>| - 1| {worst:.2e}"


def check_variational_dominance(points, cutoff):
    worst = math.inf
    for p in points:
        e_ns = ground_state(p, cutoff).ground_energy
        lams = np.linspace(-2.0 * p.g / p.omega, 0.0, 101)
        margin = min(gvm.e0_unperturbed(p, float(x)) for x in lams) - e_ns
        worst = min(worst, margin)
    return worst >= -1e-9, f"min E0(lambda) - E_NS = {worst:.3e}"


def check_truncation_monotone(points):
    ok = True
    for p in points:
        energies = [solve_at_cutoff(p, n)[0] for n in (4, 8, 16, 32, 64)]
        ok &= all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
    return ok, "E(n_max) non-increasing over n_max = 4..64"


def check_convergence(points, n_max):
    worst = 0.0
    where = None
    for p in points:
        delta = abs(solve_at_cutoff(p, 2 * n_max)[0] - solve_at_cutoff(p, n_max)[0])
        if delta > worst:
            worst, where = delta, p
    detail = f"max |E(2n) - E(n)| at n_max={n_max}: {worst:.2e}"
    if where is not None and worst > 1e-10:
        detail += f" (Omega={where.Omega:g}, g={where.g:g})"
    return worst <= 1e-10, detail


def check_root_residual(points):
    worst = max(abs(gvm.variational_condition(p, gvm.solve_lambda(p))) for p in points)
    return worst <= 1e-12, f"max residual {worst:.2e}"


def check_decoupling(points):
    worst = 0.0
    for p in points:
        lam = gvm.solve_lambda(p)
        worst = max(worst, abs(-(p.g + p.omega * lam) + 2.0 * lam * gvm.f_lambda(p, lam)))
    return worst <= 1e-11, f"max |-(g + w lam) + 2 lam F| {worst:.2e}"


def check_minimality(points):
    ok = True
    for p in points:
        lam = gvm.solve_lambda(p)
        e = gvm.e0_unperturbed(p, lam)
        ok &= e <= gvm.e0_unperturbed(p, lam + 1e-4) and e <= gvm.e0_unperturbed(p, lam - 1e-4)
    return ok, "E0 at the root <= E0 at root +- 1e-4"


def check_second_order_sign(points):
    worst = max(gvm.e0_second_order(p, gvm.solve_lambda(p))[0] for p in points)
    return worst <= 0.0, f"max E2 = {worst:.3e}"


def check_closed_form_exact_line(gs):
    ok = all(
        gvm.energy_closed_form(ModelParams(1.0, 0.0, g)) == 0.5 - g * g for g in gs
    )
    return ok, "E_closed(w=1, Omega=0, g) == 1/2 - g^2"


def check_photon_closed_decreasing(gs):
    gs = [g for g in gs if g > 0.0]
    if not gs:
        return True, "vacuous for g = 0"
    ok = True
    for g in gs:
        values = [gvm.mean_photon_closed(ModelParams(1.0, W, g)) for W in np.linspace(0, 3, 61)]
        ok &= all(b < a for a, b in zip(values, values[1:]))
    return ok, "strictly decreasing over Omega in [0, 3]"


def check_p_oracle():
    worst = 0.0
    for lam in (-0.05, -0.3, -0.6):
        p = ModelParams(1.0, 1.5, 0.0)
        for N in range(21):
            for M in range(max(0, N - 8), N + 1):
                d = displacement_element(2.0 * lam, N, M)
                for label, sign in (("plus", 1.0), ("minus", -1.0)):
                    got = gvm.matrix_element_p(p, lam, N, M, label)
                    worst = max(worst, abs(got - sign * 0.5 * p.Omega * d))
    return worst <= 1e-10, f"max |P - (+-Omega/2) D| {worst:.2e}"


def check_grwa_limits(gs):
    ok = True
    for g in gs:
        ok &= grwa_energy(ModelParams(1.0, 0.0, g)) == gvm.energy_closed_form(ModelParams(1.0, 0.0, g))
        ok &= grwa_mean_photon(ModelParams(1.0, 0.3, g)) == grwa_mean_photon(ModelParams(1.0, 1.7, g))
    return ok, "Omega = 0 agreement with closed form; photon number Omega-independent"


def check_gvm_beats_grwa(cutoff):
    ok = True
    for g in (0.2, 0.6):
        for W in np.linspace(0.0, 2.0, 41):
            if W <= 1.0:
                continue
            p = ModelParams(1.0, float(W), g)
            e_ns = ground_state(p, cutoff).ground_energy
            ok &= abs(gvm.energy_closed_form(p) - e_ns) < abs(grwa_energy(p) - e_ns)
    return ok, "|E_closed - E_NS| < |E_GRWA - E_NS| for Omega > w, g in {0.2, 0.6}"


def run_checks(n_max=None, Omega=None, g=None):
    """Evaluate the full invariant suite.

    ``Omega`` and ``g`` (units of omega) restrict the parameter grid to a
    single value; ``n_max`` sets the cutoff whose convergence is tested.
    """
    cutoff = TruncationConfig(n_max) if n_max is not None else TruncationConfig.from_env()
    Omegas = OMEGA_GRID if Omega is None else (float(Omega),)
    gs = G_GRID if g is None else (float(g),)
    points = _grid(Omegas, gs)
    conv_points = _grid(Omegas, (0.0, 0.2, 0.4, 0.6, 0.8, 1.0) if g is None else gs)

    checks = [
        ("laguerre recurrence matches series", check_laguerre_series),
        ("displacement rows are unit norm", check_displacement_unitarity),
        ("displacement reflection symmetry", check_displacement_reflection),
        ("hamiltonians exactly symmetric", lambda: check_builder_symmetry(points)),
        ("uncoupled ground energy", lambda: check_uncoupled_ground(Omegas)),
        ("H_x and H_z spectra agree", lambda: check_frame_equivalence(points, cutoff.eig_tol)),
        ("ground state has definite parity", lambda: check_parity_sector(points)),
        ("exact energy below variational energies", lambda: check_variational_dominance(points, cutoff)),
        ("exact energy monotone in truncation", lambda: check_truncation_monotone(points)),
        ("exact energy converged in truncation", lambda: check_convergence(conv_points, cutoff.n_max)),
        ("variational root residual", lambda: check_root_residual(points)),
        ("one-photon channel decouples at the root", lambda: check_decoupling(points)),
        ("root is a local minimum", lambda: check_minimality(points)),
        ("second-order correction non-positive", lambda: check_second_order_sign(points)),
        ("closed form exact at Omega = 0", lambda: check_closed_form_exact_line(gs)),
        ("closed photon number decreasing in Omega", lambda: check_photon_closed_decreasing(gs)),
        ("P matrix elements match displacement oracle", check_p_oracle),
        ("GRWA limits", lambda: check_grwa_limits(gs)),
        ("GVM beats GRWA at positive detuning", lambda: check_gvm_beats_grwa(cutoff)),
    ]
    results = []
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:  # report, don't abort the suite
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail))
    return results
