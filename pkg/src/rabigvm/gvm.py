"""Generalized variational method for the Rabi ground state.

The rotated Hamiltonian ``H_z`` is transformed with
``U = exp[lam sigma_z (a^dag - a)]``. The displacement ``lam`` minimizes the
energy of ``|-, 0>`` (sigma_x ground state times photon vacuum), and the
remaining off-diagonal couplings are treated to second order in the basis
``|+-, N>``.

Sign conventions (``F = -Omega/2 exp(-2 lam^2)``, ``x = 4 lam^2``):

* ``<N,+-| H_Omega |+-,N> = -+F L_N(x)``
* ``<N,+-| H_Omega |+-,M> = P_NM`` (``N - M`` even),
  ``P_NM = -+F (2 lam)^(N-M) sqrt(M!/N!) L_M^(N-M)(x)``, upper sign for a
  ``+`` bra; this equals ``+-(Omega/2) <N|D(2 lam)|M>``.
* ``<N,+-| H_Omega |-+,M> = -P_NM`` (``N - M`` odd).
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .model import BasisIndex
from .specfun import displacement_element, laguerre, laguerre_sequence, log_factorial

ROOT_TOL = 1e-12
SERIES_TOL = 1e-14
SERIES_CAP = 200
SCAN_SUBDIVISIONS = 64


class MultipleRootsWarning(RuntimeWarning):
    """The variational condition has more than one root in its bracket."""


@dataclass(frozen=True)
class GvmSolution:
    """Everything the variational treatment produces at one parameter point.

    ``wavefunction`` holds the raw Rayleigh-Schroedinger coefficients
    (``1`` on ``|-, 0>``, not normalized) keyed by sigma_x basis labels.
    ``mean_photon`` is the full expectation on the normalized state;
    ``mean_photon_closed`` is the explicit approximation.
    """

    lam: float
    lam_closed: float
    f_lambda: float
    e0_unperturbed: float
    e0_second: float
    energy: float
    energy_closed: float
    series_terms_used: int
    wavefunction: tuple
    mean_photon: float
    mean_photon_closed: float
    multiple_roots: bool = False


def f_lambda(params, lam):
    """``F(lam) = -(Omega/2) exp(-2 lam^2)``."""
    return -0.5 * params.Omega * math.exp(-2.0 * lam * lam)


def variational_condition(params, lam):
    """``lam [omega + Omega exp(-2 lam^2)] + g``; half the derivative of E0 in lam."""
    return lam * (params.omega + params.Omega * math.exp(-2.0 * lam * lam)) + params.g


def count_sign_changes(params, subdivisions=SCAN_SUBDIVISIONS):
    """Sign changes of the variational condition on a grid over ``[-g/omega, 0]``."""
    if params.g == 0.0:
        return 1
    grid = np.linspace(-params.g / params.omega, 0.0, subdivisions + 1)
    positive = [variational_condition(params, x) > 0.0 for x in grid]
    return sum(a != b for a, b in zip(positive, positive[1:]))


def _bisect(params, lo, hi):
    """Bisect to machine resolution on a bracket with f(lo) <= 0 < f(hi)."""
    if variational_condition(params, lo) == 0.0:
        return lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = variational_condition(params, mid)
        if f_mid == 0.0:
            return mid
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
    if abs(variational_condition(params, lo)) <= abs(variational_condition(params, hi)):
        return lo
    return hi


def _locate_root(params, tol):
    w, g = params.omega, params.g
    if g == 0.0:
        return 0.0, 1
    lo = -g / w
    if variational_condition(params, lo) > 0.0:
        raise RuntimeError("variational condition has no sign change on [-g/omega, 0]")

    changes = count_sign_changes(params)
    if changes <= 1:
        root = _bisect(params, lo, 0.0)
    else:
        grid = np.linspace(lo, 0.0, SCAN_SUBDIVISIONS + 1)
        candidates = [
            _bisect(params, float(a), float(b))
            for a, b in zip(grid, grid[1:])
            # local minima of E0 are upward crossings
            if variational_condition(params, a) <= 0.0 < variational_condition(params, b)
        ]
        root = min(candidates, key=lambda x: e0_unperturbed(params, x))

    residual = abs(variational_condition(params, root))
    if residual > tol * w:
        raise RuntimeError(f"bisection residual {residual:.3e} exceeds tolerance")
    return root, changes


def _warn_multiple(changes):
    warnings.warn(
        f"variational condition has {changes} sign changes on [-g/omega, 0]",
        MultipleRootsWarning,
        stacklevel=3,
    )


def solve_lambda(params, tol=ROOT_TOL):
    """Root of ``lam [omega + Omega exp(-2 lam^2)] + g = 0`` in ``[-g/omega, 0]``.

    The bracket always holds a root: the condition is ``<= 0`` at
    ``-g/omega`` and equals ``g >= 0`` at zero. Bisection runs to machine
    resolution and the residual must end below ``tol * omega``. If a
    pre-scan finds several sign changes a :class:`MultipleRootsWarning` is
    issued and the root with the lowest unperturbed energy is returned.
    """
    root, changes = _locate_root(params, tol)
    if changes > 1:
        _warn_multiple(changes)
    return root


def lambda_closed_form(params):
    """Small-coupling displacement ``-g / (omega + Omega)``."""
    return -params.g / (params.omega + params.Omega)


def lambda_fixed_point(params):
    """One fixed-point step ``-g / {omega + Omega exp[-2 g^2 / (omega + Omega)^2]}``."""
    w, W, g = params.omega, params.Omega, params.g
    return -g / (w + W * math.exp(-2.0 * g * g / (w + W) ** 2))


def e0_unperturbed(params, lam):
    """``<-,0| H_u |-,0>``; an upper bound on the ground energy for any ``lam``."""
    w, g = params.omega, params.g
    return 0.5 * w + lam * lam * w + 2.0 * lam * g + f_lambda(params, lam)


def intermediate_energy(params, lam, N, label, lag=None):
    """Diagonal energy of ``|label, N>`` in the transformed frame.

    ``lag`` may carry a precomputed ``L_N(4 lam^2)``.
    """
    if label not in ("plus", "minus"):
        raise ValueError(f"label must be 'plus' or 'minus', got {label!r}")
    w, g = params.omega, params.g
    if lag is None:
        lag = laguerre(N, 0, 4.0 * lam * lam)
    sign = -1.0 if label == "plus" else 1.0
    return lam * lam * w + 2.0 * lam * g + w * (N + 0.5) + sign * f_lambda(params, lam) * lag


def _ladder(lam, N, M):
    """``(2 lam)^(N-M) sqrt(M!/N!)`` through logs."""
    shift = N - M
    if shift == 0:
        return 1.0
    if lam == 0.0:
        return 0.0
    mag = math.exp(shift * math.log(abs(2.0 * lam)) + 0.5 * (log_factorial(M) - log_factorial(N)))
    return -mag if lam < 0.0 and shift % 2 else mag


def matrix_element_p(params, lam, N, M, bra_parity):
    """``P_NM`` for ``N >= M`` with the sign set by the bra (``"plus"``/``"minus"``)."""
    if N < M:
        raise ValueError("matrix_element_p needs N >= M; use the transpose")
    if bra_parity not in ("plus", "minus"):
        raise ValueError(f"bra_parity must be 'plus' or 'minus', got {bra_parity!r}")
    sign = -1.0 if bra_parity == "plus" else 1.0
    lag = laguerre(M, N - M, 4.0 * lam * lam)
    return sign * f_lambda(params, lam) * _ladder(lam, N, M) * lag


def _one_photon_channel(params, lam):
    """Coupling of ``|-,0>`` to ``|+,1>`` and the corresponding energy gap."""
    w, g = params.omega, params.g
    F = f_lambda(params, lam)
    coupling = -(g + w * lam) + 2.0 * lam * F
    gap = w - 2.0 * F * (1.0 - 2.0 * lam * lam)
    if gap <= 0.0:
        raise ValueError(f"non-positive excitation gap {gap:.3e} in the N=1 channel")
    return coupling, gap


def _series_label(N):
    return "minus" if N % 2 == 0 else "plus"


def _past_peak(lam, N):
    # terms scale like (4 lam^2)^N / N!, which peaks near N = 4 lam^2
    return N > 4.0 * lam * lam


def e0_second_order(params, lam, series_tol=SERIES_TOL):
    """Second-order energy correction and the last photon number summed.

    Returns
    -------
    value : float
        ``E^(2) <= 0``.
    terms_used : int
        Highest ``N`` included (the ``|+,1>`` channel counts as ``N = 1``).
    """
    coupling, gap = _one_photon_channel(params, lam)
    total = -coupling * coupling / gap
    if lam == 0.0 or params.Omega == 0.0:
        return total, 1

    F = f_lambda(params, lam)
    e0 = e0_unperturbed(params, lam)
    lags = laguerre_sequence(SERIES_CAP, 0, 4.0 * lam * lam).tolist()
    log2lam = math.log(abs(2.0 * lam))
    N = 1
    for N in range(2, SERIES_CAP + 1):
        denom = intermediate_energy(params, lam, N, _series_label(N), lags[N]) - e0
        if denom <= 0.0:
            raise ValueError(f"non-positive excitation gap {denom:.3e} at N={N}")
        term = F * F * math.exp(2 * N * log2lam - log_factorial(N)) / denom
        total -= term
        if _past_peak(lam, N) and abs(term) <= series_tol * abs(total):
            break
    return total, N


def energy_closed_form(params):
    """Explicit energy with ``lam = -g/(omega + Omega)`` and the series dropped."""
    w, W, g = params.omega, params.Omega, params.g
    return 0.5 * w - g * g * (w + 2.0 * W) / (w + W) ** 2 - 0.5 * W * math.exp(-2.0 * (g / (w + W)) ** 2)


def ground_wavefunction(params, lam, series_tol=SERIES_TOL):
    """First-order perturbed ground state in the transformed frame.

    Returns a list of ``(BasisIndex, coefficient)`` with sigma_x labels,
    ``1.0`` on ``|-, 0>``, zero coefficients omitted, not normalized.
    """
    coupling, gap = _one_photon_channel(params, lam)
    terms = [(BasisIndex("minus", 0), 1.0)]
    c1 = -coupling / gap
    if c1 != 0.0:
        terms.append((BasisIndex("plus", 1), c1))
    if lam == 0.0 or params.Omega == 0.0:
        return terms

    F = f_lambda(params, lam)
    e0 = e0_unperturbed(params, lam)
    lags = laguerre_sequence(SERIES_CAP, 0, 4.0 * lam * lam).tolist()
    log2lam = math.log(abs(2.0 * lam))
    for N in range(2, SERIES_CAP + 1):
        label = _series_label(N)
        denom = intermediate_energy(params, lam, N, label, lags[N]) - e0
        mag = math.exp(N * log2lam - 0.5 * log_factorial(N))
        if lam < 0.0 and N % 2:
            mag = -mag
        coef = -F * mag / denom
        if coef != 0.0:
            terms.append((BasisIndex(label, N), coef))
        if _past_peak(lam, N) and abs(coef) <= series_tol:
            break
    return terms


def _coefficient_map(wavefunction):
    out = {}
    for basis, coef in wavefunction:
        sign = 1 if basis.spin == "plus" else -1
        out[(sign, basis.photon_n)] = out.get((sign, basis.photon_n), 0.0) + coef
    return out


def mean_photon_full(params, solution):
    """``<a^dag a>`` from the normalized perturbed state.

    In the transformed frame the photon number reads
    ``a^dag a + lam^2 - lam sigma_z (a^dag + a)``; ``sigma_z`` swaps the
    ``+-`` labels.
    """
    lam = solution.lam
    coefs = _coefficient_map(solution.wavefunction)
    norm2 = sum(c * c for c in coefs.values())
    number = sum(N * c * c for (_, N), c in coefs.items())
    cross = 0.0
    for (s, N), c in coefs.items():
        cross += c * math.sqrt(N + 1) * coefs.get((-s, N + 1), 0.0)
        if N > 0:
            cross += c * math.sqrt(N) * coefs.get((-s, N - 1), 0.0)
    return number / norm2 + lam * lam - lam * cross / norm2


def mean_photon_closed(params, exponent="omega"):
    """Approximate ``g^2 / [omega + Omega exp(-2 g^2 / s^2)]^2``.

    ``exponent="omega"`` uses ``s = omega`` (the default, as the formula is
    usually quoted); ``"omega+Omega"`` uses ``s = omega + Omega``, the scale
    that appears in the closed-form displacement.
    """
    w, W, g = params.omega, params.Omega, params.g
    if exponent == "omega":
        scale = w
    elif exponent == "omega+Omega":
        scale = w + W
    else:
        raise ValueError(f"unknown exponent variant {exponent!r}")
    return g * g / (w + W * math.exp(-2.0 * g * g / scale**2)) ** 2


def mean_photon_weak_atom(params):
    """Linear-in-Omega expansion ``g^2/w^2 - 2 g^2 Omega exp(-2 g^2/w^2) / w^3``."""
    w, W, g = params.omega, params.Omega, params.g
    return g * g / w**2 - 2.0 * g * g * W * math.exp(-2.0 * g * g / w**2) / w**3


def lab_frame_vector(params, lam, wavefunction, n_max):
    """Undo the displacement: normalized ``U^dag |Psi>`` in the sigma_z x Fock basis.

    ``U^dag |+-, N> = (|up> D(-lam)|N> +- |down> D(lam)|N>) / sqrt(2)``,
    truncated to ``n_max`` photon levels.
    """
    out = np.zeros(2 * n_max)
    for basis, coef in wavefunction:
        sign = 1.0 if basis.spin == "plus" else -1.0
        N = basis.photon_n
        up = np.array([displacement_element(-lam, K, N) for K in range(n_max)])
        down = np.array([displacement_element(lam, K, N) for K in range(n_max)])
        out[0::2] += coef * up / math.sqrt(2.0)
        out[1::2] += coef * sign * down / math.sqrt(2.0)
    return out / np.linalg.norm(out)


def solve(params, tol=ROOT_TOL, series_tol=SERIES_TOL, exponent="omega"):
    """Full variational treatment at one parameter point."""
    lam, changes = _locate_root(params, tol)
    if changes > 1:
        _warn_multiple(changes)
    e0 = e0_unperturbed(params, lam)
    e2, terms = e0_second_order(params, lam, series_tol)
    wavefunction = tuple(ground_wavefunction(params, lam, series_tol))
    partial = GvmSolution(
        lam=lam,
        lam_closed=lambda_closed_form(params),
        f_lambda=f_lambda(params, lam),
        e0_unperturbed=e0,
        e0_second=e2,
        energy=e0 + e2,
        energy_closed=energy_closed_form(params),
        series_terms_used=terms,
        wavefunction=wavefunction,
        mean_photon=float("nan"),
        mean_photon_closed=mean_photon_closed(params, exponent),
        multiple_roots=changes > 1,
    )
    return replace(partial, mean_photon=mean_photon_full(params, partial))
