"""Numerically exact ground state by diagonalizing the truncated Hamiltonian."""

from dataclasses import dataclass

import numpy as np

from .eigen import eigensolve_symmetric
from .model import (
    TruncationConfig,
    build_h_z,
    embed_parity_vector,
    parity_block,
    parity_operator,
)

# Gap below which two lowest levels are treated as one degenerate doublet
# (relative to omega).
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpectralResult:
    """Ground state of ``H_z`` at a given Fock cutoff.

    ``ground_vector`` is in the photon-major sigma_z x Fock basis with
    ``n_max_used`` levels. ``energy_delta`` is the change in ground energy
    from the previous (half-size) cutoff; ``parity`` is the eigenvalue of
    ``sigma_x (-1)^(a^dag a)`` on the returned state.
    """

    ground_energy: float
    ground_vector: np.ndarray
    n_max_used: int
    converged: bool
    energy_delta: float
    parity: int


def _parity_ground(params, n_max, tol):
    """Lowest level over both parity sectors; ties go to the odd (-1) sector."""
    e_minus, v_minus = eigensolve_symmetric(parity_block(params, n_max, -1), tol)
    e_plus, v_plus = eigensolve_symmetric(parity_block(params, n_max, +1), tol)
    if e_plus[0] < e_minus[0] - DEGENERACY_TOL * params.omega:
        return e_plus[0], embed_parity_vector(v_plus[:, 0], +1), 1
    return e_minus[0], embed_parity_vector(v_minus[:, 0], -1), -1


def _full_ground(params, n_max, tol):
    """Lowest level of the full ``H_z`` matrix.

    A degenerate ground doublet (``Omega = 0``) is resolved into parity
    eigenstates and the odd combination is kept, which is the ``Omega -> 0+``
    limit of the non-degenerate ground state.
    """
    evals, evecs = eigensolve_symmetric(build_h_z(params, n_max), tol)
    pi = parity_operator(n_max)
    vec = evecs[:, 0]
    if len(evals) > 1 and evals[1] - evals[0] <= DEGENERACY_TOL * params.omega:
        pair = evecs[:, :2]
        p_evals, p_evecs = eigensolve_symmetric(pair.T @ pi @ pair, tol)
        vec = pair @ p_evecs[:, 0]
        vec /= np.linalg.norm(vec)
    parity = int(np.rint(vec @ pi @ vec))
    return evals[0], vec, parity


def _sign_fix(vec):
    # parity states have |up| == |down| per photon level; take the first
    # near-maximal entry so rounding cannot flip the choice
    mag = np.abs(vec)
    k = int(np.argmax(mag >= mag.max() * (1.0 - 1e-9)))
    return -vec if vec[k] < 0 else vec


def solve_at_cutoff(params, n_max, tol=1e-12, method="parity"):
    """Ground energy, vector and parity at a fixed cutoff, no convergence control."""
    if method == "parity":
        energy, vec, parity = _parity_ground(params, n_max, tol)
    elif method == "full":
        energy, vec, parity = _full_ground(params, n_max, tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(energy), _sign_fix(vec), parity


def ground_state(params, cutoff=None, method="parity"):
    """Exact ground state with automatic Fock-cutoff doubling.

    Diagonalizes at ``n_max`` and ``n_max // 2``; while the energy change
    exceeds ``conv_tol * omega`` the cutoff is doubled, up to
    ``max_growth * n_max``. A result is always returned; check
    ``converged``.

    ``method="parity"`` diagonalizes the two parity blocks of ``H_z``
    separately (same spectrum, an eighth of the work); ``"full"``
    diagonalizes the whole matrix.
    """
    if cutoff is None:
        cutoff = TruncationConfig.from_env()
    tol = cutoff.eig_tol
    limit = cutoff.n_max * cutoff.max_growth
    threshold = cutoff.conv_tol * params.omega

    n = cutoff.n_max
    previous, _, _ = solve_at_cutoff(params, max(n // 2, 1), tol, method)
    while True:
        energy, vec, parity = solve_at_cutoff(params, n, tol, method)
        delta = abs(energy - previous)
        converged = delta <= threshold
        if converged or 2 * n > limit:
            break
        previous = energy
        n *= 2

    return SpectralResult(
        ground_energy=energy,
        ground_vector=vec,
        n_max_used=n,
        converged=converged,
        energy_delta=delta,
        parity=parity,
    )


def mean_photon_exact(result):
    """``<a^dag a>`` of the ground vector. Inherits ``result.converged``."""
    c = result.ground_vector
    photons = np.arange(c.shape[0]) // 2
    return float(np.sum(photons * c * c))


def mean_sigma_x_exact(result):
    """``<sigma_x>`` of the ground vector in the rotated frame, in ``[-1, 1]``."""
    c = result.ground_vector
    value = 2.0 * float(np.dot(c[0::2], c[1::2]))
    return min(1.0, max(-1.0, value))
