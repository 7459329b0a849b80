"""Dense symmetric eigensolver by cyclic Jacobi rotations.

Rotations are applied in round-robin (tournament) order: each round
annihilates ``n // 2`` disjoint off-diagonal pairs, and ``n - 1`` rounds
(``n`` for odd sizes) visit every pair once per sweep. The sweep itself
runs in a compiled kernel when available and in numpy otherwise; both
produce identical bits. Set ``RABI_GVM_PURE_PYTHON=1`` to force the
numpy kernel.
"""

import functools
import os

import numpy as np

from . import _jacobi_py

try:
    from . import _jacobi as _jacobi_ext
except ImportError:  # extension not built
    _jacobi_ext = None

_KERNELS = {"python": _jacobi_py.jacobi_sweep}
if _jacobi_ext is not None:
    _KERNELS["compiled"] = _jacobi_ext.jacobi_sweep

if os.environ.get("RABI_GVM_PURE_PYTHON", "") not in ("", "0") or _jacobi_ext is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-14


class JacobiConvergenceError(RuntimeError):
    """Raised when the off-diagonal norm is still above tolerance after the sweep cap."""

    def __init__(self, off_norm, sweeps):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )
        self.off_norm = off_norm
        self.sweeps = sweeps


def available_backends():
    return sorted(_KERNELS)


@functools.lru_cache(maxsize=64)
def round_robin_schedule(n):
    """Pair schedule of shape ``(rounds, pairs, 2)``, padded with ``-1``.

    Circle method: slot 0 stays fixed while the others rotate. For odd
    ``n`` a phantom index ``n`` sits out one pair per round.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p >= n or q >= n:
                pairs.append((-1, -1))
            else:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    sched = np.asarray(rounds, dtype=np.intc).reshape(m - 1, m // 2, 2)
    sched.setflags(write=False)
    return sched


def _off_norm(a):
    upper = np.triu(a, 1)
    return float(np.sqrt(2.0 * np.sum(upper * upper)))


def eigensolve_symmetric(matrix, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, backend=None):
    """Eigen-decomposition of a real symmetric matrix.

    Parameters
    ----------
    matrix : array_like
        Square matrix, symmetric to within ``1e-14`` entry-wise.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm is at most
        ``tol * ||A||_F``.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`JacobiConvergenceError`.
    backend : {"compiled", "python"}, optional
        Kernel override. Defaults to :data:`BACKEND`.

    Returns
    -------
    eigenvalues : numpy.ndarray
        Ascending.
    eigenvectors : numpy.ndarray
        Orthonormal columns; each column's largest-magnitude entry is
        positive (the first one on ties).
    """
    a = np.array(matrix, dtype=float, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    n = a.shape[0]
    lower = np.tril_indices(n, -1)
    a[lower] = a.T[lower]

    kernel = _KERNELS[backend or BACKEND]
    v = np.eye(n)
    if n > 1:
        schedule = round_robin_schedule(n)
        scale = float(np.linalg.norm(a))
        off = _off_norm(a)
        sweeps = 0
        while off > tol * scale:
            if sweeps == max_sweeps:
                raise JacobiConvergenceError(off, sweeps)
            kernel(a, v, schedule)
            sweeps += 1
            off = _off_norm(a)

    evals = np.diag(a).copy()
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    v = v[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    flip = v[pivots, np.arange(n)] < 0.0
    v[:, flip] *= -1.0
    return evals, v
