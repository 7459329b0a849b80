"""Rabi Hamiltonian in a truncated spin x Fock basis.

Basis ordering is photon-major throughout the package: flat index
``2 * N + spin_bit`` with ``spin_bit = 0`` for sigma_z up and ``1`` for
down. Energies are in units with hbar = 1.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

#: Largest Fock cutoff accepted by the dense builders (2 * n_max rows).
MAX_FOCK_LEVELS = 2000

DEFAULT_NMAX = 60

SPIN_BITS = {"up": 0, "down": 1}
PARITY_SIGNS = {"plus": 1, "minus": -1}


def default_nmax():
    """Default Fock cutoff, overridable by the ``RABI_GVM_NMAX`` variable."""
    raw = os.environ.get("RABI_GVM_NMAX")
    if raw is None or raw.strip() == "":
        return DEFAULT_NMAX
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"RABI_GVM_NMAX must be an integer, got {raw!r}") from None
    return value


@dataclass(frozen=True)
class ModelParams:
    """Photon frequency ``omega``, atomic splitting ``Omega``, coupling ``g``.

    Negative ``g`` describes the same spectrum (``lambda -> -lambda``) but
    is rejected so that the sign of the displacement is unambiguous.
    """

    omega: float = 1.0
    Omega: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        for name in ("omega", "Omega", "g"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.omega <= 0.0:
            raise ValueError(f"omega must be strictly positive, got {self.omega}")
        if self.Omega < 0.0:
            raise ValueError(f"Omega must be non-negative, got {self.Omega}")
        if self.g < 0.0:
            raise ValueError(
                f"g must be non-negative, got {self.g} "
                "(the spectrum is symmetric under g -> -g)"
            )

    def scaled(self, omega):
        """Same dimensionless ratios with photon frequency ``omega``."""
        r = omega / self.omega
        return ModelParams(omega, self.Omega * r, self.g * r)


@dataclass(frozen=True)
class TruncationConfig:
    """Fock cutoff and tolerances for the exact solver.

    ``eig_tol`` is relative to the Frobenius norm of the matrix being
    diagonalized; ``conv_tol`` is in units of ``omega``. ``max_growth`` caps
    automatic doubling of ``n_max`` (4 means at most two doublings).
    """

    n_max: int = DEFAULT_NMAX
    eig_tol: float = 1e-12
    conv_tol: float = 1e-10
    max_growth: int = 4

    def __post_init__(self):
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max:
            raise ValueError(f"n_max must be an integer, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.n_max < 4:
            raise ValueError(f"n_max must be at least 4, got {self.n_max}")
        if self.n_max > MAX_FOCK_LEVELS:
            raise ValueError(
                f"n_max={self.n_max} exceeds the dense-matrix budget "
                f"of {MAX_FOCK_LEVELS} Fock levels"
            )
        if not self.eig_tol > 0 or not self.conv_tol > 0:
            raise ValueError("eig_tol and conv_tol must be positive")
        if self.max_growth < 1:
            raise ValueError("max_growth must be >= 1")

    @classmethod
    def from_env(cls, **kwargs):
        kwargs.setdefault("n_max", default_nmax())
        return cls(**kwargs)


@dataclass(frozen=True)
class BasisIndex:
    """One product basis state.

    ``spin`` is ``"up"``/``"down"`` for sigma_z states or ``"plus"``/
    ``"minus"`` for the sigma_x eigenstates ``(|up> +- |down>)/sqrt(2)``.
    Only the sigma_z labels have a flat index in the dense matrices.
    """

    spin: str
    photon_n: int

    def __post_init__(self):
        if self.spin not in SPIN_BITS and self.spin not in PARITY_SIGNS:
            raise ValueError(f"unknown spin label {self.spin!r}")
        if self.photon_n < 0:
            raise ValueError("photon_n must be non-negative")

    def flat(self, n_max=None):
        if self.spin not in SPIN_BITS:
            raise ValueError(f"{self.spin!r} states have no flat index")
        if n_max is not None and self.photon_n >= n_max:
            raise ValueError(f"photon_n={self.photon_n} outside cutoff {n_max}")
        return 2 * self.photon_n + SPIN_BITS[self.spin]

    @classmethod
    def from_flat(cls, index):
        return cls("up" if index % 2 == 0 else "down", index // 2)


def _nmax_of(cutoff):
    if isinstance(cutoff, TruncationConfig):
        return cutoff.n_max
    n = int(cutoff)
    if n < 1:
        raise ValueError("need at least one Fock level")
    if n > MAX_FOCK_LEVELS:
        raise ValueError(
            f"n_max={n} exceeds the dense-matrix budget of {MAX_FOCK_LEVELS} Fock levels"
        )
    return n


def build_h_z(params, cutoff):
    """Rotated-frame Hamiltonian ``w(a^dag a + 1/2) + Omega/2 sx - g sz (a^dag + a)``.

    ``cutoff`` is a :class:`TruncationConfig` or a plain Fock cutoff.
    """
    n = _nmax_of(cutoff)
    w, W, g = params.omega, params.Omega, params.g
    h = np.zeros((2 * n, 2 * n))
    for N in range(n):
        up, dn = 2 * N, 2 * N + 1
        h[up, up] = h[dn, dn] = w * (N + 0.5)
        h[up, dn] = h[dn, up] = 0.5 * W
        if N + 1 < n:
            hop = g * math.sqrt(N + 1)
            h[up, up + 2] = h[up + 2, up] = -hop
            h[dn, dn + 2] = h[dn + 2, dn] = hop
    return h


def build_h_x(params, cutoff):
    """Lab-frame Hamiltonian ``w(a^dag a + 1/2) + Omega/2 sz + g sx (a^dag + a)``."""
    n = _nmax_of(cutoff)
    w, W, g = params.omega, params.Omega, params.g
    h = np.zeros((2 * n, 2 * n))
    for N in range(n):
        up, dn = 2 * N, 2 * N + 1
        h[up, up] = w * (N + 0.5) + 0.5 * W
        h[dn, dn] = w * (N + 0.5) - 0.5 * W
        if N + 1 < n:
            hop = g * math.sqrt(N + 1)
            h[up, dn + 2] = h[dn + 2, up] = hop
            h[dn, up + 2] = h[up + 2, dn] = hop
    return h


def parity_operator(cutoff):
    """``sigma_x (-1)^(a^dag a)`` in the sigma_z x Fock basis."""
    n = _nmax_of(cutoff)
    pi = np.zeros((2 * n, 2 * n))
    for N in range(n):
        sign = -1.0 if N % 2 else 1.0
        pi[2 * N, 2 * N + 1] = pi[2 * N + 1, 2 * N] = sign
    return pi


def parity_block(params, cutoff, parity):
    """Restriction of :func:`build_h_z` to one parity sector.

    The sector with eigenvalue ``parity`` (+1 or -1) of
    ``sigma_x (-1)^(a^dag a)`` is spanned by ``|s_N, N>`` with
    ``s_N = parity * (-1)^N`` the sigma_x label; in that basis the block is
    tridiagonal. Use :func:`embed_parity_vector` to map eigenvectors back.
    """
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    n = _nmax_of(cutoff)
    w, W, g = params.omega, params.Omega, params.g
    h = np.zeros((n, n))
    for N in range(n):
        s = parity if N % 2 == 0 else -parity
        h[N, N] = w * (N + 0.5) + 0.5 * W * s
        if N + 1 < n:
            h[N, N + 1] = h[N + 1, N] = -g * math.sqrt(N + 1)
    return h


def embed_parity_vector(vec, parity):
    """Map a parity-block vector onto the sigma_z x Fock basis."""
    vec = np.asarray(vec, dtype=float)
    n = vec.shape[0]
    out = np.empty(2 * n)
    signs = np.where(np.arange(n) % 2 == 0, parity, -parity)
    amp = vec / math.sqrt(2.0)
    out[0::2] = amp
    out[1::2] = signs * amp
    return out
