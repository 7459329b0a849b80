"""Special functions for displaced-oscillator matrix elements.

Everything here is scalar and stateless. Factorial ratios go through
log space so that ``sqrt(M!/N!)`` stays finite for N up to a few hundred.
"""

import math
from fractions import Fraction

import numpy as np

MAX_LAGUERRE_DEGREE = 500
MAX_LOG_FACTORIAL = 10**6


def _check_index(name, value, upper=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    if upper is not None and value > upper:
        raise ValueError(f"{name}={value} exceeds the supported maximum {upper}")
    return int(value)


def _check_argument(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Laguerre argument must be finite, got {x}")
    if x < 0.0:
        raise ValueError(f"Laguerre argument must be non-negative, got {x}")
    return x


def laguerre_sequence(n, k, x):
    """Associated Laguerre values ``L_0^k(x), ..., L_n^k(x)``.

    Parameters
    ----------
    n : int
        Highest degree, ``0 <= n <= 500``.
    k : int
        Order, ``k >= 0``.
    x : float
        Argument, ``x >= 0``.

    Returns
    -------
    numpy.ndarray
        Array of length ``n + 1``.

    Notes
    -----
    Upward three-term recurrence
    ``m L_m = (2m - 1 + k - x) L_{m-1} - (m - 1 + k) L_{m-2}``.
    """
    n = _check_index("n", n, MAX_LAGUERRE_DEGREE)
    k = _check_index("k", k)
    x = _check_argument(x)

    out = np.empty(n + 1)
    out[0] = 1.0
    if n >= 1:
        out[1] = k + 1.0 - x
    for m in range(2, n + 1):
        out[m] = ((2 * m - 1 + k - x) * out[m - 1] - (m - 1 + k) * out[m - 2]) / m
    return out


def laguerre(n, k, x):
    """Associated Laguerre polynomial ``L_n^k(x)`` by upward recurrence."""
    return float(laguerre_sequence(n, k, x)[-1])


def laguerre_explicit(n, k, x):
    """Reference ``L_n^k(x)`` from the finite power series.

    Sums ``(-1)^i C(n+k, n-i) x^i / i!`` in exact rational arithmetic on
    the binary value of ``x``, so the only rounding is the final
    conversion. Slow; it exists to cross-check :func:`laguerre`.
    """
    n = _check_index("n", n, MAX_LAGUERRE_DEGREE)
    k = _check_index("k", k)
    xq = Fraction(_check_argument(x))
    total = sum(
        Fraction((-1) ** i * math.comb(n + k, n - i), math.factorial(i)) * xq**i
        for i in range(n + 1)
    )
    return float(total)


def log_factorial(n):
    """Natural log of ``n!`` for ``0 <= n <= 10**6``."""
    n = _check_index("n", n, MAX_LOG_FACTORIAL)
    if n < 2:
        return 0.0
    return math.lgamma(n + 1.0)


def displacement_element(alpha, N, M):
    """Fock matrix element ``<N| exp(alpha (a^dag - a)) |M>`` for real alpha.

    For ``N >= M`` this is
    ``sqrt(M!/N!) alpha^(N-M) exp(-alpha^2/2) L_M^(N-M)(alpha^2)``;
    the ``N < M`` case follows from
    ``<N|D(alpha)|M> = (-1)^(M-N) <M|D(alpha)|N>``.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    N = _check_index("N", N)
    M = _check_index("M", M)

    sign = 1.0
    if N < M:
        N, M = M, N
        if (N - M) % 2:
            sign = -1.0
    shift = N - M

    lag = laguerre(M, shift, alpha * alpha)
    if shift == 0:
        return sign * math.exp(-0.5 * alpha * alpha) * lag
    if alpha == 0.0:
        return 0.0
    if alpha < 0.0 and shift % 2:
        sign = -sign
    log_mag = (
        shift * math.log(abs(alpha))
        + 0.5 * (log_factorial(M) - log_factorial(N))
        - 0.5 * alpha * alpha
    )
    return sign * math.exp(log_mag) * lag
