"""Pure numpy Jacobi sweep; reference twin of ``_jacobi.pyx``.

Both kernels perform the same floating-point operations in the same order
per matrix entry, so they agree bit for bit. Keep them in lockstep.
"""

import numpy as np


def jacobi_sweep(a, v, schedule):
    """Apply one round-robin sweep of Jacobi rotations to ``a`` and ``v`` in place.

    ``schedule`` has shape ``(rounds, pairs, 2)``; each round lists
    disjoint ``(p, q)`` pairs with ``p < q``, padded with ``-1``.
    """
    n = a.shape[0]
    lower = np.tril_indices(n, -1)
    for rnd in schedule:
        rnd = rnd[rnd[:, 0] >= 0]
        if rnd.shape[0] == 0:
            continue
        ps = rnd[:, 0]
        qs = rnd[:, 1]

        app = a[ps, ps]
        aqq = a[qs, qs]
        apq = a[ps, qs]
        skip = apq == 0.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            theta = (aqq - app) / (2.0 * apq)
            t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(theta < 0.0, -t, t)
            t = np.where(np.abs(theta) > 1e150, 0.5 / theta, t)
        t = np.where(skip, 0.0, t)
        c = 1.0 / np.sqrt(t * t + 1.0)
        s = t * c
        cc = c[:, None]
        ss = s[:, None]

        rp = a[ps, :]
        rq = a[qs, :]
        a[ps, :] = cc * rp - ss * rq
        a[qs, :] = ss * rp + cc * rq

        cp = a[:, ps]
        cq = a[:, qs]
        a[:, ps] = cp * c - cq * s
        a[:, qs] = cp * s + cq * c

        a[ps, ps] = app - t * apq
        a[qs, qs] = aqq + t * apq
        a[ps, qs] = 0.0
        a[qs, ps] = 0.0
        a[lower] = a.T[lower]

        vp = v[:, ps]
        vq = v[:, qs]
        v[:, ps] = vp * c - vq * s
        v[:, qs] = vp * s + vq * c
