# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Jacobi sweep. Mirrors ``_jacobi_py.jacobi_sweep`` operation for operation."""

import numpy as np

from libc.math cimport fabs, sqrt


def jacobi_sweep(double[:, ::1] a, double[:, ::1] v, const int[:, :, ::1] schedule):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t rounds = schedule.shape[0]
    cdef Py_ssize_t width = schedule.shape[1]
    cdef Py_ssize_t r, k, i, j, p, q
    cdef double theta, t, c, s, x, y
    cdef double[::1] cs = np.empty(width)
    cdef double[::1] sn = np.empty(width)
    cdef double[::1] tn = np.empty(width)
    cdef double[::1] app = np.empty(width)
    cdef double[::1] aqq = np.empty(width)
    cdef double[::1] apq = np.empty(width)

    with nogil:
        for r in range(rounds):
            for k in range(width):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                q = schedule[r, k, 1]
                app[k] = a[p, p]
                aqq[k] = a[q, q]
                apq[k] = a[p, q]
                if apq[k] == 0.0:
                    t = 0.0
                else:
                    theta = (aqq[k] - app[k]) / (2.0 * apq[k])
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                tn[k] = t
                cs[k] = c
                sn[k] = t * c

            for k in range(width):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                q = schedule[r, k, 1]
                c = cs[k]
                s = sn[k]
                for j in range(n):
                    x = a[p, j]
                    y = a[q, j]
                    a[p, j] = c * x - s * y
                    a[q, j] = s * x + c * y

            for k in range(width):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                q = schedule[r, k, 1]
                c = cs[k]
                s = sn[k]
                for i in range(n):
                    x = a[i, p]
                    y = a[i, q]
                    a[i, p] = x * c - y * s
                    a[i, q] = x * s + y * c

            for k in range(width):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                q = schedule[r, k, 1]
                a[p, p] = app[k] - tn[k] * apq[k]
                a[q, q] = aqq[k] + tn[k] * apq[k]
                a[p, q] = 0.0
                a[q, p] = 0.0

            for i in range(n):
                for j in range(i + 1, n):
                    a[j, i] = a[i, j]

            for k in range(width):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                q = schedule[r, k, 1]
                c = cs[k]
                s = sn[k]
                for i in range(n):
                    x = v[i, p]
                    y = v[i, q]
                    v[i, p] = x * c - y * s
                    v[i, q] = x * s + y * c
