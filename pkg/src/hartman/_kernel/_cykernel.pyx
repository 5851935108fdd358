# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scattering kernel; mirrors purepy.scatter_grid exactly.

Same even-in-q formulation: C = cos(q d), S1 = sin(q d)/q,
S2 = (d*C - S1)/mu with mu = k^2 - g signed; series below |mu| d^2 = 1e-3.
"""
from libc.math cimport cos, sin, cosh, sinh, sqrt, fabs

import numpy as np

cdef double W_CUT = 1e-3


cdef inline void _triplet(double mu, double d, double *C, double *S1, double *S2) noexcept nogil:
    cdef double w = mu * d * d
    cdef double z
    if fabs(w) < W_CUT:
        C[0] = 1.0 + w * (-0.5 + w * (1.0 / 24 + w * (-1.0 / 720)))
        S1[0] = d * (1.0 + w * (-1.0 / 6 + w * (1.0 / 120 + w * (-1.0 / 5040))))
        S2[0] = d * d * d * (-1.0 / 3 + w * (1.0 / 30 + w * (-1.0 / 840 + w * (1.0 / 45360))))
    elif mu > 0:
        z = sqrt(mu)
        C[0] = cos(z * d)
        S1[0] = sin(z * d) / z
        S2[0] = (d * C[0] - S1[0]) / mu
    else:
        z = sqrt(-mu)
        C[0] = cosh(z * d)
        S1[0] = sinh(z * d) / z
        S2[0] = (d * C[0] - S1[0]) / mu


def scatter_grid(double g, double width, k):
    """Same contract as the pure-Python backend; k entries must be nonzero."""
    karr = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t n = karr.shape[0]
    t = np.empty(n, dtype=np.complex128)
    r = np.empty(n, dtype=np.complex128)
    dphi = np.empty(n, dtype=np.float64)
    dd0 = np.empty(n, dtype=np.float64)
    dd1 = np.empty(n, dtype=np.float64)

    cdef double[::1] kv = karr
    # complex outputs addressed as interleaved (re, im) doubles
    cdef double[::1] tv = t.view(np.float64)
    cdef double[::1] rv = r.view(np.float64)
    cdef double[::1] dphiv = dphi
    cdef double[::1] dd0v = dd0
    cdef double[::1] dd1v = dd1

    cdef Py_ssize_t i
    cdef double d = width
    cdef double kk, mu, C, S1, S2, A, B, den, er, ei, u, v
    cdef double tre, tim, rr, Ap, Bp, rho, drho, corr, dp
    with nogil:
        for i in range(n):
            kk = kv[i]
            mu = kk * kk - g
            _triplet(mu, d, &C, &S1, &S2)
            A = C
            B = -S1 * (2.0 * kk * kk - g) / (2.0 * kk)
            den = A * A + B * B
            er = cos(kk * d)
            ei = -sin(kk * d)
            u = A / den
            v = -B / den
            tre = er * u - ei * v
            tim = er * v + ei * u
            tv[2 * i] = tre
            tv[2 * i + 1] = tim
            rr = g * S1 / (2.0 * kk)
            # r = -i*rr*t
            rv[2 * i] = rr * tim
            rv[2 * i + 1] = -rr * tre
            Ap = -d * kk * S1
            Bp = -0.5 * (S2 * (2.0 * kk * kk - g) + S1 * (2.0 + g / (kk * kk)))
            dp = -d - (Bp * A - Ap * B) / den
            dphiv[i] = dp
            rho = -rr
            drho = -(g / 2.0) * (S2 - S1 / (kk * kk))
            corr = drho / (1.0 + rho * rho)
            dd0v[i] = 0.5 * (dp + corr)
            dd1v[i] = 0.5 * (dp - corr)
    return t, r, dphi, dd0, dd1
