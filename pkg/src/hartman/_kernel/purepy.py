"""NumPy implementation of the scattering kernel.

Everything is expressed through three functions of the *signed* squared
inside-wavenumber mu = k^2 - g (g = 2 m v0 / hbar^2, q^2 = mu), all even in
q so the branch of the square root never matters:

    C(mu)  = cos(q d)                       -> cosh for mu < 0
    S1(mu) = sin(q d)/q                     -> sinh(|q| d)/|q| for mu < 0
    S2(mu) = (d*C - S1)/mu                  (removable at mu = 0)

With those, for real k (A = Re D, B = Im D):

    D   = C - (i/2) S1 (2k^2 - g)/k        T = e^{-ikd}/D
    R   = -i (g S1 / 2k) T
    dPhi_T/dk   = -d - Im(D'/D)
    ddelta_j/dk = (dPhi_T/dk -+ correction)/2,  correction from R/T = i*rho
"""
from __future__ import annotations

import numpy as np

# series switch for |mu|*d^2; below it the direct forms lose digits to
# cancellation, above it the 4-term series is exact to double precision
W_CUT = 1e-3


def trig_triplet(mu, width):
    """C, S1, S2 for an array of mu values at fixed width d."""
    mu = np.asarray(mu, dtype=float)
    d = float(width)
    w = mu * d * d
    C = np.empty_like(mu)
    S1 = np.empty_like(mu)
    S2 = np.empty_like(mu)

    small = np.abs(w) < W_CUT
    if np.any(small):
        ws = w[small]
        C[small] = 1.0 + ws * (-0.5 + ws * (1.0 / 24 + ws * (-1.0 / 720)))
        S1[small] = d * (1.0 + ws * (-1.0 / 6 + ws * (1.0 / 120 + ws * (-1.0 / 5040))))
        S2[small] = d**3 * (-1.0 / 3 + ws * (1.0 / 30 + ws * (-1.0 / 840 + ws * (1.0 / 45360))))

    pos = ~small & (mu > 0)
    if np.any(pos):
        q = np.sqrt(mu[pos])
        C[pos] = np.cos(q * d)
        S1[pos] = np.sin(q * d) / q
        S2[pos] = (d * C[pos] - S1[pos]) / mu[pos]

    neg = ~small & (mu < 0)
    if np.any(neg):
        kap = np.sqrt(-mu[neg])
        C[neg] = np.cosh(kap * d)
        S1[neg] = np.sinh(kap * d) / kap
        S2[neg] = (d * C[neg] - S1[neg]) / mu[neg]
    return C, S1, S2


def scatter_grid(g, width, k):
    """Amplitudes and phase derivatives on a grid of real nonzero wavenumbers.

    Parameters
    ----------
    g : float
        Potential strength 2 m v0 / hbar^2.
    width : float
        Full width d of the potential region.
    k : ndarray
        Real wavenumbers, every entry nonzero.

    Returns
    -------
    t, r : complex ndarrays
        Transmission and reflection amplitudes.
    dphi, dd0, dd1 : float ndarrays
        d(arg T)/dk and the two eigenphase derivatives d(delta_j)/dk.
    """
    k = np.asarray(k, dtype=float)
    d = float(width)
    mu = k * k - g
    C, S1, S2 = trig_triplet(mu, d)

    A = C
    B = -S1 * (2.0 * k * k - g) / (2.0 * k)
    den = A * A + B * B

    ph = -k * d
    e = np.cos(ph) + 1j * np.sin(ph)
    t = e * (A - 1j * B) / den
    rr = g * S1 / (2.0 * k)
    r = -1j * rr * t

    Ap = -d * k * S1
    Bp = -0.5 * (S2 * (2.0 * k * k - g) + S1 * (2.0 + g / (k * k)))
    dphi = -d - (Bp * A - Ap * B) / den

    # R/T = i*rho with rho = -g S1/(2k); arg(1 +- i*rho)' = +-rho'/(1+rho^2)
    rho = -rr
    drho = -(g / 2.0) * (S2 - S1 / (k * k))
    corr = drho / (1.0 + rho * rho)
    dd0 = 0.5 * (dphi + corr)
    dd1 = 0.5 * (dphi - corr)
    return t, r, dphi, dd0, dd1
