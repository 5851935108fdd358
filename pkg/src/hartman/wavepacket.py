"""Truncated-Gaussian packets and flux-averaged passage times.

The incident state is Gaussian in momentum, restricted to p > 0 and
renormalized:

    phi_in(p, 0) = N exp(-(p - p0)^2 / (4 dp^2)) exp(-i p x0 / hbar),

with N fixed by integral |phi_in|^2 dp = 1 over (0, inf).  The mean exit
time of the transmitted packet past the right edge x = a is the flux average

    <t> = (m / P_T) integral dp/p |phi_in|^2 |T|^2 [a - x0(p) + hbar Phi_T'(p)],
    P_T = integral dp |phi_in|^2 |T|^2,

where x0(p) = -hbar Im(phi'/phi) is constant (= x0) for this packet.  The
same average can be formed directly in the time domain from the transmitted
flux J_T(a, t); `mean_exit_time_via_flux` does that reconstruction on a time
grid and serves as the slow independent cross-check.

Both integrals are improper at p = 0.  Off the bound-state thresholds
|T(p)| = O(p) keeps them finite; exactly at a threshold |T(0)| = 1 and the
mean exit time diverges for any packet with phi_in(0) != 0, which is
detected and reported rather than silently truncated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .boundstates import is_at_threshold
from .errors import ConvergenceError, ThresholdDivergenceError
from .potential import ATOMIC, PhysicalConstants, SquarePotential
from .quadrature import adaptive_quad, integral_to_zero
from .scattering import PhaseTable

# packet momentum support: beyond p0 + _SUPPORT_SIGMAS * dp the Gaussian
# mass is below 1e-16 of the total
_SUPPORT_SIGMAS = 9.0


@dataclass(frozen=True)
class GaussianPacketSpec:
    """Truncated-Gaussian incident packet in momentum representation."""

    k0: float  # central wavenumber
    delta_p: float  # momentum standard deviation
    x0: float  # packet center at t = 0

    def __post_init__(self):
        if not (self.k0 > 0):
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if not (self.delta_p > 0):
            raise ValueError(f"delta_p must be positive, got {self.delta_p}")
        if not math.isfinite(self.x0):
            raise ValueError(f"x0 must be finite, got {self.x0}")

    def p0(self, consts: PhysicalConstants = ATOMIC) -> float:
        return consts.hbar * self.k0

    def norm_constant(self, consts: PhysicalConstants = ATOMIC) -> float:
        """N with integral over (0, inf) of |phi_in|^2 dp equal to one."""
        z = self.p0(consts) / self.delta_p
        truncated_mass = 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
        return 1.0 / math.sqrt(self.delta_p * math.sqrt(2.0 * math.pi) * truncated_mass)

    def p_max(self, consts: PhysicalConstants = ATOMIC) -> float:
        return self.p0(consts) + _SUPPORT_SIGMAS * self.delta_p


@dataclass(frozen=True)
class PassageTimeReport:
    p_t: float  # transmission probability
    t_out: float  # mean exit time at x = a
    t_classical: float  # classical reference (in-well speed inside)
    t_subtracted: float  # t_out - t_classical
    classical_defined: bool  # False when p0^2 <= 2 m V0


def packet_amplitude(
    spec: GaussianPacketSpec, p, consts: PhysicalConstants = ATOMIC
):
    """phi_in(p, 0); p must be positive (the packet has no p <= 0 content)."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("packet amplitude is defined for p > 0 only")
    p0 = spec.p0(consts)
    n = spec.norm_constant(consts)
    out = n * np.exp(
        -((arr - p0) ** 2) / (4.0 * spec.delta_p**2)
        - 1j * arr * spec.x0 / consts.hbar
    )
    return complex(out) if np.isscalar(p) else out


def packet_weight(spec, p, consts: PhysicalConstants = ATOMIC):
    """|phi_in(p)|^2 without the phase evaluation."""
    arr = np.asarray(p, dtype=float)
    p0 = spec.p0(consts)
    n = spec.norm_constant(consts)
    return n * n * np.exp(-((arr - p0) ** 2) / (2.0 * spec.delta_p**2))


def x0_of_p(
    spec: GaussianPacketSpec, p: float, consts: PhysicalConstants = ATOMIC
) -> float:
    """-hbar Im(phi'/phi); the packet-center position, constant for a
    Gaussian."""
    p = float(p)
    if p <= 0:
        raise ValueError("x0(p) is defined for p > 0 only")
    exponent = -((p - spec.p0(consts)) ** 2) / (4.0 * spec.delta_p**2)
    if math.exp(exponent) == 0.0:
        raise ValueError(f"phi_in({p}) underflows to zero; x0(p) undefined there")
    dlog = -(p - spec.p0(consts)) / (2.0 * spec.delta_p**2) - 1j * spec.x0 / consts.hbar
    return -consts.hbar * dlog.imag


def _resonance_breakpoints(pot, consts, p_lo, p_hi):
    """Momenta of unit-transmission resonances q d = n pi, plus the barrier
    momentum where the tunneling/propagating kink sits."""
    g = pot.strength(consts)
    d = pot.width
    pts = []
    if pot.v0 > 0:
        pts.append(pot.barrier_momentum(consts))
    k_hi = p_hi / consts.hbar
    n_max = int(d * math.sqrt(max(k_hi * k_hi - g, 0.0)) / math.pi) + 1
    for n in range(1, n_max + 1):
        mu = (n * math.pi / d) ** 2 + g
        if mu > 0:
            p = consts.hbar * math.sqrt(mu)
            if p_lo < p < p_hi:
                pts.append(p)
    return [p for p in pts if p_lo < p < p_hi]


def _abs_t2(pot, consts, p):
    t, _, _, _, _ = _kernel.scatter_grid(
        pot.strength(consts), pot.width, np.asarray(p, dtype=float) / consts.hbar
    )
    return np.abs(t) ** 2


def transmission_probability(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
    rel_tol: float = 1e-8,
) -> float:
    """P_T = integral |phi_in|^2 |T|^2 dp over (0, inf)."""

    def w(p):
        return packet_weight(spec, p, consts) * _abs_t2(pot, consts, p)

    p_hi = spec.p_max(consts)
    eps = min(spec.p0(consts), spec.delta_p) * 1e-3
    main = adaptive_quad(
        w, eps, p_hi, rel_tol=rel_tol,
        breakpoints=_resonance_breakpoints(pot, consts, eps, p_hi),
    )
    low = integral_to_zero(w, eps, rel_tol=rel_tol, reference=main.value)
    return main.value + low


def classical_reference_time(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
) -> tuple[float, bool]:
    """Classical particle from x0 to +a, moving at the in-well speed inside.

    For classically forbidden heights (p0^2 <= 2 m V0) the free-motion time
    is returned with a False flag instead of omitting the value.
    """
    p0 = spec.p0(consts)
    m = consts.mass
    a = pot.half_width
    if p0 * p0 > 2.0 * m * pot.v0:
        inside = math.sqrt(p0 * p0 - 2.0 * m * pot.v0)
        return m * (-a - spec.x0) / p0 + m * pot.width / inside, True
    return m * (a - spec.x0) / p0, False


def mean_exit_time(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
    table: PhaseTable | None = None,
    rel_tol: float = 1e-8,
) -> PassageTimeReport:
    """Flux-averaged exit time at x = a, by momentum-space quadrature.

    The integrand uses the analytic dPhi_T/dk; the phase table, when given,
    must cover the packet support (it fixes the k-range the caller intends).
    """
    a = pot.half_width
    if spec.x0 + a >= 0:
        raise ValueError(
            f"packet must start left of the potential: x0 + a = {spec.x0 + a}"
        )
    p_hi = spec.p_max(consts)
    eps = min(spec.p0(consts), spec.delta_p) * 1e-3
    if table is not None:
        if table.pot != pot:
            raise ValueError(f"phase table was built for {table.pot}, not {pot}")
        table.require(p_hi / consts.hbar)
        if table.k_min > eps / consts.hbar:
            raise ValueError(
                f"table k_min = {table.k_min} does not reach the packet's "
                f"low-momentum support {eps / consts.hbar}"
            )

    if pot.v0 < 0 and is_at_threshold(pot, consts):
        w0 = float(packet_weight(spec, 1e-12, consts))
        if w0 > 1e-280:
            raise ThresholdDivergenceError(
                "well is at a bound-state threshold and the packet does not "
                "vanish at p = 0: the mean exit time diverges"
            )

    g = pot.strength(consts)
    d = pot.width
    m = consts.mass
    hbar = consts.hbar
    x0 = spec.x0

    def w_pt(p):
        return packet_weight(spec, p, consts) * _abs_t2(pot, consts, p)

    def w_time(p):
        parr = np.asarray(p, dtype=float)
        t, _, dphi, _, _ = _kernel.scatter_grid(g, d, parr / hbar)
        wgt = packet_weight(spec, parr, consts) * np.abs(t) ** 2
        return wgt * (a - x0 + dphi) / parr

    breakpoints = _resonance_breakpoints(pot, consts, eps, p_hi)
    pt_main = adaptive_quad(w_pt, eps, p_hi, rel_tol=rel_tol, breakpoints=breakpoints)
    p_t = pt_main.value + integral_to_zero(
        w_pt, eps, rel_tol=rel_tol, reference=pt_main.value
    )
    t_main = adaptive_quad(w_time, eps, p_hi, rel_tol=rel_tol, breakpoints=breakpoints)
    t_int = t_main.value + integral_to_zero(
        w_time, eps, rel_tol=rel_tol, reference=t_main.value
    )

    t_out = m * t_int / p_t
    t_cl, defined = classical_reference_time(spec, pot, consts)
    return PassageTimeReport(
        p_t=p_t,
        t_out=t_out,
        t_classical=t_cl,
        t_subtracted=t_out - t_cl,
        classical_defined=defined,
    )


def _windowed_wave(cvals_fn, a, tc, aprime, p_hi, w_mult, nodes):
    """psi(a, t) and psi_x(a, t) on a batch of times by stationary-phase
    windowed Gauss-Legendre, with first-order endpoint corrections for the
    truncated oscillatory tails."""
    gl_x, gl_w = nodes
    tsafe = np.maximum(tc, 1e-12)
    p1 = np.clip(aprime / tsafe, 1e-4, p_hi)
    _, dphi1 = cvals_fn(p1)
    pstar = np.clip((aprime + dphi1) / tsafe, 1e-4, p_hi)
    width = w_mult * np.sqrt(2.0 * np.pi / np.maximum(tc, 1.0))
    lo = np.clip(pstar - width, 0.0, p_hi)
    hi = np.clip(pstar + width, 0.0, p_hi)

    pm = 0.5 * (hi + lo)[:, None] + 0.5 * (hi - lo)[:, None] * gl_x[None, :]
    ww = 0.5 * (hi - lo)[:, None] * gl_w[None, :]
    flat = pm.ravel()
    cv = np.zeros(flat.shape, dtype=complex)
    pos = flat > 0
    cv[pos], _ = cvals_fn(flat[pos])
    c = cv.reshape(pm.shape)
    phase = np.exp(1j * (pm * a - 0.5 * pm**2 * tc[:, None]))
    f = c * phase
    psi = np.sum(ww * f, axis=1)
    psix = np.sum(ww * f * 1j * pm, axis=1)

    # truncated tails: integral beyond an interior edge ~ -+ f(edge)/(i theta')
    for edge, sgn in ((hi, -1.0), (lo, +1.0)):
        interior = (edge > 1e-9) & (edge < p_hi * (1.0 - 1e-12))
        if not np.any(interior):
            continue
        pe = edge[interior]
        ce, dphie = cvals_fn(pe)
        fe = ce * np.exp(1j * (pe * a - 0.5 * pe**2 * tc[interior]))
        theta_p = aprime + dphie - pe * tc[interior]
        ok = np.abs(theta_p) > 1e-6
        corr = np.where(ok, sgn * fe / (1j * theta_p), 0.0)
        psi_part = np.zeros_like(psi)
        psix_part = np.zeros_like(psix)
        psi_part[interior] = corr
        psix_part[interior] = corr * 1j * pe
        psi = psi + psi_part
        psix = psix + psix_part
    return psi, psix


def mean_exit_time_via_flux(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
    t_window: tuple[float, float] | None = None,
    tol: float = 1e-3,
    *,
    w_mult: float = 12.0,
    dt_fine: float = 0.02,
    dt_coarse: float = 0.25,
) -> float:
    """Mean exit time from the reconstructed transmitted flux J_T(a, t).

    This is the slow, independent cross-check of `mean_exit_time`: the
    transmitted wave and its x-derivative are rebuilt by direct momentum
    integration on a time grid, J_T = (hbar/m) Im(psi* dpsi/dx), and the
    first moment of J_T is returned.  The time window must capture
    essentially all transmitted flux: |integral J_T dt - P_T| <= tol * P_T
    is enforced, and a deficit raises ConvergenceError.
    """
    a = pot.half_width
    if spec.x0 + a >= 0:
        raise ValueError(
            f"packet must start left of the potential: x0 + a = {spec.x0 + a}"
        )
    g = pot.strength(consts)
    d = pot.width
    hbar = consts.hbar
    m = consts.mass
    aprime = a - spec.x0
    p_hi = spec.p_max(consts)
    sqrt_h = math.sqrt(consts.h)

    def cvals(p):
        """c(p) = phi_in T / sqrt(h) and dPhi_T/dk alongside."""
        t, _, dphi, _, _ = _kernel.scatter_grid(g, d, np.asarray(p) / hbar)
        return packet_amplitude(spec, p, consts) * t / sqrt_h, dphi

    # reference transmission probability on a dense fixed grid (trapezoid),
    # also used to pick the time window from the low-momentum weight
    pgrid = np.linspace(1e-7, p_hi, 200001)
    wgt = packet_weight(spec, pgrid, consts) * _abs_t2(pot, consts, pgrid)
    p_t_ref = float(np.trapezoid(wgt, pgrid))
    if p_t_ref <= 0:
        raise ValueError("transmitted weight vanishes; no flux to average")

    if t_window is None:
        dp_grid = pgrid[1] - pgrid[0]
        tail_moment = np.cumsum(wgt / pgrid) * dp_grid * aprime
        tbar_scale = float(np.trapezoid(wgt * aprime / pgrid, pgrid)) / p_t_ref
        icut = int(np.searchsorted(tail_moment, 0.05 * tol * p_t_ref * tbar_scale))
        p_cut = max(float(pgrid[max(icut, 1)]), 1e-4)
        t_window = (0.0, aprime * m / p_cut * 1.5)
    t0, t1 = t_window
    if not (t1 > t0 >= 0):
        raise ValueError(f"invalid time window {t_window}")

    t_fine_end = min(t1, max(t0 + 80.0, 2.5 * aprime * m / spec.p0(consts)))
    ts = np.arange(t0, t_fine_end, dt_fine)
    if t1 > t_fine_end:
        ts = np.concatenate([ts, np.arange(t_fine_end, t1, dt_coarse), [t1]])

    nodes = np.polynomial.legendre.leggauss(int(max(200, 4.0 * w_mult * w_mult)))
    m0 = 0.0
    m1 = 0.0
    t_last = j_last = None
    for s in range(0, len(ts), 3000):
        tc = ts[s : s + 3000]
        psi, psix = _windowed_wave(cvals, a, tc, aprime, p_hi, w_mult, nodes)
        flux = (hbar / m) * (psi.conj() * psix).imag
        if s == 0:
            tcat, jcat = tc, flux
        else:
            tcat = np.concatenate([[t_last], tc])
            jcat = np.concatenate([[j_last], flux])
        m0 += float(np.trapezoid(jcat, tcat))
        m1 += float(np.trapezoid(jcat * tcat, tcat))
        t_last, j_last = tc[-1], flux[-1]

    deficit = abs(m0 - p_t_ref) / p_t_ref
    if deficit > tol:
        raise ConvergenceError(
            f"time window misses transmitted flux: captured {m0:.8f} of "
            f"P_T = {p_t_ref:.8f} (deficit {deficit:.2e} > tol {tol:.1e})",
            estimate=m1 / m0 if m0 else None,
            error=deficit,
        )
    return m1 / m0


def critical_width(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
) -> float:
    """Estimated width separating the width-independent tunneling regime
    from the classical over-the-barrier regime:

        d_c = hbar/(4 dp^2) * ((p_b - p0)^3 / (p_b + p0))^(1/2).
    """
    p_b = pot.barrier_momentum(consts)  # raises for v0 <= 0
    p0 = spec.p0(consts)
    if p0 >= p_b:
        raise ValueError(
            f"packet momentum p0 = {p0} must lie below the barrier momentum {p_b}"
        )
    return (consts.hbar / (4.0 * spec.delta_p**2)) * math.sqrt(
        (p_b - p0) ** 3 / (p_b + p0)
    )


def crossover_width_empirical(
    spec: GaussianPacketSpec,
    pot: SquarePotential,
    consts: PhysicalConstants = ATOMIC,
    tol: float = 1e-3,
    d_max: float = 1e4,
) -> float:
    """Width at which below-barrier and above-barrier transmittance are equal.

    Bisects f(d) = integral_0^{p_b} - integral_{p_b}^inf of |phi|^2 |T|^2;
    the below-barrier share decays exponentially with d, so f is decreasing
    and the root marks where over-the-barrier components take over.
    """
    p_b = pot.barrier_momentum(consts)
    p0 = spec.p0(consts)
    if p0 >= p_b:
        raise ValueError(
            f"packet momentum p0 = {p0} must lie below the barrier momentum {p_b}"
        )
    # the packet tail beyond p_b carries the whole above-barrier share, so
    # the upper limit must extend past p_b even when that tail is tiny
    p_hi = max(spec.p_max(consts), p_b + 6.0 * spec.delta_p)

    def split_transmittance(width: float) -> float:
        trial = SquarePotential(v0=pot.v0, half_width=width / 2.0)

        def w(p):
            return packet_weight(spec, p, consts) * _abs_t2(trial, consts, p)

        eps = min(p0, spec.delta_p) * 1e-3
        below = adaptive_quad(w, eps, p_b, rel_tol=1e-6).value
        below += integral_to_zero(w, eps, rel_tol=1e-6, reference=below)
        above = adaptive_quad(
            w, p_b, p_hi, rel_tol=1e-6,
            breakpoints=_resonance_breakpoints(trial, consts, p_b, p_hi),
        ).value
        return below - above

    d_lo = 1e-3
    f_lo = split_transmittance(d_lo)
    if f_lo <= 0:
        raise ConvergenceError(
            f"no sign change: already above-barrier dominated at d = {d_lo} "
            f"(f = {f_lo:.3e})",
            estimate=d_lo,
        )
    d_hi = 1.0
    f_hi = split_transmittance(d_hi)
    while f_hi > 0:
        d_hi *= 2.0
        if d_hi > d_max:
            raise ConvergenceError(
                f"no sign change in the search bracket [{d_lo}, {d_max}]",
                estimate=d_hi,
            )
        f_hi = split_transmittance(d_hi)

    while (d_hi - d_lo) > tol * d_hi:
        mid = 0.5 * (d_lo + d_hi)
        if split_transmittance(mid) > 0:
            d_lo = mid
        else:
            d_hi = mid
    return 0.5 * (d_lo + d_hi)
