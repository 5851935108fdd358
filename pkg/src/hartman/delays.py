"""Time delays, causality bounds, dwell times, and boundary identities.

The transmitted packet's Wigner delay is dt = (m/(hbar k)) dPhi_T/dk, a
time advancement when negative.  How negative it may go is constrained by
causality:

  * without bound states, dt >= -m d / p  (the naive positivity of the
    extrapolated phase time, which bound states break);
  * always, for even cut-off potentials,
        dt >= (m/(hbar k)) { -d - [sin(2ka+2 delta_0) - sin(2ka+2 delta_1)]/(2k) }
           >= (m/p)(-d - 1/k),
    from the per-channel derivative bounds
        delta_0' > -a - sin[2(ka+delta_0)]/(2k)
        delta_1' > -a + sin[2(ka+delta_1)]/(2k);
  * with a single bound state of decay constant K_b,
        dt >= -(m/p)(d + 1/K_b).

The per-channel bounds trace back to the positivity of the interior norm
integral(psi_j^2) over [-a, a], which this module evaluates in closed form
(`interior_norm`) and cross-checks against the boundary-derivative identity

    integral(psi_0^2) = (hbar^2/m) (psi_E(a) psi'(a) - psi(a) psi_E'(a))

via central finite differences in energy (`smith_identity_check`).  The dwell
time tau_D = (m/(hbar k)) * interior_norm is positive by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .boundstates import solve_bound_states
from .potential import PhysicalConstants, SquarePotential
from .scattering import PhaseTable

_PARITIES = ("even", "odd")


@dataclass(frozen=True)
class DelayRecord:
    """Time delay at one wavenumber with every applicable causality bound."""

    k: float
    delta_t: float
    spatial_delay: float
    tau_ph: float
    bound_simple: float  # -m d / p; holds without bound states
    bound_tight_osc: float  # oscillatory bound, channel phases resolved
    bound_tight_weak: float  # (m/p)(-d - 1/k)
    bound_bound_state: float | None  # -(m/p)(d + 1/K_b), shallowest K_b
    n_bound_states: int
    single_bound_state: bool  # the bound-state bound is stated for n_b = 1


@dataclass(frozen=True)
class DwellRecord:
    k: float
    parity: str
    tau_d: float
    interior_norm: float


def _scatter_point(pot, consts, k):
    t, r, dphi, dd0, dd1 = _kernel.scatter_grid(
        pot.strength(consts), pot.width, np.array([float(k)])
    )
    return complex(t[0]), complex(r[0]), float(dphi[0]), float(dd0[0]), float(dd1[0])


def _check_table(table: PhaseTable, pot: SquarePotential) -> None:
    if table.pot != pot:
        raise ValueError(
            f"phase table was built for {table.pot}, not {pot}"
        )


def wigner_delay(table: PhaseTable, consts: PhysicalConstants, k: float) -> float:
    """dt = (m/(hbar k)) dPhi_T/dk, from the analytic derivative."""
    table.require(k)
    _, _, dphi, _, _ = _scatter_point(table.pot, consts, k)
    return consts.mass * dphi / (consts.hbar * k)


def phase_time(
    pot: SquarePotential, consts: PhysicalConstants, table: PhaseTable, k: float
) -> float:
    """Extrapolated phase time m d / p + dt (not a genuine traversal time)."""
    _check_table(table, pot)
    table.require(k)
    p = consts.hbar * k
    return consts.mass * pot.width / p + wigner_delay(table, consts, k)


def causality_bounds(
    pot: SquarePotential, consts: PhysicalConstants, table: PhaseTable, k: float
) -> DelayRecord:
    """Delay at k together with every bound it must respect."""
    _check_table(table, pot)
    table.require(k)
    k = float(k)
    a = pot.half_width
    d = pot.width
    m = consts.mass
    hbar = consts.hbar
    p = hbar * k

    t, r, dphi, _, _ = _scatter_point(pot, consts, k)
    s0 = t + r
    s1 = t - r
    d0 = 0.5 * math.atan2(s0.imag, s0.real)
    d1 = 0.5 * math.atan2(s1.imag, s1.real)

    delta_t = m * dphi / (hbar * k)
    osc = (m / (hbar * k)) * (
        -d - (math.sin(2 * k * a + 2 * d0) - math.sin(2 * k * a + 2 * d1)) / (2 * k)
    )

    n_b = 0
    bound_bs = None
    if pot.v0 < 0:
        spectrum = solve_bound_states(pot, consts)
        n_b = spectrum.n_b
        if n_b >= 1:
            k_b = min(level.k_b for level in spectrum.levels)
            if k_b > 0:
                bound_bs = -(m / p) * (d + 1.0 / k_b)

    return DelayRecord(
        k=k,
        delta_t=delta_t,
        spatial_delay=dphi,
        tau_ph=m * d / p + delta_t,
        bound_simple=-m * d / p,
        bound_tight_osc=osc,
        bound_tight_weak=(m / p) * (-d - 1.0 / k),
        bound_bound_state=bound_bs,
        n_bound_states=n_b,
        single_bound_state=n_b == 1,
    )


@dataclass(frozen=True)
class EigenphaseBoundViolation:
    k: float
    channel: int
    margin: float
    bound: str  # "oscillatory" | "no-bound-state"


@dataclass(frozen=True)
class EigenphaseBoundReport:
    passed: bool
    violations: tuple[EigenphaseBoundViolation, ...]
    min_margin_osc: float
    min_margin_simple: float  # asserted only for v0 >= 0; informational otherwise
    simple_bound_asserted: bool
    n_points: int


def eigenphase_derivative_bounds(
    pot: SquarePotential,
    consts: PhysicalConstants,
    table: PhaseTable,
    tol: float = 1e-9,
) -> EigenphaseBoundReport:
    """Check the per-channel derivative bounds at every table point.

    The oscillatory bounds hold for any real square potential; the simple
    bound delta_j' >= -a additionally requires no bound states (v0 >= 0).
    """
    _check_table(table, pot)
    a = pot.half_width
    k = table.k_grid
    d0, d1 = table.delta0, table.delta1
    dd0, dd1 = table.ddelta0, table.ddelta1

    margin0 = dd0 - (-a - np.sin(2.0 * (k * a + d0)) / (2.0 * k))
    margin1 = dd1 - (-a + np.sin(2.0 * (k * a + d1)) / (2.0 * k))

    violations: list[EigenphaseBoundViolation] = []
    for ch, margin in ((0, margin0), (1, margin1)):
        for i in np.nonzero(margin < -tol)[0]:
            violations.append(
                EigenphaseBoundViolation(
                    k=float(k[i]), channel=ch, margin=float(margin[i]),
                    bound="oscillatory",
                )
            )

    simple0 = dd0 + a
    simple1 = dd1 + a
    if pot.v0 >= 0:
        for ch, margin in ((0, simple0), (1, simple1)):
            for i in np.nonzero(margin < -tol)[0]:
                violations.append(
                    EigenphaseBoundViolation(
                        k=float(k[i]), channel=ch, margin=float(margin[i]),
                        bound="no-bound-state",
                    )
                )

    return EigenphaseBoundReport(
        passed=not violations,
        violations=tuple(violations),
        min_margin_osc=float(min(margin0.min(), margin1.min())),
        min_margin_simple=float(min(simple0.min(), simple1.min())),
        simple_bound_asserted=pot.v0 >= 0,
        n_points=len(k),
    )


def interior_norm(
    pot: SquarePotential,
    consts: PhysicalConstants,
    k: float,
    parity: str,
) -> float:
    """integral over [-a, a] of psi_j(x)^2 for the real scattering
    eigenfunction normalized to amplitude sqrt(2/h) outside.

    Written as a single guarded ratio (matching condition substituted), so
    the interior-amplitude resonances cos(qa) -> 0 / sin(qa) -> 0 and the
    q -> 0 point are all removable:

        even: (2/h) k^2 (a + S1/2) / { [k^2 (1+C) + mu (1-C)] / 2 }
        odd:  (2/h) k^2 (a - S1/2) / { [mu (1+C) + k^2 (1-C)] / 2 }

    with C = cos(qd), S1 = sin(qd)/q, mu = q^2 = k^2 - g.
    """
    if parity not in _PARITIES:
        raise ValueError(f"parity must be one of {_PARITIES}, got {parity!r}")
    if not (k > 0):
        raise ValueError(f"k must be positive, got {k}")
    k = float(k)
    a = pot.half_width
    d = pot.width
    g = pot.strength(consts)
    mu = k * k - g
    C, S1, _ = (float(x[0]) for x in _kernel.trig_triplet(np.array([mu]), d))
    two_over_h = 2.0 / consts.h
    w = mu * d * d
    if parity == "even":
        num = a + 0.5 * S1
        den = 0.5 * (k * k * (1.0 + C) + mu * (1.0 - C))
        return two_over_h * k * k * num / den
    if abs(w) < 1e-3:
        # both num and den are O(mu); divide the series out
        num_over_mu = (d**3 / 12.0) * (1.0 + w * (-1.0 / 20 + w * (1.0 / 840)))
        one_minus_c_over_mu = d * d * (0.5 + w * (-1.0 / 24 + w * (1.0 / 720)))
        den_over_mu = 0.5 * ((1.0 + C) + k * k * one_minus_c_over_mu)
        return two_over_h * k * k * num_over_mu / den_over_mu
    num = a - 0.5 * S1
    den = 0.5 * (mu * (1.0 + C) + k * k * (1.0 - C))
    return two_over_h * k * k * num / den


def dwell_time(
    pot: SquarePotential,
    consts: PhysicalConstants,
    k: float,
    parity: str,
) -> DwellRecord:
    """tau_D = (m/(hbar k)) * interior norm; positive by construction."""
    norm = interior_norm(pot, consts, k, parity)
    return DwellRecord(
        k=float(k),
        parity=parity,
        tau_d=consts.mass * norm / (consts.hbar * float(k)),
        interior_norm=norm,
    )


def _boundary_values(pot, consts, k, parity, delta_ref=None):
    """psi_j(a) and psi_j'(a) from the outside form, sqrt(2/h) amplitude.

    delta_ref pins the mod-pi branch so finite differences in energy see a
    continuous eigenphase.
    """
    t, r, _, _, _ = _scatter_point(pot, consts, k)
    s = (t + r) if parity == "even" else (t - r)
    delta = 0.5 * math.atan2(s.imag, s.real)
    if delta_ref is not None:
        delta -= math.pi * round((delta - delta_ref) / math.pi)
    amp = math.sqrt(2.0 / consts.h)
    a = pot.half_width
    if parity == "even":
        return amp * math.cos(k * a + delta), -amp * k * math.sin(k * a + delta), delta
    return amp * math.sin(k * a + delta), amp * k * math.cos(k * a + delta), delta


@dataclass(frozen=True)
class SmithIdentityReport:
    k: float
    parity: str
    lhs: float  # closed-form interior norm
    rhs: float  # boundary bilinear with finite-difference energy derivative
    rel_error: float
    dE: float
    cancellation_warning: bool


def smith_identity_check(
    pot: SquarePotential,
    consts: PhysicalConstants,
    k: float,
    parity: str,
    dE: float | None = None,
) -> SmithIdentityReport:
    """Verify the interior norm against the boundary-derivative identity.

    The energy derivative is a central difference, Richardson-extrapolated
    from steps dE and dE/2.  A warning is attached when halving the step
    makes things worse (cancellation regime).
    """
    if parity not in _PARITIES:
        raise ValueError(f"parity must be one of {_PARITIES}, got {parity!r}")
    k = float(k)
    if not (k > 0):
        raise ValueError(f"k must be positive, got {k}")
    m = consts.mass
    hbar = consts.hbar
    E = (hbar * k) ** 2 / (2.0 * m)
    if dE is None:
        dE = 1e-5 * E
    if not (0 < dE < E):
        raise ValueError(f"need 0 < dE < E = {E}, got {dE}")

    lhs = interior_norm(pot, consts, k, parity)
    psi_c, dpsi_c, delta_c = _boundary_values(pot, consts, k, parity)

    def bilinear(step: float) -> float:
        k_p = math.sqrt(2.0 * m * (E + step)) / hbar
        k_m = math.sqrt(2.0 * m * (E - step)) / hbar
        psi_p, dpsi_p, _ = _boundary_values(pot, consts, k_p, parity, delta_c)
        psi_m, dpsi_m, _ = _boundary_values(pot, consts, k_m, parity, delta_c)
        psi_E = (psi_p - psi_m) / (2.0 * step)
        dpsi_E = (dpsi_p - dpsi_m) / (2.0 * step)
        return (hbar**2 / m) * (psi_E * dpsi_c - psi_c * dpsi_E)

    r1 = bilinear(dE)
    r2 = bilinear(dE / 2.0)
    rhs = (4.0 * r2 - r1) / 3.0
    scale = max(abs(lhs), 1e-300)
    # below ~eps^(1/3) * E the central difference is rounding-dominated and
    # halving the step makes the relative error grow
    err1 = abs(r1 - lhs) / scale
    err2 = abs(r2 - lhs) / scale
    warn = dE < 3e-6 * E or (err2 > err1 and err2 > 1e-8)
    return SmithIdentityReport(
        k=k,
        parity=parity,
        lhs=lhs,
        rhs=rhs,
        rel_error=abs(lhs - rhs) / scale,
        dE=dE,
        cancellation_warning=warn,
    )
