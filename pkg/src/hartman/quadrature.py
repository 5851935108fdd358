"""Adaptive panel quadrature for the momentum integrals.

Each panel is integrated with a fixed Gauss-Legendre rule; its error is
estimated by comparing against the sum of its two half-panel values, and the
worst panel is bisected until the summed error estimate meets the tolerance.
Integrands are called on whole node batches (one array per round), which is
what keeps the compiled kernel effective.

`integral_to_zero` extends a finite-interval result down to p = 0 by halving
the lower cutoff until the added mass converges; non-shrinking increments
signal a genuinely divergent integral (bound-state threshold with a packet
that does not vanish at p = 0) and raise ThresholdDivergenceError.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ThresholdDivergenceError

_NODES15, _WEIGHTS15 = np.polynomial.legendre.leggauss(15)
_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)
# one batched evaluation per panel covers both rules
_NODES_ALL = np.concatenate([_NODES15, _NODES7])


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    n_panels: int


def _panel_values(f, edges_lo, edges_hi):
    """(GL15, GL7) values for a batch of panels [lo_i, hi_i].

    The order-7 companion guards against the two-level error estimate being
    fooled by coincidental agreement on under-resolved smooth integrands.
    """
    mid = 0.5 * (edges_lo + edges_hi)
    half = 0.5 * (edges_hi - edges_lo)
    x = mid[:, None] + half[:, None] * _NODES_ALL[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    g15 = half * (y[:, :15] @ _WEIGHTS15)
    g7 = half * (y[:, 15:] @ _WEIGHTS7)
    return g15, g7


def adaptive_quad(
    f,
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-8,
    abs_tol: float = 0.0,
    breakpoints=(),
    max_panels: int = 4000,
) -> QuadResult:
    """Integrate a vectorized integrand over [a, b].

    `breakpoints` seed panel edges at known kinks or sharp features (barrier
    momentum, resonances).  Raises ConvergenceError carrying the achieved
    estimate if the panel budget is exhausted first.
    """
    if not (b > a):
        raise ValueError(f"need b > a, got [{a}, {b}]")
    edges = [a] + sorted(p for p in set(breakpoints) if a < p < b) + [b]
    edges = np.asarray(edges, dtype=float)

    lo = edges[:-1]
    hi = edges[1:]
    mids = 0.5 * (lo + hi)
    coarse15, coarse7 = _panel_values(f, lo, hi)
    (h15, h7) = _panel_values(
        f, np.concatenate([lo, mids]), np.concatenate([mids, hi])
    )
    n0 = len(lo)

    def panel_error(value, c15, c7, hl7, hr7):
        return max(abs(value - c15), abs(c15 - c7), abs(value - hl7 - hr7))

    # heap entries: (-err, seq, lo, hi, value, left15, right15, left7, right7)
    heap: list = []
    seq = 0
    total = 0.0
    total_err = 0.0
    for i in range(n0):
        val = h15[i] + h15[n0 + i]
        err = panel_error(val, coarse15[i], coarse7[i], h7[i], h7[n0 + i])
        total += val
        total_err += err
        heapq.heappush(
            heap, (-err, seq, lo[i], hi[i], val, h15[i], h15[n0 + i], h7[i], h7[n0 + i])
        )
        seq += 1

    n_panels = n0
    while total_err > max(rel_tol * abs(total), abs_tol):
        if n_panels >= max_panels:
            raise ConvergenceError(
                f"quadrature did not converge within {max_panels} panels "
                f"(estimate {total:.6e}, error bound {total_err:.2e})",
                estimate=total,
                error=total_err,
            )
        neg_err, _, plo, phi, pval, pl15, pr15, pl7, pr7 = heapq.heappop(heap)
        pmid = 0.5 * (plo + phi)
        qlo = np.array([plo, 0.5 * (plo + pmid), pmid, 0.5 * (pmid + phi)])
        qhi = np.array([0.5 * (plo + pmid), pmid, 0.5 * (pmid + phi), phi])
        q15, q7 = _panel_values(f, qlo, qhi)
        for c15, c7, i0 in ((pl15, pl7, 0), (pr15, pr7, 2)):
            v = q15[i0] + q15[i0 + 1]
            e = panel_error(v, c15, c7, q7[i0], q7[i0 + 1])
            total += v
            total_err += e
            heapq.heappush(
                heap,
                (-e, seq, qlo[i0], qhi[i0 + 1], v,
                 q15[i0], q15[i0 + 1], q7[i0], q7[i0 + 1]),
            )
            seq += 1
        total -= pval
        total_err += neg_err  # neg_err = -err of the popped panel
        n_panels += 1

    return QuadResult(value=total, error=total_err, n_panels=n_panels)


def integral_to_zero(
    f,
    eps: float,
    *,
    rel_tol: float = 1e-8,
    reference: float,
    max_halvings: int = 60,
) -> float:
    """Sum of integrals of f over (0, eps], halving the cutoff to convergence.

    `reference` sets the scale against which the discarded tail must be
    negligible (typically the integral over [eps, p_max] computed already).
    An integrable endpoint has increments shrinking at least geometrically;
    four successive halvings with ratio above 0.8 mean the cutoff limit does
    not exist and raise ThresholdDivergenceError.
    """
    total = 0.0
    increments: list[float] = []
    lo = eps
    for _ in range(max_halvings):
        scale = max(abs(reference + total), abs(reference), 1e-300)
        res = adaptive_quad(f, lo / 2.0, lo, rel_tol=1e-6, abs_tol=1e-14 * scale)
        total += res.value
        increments.append(abs(res.value))
        stalled = len(increments) >= 4 and all(
            increments[-j] >= 0.8 * increments[-j - 1] for j in (1, 2, 3)
        )
        if stalled and sum(increments[-4:]) > 1e-6 * scale:
            raise ThresholdDivergenceError(
                "integral grows without bound as the lower cutoff shrinks "
                f"(latest increments {increments[-4:]}, "
                f"estimate {reference + total:.6e})",
                estimate=reference + total,
                error=sum(increments[-4:]),
            )
        # off-threshold the integrand vanishes at 0 at least linearly, so the
        # remaining tail is bounded by a fraction of the last increment
        if increments[-1] <= 0.5 * rel_tol * scale and (
            len(increments) < 2 or increments[-2] <= rel_tol * scale
        ):
            return total
        lo /= 2.0
    raise ConvergenceError(
        "lower-cutoff refinement did not converge",
        estimate=reference + total,
        error=increments[-1] if increments else None,
    )
