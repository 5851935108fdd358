"""Amplitudes, eigenphases, phase tables, and the causality samples."""
import math

import numpy as np
import pytest

from hartman import (
    ATOMIC,
    PhaseAnchorError,
    PhysicalConstants,
    SquarePotential,
    amplitudes,
    build_phase_table,
    default_k_max,
    eigen_channels,
    van_kampen_check,
)
from hartman.verify import transfer_matrix_amplitudes

BARRIER5_HALF = SquarePotential(5.0, 0.5)  # d = 1
WELL1 = SquarePotential(-1.0, 1.0)


def test_free_particle_identity():
    amp = amplitudes(SquarePotential(0.0, 1.0), ATOMIC, 0.7)
    assert amp.t == pytest.approx(1.0, abs=1e-15)
    assert amp.r == pytest.approx(0.0, abs=1e-15)


def test_resonance_condition_gives_unit_transmission():
    """sin(q d) = 0 forces |T| = 1: inside wavenumber q = n pi / d, d = 3."""
    pot = SquarePotential(5.0, 1.5)
    for n in (1, 2, 3, 5):
        q = n * math.pi / 3.0
        k = math.sqrt(q * q + 10.0)  # k^2 = q^2 + 2 m v0
        amp = amplitudes(pot, ATOMIC, k)
        assert abs(amp.t) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_transmission_against_matching_oracle_frozen():
    # value computed with transfer_matrix_amplitudes (plane-wave matching)
    amp = amplitudes(BARRIER5_HALF, ATOMIC, 1.0)
    assert abs(amp.t) ** 2 == pytest.approx(0.0035743427223686505, rel=1e-12)


def test_oracle_equivalence_random_grid():
    rng = np.random.default_rng(7)
    for _ in range(100):
        pot = SquarePotential(rng.uniform(-10, 10), rng.uniform(0.1, 3.0))
        k = rng.uniform(0.05, 10.0)
        amp = amplitudes(pot, ATOMIC, k)
        t_o, r_o = transfer_matrix_amplitudes(pot, ATOMIC, k)
        scale = max(abs(t_o), abs(r_o))
        assert abs(amp.t - t_o) / scale < 1e-10
        assert abs(amp.r - r_o) / scale < 1e-10


def test_unitarity_property_grid():
    ks = np.linspace(1e-3, 50.0, 500)
    for v0 in np.linspace(-10, 10, 41):
        pot = SquarePotential(v0, 1.0) if v0 else SquarePotential(0.0, 1.0)
        from hartman._kernel import scatter_grid

        t, r, _, _, _ = scatter_grid(pot.strength(ATOMIC), pot.width, ks)
        assert np.abs(np.abs(t) ** 2 + np.abs(r) ** 2 - 1.0).max() < 1e-12


def test_negative_k_conjugation():
    for k in (0.3, 1.7, 9.0):
        a_plus = amplitudes(WELL1, ATOMIC, k)
        a_minus = amplitudes(WELL1, ATOMIC, -k)
        assert a_minus.t == pytest.approx(a_plus.t.conjugate(), abs=1e-14)
        assert a_minus.r == pytest.approx(a_plus.r.conjugate(), abs=1e-14)


def test_removable_singularity_at_barrier_top():
    """E = v0 is a regular point: differences shrink linearly with epsilon
    and the series guard adds no jump beyond smooth variation."""
    pot = SquarePotential(5.0, 0.5)
    at = amplitudes(pot, ATOMIC, math.sqrt(10.0))
    diffs = {}
    for eps in (1e-6, 1e-8):
        plus = amplitudes(pot, ATOMIC, math.sqrt(2.0 * (5.0 + eps)))
        minus = amplitudes(pot, ATOMIC, math.sqrt(2.0 * (5.0 - eps)))
        diffs[eps] = max(abs(plus.t - at.t), abs(minus.t - at.t))
        # second difference cancels the smooth part; what remains bounds any
        # jump introduced by the q -> 0 handling
        assert abs(plus.t + minus.t - 2.0 * at.t) < 1e-8
    assert diffs[1e-8] < 2e-2 * diffs[1e-6]


def test_k_zero_rejected():
    with pytest.raises(ValueError):
        amplitudes(WELL1, ATOMIC, 0.0)


def test_nondefault_units_consistency():
    """The same dimensionless combination must come out for scaled units."""
    consts = PhysicalConstants(hbar=2.0, mass=3.0)
    pot = SquarePotential(5.0, 0.5)
    amp = amplitudes(pot, consts, 1.0)
    # g = 2*3*5/4 = 7.5; equivalent atomic-units problem: v0' = g/2
    amp_ref = amplitudes(SquarePotential(3.75, 0.5), ATOMIC, 1.0)
    assert amp.t == pytest.approx(amp_ref.t, rel=1e-14)


class TestEigenChannels:
    def test_free(self):
        ec = eigen_channels(amplitudes(SquarePotential(0.0, 1.0), ATOMIC, 1.0))
        assert ec.s0 == pytest.approx(1.0, abs=1e-14)
        assert ec.s1 == pytest.approx(1.0, abs=1e-14)
        assert ec.delta0 == pytest.approx(0.0, abs=1e-14)
        assert ec.delta1 == pytest.approx(0.0, abs=1e-14)

    def test_unimodular(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            pot = SquarePotential(rng.uniform(-10, 10), rng.uniform(0.1, 2.0))
            ec = eigen_channels(amplitudes(pot, ATOMIC, rng.uniform(0.05, 20.0)))
            assert abs(abs(ec.s0) - 1.0) < 1e-12
            assert abs(abs(ec.s1) - 1.0) < 1e-12

    def test_matching_formula_values_frozen(self):
        # independent solve of tan(ka + delta0) = (q/k) tan(qa) and the odd
        # analog at v0 = -1, a = 1, k = 0.5 (principal branch)
        ec = eigen_channels(amplitudes(WELL1, ATOMIC, 0.5))
        assert ec.delta0 == pytest.approx(1.0471624466596872, abs=1e-12)
        assert ec.delta1 == pytest.approx(0.8611769776780287, abs=1e-12)

    def test_complex_k_rejected(self):
        with pytest.raises(ValueError):
            eigen_channels(amplitudes(WELL1, ATOMIC, 1.0 + 0.5j))

    def test_factorization(self):
        amp = amplitudes(BARRIER5_HALF, ATOMIC, 1.3)
        ec = eigen_channels(amp)
        assert ec.s0 * ec.s1 == pytest.approx(amp.t**2 - amp.r**2, abs=1e-14)
        assert 0.5 * (ec.s0 + ec.s1) == pytest.approx(amp.t, abs=1e-14)


class TestPhaseTable:
    def test_free_phases_vanish(self):
        table = build_phase_table(SquarePotential(0.0, 1.0), ATOMIC, 0.01, 40.0)
        assert np.abs(table.phi_t).max() < 1e-12
        assert np.abs(table.delta0).max() < 1e-12
        assert np.abs(table.delta1).max() < 1e-12

    def test_levinson_limit_single_level_well(self):
        table = build_phase_table(WELL1, ATOMIC, 1e-4)
        assert table.phi_t[0] == pytest.approx(math.pi / 2, abs=5e-4)

    def test_additivity_everywhere(self):
        for pot in (BARRIER5_HALF, WELL1, SquarePotential(-6.5, 1.3)):
            table = build_phase_table(pot, ATOMIC, 1e-3)
            assert np.abs(table.phi_t - table.delta0 - table.delta1).max() < 1e-10
            # phases are already in their asymptotic tail at the anchor
            assert abs(table.phi_t[-1]) < 0.3
            assert abs(table.delta0[-1]) < 0.3
            assert abs(table.delta1[-1]) < 0.3

    def test_grid_strictly_increasing_and_jump_bounded(self):
        table = build_phase_table(SquarePotential(5.0, 1.5), ATOMIC, 0.01)
        assert np.all(np.diff(table.k_grid) > 0)
        assert np.abs(np.diff(table.phi_t)).max() <= table.max_jump + 1e-12

    def test_tunneling_branch_and_resonance_jumps(self):
        """Monotone negative phase below the barrier momentum; above it the
        pi-steps are sharper for the wider barrier."""
        kb = math.sqrt(10.0)
        tables = {
            d: build_phase_table(SquarePotential(5.0, d / 2.0), ATOMIC, 0.05, 60.0)
            for d in (1.0, 3.0)
        }
        for d, table in tables.items():
            deep = table.k_grid < 0.7 * kb
            assert np.all(np.diff(table.phi_t[deep]) < 0), f"d={d}"
            below = table.k_grid < kb
            assert np.all(table.phi_t[below] < 0), f"d={d}"
        # sharpness of the first above-barrier step: max dPhi/dk beyond k_b
        slopes = {}
        for d, table in tables.items():
            sel = (table.k_grid > kb) & (table.k_grid < 6.0)
            slopes[d] = table.dphi_t[sel].max()
        assert slopes[3.0] > 3.0 * slopes[1.0]

    def test_anchor_error_when_k_max_too_small(self):
        with pytest.raises(PhaseAnchorError):
            build_phase_table(SquarePotential(5.0, 6.0), ATOMIC, 0.1, 20.0)

    def test_default_k_max_satisfies_anchor(self):
        pot = SquarePotential(5.0, 0.5)
        assert default_k_max(pot, ATOMIC) == pytest.approx(80.0)
        build_phase_table(pot, ATOMIC, 1e-3)  # must not raise

    def test_derivative_consistency_with_finite_differences(self):
        from hartman._kernel import scatter_grid

        pot = SquarePotential(-3.0, 1.0)
        g, d = pot.strength(ATOMIC), pot.width
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(60):
            k = rng.uniform(0.2, 20.0)
            h = 1e-5 * k
            ks = k + h * np.arange(-2.0, 3.0)
            t, _, dphi, _, _ = scatter_grid(g, d, ks)
            ph = np.unwrap(np.angle(t))
            if np.abs(np.diff(ph)).max() > 1.0:  # resonance peak
                continue
            fd = (ph[0] - 8 * ph[1] + 8 * ph[3] - ph[4]) / (12 * h)
            assert fd == pytest.approx(dphi[2], rel=1e-6, abs=1e-9)
            checked += 1
        assert checked > 30


class TestVanKampen:
    def test_real_axis_unimodular(self):
        reports = van_kampen_check(BARRIER5_HALF, ATOMIC, [0.5, 1.0, 3.0, 10.0])
        for rep in reports:
            assert rep.s_a0_abs == pytest.approx(1.0, abs=1e-12)
            assert rep.s_a1_abs == pytest.approx(1.0, abs=1e-12)
            assert rep.passed

    def test_upper_half_plane_sample(self):
        (rep,) = van_kampen_check(BARRIER5_HALF, ATOMIC, [1.0 + 1.0j])
        assert rep.passed
        assert max(rep.s_a0_abs, rep.s_a1_abs) <= 1.0 + 1e-10

    def test_reflection_symmetry(self):
        reports = van_kampen_check(
            BARRIER5_HALF, ATOMIC, [0.7 + 0.3j, 2.0 + 2.5j, -1.2 + 0.8j]
        )
        for rep in reports:
            assert rep.symmetry_error < 1e-12

    def test_requires_no_bound_states(self):
        with pytest.raises(ValueError):
            van_kampen_check(WELL1, ATOMIC, [1.0 + 1.0j])

    def test_lower_half_plane_rejected(self):
        with pytest.raises(ValueError):
            van_kampen_check(BARRIER5_HALF, ATOMIC, [1.0 - 0.1j])
