"""Photocount statistics: closed-form law, Bessel evaluation, Fock states, sampling.

Frozen reference values were computed independently at 50–60 decimal digits
with mpmath: the count-difference law from its Bessel-function form, large-order
Bessel logarithms directly, and Fock-state pmfs by Cauchy coefficient
extraction (angular averaging plus a radial Vandermonde solve) of the
generating identity P_n(mu) = (1/n!) d^{2n}/(dalpha^n dalphabar^n)
[e^{|alpha|^2} P(mu; alpha)] at alpha = 0.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymrx.errors import DomainError, TruncationError
from asymrx.photostat import (
    _log_bessel_i,
    _skellam_core,
    count_window,
    dh_joint_distribution,
    dh_joint_pmf,
    fock_distribution,
    fock_pmf,
    mc_sample_counts,
    skellam_distribution,
    skellam_pmf,
    skellam_pmf_oracle,
)
from asymrx.receivers import detected_intensities, output_amplitudes

from conftest import make_double_homodyne, make_homodyne

# (lam1, lam2, mu) -> P(mu), mpmath 50 digits
SKELLAM_ORACLE = {
    (0.1, 0.05, -2): 0.0010776792332360346,
    (0.1, 0.05, 0): 0.86501689872153922,
    (0.1, 0.05, 1): 0.08628615402550672,
    (0.1, 0.05, 3): 0.00014363073324792161,
    (1.0, 2.0, -4): 0.04890520458293806,
    (1.0, 2.0, -1): 0.238463438486297,
    (1.0, 2.0, 0): 0.2117120839619435,
    (1.0, 2.0, 2): 0.046240182359397501,
    (12.5, 12.5, -10): 0.010711755425929168,
    (12.5, 12.5, 0): 0.080196773547436708,
    (12.5, 12.5, 3): 0.066750403802189846,
    (12.5, 12.5, 10): 0.010711755425929168,
    (50.0, 30.0, -5): 0.00084856599658047877,
    (50.0, 30.0, 0): 0.0035795220488125702,
    (50.0, 30.0, 20): 0.044665862199477497,
    (50.0, 30.0, 45): 0.0009599537091932625,
}

# (nu, z) -> log I_nu(z), mpmath 50 digits (deep large-order regime)
LOG_BESSELI_ORACLE = {
    (300, 10.0): -931.99143115341707,
    (800, 50.0): -1976.070175224841,
    (1200, 400.0): -921.71505351538723,
    (150, 1.0): -708.99052731329308,
    (2000, 1500.0): 297.94445778389382,
}

# (config, n, mu) -> P_n(mu), mpmath 60 digits, Cauchy coefficient extraction;
# two radius ladders agreed to <= 3e-13.
FOCK_ORACLE = {
    ("balanced", 1, 0): 7.6389693199842639e-21,
    ("balanced", 1, 5): 0.048225415779992175,
    ("balanced", 1, 12): 0.02587839532617525,
    ("balanced", 2, 0): 0.04009838677371835,
    ("balanced", 2, 5): 0.00094441968222272575,
    ("balanced", 2, 12): 0.049009323859310054,
    ("asym", 1, 0): 0.015929446368742616,
    ("asym", 1, 5): 0.06069375982220769,
    ("asym", 1, 12): 0.011334313369083512,
    ("asym", 2, 0): 0.030302890314105926,
    ("asym", 2, 5): 0.020745280610667344,
    ("asym", 2, 12): 0.034488632127577312,
}

FOCK_CFGS = {
    "balanced": make_homodyne(),
    "asym": make_homodyne(0.6, 1.0, 0.75),
}


class TestOutputAmplitudes:
    def test_balanced_real_inputs(self, balanced_ideal):
        a1, a2 = output_amplitudes(balanced_ideal, 0.5)
        assert a1 == pytest.approx((0.5 + 5.0) / math.sqrt(2.0), abs=1e-12)
        assert a2 == pytest.approx((5.0 - 0.5) / math.sqrt(2.0), abs=1e-12)

    def test_energy_conservation(self, asym_lossy):
        alpha = 0.7 - 0.4j
        a1, a2 = output_amplitudes(asym_lossy, alpha)
        total_in = abs(alpha) ** 2 + abs(asym_lossy.lo) ** 2
        assert abs(a1) ** 2 + abs(a2) ** 2 == pytest.approx(total_in, rel=1e-12)

    def test_detected_intensities_scale_with_efficiency(self, asym_lossy):
        l1, l2 = detected_intensities(asym_lossy, 0.3)
        a1, a2 = output_amplitudes(asym_lossy, 0.3)
        assert l1 == pytest.approx(1.0 * abs(a1) ** 2, rel=1e-12)
        assert l2 == pytest.approx(0.75 * abs(a2) ** 2, rel=1e-12)


class TestSkellamLaw:
    @pytest.mark.parametrize("key", sorted(SKELLAM_ORACLE))
    def test_frozen_values(self, key):
        lam1, lam2, mu = key
        got = float(_skellam_core(lam1, lam2, np.array([mu]))[0])
        assert got == pytest.approx(SKELLAM_ORACLE[key], rel=1e-12)

    @pytest.mark.parametrize("key", sorted(LOG_BESSELI_ORACLE))
    def test_log_bessel_large_order(self, key):
        nu, z = key
        got = float(_log_bessel_i(np.array([nu]), z)[0])
        assert got == pytest.approx(LOG_BESSELI_ORACLE[key], rel=1e-11)

    def test_matches_double_poisson_construction(self, asym_lossy):
        for mu in (-7, -1, 0, 4, 11):
            closed = skellam_pmf(asym_lossy, 0.5, mu)
            summed = skellam_pmf_oracle(asym_lossy, 0.5, mu)
            assert closed == pytest.approx(summed, abs=1e-12, rel=1e-10)

    def test_window_captures_unit_mass(self, balanced_ideal, asym_lossy):
        for cfg, alpha in [
            (balanced_ideal, 0.5),
            (asym_lossy, 0.5 + 0.3j),
            (make_homodyne(lo=0.4 + 0.0j), 0.05),  # tiny mean counts
        ]:
            dist = skellam_distribution(cfg, alpha)
            assert dist.total() == pytest.approx(1.0, abs=1e-8)

    def test_exact_mean_and_variance(self, asym_lossy):
        lam1, lam2 = detected_intensities(asym_lossy, 0.8 - 0.2j)
        dist = skellam_distribution(asym_lossy, 0.8 - 0.2j)
        assert dist.mean() == pytest.approx(lam1 - lam2, rel=1e-9, abs=1e-9)
        assert dist.variance() == pytest.approx(lam1 + lam2, rel=1e-9)

    def test_degenerate_single_poisson_branches(self):
        # lam2 = 0: pure Poisson on mu >= 0.
        p = _skellam_core(1.3, 0.0, np.array([-1, 0, 2]))
        assert p[0] == 0.0
        assert p[1] == pytest.approx(math.exp(-1.3), rel=1e-12)
        assert p[2] == pytest.approx(math.exp(-1.3) * 1.3**2 / 2.0, rel=1e-12)

    def test_rejects_negative_intensities(self):
        with pytest.raises(DomainError):
            _skellam_core(-0.1, 1.0, np.array([0]))

    @given(
        lam1=st.floats(1e-3, 60.0),
        lam2=st.floats(1e-3, 60.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_window_mass_property(self, lam1, lam2):
        lo, hi = count_window(lam1, lam2)
        mu = np.arange(lo, hi + 1)
        total = float(_skellam_core(lam1, lam2, mu).sum())
        assert abs(total - 1.0) <= 1e-8

    @given(
        c2=st.floats(0.05, 0.95),
        eta1=st.floats(0.3, 1.0),
        eta2=st.floats(0.3, 1.0),
        lo_amp=st.floats(0.5, 6.0),
        re=st.floats(-1.5, 1.5),
        im=st.floats(-1.5, 1.5),
    )
    @settings(max_examples=25, deadline=None)
    def test_closed_form_equals_oracle_property(self, c2, eta1, eta2, lo_amp, re, im):
        cfg = make_homodyne(c2, eta1, eta2, complex(lo_amp, 0.0))
        alpha = complex(re, im)
        lam1, lam2 = detected_intensities(cfg, alpha)
        mu = int(round(lam1 - lam2))
        closed = skellam_pmf(cfg, alpha, mu)
        summed = skellam_pmf_oracle(cfg, alpha, mu)
        assert closed == pytest.approx(summed, abs=1e-12, rel=1e-10)


class TestFockStates:
    def test_n0_equals_vacuum_coherent(self, asym_lossy):
        mu = np.arange(-40, 41)
        vac = skellam_pmf(asym_lossy, 0.0, mu)
        n0 = fock_pmf(asym_lossy, 0, mu)
        np.testing.assert_allclose(n0, vac, rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("key", sorted(FOCK_ORACLE))
    def test_frozen_values(self, key):
        name, n, mu = key
        got = fock_pmf(FOCK_CFGS[name], n, mu)
        tol = 2e-8 if n == 1 else 5e-6  # honest finite-difference accuracy
        assert got == pytest.approx(FOCK_ORACLE[key], abs=tol)

    @pytest.mark.parametrize("name", sorted(FOCK_CFGS))
    @pytest.mark.parametrize("n", [1, 2])
    def test_normalization_and_mean(self, name, n):
        cfg = FOCK_CFGS[name]
        dist = fock_distribution(cfg, n)
        c2 = cfg.bs.transmittance_sq
        s2 = 1.0 - c2
        e1, e2 = cfg.detectors.eta1, cfg.detectors.eta2
        al2 = abs(cfg.lo) ** 2
        mean_expected = e1 * (c2 * n + s2 * al2) - e2 * (s2 * n + c2 * al2)
        sum_tol, mean_tol = (1e-8, 1e-7) if n == 1 else (1e-4, 1e-4)
        assert dist.total() == pytest.approx(1.0, abs=sum_tol)
        assert dist.mean() == pytest.approx(mean_expected, abs=mean_tol)

    def test_no_significant_negativity(self, balanced_ideal):
        dist = fock_distribution(balanced_ideal, 1)
        assert float(dist.probs.min()) >= 0.0

    def test_rejects_unsupported_n(self, balanced_ideal):
        with pytest.raises(DomainError):
            fock_pmf(balanced_ideal, 3, 0)


class TestDoubleHomodyne:
    def test_joint_law_is_normalized(self, dh_ideal_balanced):
        joint = dh_joint_distribution(dh_ideal_balanced, 0.5)
        assert float(joint.probs.sum()) == pytest.approx(1.0, abs=1e-8)

    def test_joint_factorizes_into_arm_laws(self, dh_imbalanced):
        cfg = dh_imbalanced
        (a1, _), (a2, _) = cfg.arm_inputs(0.4 + 0.2j)
        arm1, arm2 = cfg.arm_configs()
        p = dh_joint_pmf(cfg, 0.4 + 0.2j, 3, -2)
        p1 = skellam_pmf(arm1, a1, 3)
        p2 = skellam_pmf(arm2, a2, -2)
        assert p == pytest.approx(p1 * p2, rel=1e-12)

    def test_marginals_match_arm_distributions(self, dh_ideal_balanced):
        joint = dh_joint_distribution(dh_ideal_balanced, 0.3)
        m1, m2 = joint.marginal1(), joint.marginal2()
        (a1, _), (a2, _) = dh_ideal_balanced.arm_inputs(0.3)
        arm1, arm2 = dh_ideal_balanced.arm_configs()
        d1 = skellam_distribution(arm1, a1)
        d2 = skellam_distribution(arm2, a2)
        np.testing.assert_allclose(m1.probs, d1.probs, rtol=0, atol=1e-12)
        np.testing.assert_allclose(m2.probs, d2.probs, rtol=0, atol=1e-12)

    def test_lo_power_splits_between_arms(self):
        cfg = make_double_homodyne(cl2=0.7, lo=5.0 + 0.0j)
        (_, l1), (_, l2) = cfg.arm_inputs(0.0)
        assert abs(l1) ** 2 == pytest.approx(0.7 * 25.0, rel=1e-12)
        assert abs(l2) ** 2 == pytest.approx(0.3 * 25.0, rel=1e-12)
        # Second arm LO carries the quarter-wave phase shift.
        assert l2.real == pytest.approx(0.0, abs=1e-12)
        assert l2.imag < 0.0


class TestMonteCarlo:
    def test_seeded_runs_are_reproducible(self, balanced_ideal):
        a = mc_sample_counts(balanced_ideal, 0.5, 20_000, seed=7)
        b = mc_sample_counts(balanced_ideal, 0.5, 20_000, seed=7)
        assert a.mu_min == b.mu_min and a.mu_max == b.mu_max
        np.testing.assert_array_equal(a.probs, b.probs)

    def test_different_seeds_differ(self, balanced_ideal):
        a = mc_sample_counts(balanced_ideal, 0.5, 20_000, seed=7)
        b = mc_sample_counts(balanced_ideal, 0.5, 20_000, seed=8)
        assert not np.array_equal(a.probs, b.probs)

    def test_error_scales_as_inverse_sqrt_n(self, asym_lossy):
        exact = skellam_distribution(asym_lossy, 0.5)

        def tvd_at(n, seed):
            emp = mc_sample_counts(asym_lossy, 0.5, n, seed=seed)
            lo = min(exact.mu_min, emp.mu_min)
            hi = max(exact.mu_max, emp.mu_max)

            def embed(d):
                out = np.zeros(hi - lo + 1)
                out[d.mu_min - lo : d.mu_max - lo + 1] = d.probs
                return out

            return 0.5 * float(np.abs(embed(exact) - embed(emp)).sum())

        small = np.mean([tvd_at(10_000, s) for s in (11, 12, 13)])
        large = np.mean([tvd_at(160_000, s) for s in (11, 12, 13)])
        ratio = small / large  # expect ~ sqrt(16) = 4
        assert 4.0 / 3.0 < ratio < 12.0

    def test_sample_moments_match_law(self, asym_lossy):
        lam1, lam2 = detected_intensities(asym_lossy, 0.5)
        emp = mc_sample_counts(asym_lossy, 0.5, 400_000, seed=3)
        se_mean = math.sqrt((lam1 + lam2) / 400_000.0)
        assert emp.mean() == pytest.approx(lam1 - lam2, abs=5.0 * se_mean)
        assert emp.variance() == pytest.approx(lam1 + lam2, rel=0.02)

    def test_rejects_empty_sample(self, balanced_ideal):
        with pytest.raises(DomainError):
            mc_sample_counts(balanced_ideal, 0.5, 0, seed=1)


class TestOracleGuards:
    def test_oracle_raises_on_impossible_truncation(self, balanced_ideal):
        # An absurdly tight cap on the summation makes the tail bound fail.
        with pytest.raises(TruncationError):
            skellam_pmf_oracle(balanced_ideal, 0.5, 0, max_terms=3)
