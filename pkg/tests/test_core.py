"""Unit tests for the closed-form survival engine."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatrisk import (
    BarrierSpec,
    CompositeBarrier,
    DefaultedFirmError,
    FirmParams,
    ValidationError,
    alpha,
    barrier_shift,
    beta_constant,
    binary_call,
    composite_survival,
    std_normal_cdf,
    survival_probability,
)

MERTON = BarrierSpec(0.0, 0.0)


def make_params(V=1.2, K=1.0, T=5.0, r=0.02, D=0.0, sigma=0.2):
    return FirmParams(V=V, K=K, T=T, r=r, D=D, sigma=sigma)


class TestNormalCdf:
    def test_symmetry_at_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_tail_limit(self):
        assert abs(std_normal_cdf(10.0) - 1.0) <= 1e-12

    def test_reference_value(self):
        # frozen from a 30-digit erfc evaluation in mpmath
        assert std_normal_cdf(1.0) == pytest.approx(
            0.841344746068542948585, abs=1e-13
        )

    @given(st.floats(-8, 8), st.floats(-8, 8))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert std_normal_cdf(lo) <= std_normal_cdf(hi)


class TestBinaryCall:
    def test_degenerate_strike_limit(self):
        p = make_params()
        assert binary_call(p, 1e-12) == pytest.approx(math.exp(-0.1), rel=1e-12)

    def test_d2_collapse_at_the_money(self):
        # V = strike and r = D make d2 = -sigma*sqrt(T)/2
        p = make_params(V=1.0, r=0.03, D=0.03, sigma=0.2)
        expected = math.exp(-0.15) * std_normal_cdf(-0.2 * math.sqrt(5) / 2)
        assert binary_call(p, 1.0) == pytest.approx(expected, rel=1e-14)

    def test_reference_value(self):
        # frozen from mpmath: e^{-0.1} * Phi(ln(1.2) / (0.2*sqrt(5)))
        assert binary_call(make_params(), 1.0) == pytest.approx(
            0.5956064571108334915, rel=1e-13
        )

    def test_rejects_nonpositive_strike(self):
        with pytest.raises(ValidationError):
            binary_call(make_params(), 0.0)

    def test_price_bounds(self):
        p = make_params()
        price = binary_call(p, 1.0)
        assert 0.0 < price < math.exp(-p.r * p.T)


class TestBetaAndShift:
    def test_beta_value(self):
        assert beta_constant() == pytest.approx(0.5826, abs=5e-5)

    def test_beta_matches_zeta_reading(self):
        # -zeta(1/2)/sqrt(2*pi) with zeta(1/2) ~ -1.4603545
        assert beta_constant() == pytest.approx(1.4603545 / math.sqrt(2 * math.pi), abs=1e-7)

    def test_continuous_monitoring_no_shift(self):
        assert barrier_shift(BarrierSpec(1.0, 0.0), 0.2) == 1.0

    def test_zero_barrier(self):
        assert barrier_shift(BarrierSpec(0.0, 1.0), 0.3) == 0.0

    def test_daily_shift_reference(self):
        # frozen from mpmath: exp(-0.5825971579 * 0.2 * sqrt(1/252))
        got = barrier_shift(BarrierSpec(1.0, 1 / 252), 0.2)
        assert got == pytest.approx(0.9926868380047404545, rel=1e-14)

    def test_shift_decreasing_in_dt(self):
        shifts = [barrier_shift(BarrierSpec(1.0, dt), 0.4) for dt in (0.0, 1 / 252, 1 / 52, 1 / 12)]
        assert shifts == sorted(shifts, reverse=True)
        assert all(s <= 1.0 for s in shifts)


class TestAlpha:
    def test_drift_cancels(self):
        assert alpha(make_params(r=0.03, D=0.03)) == 0.5

    def test_exact_cancellation(self):
        assert alpha(make_params(r=0.02, D=0.0, sigma=0.2)) == pytest.approx(0.0, abs=1e-14)

    def test_reference_value(self):
        assert alpha(make_params(r=0.03, D=0.01, sigma=0.4)) == pytest.approx(0.375, rel=1e-14)


class TestSurvivalProbability:
    def test_merton_atm_reduction(self):
        p = make_params(V=1.0, r=0.03, D=0.03)
        res = survival_probability(p, MERTON)
        assert res.branch == "merton-degenerate"
        assert res.probability == pytest.approx(
            std_normal_cdf(-0.2 * math.sqrt(5) / 2), rel=1e-13
        )

    def test_merton_equals_undiscounted_binary(self):
        p = make_params()
        res = survival_probability(p, MERTON)
        assert res.probability == math.exp(p.r * p.T) * binary_call(p, p.K)

    def test_branch_selection(self):
        p = make_params(V=1.5, sigma=0.4)
        assert survival_probability(p, BarrierSpec(1.0, 0.0)).branch == "barrier-at-or-above-strike"
        assert survival_probability(p, BarrierSpec(0.8, 0.0)).branch == "strike-above-barrier"

    def test_effective_barrier_reported(self):
        p = make_params(V=1.5, sigma=0.4)
        res = survival_probability(p, BarrierSpec(0.8, 1 / 52))
        assert res.effective_barrier == barrier_shift(BarrierSpec(0.8, 1 / 52), 0.4)
        assert res.effective_barrier < 0.8

    def test_already_defaulted(self):
        p = make_params(V=0.9)
        with pytest.raises(DefaultedFirmError):
            survival_probability(p, BarrierSpec(0.95, 0.0))

    def test_branch_continuity_at_barrier(self):
        # parameters kept far from the barrier so the local slope in K is
        # small enough to resolve the 1e-9 continuity tolerance
        p = make_params(V=3.0, K=0.3 * (1 + 1e-8), sigma=0.4)
        above = survival_probability(p, BarrierSpec(0.3, 0.0))
        at = survival_probability(
            make_params(V=3.0, K=0.3, sigma=0.4), BarrierSpec(0.3, 0.0)
        )
        assert above.branch == "strike-above-barrier"
        assert at.branch == "barrier-at-or-above-strike"
        assert above.probability == pytest.approx(at.probability, rel=1e-9)

    def test_continuous_limit_monotone(self):
        p = make_params(V=1.5, sigma=0.4)
        values = [
            survival_probability(p, BarrierSpec(1.0, dt)).probability
            for dt in (1 / 12, 1 / 52, 1 / 252, 0.0)
        ]
        assert values == sorted(values, reverse=True)

    def test_ordering_merton_discrete_continuous(self):
        p = make_params(V=1.5, sigma=0.4)
        merton = survival_probability(p, MERTON).probability
        discrete = survival_probability(p, BarrierSpec(0.9, 1 / 52)).probability
        continuous = survival_probability(p, BarrierSpec(0.9, 0.0)).probability
        assert merton >= discrete >= continuous

    @given(
        v_over_k=st.floats(1.05, 3.0),
        sigma=st.floats(0.1, 0.8),
        b_over_k=st.floats(0.0, 1.2),
        dt=st.sampled_from([0.0, 1 / 252, 1 / 52, 1 / 12]),
        T=st.floats(1.0, 10.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_probability_in_unit_interval(self, v_over_k, sigma, b_over_k, dt, T):
        p = FirmParams(V=v_over_k, K=1.0, T=T, r=0.02, D=0.0, sigma=sigma)
        barrier = BarrierSpec(b_over_k, dt)
        if b_over_k > 0 and v_over_k <= barrier_shift(barrier, sigma):
            with pytest.raises(DefaultedFirmError):
                survival_probability(p, barrier)
            return
        res = survival_probability(p, barrier)
        assert 0.0 <= res.probability <= 1.0

    @given(b=st.floats(0.1, 0.9), b2=st.floats(0.1, 0.9))
    @settings(max_examples=50, deadline=None)
    def test_nonincreasing_in_barrier(self, b, b2):
        lo, hi = sorted((b, b2))
        p = make_params(V=1.5, sigma=0.4)
        p_lo = survival_probability(p, BarrierSpec(lo, 0.0)).probability
        p_hi = survival_probability(p, BarrierSpec(hi, 0.0)).probability
        assert p_hi <= p_lo + 1e-15

    @given(v=st.floats(1.2, 3.0), v2=st.floats(1.2, 3.0))
    @settings(max_examples=50, deadline=None)
    def test_nondecreasing_in_firm_value(self, v, v2):
        lo, hi = sorted((v, v2))
        barrier = BarrierSpec(0.8, 1 / 52)
        p_lo = survival_probability(make_params(V=lo, sigma=0.4), barrier).probability
        p_hi = survival_probability(make_params(V=hi, sigma=0.4), barrier).probability
        assert p_hi >= p_lo - 1e-15

    @given(k=st.floats(0.5, 1.4), k2=st.floats(0.5, 1.4))
    @settings(max_examples=50, deadline=None)
    def test_nonincreasing_in_strike(self, k, k2):
        lo, hi = sorted((k, k2))
        barrier = BarrierSpec(0.6, 0.0)
        p_lo = survival_probability(make_params(V=1.5, K=lo, sigma=0.4), barrier).probability
        p_hi = survival_probability(make_params(V=1.5, K=hi, sigma=0.4), barrier).probability
        assert p_hi <= p_lo + 1e-15


class TestCompositeSurvival:
    def test_single_element_reduces_to_plain(self):
        p = make_params(V=1.5, sigma=0.4)
        single = composite_survival(p, CompositeBarrier([BarrierSpec(1.0, 0.0)]))
        plain = survival_probability(p, BarrierSpec(1.0, 0.0))
        assert single.probability == plain.probability

    def test_dominated_barrier_ignored(self):
        p = make_params(V=1.5, sigma=0.3)
        dominant = BarrierSpec(1.0, 0.25)
        dominated = BarrierSpec(0.5, 1 / 52)
        both = composite_survival(p, CompositeBarrier([dominant, dominated]))
        alone = composite_survival(p, CompositeBarrier([dominant]))
        assert both.probability == alone.probability

    def test_effective_barrier_is_max_of_shifts(self):
        p = make_params(V=1.5, sigma=0.3)
        specs = [BarrierSpec(1.0, 0.25), BarrierSpec(0.9, 1 / 52)]
        res = composite_survival(p, CompositeBarrier(specs))
        expected = max(barrier_shift(s, 0.3) for s in specs)
        assert res.effective_barrier == expected
        assert res.branch == "barrier-at-or-above-strike"

    def test_strike_forced_to_effective_barrier(self):
        p = make_params(V=1.5, sigma=0.3)
        specs = [BarrierSpec(1.0, 0.25), BarrierSpec(0.9, 1 / 52)]
        res = composite_survival(p, CompositeBarrier(specs))
        b_hat = res.effective_barrier
        forced = FirmParams(V=1.5, K=b_hat, T=5.0, r=0.02, D=0.0, sigma=0.3)
        direct = survival_probability(forced, BarrierSpec(b_hat, 0.0))
        assert res.probability == pytest.approx(direct.probability, rel=1e-12)

    def test_monotone_in_levels_and_intervals(self):
        p = make_params(V=1.5, sigma=0.3)
        base = composite_survival(
            p, CompositeBarrier([BarrierSpec(0.9, 0.25), BarrierSpec(0.8, 1 / 52)])
        ).probability
        higher_level = composite_survival(
            p, CompositeBarrier([BarrierSpec(0.95, 0.25), BarrierSpec(0.8, 1 / 52)])
        ).probability
        longer_interval = composite_survival(
            p, CompositeBarrier([BarrierSpec(0.9, 0.5), BarrierSpec(0.8, 1 / 52)])
        ).probability
        assert higher_level <= base
        assert longer_interval >= base

    def test_empty_composite_rejected(self):
        with pytest.raises(ValidationError):
            CompositeBarrier([])


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(V=0.0),
            dict(V=-1.0),
            dict(K=-0.1),
            dict(T=0.0),
            dict(sigma=0.0),
            dict(r=math.inf),
        ],
    )
    def test_bad_firm_params(self, kwargs):
        with pytest.raises(ValidationError):
            make_params(**kwargs)

    def test_bad_barrier(self):
        with pytest.raises(ValidationError):
            BarrierSpec(-0.1, 0.0)
        with pytest.raises(ValidationError):
            BarrierSpec(1.0, -1.0)
