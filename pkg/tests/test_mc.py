"""Tests for the Monte Carlo survival oracle."""

import numpy as np
import pytest

from collatrisk import (
    BarrierSpec,
    FirmParams,
    McConfig,
    ValidationError,
    config_for_barrier,
    simulate_survival,
    survival_probability,
)
from collatrisk.mc import monitoring_grid

N_PATHS = 200_000


def make_params(V=1.2, K=1.0, T=5.0, r=0.02, D=0.0, sigma=0.2):
    return FirmParams(V=V, K=K, T=T, r=r, D=D, sigma=sigma)


def test_near_certain_survival():
    params = make_params(V=1e6, K=1.0, T=1.0, sigma=0.1)
    est = simulate_survival(params, McConfig(n_paths=50_000, seed=1))
    assert est.p_hat == pytest.approx(1.0, abs=max(3 * est.std_err, 1e-9))


def test_merton_agrees_with_closed_form():
    params = make_params()
    closed = survival_probability(params, BarrierSpec(0.0, 0.0)).probability
    est = simulate_survival(params, McConfig(n_paths=N_PATHS, seed=2))
    assert abs(est.p_hat - closed) <= 3 * est.std_err


def test_continuous_barrier_with_bridge():
    params = make_params(V=1.5, sigma=0.4)
    closed = survival_probability(params, BarrierSpec(1.0, 0.0)).probability
    config = config_for_barrier(params, BarrierSpec(1.0, 0.0), N_PATHS, seed=3)
    est = simulate_survival(params, config)
    assert abs(est.p_hat - closed) <= 3 * est.std_err


def test_weekly_monitoring_agrees_with_shifted_closed_form():
    params = make_params(V=1.5, sigma=0.4)
    closed = survival_probability(params, BarrierSpec(0.8, 1 / 52)).probability
    config = config_for_barrier(params, BarrierSpec(0.8, 1 / 52), N_PATHS, seed=4)
    est = simulate_survival(params, config)
    assert abs(est.p_hat - closed) <= 3 * est.std_err


def test_seed_determinism():
    params = make_params()
    config = config_for_barrier(params, BarrierSpec(0.8, 1 / 12), 50_000, seed=7)
    a = simulate_survival(params, config)
    b = simulate_survival(params, config)
    assert a.p_hat == b.p_hat


def test_determinism_across_worker_counts():
    params = make_params()
    config = config_for_barrier(params, BarrierSpec(0.8, 1 / 12), 150_000, seed=8)
    serial = simulate_survival(params, config, n_workers=1)
    parallel = simulate_survival(params, config, n_workers=4)
    assert serial.p_hat == parallel.p_hat


def test_anti_monotone_in_barrier_level():
    params = make_params(V=1.5, sigma=0.4)
    grid = monitoring_grid(1 / 12, 5.0)
    low = simulate_survival(
        params, McConfig(n_paths=50_000, seed=9, schedules=((0.7, grid),))
    )
    high = simulate_survival(
        params, McConfig(n_paths=50_000, seed=9, schedules=((0.9, grid),))
    )
    assert high.p_hat <= low.p_hat


def test_bridge_only_adds_defaults():
    params = make_params(V=1.5, sigma=0.4)
    grid = monitoring_grid(1 / 12, 5.0)
    schedules = ((0.9, grid),)
    discrete = simulate_survival(
        params, McConfig(n_paths=50_000, seed=10, schedules=schedules, bridge=False)
    )
    bridged = simulate_survival(
        params, McConfig(n_paths=50_000, seed=10, schedules=schedules, bridge=True)
    )
    assert bridged.p_hat <= discrete.p_hat


def test_std_err_scaling():
    params = make_params(V=1.5, sigma=0.4)
    small = simulate_survival(params, McConfig(n_paths=40_000, seed=11))
    large = simulate_survival(params, McConfig(n_paths=160_000, seed=11))
    assert large.std_err == pytest.approx(small.std_err / 2, rel=0.05)


def test_two_discrete_schedules():
    params = make_params(V=1.5, sigma=0.3)
    config = McConfig(
        n_paths=50_000,
        seed=12,
        schedules=(
            (1.0, monitoring_grid(0.25, 5.0)),
            (0.9, monitoring_grid(1 / 52, 5.0)),
        ),
    )
    est = simulate_survival(params, config)
    assert 0.0 < est.p_hat < 1.0


def test_validation():
    with pytest.raises(ValidationError):
        McConfig(n_paths=0, seed=1)
    with pytest.raises(ValidationError):
        McConfig(n_paths=10, seed=1, schedules=((0.9, np.array([0.5, 0.5])),))
    with pytest.raises(ValidationError):
        McConfig(n_paths=10, seed=1, schedules=((0.9, np.array([-0.5, 1.0])),))
    params = make_params(T=1.0)
    config = McConfig(n_paths=10, seed=1, schedules=((0.9, np.array([2.0])),))
    with pytest.raises(ValidationError):
        simulate_survival(params, config)


def test_composite_vs_multi_schedule_mc_gap_recorded():
    # the composite closed form replaces two discrete schedules by one
    # continuous barrier at the max shifted level; that is an approximation,
    # so the gap against the true multi-schedule process is reported, not
    # asserted to vanish
    from collatrisk import CompositeBarrier, composite_survival

    params = make_params(V=1.5, sigma=0.3)
    specs = [BarrierSpec(1.0, 0.25), BarrierSpec(0.9, 1 / 52)]
    closed = composite_survival(params, CompositeBarrier(specs)).probability
    config = McConfig(
        n_paths=N_PATHS,
        seed=13,
        schedules=(
            (1.0, monitoring_grid(0.25, 5.0)),
            (0.9, monitoring_grid(1 / 52, 5.0)),
        ),
    )
    est = simulate_survival(params, config)
    gap = closed - est.p_hat
    print(
        f"composite approximation gap: closed {closed:.6f}, "
        f"mc {est.p_hat:.6f} +/- {est.std_err:.6f}, gap {gap:+.6f}"
    )
    assert 0.0 <= est.p_hat <= 1.0
