"""Monte Carlo survival oracle for GBM with barrier monitoring.

Validates the closed-form results by simulating the asset value exactly
on the union of all monitoring grids (no Euler error: log-increments are
exact), flagging default whenever a schedule's barrier is touched at one
of its dates, optionally adding Brownian-bridge crossing probabilities
between grid points for continuous barriers, and finally requiring the
terminal value to exceed the liability strike.

Paths are partitioned into fixed-size chunks; each chunk gets its own
counter-based generator keyed by (seed, chunk index), so the estimate is
bit-identical regardless of how many worker threads evaluate the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import BarrierSpec, FirmParams
from .errors import ValidationError

CHUNK_SIZE = 1 << 16
THREADS_ENV = "COLLAT_DEFAULT_THREADS"


@dataclass(frozen=True)
class McConfig:
    """Path count, seed, barrier schedules, and bridge flag.

    ``schedules`` is a list of (barrier level, monitoring-date grid)
    pairs; each grid must be sorted and lie in (0, T]. With ``bridge``
    enabled every barrier is treated as continuously monitored and the
    grids act only as simulation resolution.
    """

    n_paths: int
    seed: int
    schedules: tuple[tuple[float, np.ndarray], ...] = field(default_factory=tuple)
    bridge: bool = False

    def __init__(self, n_paths, seed, schedules=(), bridge=False):
        if n_paths < 1:
            raise ValidationError(f"n_paths must be >= 1, got {n_paths}")
        frozen = []
        for level, grid in schedules:
            grid = np.asarray(grid, dtype=float)
            if grid.ndim != 1 or grid.size == 0:
                raise ValidationError("each monitoring grid must be a nonempty 1-d array")
            if np.any(np.diff(grid) <= 0):
                raise ValidationError("monitoring grids must be strictly increasing")
            if grid[0] <= 0:
                raise ValidationError("monitoring dates must be positive")
            frozen.append((float(level), grid))
        object.__setattr__(self, "n_paths", int(n_paths))
        object.__setattr__(self, "seed", int(seed))
        object.__setattr__(self, "schedules", tuple(frozen))
        object.__setattr__(self, "bridge", bool(bridge))


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    std_err: float


def _default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _chunk_survivors(
    params: FirmParams,
    config: McConfig,
    grid: np.ndarray,
    checks: list[list[float]],
    log_barriers: list[float],
    chunk_index: int,
    size: int,
) -> int:
    # separate streams for increments and bridge uniforms, so the simulated
    # paths are identical whether or not the bridge correction is enabled
    rng = np.random.Generator(np.random.Philox(key=[config.seed, 2 * chunk_index]))
    rng_u = np.random.Generator(np.random.Philox(key=[config.seed, 2 * chunk_index + 1]))
    drift = params.r - params.D - 0.5 * params.sigma**2
    vol = params.sigma
    log_v = np.full(size, math.log(params.V))
    defaulted = np.zeros(size, dtype=bool)
    prev_t = 0.0
    for i, t in enumerate(grid):
        d = t - prev_t
        z = rng.standard_normal(size)
        log_v_next = log_v + drift * d + vol * math.sqrt(d) * z
        if config.bridge:
            inv = 1.0 / (vol * vol * d)
            for log_b in log_barriers:
                a = log_v - log_b
                b = log_v_next - log_b
                hit = b <= 0.0
                # crossing probability when both endpoints sit above the barrier
                p_cross = np.exp(-2.0 * np.maximum(a, 0.0) * np.maximum(b, 0.0) * inv)
                u = rng_u.random(size)
                defaulted |= hit | ((a > 0.0) & (b > 0.0) & (u < p_cross))
        else:
            for log_b in checks[i]:
                defaulted |= log_v_next <= log_b
        log_v = log_v_next
        prev_t = t
    survived = ~defaulted & (log_v > math.log(params.K))
    return int(np.count_nonzero(survived))


def simulate_survival(
    params: FirmParams, config: McConfig, n_workers: int | None = None
) -> McEstimate:
    """Estimate survival probability; deterministic for a given seed."""
    for _, sched_grid in config.schedules:
        if sched_grid[-1] > params.T + 1e-12:
            raise ValidationError("monitoring dates must not exceed the horizon T")

    grids = [g for _, g in config.schedules]
    grid = np.unique(np.concatenate(grids + [np.array([params.T])]))

    # barriers with B <= 0 can never be touched
    log_barriers = [math.log(b) for b, _ in config.schedules if b > 0.0]
    checks: list[list[float]] = [[] for _ in grid]
    if not config.bridge:
        for level, sched_grid in config.schedules:
            if level <= 0.0:
                continue
            idx = np.searchsorted(grid, sched_grid)
            for j in idx:
                checks[j].append(math.log(level))

    n = config.n_paths
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)

    workers = n_workers if n_workers is not None else _default_workers()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(
                pool.map(
                    lambda args: _chunk_survivors(
                        params, config, grid, checks, log_barriers, *args
                    ),
                    enumerate(sizes),
                )
            )
        survived = sum(counts)
    else:
        survived = sum(
            _chunk_survivors(params, config, grid, checks, log_barriers, i, s)
            for i, s in enumerate(sizes)
        )

    p_hat = survived / n
    return McEstimate(p_hat=p_hat, std_err=math.sqrt(p_hat * (1.0 - p_hat) / n))


def monitoring_grid(dt: float, T: float) -> np.ndarray:
    """Monitoring dates at multiples of dt within (0, T]."""
    if dt <= 0:
        raise ValidationError("dt must be positive for a discrete grid")
    n = int(math.floor(T / dt + 1e-9))
    return dt * np.arange(1, n + 1)


def config_for_barrier(
    params: FirmParams,
    barrier: BarrierSpec,
    n_paths: int,
    seed: int,
    continuous_steps: int = 128,
) -> McConfig:
    """MC config matching one closed-form barrier scenario.

    Discrete barriers are monitored exactly on their own schedule; a
    continuous barrier (dt = 0) uses a uniform simulation grid with the
    Brownian-bridge correction, which is exact for GBM at any resolution.
    """
    if barrier.B == 0.0:
        return McConfig(n_paths=n_paths, seed=seed, schedules=(), bridge=False)
    if barrier.dt == 0.0:
        grid = np.linspace(params.T / continuous_steps, params.T, continuous_steps)
        return McConfig(
            n_paths=n_paths, seed=seed, schedules=((barrier.B, grid),), bridge=True
        )
    grid = monitoring_grid(barrier.dt, params.T)
    return McConfig(
        n_paths=n_paths, seed=seed, schedules=((barrier.B, grid),), bridge=False
    )
