"""Closed-form survival probabilities for structural default models.

One formula covers the whole family: Merton (terminal check only),
Black-Cox (continuous barrier), partial collateralization (barrier below
or above the terminal strike), discrete remargining (barrier observed
every ``dt`` years, handled with the Broadie-Glasserman-Kou continuity
correction), and a composite of several discretely monitored barriers
reduced to the highest shifted level.

Everything here is a pure function of its arguments; no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DefaultedFirmError, NumericalRangeError, ValidationError

# Broadie-Glasserman-Kou barrier continuity-correction constant,
# -zeta(1/2)/sqrt(2*pi), to 10 significant figures.
_BETA = 0.5825971579

# Excursions of a probability beyond [0, 1] larger than this indicate a
# genuine numerical failure rather than rounding noise.
_RANGE_SLACK = 1e-9

BRANCH_MERTON = "merton-degenerate"
BRANCH_STRIKE_ABOVE = "strike-above-barrier"
BRANCH_BARRIER_ABOVE = "barrier-at-or-above-strike"


@dataclass(frozen=True)
class FirmParams:
    """GBM dynamics of firm asset value plus the terminal liability check.

    Attributes
    ----------
    V : float
        Current firm asset value.
    K : float
        Liability strike checked at the horizon (same units as V).
    T : float
        Horizon in years.
    r : float
        Riskless rate, continuously compounded; drift of the asset GBM.
    D : float
        Payout (dividend) rate of the asset value.
    sigma : float
        Annualized asset-value volatility.
    """

    V: float
    K: float
    T: float
    r: float
    D: float
    sigma: float

    def __post_init__(self) -> None:
        if not (self.V > 0):
            raise ValidationError(f"V must be positive, got {self.V}")
        if not (self.K >= 0):
            raise ValidationError(f"K must be nonnegative, got {self.K}")
        if not (self.T > 0):
            raise ValidationError(f"T must be positive, got {self.T}")
        if not (self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not (math.isfinite(self.r) and math.isfinite(self.D)):
            raise ValidationError("r and D must be finite")


@dataclass(frozen=True)
class BarrierSpec:
    """One collateralization barrier: level B, monitoring interval dt.

    ``dt = 0`` means continuous observation; ``B = 0`` is the degenerate
    Merton case (no barrier at all).
    """

    B: float
    dt: float = 0.0

    def __post_init__(self) -> None:
        if not (self.B >= 0):
            raise ValidationError(f"barrier level must be nonnegative, got {self.B}")
        if not (self.dt >= 0):
            raise ValidationError(f"monitoring interval must be nonnegative, got {self.dt}")


@dataclass(frozen=True)
class CompositeBarrier:
    """Ordered collection of barriers monitored at different frequencies."""

    barriers: tuple[BarrierSpec, ...]

    def __init__(self, barriers) -> None:
        barriers = tuple(barriers)
        if len(barriers) < 1:
            raise ValidationError("composite barrier requires at least one BarrierSpec")
        object.__setattr__(self, "barriers", barriers)


@dataclass(frozen=True)
class SurvivalResult:
    probability: float
    effective_barrier: float
    branch: str


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF, absolute error well below 1e-12."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def beta_constant() -> float:
    """Barrier continuity-correction constant, about 0.5826."""
    return _BETA


def barrier_shift(barrier: BarrierSpec, sigma: float) -> float:
    """Effective continuous barrier for a discretely monitored one.

    Returns ``B * exp(-beta * sigma * sqrt(dt))``; the shift moves the
    barrier away from the asset, and vanishes for continuous monitoring.
    """
    if not (sigma > 0):
        raise ValidationError(f"sigma must be positive, got {sigma}")
    return barrier.B * math.exp(-_BETA * sigma * math.sqrt(barrier.dt))


def alpha(params: FirmParams) -> float:
    """Reflection exponent 0.5 * (1 - (r - D) / (sigma^2 / 2))."""
    return 0.5 * (1.0 - (params.r - params.D) / (0.5 * params.sigma**2))


def binary_call(params: FirmParams, strike: float) -> float:
    """Cash-or-nothing call paying 1 if the asset finishes above ``strike``.

    Price is ``exp(-r T) * Phi(d2)`` with
    ``d2 = (ln(V/strike) + (r - D - sigma^2/2) T) / (sigma sqrt(T))``.
    """
    if not (strike > 0):
        raise ValidationError(f"strike must be positive, got {strike}")
    d2 = (
        math.log(params.V / strike)
        + (params.r - params.D - 0.5 * params.sigma**2) * params.T
    ) / (params.sigma * math.sqrt(params.T))
    return math.exp(-params.r * params.T) * std_normal_cdf(d2)


def _finalize(raw: float, effective_barrier: float, branch: str) -> SurvivalResult:
    if raw < -_RANGE_SLACK or raw > 1.0 + _RANGE_SLACK:
        raise NumericalRangeError(
            f"survival probability {raw} outside [0, 1] beyond numerical noise"
        )
    return SurvivalResult(min(max(raw, 0.0), 1.0), effective_barrier, branch)


def survival_probability(params: FirmParams, barrier: BarrierSpec) -> SurvivalResult:
    """Survival probability over the horizon under one barrier.

    The barrier is first shifted for its monitoring frequency; the result
    is the undiscounted down-and-out binary call, with the reflection term
    dropped when the barrier is zero (pure Merton).
    """
    b_hat = barrier_shift(barrier, params.sigma)
    if barrier.B == 0.0:
        raw = math.exp(params.r * params.T) * binary_call(params, params.K)
        return _finalize(raw, 0.0, BRANCH_MERTON)

    if params.V <= b_hat:
        raise DefaultedFirmError(
            f"firm value {params.V} at or below effective barrier {b_hat}"
        )

    strike = params.K if params.K > b_hat else b_hat
    branch = BRANCH_STRIKE_ABOVE if params.K > b_hat else BRANCH_BARRIER_ABOVE

    vol_sqrt_t = params.sigma * math.sqrt(params.T)
    drift_t = (params.r - params.D - 0.5 * params.sigma**2) * params.T
    d2_direct = (math.log(params.V / strike) + drift_t) / vol_sqrt_t
    # reflected path starts at b_hat^2 / V; keep the factor in log space so
    # extreme barriers neither underflow nor overflow the power term
    d2_reflected = (
        2.0 * math.log(b_hat) - math.log(params.V) - math.log(strike) + drift_t
    ) / vol_sqrt_t
    phi_reflected = std_normal_cdf(d2_reflected)
    if phi_reflected > 0.0:
        log_reflection = 2.0 * alpha(params) * math.log(params.V / b_hat) + math.log(
            phi_reflected
        )
        if log_reflection > 700.0:
            raise NumericalRangeError(
                f"reflection term overflows (log value {log_reflection})"
            )
        reflection = math.exp(log_reflection)
    else:
        reflection = 0.0

    raw = std_normal_cdf(d2_direct) - reflection
    return _finalize(raw, b_hat, branch)


def composite_survival(params: FirmParams, composite: CompositeBarrier) -> SurvivalResult:
    """Survival under several discretely monitored barriers.

    All barriers are shifted individually; the highest shifted level
    becomes a single continuous barrier, and the terminal strike is forced
    to that same level.
    """
    b_hat = max(barrier_shift(b, params.sigma) for b in composite.barriers)
    if b_hat == 0.0:
        return survival_probability(params, BarrierSpec(0.0, 0.0))
    forced = FirmParams(
        V=params.V, K=b_hat, T=params.T, r=params.r, D=params.D, sigma=params.sigma
    )
    return survival_probability(forced, BarrierSpec(b_hat, 0.0))
