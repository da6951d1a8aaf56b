"""Solve for the unobserved structural parameter behind a credit quote.

Balance sheets rarely pin down both firm value and asset volatility, so
either one is solved so the uncollateralized Merton survival matches a
target. Bisection on a user-supplied bracket; survival is monotone in V
and (away from the money) in sigma, so robustness wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import BarrierSpec, FirmParams, survival_probability
from .errors import MaxIterationsError, NoBracketError, ValidationError

_MERTON = BarrierSpec(0.0, 0.0)


@dataclass(frozen=True)
class CalibrationTarget:
    """Target survival plus the fixed structural parameters.

    Exactly one of ``V`` / ``sigma`` is left None: that is the parameter
    being solved for.
    """

    target_survival: float
    K: float
    T: float
    r: float
    D: float
    sigma: float | None = None
    V: float | None = None

    def __post_init__(self) -> None:
        if not (0 < self.target_survival < 1):
            raise ValidationError(
                f"target survival must be in (0, 1), got {self.target_survival}"
            )
        if not (self.K > 0 and self.T > 0):
            raise ValidationError("K and T must be positive")


@dataclass(frozen=True)
class RootFindConfig:
    """Tolerance on the survival mismatch, iteration cap, and bracket."""

    abs_tol: float = 1e-10
    max_iter: int = 200
    bracket: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0):
            raise ValidationError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.bracket is not None and not (self.bracket[0] < self.bracket[1]):
            raise ValidationError(f"bracket must satisfy lo < hi, got {self.bracket}")


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    abs_tol: float,
    max_iter: int,
) -> float:
    """Bisection root of f on [lo, hi]; terminates when |f| <= abs_tol.

    The interval halves every step, so the iteration count is bounded by
    the bracket width over the floating-point grid. Deterministic.
    """
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= abs_tol:
        return lo
    if abs(f_hi) <= abs_tol:
        return hi
    if f_lo * f_hi > 0:
        raise NoBracketError(
            f"f({lo})={f_lo} and f({hi})={f_hi} do not straddle zero"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break  # bracket exhausted at machine precision
        f_mid = f(mid)
        if abs(f_mid) <= abs_tol:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    raise MaxIterationsError(
        f"no root with |f| <= {abs_tol} within {max_iter} bisection steps"
    )


def merton_survival(V: float, sigma: float, target: CalibrationTarget) -> float:
    params = FirmParams(V=V, K=target.K, T=target.T, r=target.r, D=target.D, sigma=sigma)
    return survival_probability(params, _MERTON).probability


def calibrate_firm_value(
    target: CalibrationTarget, config: RootFindConfig = RootFindConfig()
) -> float:
    """Firm value V whose Merton survival matches the target."""
    if target.sigma is None:
        raise ValidationError("calibrate_firm_value requires sigma fixed in the target")
    lo, hi = config.bracket or (target.K * (1.0 + 1e-6), target.K * 1e3)
    return bisect(
        lambda v: merton_survival(v, target.sigma, target) - target.target_survival,
        lo,
        hi,
        config.abs_tol,
        config.max_iter,
    )


def calibrate_sigma(
    target: CalibrationTarget, config: RootFindConfig = RootFindConfig()
) -> float:
    """Asset volatility sigma whose Merton survival matches the target."""
    if target.V is None:
        raise ValidationError("calibrate_sigma requires V fixed in the target")
    if target.V == target.K:
        raise ValidationError(
            "V = K is degenerate for sigma calibration (survival direction ambiguous)"
        )
    lo, hi = config.bracket or (1e-4, 5.0)
    return bisect(
        lambda s: merton_survival(target.V, s, target) - target.target_survival,
        lo,
        hi,
        config.abs_tol,
        config.max_iter,
    )
