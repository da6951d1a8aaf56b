"""Structural default analytics under collateralization.

Survival probabilities spanning Merton, Black-Cox, partially
collateralized, discretely remargined, and composite barrier models, with
credit-quote calibration, a Monte Carlo oracle, and collateralization
scenario sweeps.
"""

from .calibrate import (
    CalibrationTarget,
    RootFindConfig,
    calibrate_firm_value,
    calibrate_sigma,
)
from .core import (
    BarrierSpec,
    CompositeBarrier,
    FirmParams,
    SurvivalResult,
    alpha,
    barrier_shift,
    beta_constant,
    binary_call,
    composite_survival,
    std_normal_cdf,
    survival_probability,
)
from .credit import (
    CreditQuote,
    RatingRow,
    hazard_from_spread,
    pd_from_spread,
    spread_from_pd,
    spread_from_survival,
    survival_from_spread,
    table1_reference,
)
from .errors import (
    CollatriskError,
    DefaultedFirmError,
    MaxIterationsError,
    NoBracketError,
    NumericalRangeError,
    ValidationError,
)
from .mc import McConfig, McEstimate, config_for_barrier, simulate_survival
from .sweep import SweepConfig, SweepResult, VolSchedule, load_config, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BarrierSpec",
    "CalibrationTarget",
    "CollatriskError",
    "CompositeBarrier",
    "CreditQuote",
    "DefaultedFirmError",
    "FirmParams",
    "MaxIterationsError",
    "McConfig",
    "McEstimate",
    "NoBracketError",
    "NumericalRangeError",
    "RatingRow",
    "RootFindConfig",
    "SurvivalResult",
    "SweepConfig",
    "SweepResult",
    "ValidationError",
    "VolSchedule",
    "alpha",
    "barrier_shift",
    "beta_constant",
    "binary_call",
    "calibrate_firm_value",
    "calibrate_sigma",
    "composite_survival",
    "config_for_barrier",
    "hazard_from_spread",
    "load_config",
    "pd_from_spread",
    "run_sweep",
    "simulate_survival",
    "spread_from_pd",
    "spread_from_survival",
    "std_normal_cdf",
    "survival_from_spread",
    "survival_probability",
    "table1_reference",
]
