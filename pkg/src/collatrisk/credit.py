"""Spread / default-probability conversions under a flat hazard rate.

The credit triangle ``spread = (1 - recovery) * hazard`` links a running
CDS spread to a flat default intensity; cumulative default probability
over a tenor is then ``1 - exp(-hazard * tenor)``. Spreads are basis
points at the API boundary and decimals internally.

Also hosts the generic 5Y rating reference table (CDS quotes, recovery
rates, and long-term cumulative default probabilities re-expressed as
spreads) used by the shipped sweep fixtures.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import ValidationError

BPS = 1e-4


@dataclass(frozen=True)
class CreditQuote:
    """A CDS spread quote with its recovery assumption and tenor."""

    spread_bps: float
    recovery: float
    tenor_years: float

    def __post_init__(self) -> None:
        if not (self.spread_bps >= 0):
            raise ValidationError(f"spread must be nonnegative, got {self.spread_bps}")
        if not (0 <= self.recovery < 1):
            raise ValidationError(f"recovery must be in [0, 1), got {self.recovery}")
        if not (self.tenor_years > 0):
            raise ValidationError(f"tenor must be positive, got {self.tenor_years}")


@dataclass(frozen=True)
class RatingRow:
    rating: str
    cds_spread_bps: float
    recovery_pct: float
    sp_5y_pd_bps: float
    sp_as_cds_bps: float


_TABLE1 = (
    RatingRow("A", 90.0, 38.0, 66.0, 8.0),
    RatingRow("BBB", 130.0, 38.0, 230.0, 29.0),
    RatingRow("BB", 290.0, 37.0, 861.0, 113.0),
    RatingRow("B", 510.0, 36.0, 2083.0, 299.0),
)


def hazard_from_spread(quote: CreditQuote) -> float:
    """Flat hazard rate implied by a spread: spread / (1 - recovery)."""
    return quote.spread_bps * BPS / (1.0 - quote.recovery)


def pd_from_spread(quote: CreditQuote) -> float:
    """Cumulative default probability over the quote tenor."""
    return 1.0 - math.exp(-hazard_from_spread(quote) * quote.tenor_years)


def survival_from_spread(quote: CreditQuote) -> float:
    """Survival probability over the quote tenor, 1 - pd_from_spread."""
    return math.exp(-hazard_from_spread(quote) * quote.tenor_years)


def spread_from_pd(pd: float, recovery: float, tenor: float) -> float:
    """Spread (bps) whose flat hazard reproduces a cumulative PD."""
    if not (0 <= pd < 1):
        raise ValidationError(f"pd must be in [0, 1), got {pd}")
    if not (0 <= recovery < 1):
        raise ValidationError(f"recovery must be in [0, 1), got {recovery}")
    if not (tenor > 0):
        raise ValidationError(f"tenor must be positive, got {tenor}")
    return (1.0 - recovery) * (-math.log1p(-pd) / tenor) / BPS


def spread_from_survival(p_surv: float, recovery: float, tenor: float) -> float:
    """Spread (bps) whose flat hazard reproduces a survival probability."""
    if not (0 < p_surv <= 1):
        raise ValidationError(f"survival probability must be in (0, 1], got {p_surv}")
    if not (0 <= recovery < 1):
        raise ValidationError(f"recovery must be in [0, 1), got {recovery}")
    if not (tenor > 0):
        raise ValidationError(f"tenor must be positive, got {tenor}")
    return (1.0 - recovery) * (-math.log(p_surv) / tenor) / BPS


def table1_reference() -> list[RatingRow]:
    """The embedded generic 5Y rating reference rows, in rating order."""
    return list(_TABLE1)


def recovery_for_spread(spread_bps: float) -> float:
    """Recovery rate mapped from the reference table, else 38%.

    Matches a starting spread against both the market-CDS column and the
    historical-PD-as-CDS column of the reference table.
    """
    for row in _TABLE1:
        if spread_bps in (row.cds_spread_bps, row.sp_as_cds_bps):
            return row.recovery_pct / 100.0
    return 0.38


def table1_csv() -> str:
    """Reference table as CSV text (golden-file fixture format)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["rating", "cds_spread_bps", "recovery_pct", "sp_5y_pd_bps", "sp_as_cds_bps"]
    )
    for row in _TABLE1:
        writer.writerow(
            [
                row.rating,
                f"{row.cds_spread_bps:g}",
                f"{row.recovery_pct:g}",
                f"{row.sp_5y_pd_bps:g}",
                f"{row.sp_as_cds_bps:g}",
            ]
        )
    return buf.getvalue()
