"""Collateralization scenario sweeps.

Each sweep takes a set of starting CDS spreads, calibrates the firm value
so the model at the sweep's initial collateral fraction reproduces each
spread, then walks the collateral fraction up its grid, re-evaluating
survival and the equivalent CDS spread at every step. The volatility can
stay fixed across the grid or slide linearly upward, mimicking CSA
downgrade triggers that demand more collateral exactly when the firm gets
riskier.

Collateral fraction c maps to a barrier at c * K monitored every
``remargin_dt`` years; c = 0 is the uncollateralized Merton case and
c = 1 a fully collateralized (Black-Cox-like) barrier at the liabilities.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .calibrate import bisect
from .core import BarrierSpec, FirmParams, survival_probability
from .credit import recovery_for_spread, spread_from_survival
from .errors import ValidationError

DEFAULT_REMARGIN_DT = 1.0 / 252.0  # business-day remargining


@dataclass(frozen=True)
class VolSchedule:
    """Fixed volatility, or a linear slide across the collateral grid."""

    kind: str
    sigma_fixed: float | None = None
    sigma_start: float | None = None
    sigma_end: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "fixed":
            if self.sigma_fixed is None or self.sigma_fixed <= 0:
                raise ValidationError("fixed schedule requires sigma > 0")
        elif self.kind == "sliding":
            if self.sigma_start is None or self.sigma_end is None:
                raise ValidationError("sliding schedule requires sigma_start and sigma_end")
            if self.sigma_start <= 0 or self.sigma_end <= 0:
                raise ValidationError("volatilities must be positive")
            if self.sigma_start > self.sigma_end:
                raise ValidationError("sliding schedule requires sigma_start <= sigma_end")
        else:
            raise ValidationError(f"unknown vol schedule kind: {self.kind!r}")

    def sigma_at(self, c: float, coll_start: float) -> float:
        if self.kind == "fixed":
            return self.sigma_fixed
        if coll_start >= 1.0:
            raise ValidationError("sliding schedule needs coll_start < 1")
        frac = (c - coll_start) / (1.0 - coll_start)
        return self.sigma_start + (self.sigma_end - self.sigma_start) * frac

    def label(self) -> str:
        if self.kind == "fixed":
            return f"fixed-{self.sigma_fixed:g}"
        return f"sliding-{self.sigma_start:g}-{self.sigma_end:g}"


@dataclass(frozen=True)
class SweepConfig:
    starting_spreads_bps: tuple[float, ...]
    vol: VolSchedule
    recovery: float | None = None  # None: per-spread rating-table mapping
    tenor_years: float = 5.0
    r: float = 0.02
    D: float = 0.0
    coll_start: float = 0.0
    coll_end: float = 1.0
    n_steps: int = 21
    remargin_dt: float = DEFAULT_REMARGIN_DT

    def __post_init__(self) -> None:
        if not self.starting_spreads_bps:
            raise ValidationError("starting_spreads_bps must be nonempty")
        if any(s <= 0 for s in self.starting_spreads_bps):
            raise ValidationError("starting spreads must be positive")
        if not (0.0 <= self.coll_start <= self.coll_end <= 1.0):
            raise ValidationError(
                f"need 0 <= coll_start <= coll_end <= 1, got "
                f"[{self.coll_start}, {self.coll_end}]"
            )
        if self.n_steps < 2:
            raise ValidationError(f"n_steps must be >= 2, got {self.n_steps}")
        if self.recovery is not None and not (0.0 <= self.recovery < 1.0):
            raise ValidationError(f"recovery must be in [0, 1), got {self.recovery}")
        if self.tenor_years <= 0:
            raise ValidationError("tenor_years must be positive")
        if self.remargin_dt < 0:
            raise ValidationError("remargin_dt must be nonnegative")


@dataclass(frozen=True)
class SweepRow:
    starting_spread_bps: float
    collateral_fraction: float
    sigma: float
    survival: float
    equiv_spread_bps: float
    delta_spread_bps: float


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)


CSV_HEADER = (
    "starting_spread_bps,collateral_fraction,sigma,survival,"
    "equiv_spread_bps,delta_spread_bps"
)

# liabilities are the numeraire: only V/K matters, so K = 1 throughout
_K = 1.0


def _barrier_for(c: float, remargin_dt: float) -> BarrierSpec:
    if c == 0.0:
        return BarrierSpec(0.0, 0.0)
    return BarrierSpec(c * _K, remargin_dt)


def _calibrate_start(
    config: SweepConfig, target_survival: float, sigma0: float
) -> float:
    """Firm value anchoring the model at the sweep's first grid point."""
    barrier = _barrier_for(config.coll_start, config.remargin_dt)

    def mismatch(v: float) -> float:
        params = FirmParams(
            V=v, K=_K, T=config.tenor_years, r=config.r, D=config.D, sigma=sigma0
        )
        return survival_probability(params, barrier).probability - target_survival

    return bisect(mismatch, _K * (1.0 + 1e-6), _K * 1e3, abs_tol=1e-12, max_iter=300)


def run_sweep(config: SweepConfig) -> SweepResult:
    grid = np.linspace(config.coll_start, config.coll_end, config.n_steps)
    rows: list[SweepRow] = []
    for spread in config.starting_spreads_bps:
        recovery = (
            config.recovery if config.recovery is not None else recovery_for_spread(spread)
        )
        hazard = spread * 1e-4 / (1.0 - recovery)
        target_survival = math.exp(-hazard * config.tenor_years)
        sigma0 = config.vol.sigma_at(config.coll_start, config.coll_start)
        try:
            v0 = _calibrate_start(config, target_survival, sigma0)
        except Exception as exc:
            raise type(exc)(
                f"calibration failed for starting spread {spread} bps: {exc}"
            ) from exc

        base_spread: float | None = None
        for c in grid:
            sigma = config.vol.sigma_at(float(c), config.coll_start)
            params = FirmParams(
                V=v0, K=_K, T=config.tenor_years, r=config.r, D=config.D, sigma=sigma
            )
            p = survival_probability(params, _barrier_for(float(c), config.remargin_dt))
            equiv = spread_from_survival(p.probability, recovery, config.tenor_years)
            if base_spread is None:
                base_spread = equiv
            rows.append(
                SweepRow(
                    starting_spread_bps=spread,
                    collateral_fraction=float(c),
                    sigma=sigma,
                    survival=p.probability,
                    equiv_spread_bps=equiv,
                    delta_spread_bps=equiv - base_spread,
                )
            )
    return SweepResult(config=config, rows=tuple(rows))


def rows_to_csv(rows) -> str:
    """CSV per the external contract: fixed header, LF, 17 significant digits."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                f"{x:.17g}"
                for x in (
                    row.starting_spread_bps,
                    row.collateral_fraction,
                    row.sigma,
                    row.survival,
                    row.equiv_spread_bps,
                    row.delta_spread_bps,
                )
            )
        )
    return "\n".join(lines) + "\n"


_TOP_LEVEL_KEYS = {
    "starting_spreads_bps",
    "recovery",
    "tenor_years",
    "r",
    "D",
    "coll_start",
    "coll_end",
    "n_steps",
    "vol",
    "remargin_dt",
}
_VOL_KEYS = {"kind", "sigma", "sigma_start", "sigma_end"}


def _parse_vol(obj) -> VolSchedule:
    if not isinstance(obj, dict):
        raise ValidationError("vol entries must be objects")
    unknown = set(obj) - _VOL_KEYS
    if unknown:
        raise ValidationError(f"unknown vol keys: {sorted(unknown)}")
    kind = obj.get("kind")
    if kind == "fixed":
        return VolSchedule(kind="fixed", sigma_fixed=obj.get("sigma"))
    if kind == "sliding":
        return VolSchedule(
            kind="sliding",
            sigma_start=obj.get("sigma_start"),
            sigma_end=obj.get("sigma_end"),
        )
    raise ValidationError(f"vol.kind must be 'fixed' or 'sliding', got {kind!r}")


def load_config(text: str) -> list[SweepConfig]:
    """Parse a JSON sweep document into one SweepConfig per scenario row.

    ``vol`` may be a single schedule or a list (one sweep per entry), and
    ``coll_start`` a number or a list of starting collateral fractions;
    lists expand to the cartesian product in document order. Unknown keys
    are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    if "starting_spreads_bps" not in doc:
        raise ValidationError("missing required key: starting_spreads_bps")
    if "vol" not in doc:
        raise ValidationError("missing required key: vol")

    vol_entries = doc["vol"] if isinstance(doc["vol"], list) else [doc["vol"]]
    if not vol_entries:
        raise ValidationError("vol list must be nonempty")
    raw_start = doc.get("coll_start", 0.0)
    coll_starts = raw_start if isinstance(raw_start, list) else [raw_start]
    if not coll_starts:
        raise ValidationError("coll_start list must be nonempty")

    base = dict(
        starting_spreads_bps=tuple(float(s) for s in doc["starting_spreads_bps"]),
        recovery=doc.get("recovery"),
        tenor_years=float(doc.get("tenor_years", 5.0)),
        r=float(doc.get("r", 0.02)),
        D=float(doc.get("D", 0.0)),
        coll_end=float(doc.get("coll_end", 1.0)),
        n_steps=int(doc.get("n_steps", 21)),
        remargin_dt=float(doc.get("remargin_dt", DEFAULT_REMARGIN_DT)),
    )
    configs = []
    for vol_obj in vol_entries:
        vol = _parse_vol(vol_obj)
        for cs in coll_starts:
            configs.append(SweepConfig(vol=vol, coll_start=float(cs), **base))
    return configs


def fixture_text(name: str) -> str:
    """Text of a shipped sweep fixture ('nonbank.json' or 'bank.json')."""
    return resources.files("collatrisk").joinpath("data").joinpath(name).read_text()
