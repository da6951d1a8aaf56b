"""Figure rendering for sweep reports.

Each sweep becomes one two-panel figure: survival probability on the left
and the change in equivalent CDS spread on the right, both against the
collateral fraction, one line per starting spread. Files are written
next to the delimited output; the CSV remains the machine contract.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import SweepResult


def sweep_figure_name(result: SweepResult, index: int) -> str:
    cfg = result.config
    return f"sweep_{index:02d}_{cfg.vol.label()}_from_{cfg.coll_start:g}.png"


def render_sweep(result: SweepResult, path: Path) -> None:
    """Write one sweep's survival / spread-change figure to ``path``."""
    fig, (ax_surv, ax_delta) = plt.subplots(1, 2, figsize=(10, 4))
    by_spread: dict[float, list] = {}
    for row in result.rows:
        by_spread.setdefault(row.starting_spread_bps, []).append(row)
    for spread, rows in by_spread.items():
        c = [r.collateral_fraction for r in rows]
        ax_surv.plot(c, [r.survival for r in rows], label=f"{spread:g} bps")
        ax_delta.plot(c, [r.delta_spread_bps for r in rows], label=f"{spread:g} bps")
    ax_surv.set_xlabel("collateral fraction")
    ax_surv.set_ylabel("5Y survival probability")
    ax_delta.set_xlabel("collateral fraction")
    ax_delta.set_ylabel("CDS spread change (bps)")
    ax_surv.legend(title="starting spread", fontsize=8)
    vol = result.config.vol
    title = (
        f"sigma = {vol.sigma_fixed:g}"
        if vol.kind == "fixed"
        else f"sigma sliding {vol.sigma_start:g} -> {vol.sigma_end:g}"
    )
    fig.suptitle(f"Collateralization sweep ({title})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_all(results: list[SweepResult], directory: Path) -> list[Path]:
    """Render every sweep figure into ``directory``; returns written paths."""
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, result in enumerate(results):
        path = directory / sweep_figure_name(result, i)
        render_sweep(result, path)
        paths.append(path)
    return paths
