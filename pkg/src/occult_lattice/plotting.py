"""Figures for the verification report (matplotlib, file output only)."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .suite import STATUSES, VerificationReport  # noqa: E402

_COLORS = {"pass": "#4c9a5b", "fail": "#c0392b", "discrepancy-flag": "#e0a030", "skipped": "#999999"}


def _group(check_id: str) -> str:
    return check_id.split(".", 1)[0]


def status_figure(report: VerificationReport, path: Path) -> Path:
    """Stacked bar of row statuses per check group."""
    groups = list(dict.fromkeys(_group(c.id) for c in report.checks))
    counts = {g: Counter(c.status for c in report.checks if _group(c.id) == g) for g in groups}
    fig, ax = plt.subplots(figsize=(7, 3.5))
    bottom = [0] * len(groups)
    for s in STATUSES:
        vals = [counts[g][s] for g in groups]
        if any(vals):
            ax.bar(groups, vals, bottom=bottom, color=_COLORS[s], label=s)
            bottom = [b + v for b, v in zip(bottom, vals)]
    ax.set_ylabel("rows")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("verify-paper rows by group")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def ball_dimension_figure(report: VerificationReport, path: Path) -> Path:
    """Computed against claimed period-domain dimensions."""
    rows = [c for c in report.checks if c.id.startswith("balldim.")]
    names = [c.id.removeprefix("balldim.") for c in rows]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    xs = range(len(rows))
    comp = [_as_int(c.computed) for c in rows]
    claim = [_as_int(c.claimed) for c in rows]
    ax.bar([x - 0.2 for x in xs], comp, width=0.4, label="computed", color="#4a6fa5")
    ax.bar([x + 0.2 for x in xs], claim, width=0.4, label="claimed", color="#bbbbbb")
    for x, c in zip(xs, rows):
        if c.status != "pass":
            ax.annotate(c.status, (x, max(_as_int(c.computed), _as_int(c.claimed)) + 0.3), ha="center", fontsize=7)
    ax.set_xticks(list(xs), names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("dimension")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _as_int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        return 0


def render_figures(report: VerificationReport, directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = [status_figure(report, out / "status.png")]
    if any(c.id.startswith("balldim.") for c in report.checks):
        paths.append(ball_dimension_figure(report, out / "ball_dimensions.png"))
    return paths
