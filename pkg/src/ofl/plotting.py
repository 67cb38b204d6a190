"""Figures for fuzz reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLORS = {"SAT": "#4c72b0", "UNSAT": "#dd8452", "UNKNOWN": "#8c8c8c"}


def _style(ax):
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    ax.tick_params(direction="out", length=3)


def plot_verdicts(report, ax=None):
    ax = ax or plt.gca()
    suites = list(report.counts)
    bottom = [0] * len(suites)
    for status, color in COLORS.items():
        h = [report.verdicts[s].get(status, 0) for s in suites]
        if any(h):
            ax.bar(suites, h, bottom=bottom, color=color, label=status, width=0.6)
            bottom = [b + x for b, x in zip(bottom, h)]
    bad = {}
    for d in report.disagreements:
        bad[d.suite] = bad.get(d.suite, 0) + 1
    for i, s in enumerate(suites):
        ax.text(i, bottom[i], f"{bad.get(s, 0)} disagreements", ha="center", va="bottom", fontsize=8)
    ax.set_ylabel("instances")
    ax.set_ylim(0, max(bottom, default=1) * 1.12)
    ax.legend(frameon=False, fontsize=8, loc="upper left", bbox_to_anchor=(1.0, 1.0))
    _style(ax)
    return ax


def plot_sizes(report, ax=None):
    """Size of each solver model against the size bound of its instance."""
    ax = ax or plt.gca()
    for suite, marker in zip(report.counts, "os^"):
        pts = [(r["bound"], r["size"]) for r in report.records if r["suite"] == suite and r["size"]]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=14, marker=marker, alpha=0.6, label=suite)
    top = max((r["bound"] for r in report.records), default=2)
    ax.plot([0, top], [0, top], "k--", lw=0.8, label="bound")
    ax.set_xlabel("size bound")
    ax.set_ylabel("model size")
    ax.legend(frameon=False, fontsize=8)
    _style(ax)
    return ax


def plot_times(report, ax=None):
    ax = ax or plt.gca()
    for suite, marker in zip(report.counts, "os^"):
        rs = [r for r in report.records if r["suite"] == suite]
        if rs:
            ax.scatter([r["oracle_time"] for r in rs], [r["solver_time"] for r in rs],
                       s=12, marker=marker, alpha=0.6, label=suite)
    lo = min((min(r["oracle_time"], r["solver_time"]) for r in report.records), default=1e-4)
    hi = max((max(r["oracle_time"], r["solver_time"]) for r in report.records), default=1.0)
    ax.plot([lo, hi], [lo, hi], "k--", lw=0.8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("oracle time [s]")
    ax.set_ylabel("solver time [s]")
    ax.legend(frameon=False, fontsize=8)
    _style(ax)
    return ax


def save_report_figures(report, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, fn in (("verdicts", plot_verdicts), ("sizes", plot_sizes), ("times", plot_times)):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        fn(report, ax)
        ax.set_title(f"{name} (seed {report.seed})", fontsize=9)
        fig.tight_layout()
        p = out / f"{name}.png"
        fig.savefig(p, dpi=120)
        plt.close(fig)
        paths.append(p)
    return paths
