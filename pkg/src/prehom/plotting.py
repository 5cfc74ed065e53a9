"""Summary figures written next to the text reports.

Only a non-interactive backend is used; every function takes an output path
and returns it.  Plotted values are converted to float here and nowhere else.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLORS = {"match": "#1f77b4", "mismatch": "#d62728", "anomaly": "#ff7f0e"}
_META = {"Software": None}  # keep PNG bytes independent of the library version


def _numeric(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def report_figure(report, path: str | Path) -> Path:
    """Computed against predicted for every numeric record of a suite."""
    path = Path(path)
    groups: dict[str, list[tuple[float, float]]] = {k: [] for k in COLORS}
    tallies = Counter()
    for r in report.records:
        kind = "anomaly" if r.anomaly else ("match" if r.match else "mismatch")
        tallies[kind] += 1
        if _numeric(r.computed) and _numeric(r.predicted):
            groups[kind].append((float(r.predicted), float(r.computed)))
    fig, ax = plt.subplots(figsize=(5, 4.5))
    points = [p for pts in groups.values() for p in pts]
    if points:
        for kind, pts in groups.items():
            if pts:
                xs, ys = zip(*pts)
                ax.scatter(xs, ys, s=18, alpha=0.7, color=COLORS[kind],
                           label=f"{kind} ({tallies[kind]})")
        lo = min(min(p) for p in points)
        hi = max(max(p) for p in points)
        ax.plot([lo, hi], [lo, hi], color="grey", lw=0.8, ls="--")
        if hi > 50 * max(lo, 1):
            ax.set_xscale("symlog")
            ax.set_yscale("symlog")
        ax.set_xlabel("predicted")
        ax.set_ylabel("computed")
        ax.legend(frameon=False, fontsize=8)
    else:
        kinds = [k for k in COLORS if tallies[k]]
        ax.bar(kinds, [tallies[k] for k in kinds], color=[COLORS[k] for k in kinds])
        ax.set_ylabel("records")
    ax.set_title(f"{report.suite}: {report.title}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_META)
    plt.close(fig)
    return path


def census_figure(census, path: str | Path, predicted: Fraction | None = None) -> Path:
    """Number of orbits of each size, with the predicted maximum marked."""
    path = Path(path)
    counts = Counter(int(s) for s in census.sizes)
    sizes = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(range(len(sizes)), [counts[s] for s in sizes], color=COLORS["match"])
    ax.set_xticks(range(len(sizes)))
    ax.set_xticklabels([str(s) for s in sizes], rotation=60, fontsize=7)
    ax.set_xlabel("orbit size")
    ax.set_ylabel("orbits")
    title = f"d = {census.d}, q = {census.q}: {census.n_orbits} orbits"
    if predicted is not None:
        title += f", predicted max {predicted}"
        if predicted.denominator == 1 and int(predicted) in counts:
            k = sizes.index(int(predicted))
            ax.bar([k], [counts[int(predicted)]], color=COLORS["anomaly"])
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_META)
    plt.close(fig)
    return path
