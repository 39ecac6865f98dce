"""Scatter-figure rendering for the cross-sectional report."""
from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# marker/color per region, mirroring the usual efficiency-scatter convention
REGION_STYLE = {
    "Africa": ("o", "black"),
    "Americas": ("^", "tab:blue"),
    "Asia-Pacific": ("s", "tab:red"),
    "Europe": ("D", "tab:green"),
    "other": ("x", "0.45"),
}


def render_scatter(
    rows: Sequence[tuple],
    path,
    hurst_median: Optional[float] = None,
    hit_median: Optional[float] = None,
    pearson: Optional[float] = None,
) -> None:
    """Render (index_id, mean_hurst, mean_hit, region) rows to a PNG file."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    by_region: dict = {}
    for _, h, q, region in rows:
        key = region if region in REGION_STYLE else "other"
        by_region.setdefault(key, ([], []))
        by_region[key][0].append(h)
        by_region[key][1].append(q)
    for region in REGION_STYLE:
        if region not in by_region:
            continue
        marker, color = REGION_STYLE[region]
        hs, qs = by_region[region]
        ax.scatter(hs, qs, marker=marker, c=color, label=region, s=36)
    if hurst_median is not None:
        ax.axvline(hurst_median, color="0.7", linestyle="--", linewidth=1)
    if hit_median is not None:
        ax.axhline(hit_median, color="0.7", linestyle="--", linewidth=1)
    ax.set_xlabel("average Hurst exponent")
    ax.set_ylabel("average hit rate")
    title = "efficiency vs. predictability"
    if pearson is not None:
        title += f"  (Pearson = {pearson:.3f})"
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
