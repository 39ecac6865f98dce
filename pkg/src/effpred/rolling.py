"""Per-index rolling pipeline and the cross-sectional correlation report."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy import stats

from .dfa import DfaConfig, hurst_exponent
from .nn import EmbeddingConfig, predict_window
from .series import ReturnSeries, WindowSchedule

REGIONS = ("Africa", "Americas", "Asia-Pacific", "Europe", "other")


class IndexAnalysisError(RuntimeError):
    """Every window of an index failed; carries per-window diagnostics."""

    def __init__(self, index_id: str, windows):
        self.index_id = index_id
        self.windows = tuple(windows)
        detail = "; ".join(
            f"w{w.window_index}: {w.error}" for w in self.windows if w.error
        )
        super().__init__(f"{index_id}: all windows failed ({detail})")


@dataclass(frozen=True)
class WindowResult:
    window_index: int
    hurst: Optional[float]
    hit: Optional[float]
    r_squared: Optional[float] = None
    trading_days: int = 0
    scored_days: int = 0
    confirm_fallbacks: int = 0
    dropped_scales: int = 0
    error: Optional[str] = None


@dataclass(frozen=True)
class IndexSummary:
    index_id: str
    mean_hurst: Optional[float]
    mean_hit: Optional[float]
    window_count: int
    region_tag: Optional[str] = None
    windows: tuple = ()


def run_index(
    returns: ReturnSeries,
    schedule: WindowSchedule,
    embedding: EmbeddingConfig = EmbeddingConfig(),
    dfa_config: DfaConfig = DfaConfig(),
    region_tag: Optional[str] = None,
) -> IndexSummary:
    """Hurst exponent and hit rate per rolling window, averaged per index."""
    x = returns.returns
    results = []
    for i, w in enumerate(schedule.windows):
        est = x[w.est_start : w.est_end + 1]
        pred = x[w.pred_start : w.pred_end + 1]
        errors = []
        hurst = r2 = None
        dropped = 0
        try:
            fit = hurst_exponent(est, dfa_config)
            hurst, r2, dropped = fit.hurst, fit.r_squared, fit.dropped_points
        except ValueError as e:
            errors.append(f"dfa: {e}")
        hit = None
        trading = scored = fallbacks = 0
        try:
            out = predict_window(est, pred, embedding)
            rec = out.record
            hit = rec.hit_rate
            trading, scored = rec.trading_days, rec.scored_days
            fallbacks = out.confirm_fallbacks
        except ValueError as e:
            errors.append(f"nn: {e}")
        results.append(
            WindowResult(
                i, hurst, hit, r2, trading, scored, fallbacks, dropped,
                "; ".join(errors) or None,
            )
        )
    h_vals = [r.hurst for r in results if r.hurst is not None]
    hit_vals = [r.hit for r in results if r.hit is not None]
    if not h_vals and not hit_vals:
        raise IndexAnalysisError(returns.index_id, results)
    contributing = sum(
        1 for r in results if r.hurst is not None or r.hit is not None
    )
    return IndexSummary(
        returns.index_id,
        float(np.mean(h_vals)) if h_vals else None,
        float(np.mean(hit_vals)) if hit_vals else None,
        contributing,
        region_tag,
        tuple(results),
    )


def quadrant_label(hurst: float, hit: float, hurst_median: float, hit_median: float) -> str:
    """Median split per axis; exact-median values fall to the low side."""
    h_side = "high" if hurst > hurst_median else "low"
    q_side = "high" if hit > hit_median else "low"
    return f"{h_side}-H/{q_side}-hit"


@dataclass(frozen=True)
class CrossSectionReport:
    pearson: Optional[float]
    spearman: Optional[float]
    n_indexes: int
    hurst_median: float
    hit_median: float
    quadrant_labels: Dict[str, str] = field(default_factory=dict)


def cross_section(summaries: Sequence[IndexSummary]) -> CrossSectionReport:
    """Pearson correlation of per-index (mean Hurst, mean hit rate) pairs.

    Zero variance on either axis yields a missing correlation; medians and
    quadrant labels are still produced.
    """
    usable = [
        s for s in summaries if s.mean_hurst is not None and s.mean_hit is not None
    ]
    if len(usable) < 3:
        raise ValueError(
            f"need at least 3 indexes with both measures, have {len(usable)}"
        )
    h = np.array([s.mean_hurst for s in usable])
    q = np.array([s.mean_hit for s in usable])
    h_med = float(np.median(h))
    q_med = float(np.median(q))
    labels = {
        s.index_id: quadrant_label(s.mean_hurst, s.mean_hit, h_med, q_med)
        for s in usable
    }
    if h.std() == 0.0 or q.std() == 0.0:
        pearson = spearman = None
    else:
        pearson = float(np.corrcoef(h, q)[0, 1])
        spearman = float(stats.spearmanr(h, q).statistic)
    return CrossSectionReport(pearson, spearman, len(usable), h_med, q_med, labels)


def classify_quadrants(report: CrossSectionReport) -> Dict[str, str]:
    """Per-index corner labels; high-H/high-hit marks the emerging-market corner."""
    return dict(report.quadrant_labels)
