"""Delay-embedding nearest-neighbor direction forecasting and hit-rate scoring."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

UP = "up"
DOWN = "down"


class NeighborSearchError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingConfig:
    """Pattern-matching parameters; neighbor_count None means floor(sqrt(#patterns))."""

    embedding_dim: int = 4
    time_delay: int = 1
    neighbor_count: Optional[int] = None
    keep_fraction: float = 0.5

    def __post_init__(self):
        if self.embedding_dim < 1:
            raise ValueError(f"embedding_dim must be >= 1, got {self.embedding_dim}")
        if self.time_delay < 1:
            raise ValueError(f"time_delay must be >= 1, got {self.time_delay}")
        if self.neighbor_count is not None and self.neighbor_count < 1:
            raise ValueError(f"neighbor_count must be >= 1, got {self.neighbor_count}")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ValueError(f"keep_fraction must be in (0, 1], got {self.keep_fraction}")


@dataclass(frozen=True)
class PatternMatrix:
    """Backward-looking delay vectors [x_n, x_{n-tau}, ..., x_{n-(m-1)tau}].

    Anchor indices are 0-based positions of x_n in the source series.
    """

    patterns: np.ndarray
    anchor_indices: np.ndarray
    time_delay: int

    @property
    def embedding_dim(self) -> int:
        return self.patterns.shape[1]

    def __len__(self) -> int:
        return len(self.anchor_indices)


def embed(series: Sequence[float], m: int, tau: int) -> PatternMatrix:
    x = np.asarray(series, dtype=float)
    t = x.size
    span = (m - 1) * tau
    if t < span + 2:
        raise ValueError(
            f"need at least {span + 2} observations for one pattern plus "
            f"successor (m={m}, tau={tau}), got {t}"
        )
    cols = [x[span - j * tau : t - j * tau] for j in range(m)]
    return PatternMatrix(np.column_stack(cols), np.arange(span, t), tau)


def squared_distance(a: Sequence[float], b: Sequence[float]) -> float:
    av = np.asarray(a, dtype=float).ravel()
    bv = np.asarray(b, dtype=float).ravel()
    if av.shape != bv.shape:
        raise ValueError(f"pattern length mismatch: {av.size} vs {bv.size}")
    d = av - bv
    return float(np.dot(d, d))


@dataclass(frozen=True)
class NeighborMatch:
    anchor_index: int
    distance: float
    successor_return: float


def select_neighbors(
    target: Sequence[float],
    matrix: PatternMatrix,
    series: Sequence[float],
    k: int,
    exclusion_window: int = 0,
    target_anchor: Optional[int] = None,
) -> list:
    """K smallest-distance matches, ascending, ties broken by smaller anchor.

    Candidates are dropped when their successor falls outside the series or
    when their anchor lies within ``exclusion_window`` of the target anchor.
    """
    x = np.asarray(series, dtype=float)
    anchors = matrix.anchor_indices
    admissible = anchors + 1 <= x.size - 1
    if target_anchor is not None:
        admissible &= np.abs(anchors - target_anchor) > exclusion_window
    idx = np.nonzero(admissible)[0]
    if idx.size < k:
        raise NeighborSearchError(
            f"need {k} admissible candidates, have {idx.size} "
            f"(of {len(anchors)} patterns)"
        )
    tv = np.asarray(target, dtype=float).ravel()
    diffs = matrix.patterns[idx] - tv
    d = np.einsum("ij,ij->i", diffs, diffs)
    order = np.lexsort((anchors[idx], d))
    out = []
    for pos in order[:k]:
        a = int(anchors[idx[pos]])
        out.append(NeighborMatch(a, float(d[pos]), float(x[a + 1])))
    return out


def confirm_neighbors(
    candidates: Sequence[NeighborMatch],
    series: Sequence[float],
    m: int,
    tau: int,
    target_anchor: int,
    keep_fraction: float,
):
    """Re-rank candidates at embedding dimension m+1, keeping the closest fraction.

    Returns ``(survivors, fell_back)``; survivors carry the m+1 distance.
    Candidates lacking history for the extra component are dropped; if none
    survive (or the target itself lacks history) the original candidates are
    returned unchanged with ``fell_back=True``.
    """
    if not candidates:
        raise ValueError("no candidates to confirm")
    if keep_fraction >= 1.0:
        return list(candidates), False
    x = np.asarray(series, dtype=float)
    extra_t = target_anchor - m * tau
    if extra_t < 0:
        return list(candidates), True
    feasible = [c for c in candidates if c.anchor_index - m * tau >= 0]
    if not feasible:
        return list(candidates), True
    k_star = max(1, math.ceil(keep_fraction * len(candidates)))
    rescored = [
        NeighborMatch(
            c.anchor_index,
            c.distance + float((x[c.anchor_index - m * tau] - x[extra_t]) ** 2),
            c.successor_return,
        )
        for c in feasible
    ]
    rescored.sort(key=lambda c: (c.distance, c.anchor_index))
    return rescored[: min(k_star, len(rescored))], False


@dataclass(frozen=True)
class DirectionForecast:
    direction: str
    up_votes: int
    down_votes: int
    confirmed_count: int
    mean_successor: float


def forecast_direction(confirmed: Sequence[NeighborMatch]) -> DirectionForecast:
    """Majority vote over neighbor successors; zero successors vote down.

    Ties resolve to the sign of the mean successor return; an exactly zero
    mean resolves up.
    """
    if not confirmed:
        raise ValueError("no confirmed neighbors to vote")
    succ = np.array([c.successor_return for c in confirmed])
    up = int((succ > 0).sum())
    down = succ.size - up
    mean = float(succ.mean())
    if up > down:
        direction = UP
    elif down > up:
        direction = DOWN
    else:
        direction = DOWN if mean < 0 else UP
    return DirectionForecast(direction, up, down, int(succ.size), mean)


@dataclass(frozen=True)
class HitRateRecord:
    trading_days: int
    scored_days: int
    hits: int
    hit_rate: Optional[float]


def hit_rate(
    forecasts: Sequence[DirectionForecast], actual_returns: Sequence[float]
) -> HitRateRecord:
    """Fraction of nonzero-return days whose forecast matches the actual sign."""
    actual = np.asarray(actual_returns, dtype=float)
    if len(forecasts) != actual.size:
        raise ValueError(
            f"length mismatch: {len(forecasts)} forecasts vs {actual.size} returns"
        )
    scored = hits = 0
    for f, r in zip(forecasts, actual):
        if r == 0.0:
            continue
        scored += 1
        if (r > 0) == (f.direction == UP):
            hits += 1
    rate = hits / scored if scored else None
    return HitRateRecord(int(actual.size), scored, hits, rate)


@dataclass(frozen=True)
class WindowForecastResult:
    record: HitRateRecord
    forecasts: tuple
    confirm_fallbacks: int


def default_neighbor_count(n_patterns: int) -> int:
    return max(1, math.isqrt(n_patterns))


def predict_window(
    estimation: Sequence[float],
    prediction: Sequence[float],
    config: EmbeddingConfig = EmbeddingConfig(),
) -> WindowForecastResult:
    """One-day-ahead direction forecasts over a prediction range.

    The history window keeps a fixed length: after each prediction day the
    oldest observation is dropped and the realized return appended. The
    target is the pattern anchored at the newest observation; candidates
    within the Theiler exclusion window (m-1)*tau + 1 of the target, or
    lacking a successor, are inadmissible.
    """
    est = np.asarray(estimation, dtype=float)
    pred = np.asarray(prediction, dtype=float)
    if pred.size == 0:
        raise ValueError("empty prediction range")
    m = config.embedding_dim
    tau = config.time_delay
    frac = config.keep_fraction
    span = (m - 1) * tau
    t = est.size
    if t < span + 2:
        raise ValueError(
            f"estimation range too short for embedding: need {span + 2}, have {t}"
        )
    exclusion = span + 1
    hist = est.copy()
    n_pat = t - span
    k = config.neighbor_count or default_neighbor_count(n_pat)
    n_adm = (t - 1 - exclusion) - span
    if n_adm < k:
        raise NeighborSearchError(
            f"need {k} admissible candidates, have {max(n_adm, 0)}"
        )
    fallbacks = 0
    forecasts = []
    for step in range(pred.size):
        cols = [hist[span - j * tau : t - j * tau] for j in range(m)]
        pat = np.column_stack(cols)
        target = pat[-1]
        target_anchor = t - 1
        adm = pat[:n_adm]  # anchors span .. t-2-exclusion
        diff = adm - target
        d = np.einsum("ij,ij->i", diff, diff)
        if k < n_adm:
            part = np.argpartition(d, k - 1)[:k]
        else:
            part = np.arange(n_adm)
        order = np.lexsort((part, d[part]))  # anchor = span + part, so part orders ties
        sel = part[order[:k]]
        anchors_sel = span + sel
        d_sel = d[sel]
        extra_t = target_anchor - m * tau
        if frac >= 1.0:
            conf_anchors = anchors_sel
        elif extra_t < 0:
            conf_anchors = anchors_sel
            fallbacks += 1
        else:
            feas = anchors_sel - m * tau >= 0
            if not feas.any():
                conf_anchors = anchors_sel
                fallbacks += 1
            else:
                a_f = anchors_sel[feas]
                d2 = d_sel[feas] + (hist[a_f - m * tau] - hist[extra_t]) ** 2
                k_star = min(max(1, math.ceil(frac * k)), a_f.size)
                order2 = np.lexsort((a_f, d2))
                conf_anchors = a_f[order2[:k_star]]
        succ = hist[conf_anchors + 1]
        up = int((succ > 0).sum())
        down = int(succ.size - up)
        mean = float(succ.mean())
        if up > down:
            direction = UP
        elif down > up:
            direction = DOWN
        else:
            direction = DOWN if mean < 0 else UP
        forecasts.append(
            DirectionForecast(direction, up, down, int(succ.size), mean)
        )
        hist[:-1] = hist[1:]
        hist[-1] = pred[step]
    record = hit_rate(forecasts, pred)
    return WindowForecastResult(record, tuple(forecasts), fallbacks)
