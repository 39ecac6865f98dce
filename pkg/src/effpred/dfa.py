"""Detrended fluctuation analysis and the Hurst exponent fit."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MIN_PROFILE_LENGTH = 8
MIN_SCALE = 4


class ScaleRangeError(ValueError):
    pass


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class DfaProfile:
    """Cumulative sum of the mean-subtracted series."""

    values: np.ndarray
    source_mean: float

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def length(self) -> int:
        return len(self.values)


def profile(series: Sequence[float]) -> DfaProfile:
    x = np.asarray(series, dtype=float)
    if x.size < MIN_PROFILE_LENGTH:
        raise ValueError(
            f"need at least {MIN_PROFILE_LENGTH} observations, got {x.size}"
        )
    mean = float(x.mean())
    return DfaProfile(np.cumsum(x - mean), mean)


@dataclass(frozen=True)
class FluctuationPoint:
    scale: int
    fluctuation: float
    boxes_used: int


def fluctuation(prof: DfaProfile, scale: int) -> FluctuationPoint:
    """RMS residual after per-box linear detrending at one box size.

    Boxes are non-overlapping, anchored at the front; the trailing remainder
    is excluded and the RMS is normalized by the number of covered points.
    """
    n = prof.length
    if scale < MIN_SCALE or scale > n // 4:
        raise ScaleRangeError(
            f"scale {scale} outside [{MIN_SCALE}, {n // 4}] for length {n}"
        )
    boxes = n // scale
    y = prof.values[: boxes * scale].reshape(boxes, scale)
    t = np.arange(scale, dtype=float)
    tc = t - t.mean()
    stt = float(np.dot(tc, tc))
    slope = (y @ tc) / stt
    resid = y - y.mean(axis=1, keepdims=True) - slope[:, None] * tc
    f = math.sqrt(float(np.sum(resid * resid)) / (boxes * scale))
    return FluctuationPoint(int(scale), f, int(boxes))


def scale_grid(
    length: int, min_scale: int = MIN_SCALE, max_scale: Optional[int] = None, count: int = 20
) -> np.ndarray:
    """Approximately log-spaced unique integer box sizes, endpoints included."""
    if max_scale is None:
        max_scale = length // 4
    if min_scale < MIN_SCALE:
        raise ScaleRangeError(f"min_scale must be >= {MIN_SCALE}, got {min_scale}")
    if max_scale > length // 4:
        raise ScaleRangeError(
            f"max_scale {max_scale} exceeds length/4 = {length // 4}"
        )
    if min_scale >= max_scale:
        raise ScaleRangeError(
            f"need min_scale < max_scale, got [{min_scale}, {max_scale}]"
        )
    if count < 4:
        raise ScaleRangeError(f"need at least 4 scales, got {count}")
    raw = np.geomspace(min_scale, max_scale, count)
    scales = np.rint(raw).astype(int)
    scales[0] = min_scale
    scales[-1] = max_scale
    return np.unique(np.clip(scales, min_scale, max_scale))


@dataclass(frozen=True)
class HurstFit:
    """Log-log OLS fit of fluctuation vs. box size: slope = Hurst exponent."""

    hurst: float
    log_constant: float
    points: tuple
    r_squared: float
    dropped_points: int = 0

    @property
    def flagged(self) -> bool:
        """True when the exponent falls outside the plausible [0, 1] band."""
        return not 0.0 <= self.hurst <= 1.0


def fit_hurst(points: Sequence[FluctuationPoint]) -> HurstFit:
    usable = [p for p in points if p.fluctuation > 0]
    dropped = len(points) - len(usable)
    if len(usable) < 4:
        raise FitError(
            f"need at least 4 positive-fluctuation points, have {len(usable)}"
        )
    ln_n = np.log([p.scale for p in usable])
    ln_f = np.log([p.fluctuation for p in usable])
    slope, intercept = np.polyfit(ln_n, ln_f, 1)
    pred = intercept + slope * ln_n
    ss_res = float(np.sum((ln_f - pred) ** 2))
    ss_tot = float(np.sum((ln_f - ln_f.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    r2 = min(max(r2, 0.0), 1.0)
    return HurstFit(float(slope), float(intercept), tuple(usable), r2, dropped)


@dataclass(frozen=True)
class DfaConfig:
    min_scale: int = MIN_SCALE
    max_scale: Optional[int] = None  # None -> length // 4
    scale_count: int = 20


def hurst_exponent(series: Sequence[float], config: DfaConfig = DfaConfig()) -> HurstFit:
    """Full DFA pipeline: profile, fluctuation grid, scaling fit."""
    prof = profile(series)
    scales = scale_grid(
        prof.length, config.min_scale, config.max_scale, config.scale_count
    )
    pts = [fluctuation(prof, int(s)) for s in scales]
    return fit_hurst(pts)
