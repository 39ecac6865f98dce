"""Price/return series containers and rolling window schedules."""
from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import NamedTuple, Sequence

import numpy as np

SYNTHETIC_MONTH_DAYS = 21

MONTH_RULES = ("calendar", "synthetic-21-day")


class InsufficientHistoryError(ValueError):
    """Series too short for the requested window layout."""

    def __init__(self, required: int, available: int, unit: str = "months"):
        self.required = required
        self.available = available
        super().__init__(
            f"insufficient history: need {required} {unit}, have {available}"
        )


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"expected 1-d values, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeries:
    """Daily closing price levels for one market index.

    Dates are either ``datetime.date`` stamps (real data) or integer day
    ordinals (synthetic data); they must be strictly increasing either way.
    """

    index_id: str
    dates: tuple
    prices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", _readonly(self.prices))
        if len(self.dates) != len(self.prices):
            raise ValueError(
                f"{self.index_id}: {len(self.dates)} dates vs "
                f"{len(self.prices)} prices"
            )
        if len(self.prices) < 2:
            raise ValueError(f"{self.index_id}: need at least 2 observations")
        bad = np.nonzero(~(self.prices > 0))[0]
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"{self.index_id}: non-positive price {self.prices[i]} "
                f"at row {i} ({self.dates[i]})"
            )
        for i in range(1, len(self.dates)):
            if not self.dates[i] > self.dates[i - 1]:
                raise ValueError(
                    f"{self.index_id}: dates not strictly increasing at row {i} "
                    f"({self.dates[i - 1]} -> {self.dates[i]})"
                )

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class ReturnSeries:
    """Daily log returns; dates are aligned to the later day of each pair."""

    index_id: str
    dates: tuple
    returns: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "returns", _readonly(self.returns))
        if len(self.dates) != len(self.returns):
            raise ValueError(
                f"{self.index_id}: {len(self.dates)} dates vs "
                f"{len(self.returns)} returns"
            )
        if len(self.returns) < 1:
            raise ValueError(f"{self.index_id}: empty return series")

    def __len__(self) -> int:
        return len(self.returns)


def log_returns(prices: PriceSeries) -> ReturnSeries:
    """Log-return transform r_t = ln(p_t) - ln(p_{t-1})."""
    r = np.diff(np.log(prices.prices))
    return ReturnSeries(prices.index_id, prices.dates[1:], r)


class Window(NamedTuple):
    """Inclusive index ranges into a ReturnSeries; prediction abuts estimation."""

    est_start: int
    est_end: int
    pred_start: int
    pred_end: int


@dataclass(frozen=True)
class WindowSchedule:
    windows: tuple
    estimation_months: int
    prediction_months: int
    roll_months: int
    month_rule: str

    def __len__(self) -> int:
        return len(self.windows)


def _month_boundaries(series: ReturnSeries, month_rule: str):
    """First/last observation index of each distinct month, in order."""
    n = len(series)
    if month_rule == "synthetic-21-day":
        keys = np.arange(n) // SYNTHETIC_MONTH_DAYS
    elif month_rule == "calendar":
        if not all(isinstance(d, date) for d in series.dates):
            raise ValueError(
                "calendar month rule requires date-stamped observations; "
                "use the synthetic-21-day rule for ordinal day numbers"
            )
        keys = np.array([d.year * 12 + d.month for d in series.dates])
    else:
        raise ValueError(f"unknown month rule {month_rule!r}; expected one of {MONTH_RULES}")
    change = np.nonzero(np.diff(keys))[0]
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [n - 1]))
    return starts, ends


def build_window_schedule(
    series: ReturnSeries,
    estimation_months: int,
    prediction_months: int,
    roll_months: int,
    month_rule: str = "calendar",
) -> WindowSchedule:
    """Enumerate rolling estimation+prediction windows over the series.

    Windows advance by ``roll_months`` from the series start; a window is
    emitted only when its full prediction range fits inside the series.
    """
    for name, v in (
        ("estimation_months", estimation_months),
        ("prediction_months", prediction_months),
        ("roll_months", roll_months),
    ):
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v}")
    starts, ends = _month_boundaries(series, month_rule)
    n_months = len(starts)
    need = estimation_months + prediction_months
    if n_months < need:
        raise InsufficientHistoryError(need, n_months)
    windows = []
    for s in range(0, n_months - need + 1, roll_months):
        windows.append(
            Window(
                est_start=int(starts[s]),
                est_end=int(ends[s + estimation_months - 1]),
                pred_start=int(starts[s + estimation_months]),
                pred_end=int(ends[s + need - 1]),
            )
        )
    return WindowSchedule(
        tuple(windows), estimation_months, prediction_months, roll_months, month_rule
    )
