"""CSV ingestion/export and the flat key-value run configuration."""
from __future__ import annotations

import csv
import glob
import math
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from .series import MONTH_RULES, PriceSeries, ReturnSeries

CSV_HEADER = ["date", "close"]


class CsvFormatError(ValueError):
    pass


class ConfigError(ValueError):
    pass


def ingest_csv(path, index_id: Optional[str] = None) -> PriceSeries:
    """Parse a `date,close` CSV into a validated PriceSeries.

    Every rejection names the offending line.
    """
    path = Path(path)
    if index_id is None:
        index_id = path.stem
    try:
        raw = path.read_text()
    except OSError as e:
        raise CsvFormatError(f"{path}: cannot read ({e})") from e
    rows = list(csv.reader(raw.splitlines()))
    rows = [(i + 1, r) for i, r in enumerate(rows) if any(cell.strip() for cell in r)]
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    header_line, header = rows[0]
    if [h.strip().lower() for h in header] != CSV_HEADER:
        raise CsvFormatError(
            f"{path}:{header_line}: expected header 'date,close', got {','.join(header)!r}"
        )
    if len(rows) < 3:
        raise CsvFormatError(f"{path}: need at least 2 data rows")
    dates = []
    prices = []
    prev = None
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise CsvFormatError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
        ds, ps = row[0].strip(), row[1].strip()
        try:
            d = date.fromisoformat(ds)
        except ValueError:
            raise CsvFormatError(f"{path}:{lineno}: unparseable date {ds!r}") from None
        try:
            p = float(ps)
        except ValueError:
            raise CsvFormatError(f"{path}:{lineno}: unparseable price {ps!r}") from None
        if not math.isfinite(p) or p <= 0:
            raise CsvFormatError(f"{path}:{lineno}: non-positive price {ps}")
        if prev is not None and d <= prev:
            kind = "duplicate" if d == prev else "non-monotonic"
            raise CsvFormatError(f"{path}:{lineno}: {kind} date {ds}")
        prev = d
        dates.append(d)
        prices.append(p)
    return PriceSeries(index_id, tuple(dates), np.array(prices))


def export_csv(path, series: PriceSeries) -> None:
    """Write a PriceSeries in the ingestion schema at full float precision."""
    lines = ["date,close"]
    for d, p in zip(series.dates, series.prices):
        lines.append(f"{d.isoformat()},{float(p)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def returns_to_prices(
    returns: ReturnSeries,
    start_price: float = 100.0,
    start_date: date = date(1990, 1, 1),
) -> PriceSeries:
    """Price path implied by a return series, stamped with consecutive dates."""
    n = len(returns)
    levels = start_price * np.exp(np.concatenate(([0.0], np.cumsum(returns.returns))))
    dates = tuple(start_date + timedelta(days=i) for i in range(n + 1))
    return PriceSeries(returns.index_id, dates, levels)


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; keys mirror these field names one-to-one."""

    inputs: Tuple[str, ...] = ()
    synth_kind: Optional[str] = None
    synth_count: int = 0
    synth_length_days: int = 0
    synth_hurst_min: Optional[float] = None
    synth_hurst_max: Optional[float] = None
    synth_mean: float = 0.0
    synth_std: float = 1.0
    month_rule: Optional[str] = None
    estimation_months: int = 60
    prediction_months: int = 12
    roll_months: int = 12
    embedding_dim: int = 4
    time_delay: int = 1
    neighbor_count: Optional[int] = None
    keep_fraction: float = 0.5
    min_scale: int = 4
    max_scale: Optional[int] = None
    scale_count: int = 20
    seed: int = 0
    output_dir: str = "out"
    regions: Dict[str, str] = field(default_factory=dict)

    def resolved_month_rule(self) -> str:
        if self.month_rule is not None:
            return self.month_rule
        return "synthetic-21-day" if self.synth_kind else "calendar"


_SCALARS = {
    "synth_kind": str,
    "synth_count": int,
    "synth_length_days": int,
    "synth_hurst_min": float,
    "synth_hurst_max": float,
    "synth_mean": float,
    "synth_std": float,
    "month_rule": str,
    "estimation_months": int,
    "prediction_months": int,
    "roll_months": int,
    "embedding_dim": int,
    "time_delay": int,
    "neighbor_count": int,
    "keep_fraction": float,
    "min_scale": int,
    "max_scale": int,
    "scale_count": int,
    "seed": int,
    "output_dir": str,
}


def parse_config(path) -> RunConfig:
    """Parse `key = value` lines; '#' starts a comment; unknown keys are errors."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"{path}: cannot read ({e})") from e
    values: dict = {}
    regions: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key.startswith("region."):
            regions[key[len("region."):]] = val
            continue
        if key == "inputs":
            values["inputs"] = tuple(p.strip() for p in val.split(",") if p.strip())
            continue
        if key not in _SCALARS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _SCALARS[key](val)
        except ValueError:
            raise ConfigError(
                f"{path}:{lineno}: bad value {val!r} for {key!r}"
            ) from None
    cfg = RunConfig(regions=regions, **values)
    _validate_config(cfg, path)
    return cfg


def _validate_config(cfg: RunConfig, path) -> None:
    if cfg.month_rule is not None and cfg.month_rule not in MONTH_RULES:
        raise ConfigError(
            f"{path}: month_rule must be one of {MONTH_RULES}, got {cfg.month_rule!r}"
        )
    if cfg.synth_kind is not None:
        if cfg.inputs:
            raise ConfigError(f"{path}: give either inputs or a synth_* spec, not both")
        if cfg.synth_kind not in ("random-walk", "fgn"):
            raise ConfigError(f"{path}: unknown synth_kind {cfg.synth_kind!r}")
        if cfg.synth_count < 1 or cfg.synth_length_days < 16:
            raise ConfigError(
                f"{path}: synth_count >= 1 and synth_length_days >= 16 required"
            )
        if cfg.synth_kind == "fgn":
            lo, hi = cfg.synth_hurst_min, cfg.synth_hurst_max
            if lo is None or hi is None or not (0.0 < lo <= hi < 1.0):
                raise ConfigError(
                    f"{path}: fgn needs 0 < synth_hurst_min <= synth_hurst_max < 1"
                )
        if cfg.resolved_month_rule() == "calendar":
            raise ConfigError(
                f"{path}: synthetic ensembles require month_rule = synthetic-21-day"
            )


def expand_inputs(cfg: RunConfig, base_dir: Path) -> list:
    """Resolve input patterns relative to the config file, keeping list order."""
    paths = []
    for pattern in cfg.inputs:
        p = Path(pattern)
        if not p.is_absolute():
            p = base_dir / pattern
        matches = sorted(glob.glob(str(p)))
        if not matches:
            raise ConfigError(f"input {pattern!r} matched no files")
        paths.extend(Path(m) for m in matches)
    return paths


def with_overrides(cfg: RunConfig, out: Optional[str], seed: Optional[int]) -> RunConfig:
    if out is not None:
        cfg = replace(cfg, output_dir=out)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    return cfg
