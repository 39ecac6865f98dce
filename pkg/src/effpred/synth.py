"""Seeded synthetic return generators: Gaussian random walks and fGn."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .series import ReturnSeries

logger = logging.getLogger(__name__)

KINDS = ("random-walk", "fgn")
MIN_LENGTH = 16


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int
    seed: int
    mean: float = 0.0
    std: float = 1.0
    hurst: Optional[float] = None
    index_id: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.length < MIN_LENGTH:
            raise ValueError(f"length must be >= {MIN_LENGTH}, got {self.length}")
        if not self.std > 0:
            raise ValueError(f"std must be positive, got {self.std}")
        if self.kind == "fgn":
            if self.hurst is None or not 0.0 < self.hurst < 1.0:
                raise ValueError(f"fgn requires hurst in (0, 1), got {self.hurst}")

    @property
    def label(self) -> str:
        if self.index_id:
            return self.index_id
        if self.kind == "fgn":
            return f"fgn-h{self.hurst:g}-s{self.seed}"
        return f"rw-s{self.seed}"


def _ordinal_dates(n: int) -> tuple:
    return tuple(range(1, n + 1))


def gaussian_random_walk(spec: GeneratorSpec) -> ReturnSeries:
    """iid Gaussian daily returns (random-walk prices), seed-deterministic."""
    if spec.kind != "random-walk":
        raise ValueError(f"spec kind is {spec.kind!r}, expected 'random-walk'")
    rng = np.random.default_rng(spec.seed)
    r = rng.normal(spec.mean, spec.std, spec.length)
    return ReturnSeries(spec.label, _ordinal_dates(spec.length), r)


def fgn_autocovariance(lags, hurst: float, std: float = 1.0) -> np.ndarray:
    """Closed-form fGn autocovariance at the given integer lags."""
    k = np.abs(np.asarray(lags, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * std * std * (
        np.abs(k + 1) ** h2 - 2.0 * k ** h2 + np.abs(k - 1) ** h2
    )


def _davies_harte(acov: np.ndarray, n: int, rng: np.random.Generator):
    """Exact circulant-embedding draw; None when the embedding is not PSD."""
    # circulant first row: gamma_0..gamma_n, gamma_{n-1}..gamma_1
    c = np.concatenate([acov[: n + 1], acov[n - 1 : 0 : -1]])
    lam = np.fft.fft(c).real
    if lam.min() < -1e-8 * max(lam.max(), 1.0):
        return None
    lam = np.clip(lam, 0.0, None)
    m = 2 * n
    w = np.zeros(m, dtype=complex)
    v0, vn = rng.standard_normal(2)
    w[0] = math.sqrt(lam[0] / m) * v0
    w[n] = math.sqrt(lam[n] / m) * vn
    v1 = rng.standard_normal(n - 1)
    v2 = rng.standard_normal(n - 1)
    w[1:n] = np.sqrt(lam[1:n] / (2 * m)) * (v1 + 1j * v2)
    w[n + 1 :] = np.conj(w[1:n][::-1])
    return np.fft.fft(w).real[:n]


def _hosking(acov: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact O(n^2) conditional-distribution draw (Durbin-Levinson)."""
    z = rng.standard_normal(n)
    x = np.empty(n)
    phi = np.zeros(n)
    v = acov[0]
    x[0] = math.sqrt(v) * z[0]
    for t in range(1, n):
        if t == 1:
            kappa = acov[1] / acov[0]
        else:
            kappa = (acov[t] - float(np.dot(phi[: t - 1], acov[t - 1 : 0 : -1]))) / v
        phi[: t - 1] = phi[: t - 1] - kappa * phi[: t - 1][::-1]
        phi[t - 1] = kappa
        v *= 1.0 - kappa * kappa
        x[t] = float(np.dot(phi[:t], x[t - 1 :: -1])) + math.sqrt(v) * z[t]
    return x


def fractional_gaussian_noise(spec: GeneratorSpec) -> ReturnSeries:
    """Stationary Gaussian returns with prescribed Hurst exponent.

    Uses circulant embedding; falls back to the exact recursive method when
    the embedding is not positive semi-definite.
    """
    if spec.kind != "fgn":
        raise ValueError(f"spec kind is {spec.kind!r}, expected 'fgn'")
    n = spec.length
    acov = fgn_autocovariance(np.arange(n + 1), spec.hurst, spec.std)
    x = _davies_harte(acov, n, np.random.default_rng(spec.seed))
    if x is None:
        logger.warning(
            "circulant embedding not PSD for H=%s, n=%d; using recursive method",
            spec.hurst, n,
        )
        x = _hosking(acov, n, np.random.default_rng(spec.seed))
    return ReturnSeries(spec.label, _ordinal_dates(n), x + spec.mean)


def generate(spec: GeneratorSpec) -> ReturnSeries:
    if spec.kind == "random-walk":
        return gaussian_random_walk(spec)
    return fractional_gaussian_noise(spec)


def random_walk_ensemble(
    count: int, length: int, seed: int, mean: float = 0.0, std: float = 1.0
) -> list:
    """Independent seed-deterministic random-walk indexes."""
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2**63, size=count)
    return [
        gaussian_random_walk(
            GeneratorSpec(
                "random-walk", length, int(s), mean, std, index_id=f"rw{i:03d}"
            )
        )
        for i, s in enumerate(seeds)
    ]


def fgn_ensemble(
    count: int,
    length: int,
    seed: int,
    hurst_min: float,
    hurst_max: float,
    mean: float = 0.0,
    std: float = 1.0,
) -> list:
    """fGn indexes with Hurst exponents drawn uniformly from [hurst_min, hurst_max].

    hurst_min == hurst_max pins every index to that value.
    """
    rng = np.random.default_rng(seed)
    hs = rng.uniform(hurst_min, hurst_max, size=count)
    seeds = rng.integers(0, 2**63, size=count)
    return [
        fractional_gaussian_noise(
            GeneratorSpec(
                "fgn", length, int(s), mean, std, float(h),
                index_id=f"fgn{i:03d}",
            )
        )
        for i, (h, s) in enumerate(zip(hs, seeds))
    ]
