"""Discretized density evolution for the BSC and threshold search.

Messages live on a uniform LLR grid of step ``delta`` clipped to ±``llr_max``
(mass beyond the bound folds into the end bins).  Variable-node updates are
plain density convolutions.  Check-node updates work on a sign/magnitude
decomposition with their own (coarser) quantization table: the exact pairwise
box-plus output ``min + log1p(e^-sum) - log1p(e^-diff)`` deviates from ``min``
only inside a narrow magnitude band, so one banded table plus suffix sums
gives the exact quantized operation in O(G·band).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.signal import fftconvolve

from . import backend
from .core import binary_entropy, inverse_binary_entropy
from .degree import DegreeDistribution

__all__ = [
    "DensityGrid",
    "QuantizedDensity",
    "DeResult",
    "ThresholdResult",
    "de_iterate",
    "find_threshold",
    "shannon_gap",
]


class DensityGrid:
    """Grid geometry and the check-node quantization table (cached)."""

    _cache: dict = {}

    def __new__(cls, delta: float = 2.0 ** -7, llr_max: float = 30.0,
                check_delta: float = 2.0 ** -5):
        key = (delta, llr_max, check_delta)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        self.delta = delta
        self.llr_max = llr_max
        self.check_delta = check_delta
        ratio = check_delta / delta
        if abs(ratio - round(ratio)) > 1e-12 or ratio < 1:
            raise ValueError("check_delta must be an integer multiple of delta")
        self.ratio = int(round(ratio))
        self.K = int(round(llr_max / delta))
        self.size = 2 * self.K + 1
        self.Kc = self.K // self.ratio
        # magnitude band outside which box-plus equals min() on this grid
        self.band = min(int(np.ceil(np.log(2.0 / check_delta) / check_delta)), self.Kc)
        self.offsets = self._build_offsets()
        # fine magnitude k -> coarse magnitude bin (0 = indistinguishable from LLR 0)
        fine = np.arange(1, self.K + 1)
        self.fine_to_coarse = np.minimum(
            np.rint(fine / self.ratio).astype(np.int64), self.Kc)
        cls._cache[key] = self
        return self

    def _build_offsets(self) -> np.ndarray:
        dc = self.check_delta
        m = np.arange(self.Kc + 1)[:, None]
        k = np.arange(self.band + 1)[None, :]
        out = m * dc + np.log1p(np.exp(-(2 * m + k) * dc)) - np.log1p(np.exp(-k * dc))
        off = np.rint(out / dc).astype(np.int16) - m.astype(np.int16)
        return np.ascontiguousarray(off)

    def channel_density(self, p: float) -> np.ndarray:
        """Two-point BSC LLR density: ±log((1-p)/p) with masses (1-p, p)."""
        f = np.zeros(self.size)
        if p <= 0.0:
            f[-1] = 1.0
            return f
        c = np.log((1.0 - p) / p)
        b = min(int(round(c / self.delta)), self.K)
        f[self.K + b] += 1.0 - p
        f[self.K - b] += p
        return f


@dataclass
class QuantizedDensity:
    """Probability mass over the signed LLR grid of a DensityGrid."""

    grid: DensityGrid
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.mass.shape != (self.grid.size,):
            raise ValueError("mass length does not match the grid")

    def total(self) -> float:
        return float(self.mass.sum())

    def error_probability(self) -> float:
        K = self.grid.K
        return float(self.mass[:K].sum() + 0.5 * self.mass[K])


def _error_prob(grid: DensityGrid, f: np.ndarray) -> float:
    return float(f[: grid.K].sum() + 0.5 * f[grid.K])


def _sat_conv(a: np.ndarray, b: np.ndarray, size: int) -> np.ndarray:
    """Linear convolution of signed-grid pmfs, folding overflow into ±max bins."""
    full = fftconvolve(a, b)
    K = (size - 1) // 2
    c = full[size - 1 - K: size - 1 + K + 1].copy()
    c[0] += full[: size - 1 - K].sum()
    c[-1] += full[size - 1 + K + 1:].sum()
    return c


def _check_update(grid: DensityGrid, f: np.ndarray, rho: dict) -> np.ndarray:
    """One check-node round: rho-weighted (d-1)-fold box-plus of f."""
    K = grid.K
    pos = f[K + 1:]
    neg = f[K - 1::-1]
    nb = grid.Kc + 1
    u = np.bincount(grid.fine_to_coarse, weights=pos + neg, minlength=nb)
    v = np.bincount(grid.fine_to_coarse, weights=pos - neg, minlength=nb)
    u[0] += f[K]

    need = sorted({d - 1 for d in rho})
    powers = {1: (u, v)}
    k = 1
    while 2 * k <= need[-1]:
        ua, va = powers[k]
        powers[2 * k] = backend.boxplus_pair(ua, va, ua, va, grid.offsets, grid.band)
        k *= 2
    out_u = np.zeros(nb)
    out_v = np.zeros(nb)
    for d, w in rho.items():
        e, bit = d - 1, 1
        acc = None
        while e:
            if e & 1:
                acc = powers[bit] if acc is None else backend.boxplus_pair(
                    acc[0], acc[1], powers[bit][0], powers[bit][1],
                    grid.offsets, grid.band)
            e >>= 1
            bit *= 2
        out_u += w * acc[0]
        out_v += w * acc[1]

    out = np.zeros(grid.size)
    plus = 0.5 * (out_u + out_v)
    minus = 0.5 * (out_u - out_v)
    out[K] = plus[0] + minus[0]
    r = grid.ratio
    out[K + r::r][: grid.Kc] = plus[1:]
    out[K - r::-r][: grid.Kc] = minus[1:]
    return out


def _var_update(grid: DensityGrid, fch: np.ndarray, a: np.ndarray,
                lam: dict) -> np.ndarray:
    """One variable-node round: lambda-weighted (channel + (d-1)-fold) convolution."""
    maxdeg = max(lam)
    out = np.zeros(grid.size)
    cur = _sat_conv(fch, a, grid.size)
    for d in range(2, maxdeg + 1):
        if d in lam:
            out += lam[d] * cur
        if d < maxdeg:
            cur = _sat_conv(cur, a, grid.size)
    return out


class DeResult(NamedTuple):
    converged: bool
    error: float
    iterations: int


def de_iterate(dd: DegreeDistribution, p: float, max_iters: int = 2000,
               target: float = 1e-7, grid: DensityGrid | None = None,
               stall_window: int = 10, stall_eps: float = 1e-12) -> DeResult:
    """Run density evolution at crossover p until the message error probability
    drops below ``target`` (converged) or progress stops / max_iters is hit."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5), got {p}")
    if grid is None:
        grid = DensityGrid()
    if p == 0.0:
        return DeResult(True, 0.0, 1)
    lam, rho = dd.lam, dd.rho
    fch = grid.channel_density(p)
    f = fch.copy()
    pe = _error_prob(grid, f)
    stall = 0
    for it in range(1, max_iters + 1):
        fc = _check_update(grid, f, rho)
        fc /= fc.sum()
        f = _var_update(grid, fch, fc, lam)
        f /= f.sum()
        new_pe = _error_prob(grid, f)
        if new_pe < target:
            return DeResult(True, new_pe, it)
        if pe - new_pe < stall_eps:
            stall += 1
            if stall >= stall_window:
                return DeResult(False, new_pe, it)
        else:
            stall = 0
        pe = new_pe
    return DeResult(False, pe, max_iters)


class ThresholdResult(NamedTuple):
    threshold: float
    interval: float
    profile: tuple  # (p, converged, iterations) per bisection probe

    def as_csv_row(self, rate: float) -> str:
        gap = shannon_gap(rate, self.threshold)
        iters = sum(it for _, _, it in self.profile)
        return f"{rate:.6f},{self.threshold:.6f},{gap:.6f},{iters}"


def find_threshold(dd: DegreeDistribution, grid: DensityGrid | None = None,
                   bracket: tuple = (0.0, 0.2), tol: float = 1e-4,
                   **de_kwargs) -> ThresholdResult:
    """Bisect for the largest convergent p.  The returned threshold is the
    certified-convergent lower endpoint; threshold + interval failed."""
    lo, hi = bracket
    profile = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        res = de_iterate(dd, mid, grid=grid, **de_kwargs)
        profile.append((mid, res.converged, res.iterations))
        if res.converged:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(lo, hi - lo, tuple(profile))


def shannon_gap(rate: float, threshold: float) -> float:
    """Distance of a threshold from the Shannon limit h^-1(1 - rate)."""
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate must be in (0, 1), got {rate}")
    return inverse_binary_entropy(1.0 - rate, tol=1e-9) - threshold
