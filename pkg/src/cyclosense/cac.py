"""Cyclic autocorrelation estimation and multi-cycle phase weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "CyclicFrequencySet",
    "LagPair",
    "WeightTable",
    "ofdm_cyclic_frequencies",
    "cac_estimate",
    "weight_table",
]


@dataclass(frozen=True)
class CyclicFrequencySet:
    """Ordered set of normalized cyclic frequencies (cycles per sample).

    ``k_indices`` and ``period`` are kept when the set comes from an OFDM
    symbol period (``alpha_k = k / period``); they are empty for ad-hoc sets.
    """

    alphas: tuple[float, ...]
    k_indices: tuple[int, ...] = ()
    period: Optional[int] = None

    def __post_init__(self) -> None:
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise ValueError("at least one cyclic frequency is required")
        if len(set(alphas)) != len(alphas):
            raise ValueError(f"cyclic frequencies must be distinct, got {alphas}")
        if self.k_indices and len(self.k_indices) != len(alphas):
            raise ValueError("k_indices and alphas differ in length")
        if self.period is not None and not self.k_indices:
            raise ValueError("period given without k_indices")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "k_indices", tuple(int(k) for k in self.k_indices))

    @property
    def K(self) -> int:
        return len(self.alphas)

    def __len__(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class LagPair:
    """Signal lag ``tau`` and reference lag ``tau_bar`` (samples)."""

    tau: int
    tau_bar: int

    def __post_init__(self) -> None:
        if self.tau < 1 or self.tau_bar < 1:
            raise ValueError("lags must be >= 1")
        if self.tau == self.tau_bar:
            raise ValueError("tau and tau_bar must differ")

    def validate_for(self, n_samples: int, n_fft: Optional[int] = None) -> None:
        if max(self.tau, self.tau_bar) >= n_samples:
            raise ValueError(
                f"observation of {n_samples} samples is too short for lags "
                f"({self.tau}, {self.tau_bar})"
            )
        if n_fft is not None and self.tau_bar == n_fft:
            raise ValueError("tau_bar must differ from n_fft")


@dataclass(frozen=True)
class WeightTable:
    """Per-index phasor sums f_n, g_n, magnitudes eta_n and the floor mask."""

    f: np.ndarray
    g: np.ndarray
    eta: np.ndarray
    included: np.ndarray

    @property
    def n_included(self) -> int:
        return int(np.count_nonzero(self.included))

    def phase_weights(self) -> np.ndarray:
        """``(f_n - j g_n) / eta_n`` on included indices, zero elsewhere."""
        w = np.zeros(self.f.shape, dtype=np.complex128)
        inc = self.included
        w[inc] = (self.f[inc] - 1j * self.g[inc]) / self.eta[inc]
        return w


def ofdm_cyclic_frequencies(
    n_fft: int, n_cp: int, k_list: Sequence[int]
) -> CyclicFrequencySet:
    """Cyclic frequencies ``k / (n_fft + n_cp)`` of a CP-OFDM signal."""
    period = n_fft + n_cp
    if period <= 0:
        raise ValueError("n_fft + n_cp must be positive")
    ks = [int(k) for k in k_list]
    if len(set(ks)) != len(ks):
        raise ValueError(f"duplicate cyclic index in {ks}")
    alphas = tuple(float(Fraction(k, period)) for k in ks)
    return CyclicFrequencySet(alphas=alphas, k_indices=tuple(ks), period=period)


def cac_estimate(x: np.ndarray, alpha: float, tau: int) -> complex:
    """Estimate the cyclic autocorrelation at cyclic frequency ``alpha`` and lag ``tau``.

    Uses ``(1/(N - tau)) * sum_n x[n] conj(x[n + tau]) exp(-j 2 pi alpha n)``.
    """
    x = np.asarray(x, dtype=np.complex128)
    n_total = x.size
    tau = int(tau)
    if tau < 0 or tau >= n_total:
        raise ValueError(f"lag {tau} outside [0, {n_total})")
    n_tau = n_total - tau
    n = np.arange(n_tau)
    prod = x[:n_tau] * np.conj(x[tau:])
    return complex(np.sum(prod * np.exp(-2j * np.pi * alpha * n)) / n_tau)


def weight_table(freqs: CyclicFrequencySet, n_max: int, floor: float = 1e-6) -> WeightTable:
    """Tabulate the multi-cycle phasor sum for ``n = 0 .. n_max - 1``.

    Indices whose magnitude falls below ``floor`` carry no usable phase and are
    flagged as excluded.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if floor < 0:
        raise ValueError("floor must be >= 0")
    n = np.arange(n_max, dtype=np.int64)
    f = np.zeros(n_max)
    g = np.zeros(n_max)
    for i, alpha in enumerate(freqs.alphas):
        # direct phase per index, no recurrence; exact reduction for k / period
        if freqs.period is not None:
            k = freqs.k_indices[i]
            phase = 2.0 * np.pi * ((k * n) % freqs.period) / freqs.period
        else:
            phase = 2.0 * np.pi * alpha * n
        f += np.cos(phase)
        g += np.sin(phase)
    eta = np.hypot(f, g)
    return WeightTable(f=f, g=g, eta=eta, included=eta >= floor)
