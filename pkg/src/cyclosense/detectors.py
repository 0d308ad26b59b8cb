"""
Test statistics and threshold decisions.

``multicycle_statistic`` is the ratio of a phase-weighted multi-cycle lag
product sum at lag ``tau`` to a frequency-shifted lag product sum at
``tau_bar``; the ratio cancels the unknown noise power. The detector classes
wrap each statistic with its matching false-alarm threshold and cache the
per-length weight tables so Monte Carlo loops do not rebuild them.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import theory
from .cac import CyclicFrequencySet, LagPair, WeightTable, ofdm_cyclic_frequencies, weight_table
from .signals import Hypothesis

__all__ = [
    "DegenerateInputError",
    "MultiCycleConfig",
    "DetectorDecision",
    "multicycle_terms",
    "multicycle_statistic",
    "singlecycle_statistic",
    "baseline_ratio_statistic",
    "energy_statistic",
    "decide",
    "MultiCycleDetector",
    "BaselineRatioDetector",
    "EnergyDetector",
    "DetectorSettings",
    "build_detectors",
]

DEFAULT_BETA = 0.412
DEFAULT_ETA_FLOOR = 1e-6


class DegenerateInputError(ValueError):
    """The statistic is undefined for this input (e.g. an all-zero reference sum)."""


@dataclass(frozen=True)
class MultiCycleConfig:
    freqs: CyclicFrequencySet
    lags: LagPair
    beta: float = DEFAULT_BETA
    eta_floor: float = DEFAULT_ETA_FLOOR

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        if self.eta_floor < 0:
            raise ValueError("eta_floor must be >= 0")
        for alpha in self.freqs.alphas:
            if math.isclose(alpha % 1.0, self.beta, rel_tol=0.0, abs_tol=1e-12):
                raise ValueError(f"beta {self.beta} coincides with cyclic frequency {alpha}")

    @classmethod
    def for_ofdm(
        cls,
        n_fft: int,
        n_cp: int,
        k_list: Sequence[int] = (-2, -1, 0, 1, 2),
        tau: Optional[int] = None,
        tau_bar: Optional[int] = None,
        beta: float = DEFAULT_BETA,
        eta_floor: float = DEFAULT_ETA_FLOOR,
    ) -> "MultiCycleConfig":
        """Config with ``tau = n_fft`` and ``tau_bar = n_fft - 2`` unless overridden."""
        tau = n_fft if tau is None else tau
        tau_bar = n_fft - 2 if tau_bar is None else tau_bar
        if tau_bar == n_fft:
            raise ValueError("tau_bar must differ from n_fft")
        return cls(
            freqs=ofdm_cyclic_frequencies(n_fft, n_cp, k_list),
            lags=LagPair(tau, tau_bar),
            beta=beta,
            eta_floor=eta_floor,
        )


@dataclass(frozen=True)
class DetectorDecision:
    statistic: float
    threshold: float
    decision: Hypothesis


def _check_length(n: int, lags: LagPair) -> None:
    # each lag sum needs at least one term
    if n <= max(lags.tau, lags.tau_bar):
        raise ValueError(
            f"observation of {n} samples is too short for lags ({lags.tau}, {lags.tau_bar})"
        )


def _reference_phasor(beta: float, n: int) -> np.ndarray:
    idx = np.arange(n, dtype=np.float64)
    return np.exp(-2j * np.pi * beta * idx)


def multicycle_terms(
    x: np.ndarray, cfg: MultiCycleConfig, table: Optional[WeightTable] = None
) -> tuple[complex, complex]:
    """Normalized numerator and denominator sums of the multi-cycle statistic.

    Returns ``(a, b)`` with ``a = S_tau / sqrt(N_inc)`` and
    ``b = S_tau_bar / sqrt(N - tau_bar)`` so the statistic is ``|a|^2 / |b|^2``.
    Under H0 both are approximately circular complex Gaussian with
    ``E|a|^2 = E|b|^2 = sigma^4``.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    tau, tau_bar = cfg.lags.tau, cfg.lags.tau_bar
    _check_length(n, cfg.lags)
    n_tau = n - tau
    if table is None:
        table = weight_table(cfg.freqs, n_tau, cfg.eta_floor)
    n_inc = table.n_included
    if n_inc == 0:
        raise DegenerateInputError("every multi-cycle weight fell below the floor")
    weights = table.phase_weights()
    num = np.dot(weights, x[:n_tau] * np.conj(x[tau:])) / math.sqrt(n_inc)
    n_bar = n - tau_bar
    den = np.dot(_reference_phasor(cfg.beta, n_bar), x[:n_bar] * np.conj(x[tau_bar:]))
    return complex(num), complex(den / math.sqrt(n_bar))


def _ratio(num: complex, den: complex) -> float:
    den2 = abs(den) ** 2
    if den2 == 0.0:
        raise DegenerateInputError("reference lag sum is exactly zero")
    return abs(num) ** 2 / den2


def multicycle_statistic(
    x: np.ndarray, cfg: MultiCycleConfig, table: Optional[WeightTable] = None
) -> float:
    """Multi-cycle cyclostationarity ratio statistic of ``x``.

    Args:
        x: complex baseband samples.
        cfg: cyclic frequencies, lags, reference frequency and weight floor.
        table: precomputed :func:`weight_table` of length ``len(x) - tau``.

    Raises:
        ValueError: if ``x`` is too short for the lags.
        DegenerateInputError: if the reference sum vanishes.
    """
    return _ratio(*multicycle_terms(x, cfg, table))


def singlecycle_statistic(
    x: np.ndarray, lags: LagPair, beta: float = DEFAULT_BETA, alpha0: float = 0.0
) -> float:
    """The multi-cycle statistic with the single cyclic frequency ``alpha0``."""
    cfg = MultiCycleConfig(CyclicFrequencySet((alpha0,)), lags, beta)
    return multicycle_statistic(x, cfg)


def baseline_ratio_statistic(x: np.ndarray, lags: LagPair) -> float:
    """Ratio ``|R(tau)| / |R(tau_bar)|`` of zero-cycle autocorrelation estimates."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    _check_length(n, lags)
    r_tau = np.vdot(x[lags.tau :], x[: n - lags.tau]) / (n - lags.tau)
    r_bar = np.vdot(x[lags.tau_bar :], x[: n - lags.tau_bar]) / (n - lags.tau_bar)
    if r_bar == 0:
        raise DegenerateInputError("reference autocorrelation is exactly zero")
    return float(abs(r_tau) / abs(r_bar))


def energy_statistic(x: np.ndarray) -> float:
    x = np.asarray(x)
    if x.size == 0:
        raise ValueError("energy statistic needs at least one sample")
    return float(np.vdot(x, x).real / x.size)


def decide(statistic: float, threshold: float) -> DetectorDecision:
    """Declare H1 when ``statistic >= threshold``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    decision = Hypothesis.H1 if statistic >= threshold else Hypothesis.H0
    return DetectorDecision(float(statistic), float(threshold), decision)


class MultiCycleDetector:
    """Multi-cycle ratio detector with per-length cached weights."""

    def __init__(self, cfg: MultiCycleConfig, name: Optional[str] = None):
        self.cfg = cfg
        self.name = name or f"multi{cfg.freqs.K}"
        self._cache: dict[int, tuple[np.ndarray, float, np.ndarray]] = {}
        self._lock = threading.Lock()

    def _kernel(self, n: int) -> tuple[np.ndarray, float, np.ndarray]:
        kernel = self._cache.get(n)
        if kernel is None:
            with self._lock:
                kernel = self._cache.get(n)
                if kernel is None:
                    _check_length(n, self.cfg.lags)
                    table = weight_table(self.cfg.freqs, n - self.cfg.lags.tau, self.cfg.eta_floor)
                    if table.n_included == 0:
                        raise DegenerateInputError("every multi-cycle weight fell below the floor")
                    ref = _reference_phasor(self.cfg.beta, n - self.cfg.lags.tau_bar)
                    kernel = (table.phase_weights(), float(table.n_included), ref)
                    self._cache[n] = kernel
        return kernel

    def statistic(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.complex128)
        n = x.size
        weights, n_inc, ref = self._kernel(n)
        tau, tau_bar = self.cfg.lags.tau, self.cfg.lags.tau_bar
        num = np.dot(weights, x[: n - tau] * np.conj(x[tau:]))
        den = np.dot(ref, x[: n - tau_bar] * np.conj(x[tau_bar:]))
        return _ratio(num / math.sqrt(n_inc), den / math.sqrt(n - tau_bar))

    def threshold(self, pf: float, n: int) -> float:
        return theory.threshold_for_pf(pf)


class BaselineRatioDetector:
    name = "baseline-ratio"

    def __init__(self, lags: LagPair):
        self.lags = lags

    def statistic(self, x: np.ndarray) -> float:
        return baseline_ratio_statistic(x, self.lags)

    def threshold(self, pf: float, n: int) -> float:
        return theory.baseline_ratio_threshold(pf, n, self.lags.tau, self.lags.tau_bar)


class EnergyDetector:
    name = "energy"

    def __init__(self, sigma2_nominal: float = 1.0):
        self.sigma2_nominal = sigma2_nominal

    def statistic(self, x: np.ndarray) -> float:
        return energy_statistic(x)

    def threshold(self, pf: float, n: int) -> float:
        return theory.energy_threshold(pf, n, self.sigma2_nominal)


DETECTOR_NAMES = ("multi5", "single1", "baseline-ratio", "energy")


@dataclass(frozen=True)
class DetectorSettings:
    """Which detectors to run and how to configure the cyclostationary ones.

    ``multi5`` uses ``k_list``; ``single1`` uses the zero cyclic frequency only.
    ``tau`` and ``tau_bar`` default to ``n_fft`` and ``n_fft - 2``.
    """

    names: tuple[str, ...] = DETECTOR_NAMES
    k_list: tuple[int, ...] = (-2, -1, 0, 1, 2)
    beta: float = DEFAULT_BETA
    eta_floor: float = DEFAULT_ETA_FLOOR
    tau: Optional[int] = None
    tau_bar: Optional[int] = None

    def __post_init__(self) -> None:
        unknown = set(self.names) - set(DETECTOR_NAMES)
        if unknown:
            raise ValueError(f"unknown detector(s) {sorted(unknown)}; choose from {DETECTOR_NAMES}")
        if not self.names:
            raise ValueError("no detectors selected")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))


def build_detectors(
    settings: DetectorSettings, n_fft: int, n_cp: int, sigma2_nominal: float = 1.0
) -> dict:
    """Instantiate the selected detectors for one OFDM geometry, keyed by name."""
    out = {}
    for name in settings.names:
        if name in ("multi5", "single1"):
            ks = settings.k_list if name == "multi5" else (0,)
            cfg = MultiCycleConfig.for_ofdm(
                n_fft, n_cp, ks, settings.tau, settings.tau_bar, settings.beta, settings.eta_floor
            )
            out[name] = MultiCycleDetector(cfg, name=name)
        elif name == "baseline-ratio":
            tau = n_fft if settings.tau is None else settings.tau
            tau_bar = n_fft - 2 if settings.tau_bar is None else settings.tau_bar
            out[name] = BaselineRatioDetector(LagPair(tau, tau_bar))
        else:
            out[name] = EnergyDetector(sigma2_nominal)
    return out
