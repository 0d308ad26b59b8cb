"""
Reproducible Monte Carlo harness for false-alarm and detection rates.

Every trial owns a random substream derived from ``(master_seed, trial_index)``,
so the per-trial statistics do not depend on execution order or on the number
of worker threads. The same trial index is reused across sweep points and
detectors (common random numbers), which sharpens paired comparisons.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.stats import norm

from .detectors import DetectorSettings, build_detectors
from .signals import (
    Hypothesis,
    ModulationScheme,
    NoiseUncertaintyModel,
    OfdmParams,
    synthesize_observation,
)

__all__ = [
    "ExperimentPlan",
    "SweepPoint",
    "MonteCarloEstimate",
    "PdResult",
    "wilson_interval",
    "trial_stream",
    "simulate_statistics",
    "run_pf_experiment",
    "run_pd_experiment",
]

_CHUNK = 64


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    z = norm.isf((1.0 - confidence) / 2.0)
    p = successes / trials
    z2n = z * z / trials
    centre = (p + z2n / 2.0) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / (1.0 + z2n)
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return low, high


@dataclass(frozen=True)
class MonteCarloEstimate:
    successes: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, successes: int, trials: int, confidence: float = 0.95) -> "MonteCarloEstimate":
        low, high = wilson_interval(successes, trials, confidence)
        return cls(int(successes), int(trials), successes / trials, low, high)

    @property
    def ci_width(self) -> float:
        return self.ci_high - self.ci_low


def trial_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent generator for one trial, keyed by seed and trial index."""
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial_index),))
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class SweepPoint:
    modulation: ModulationScheme
    cp_ratio: Fraction
    n_ofdm: int
    delta_db: float
    snr_db: float


@dataclass(frozen=True)
class ExperimentPlan:
    """Sweep grids and run controls; defaults follow the WiMAX-like setup.

    ``n_samples`` overrides the observation length for H0-only runs (the
    false-alarm calibration uses 1152 noise samples).
    """

    trials: int = 20000
    master_seed: int = 0
    snr_grid_db: tuple[float, ...] = (-10.0,)
    delta_db_grid: tuple[float, ...] = (1.0,)
    cp_ratios: tuple[Fraction, ...] = (Fraction(1, 8),)
    n_ofdm_grid: tuple[int, ...] = (32,)
    modulations: tuple[ModulationScheme, ...] = (ModulationScheme.QPSK,)
    detectors: DetectorSettings = field(default_factory=DetectorSettings)
    target_pf: float = 0.1
    n_fft: int = 512
    used_subcarriers: Optional[tuple[int, ...]] = None
    sigma2_nominal: float = 1.0
    n_samples: Optional[int] = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if not 0.0 < self.target_pf < 1.0:
            raise ValueError("target_pf must lie in (0, 1)")
        set_ = object.__setattr__
        set_(self, "snr_grid_db", tuple(float(v) for v in self.snr_grid_db))
        set_(self, "delta_db_grid", tuple(float(v) for v in self.delta_db_grid))
        set_(self, "cp_ratios", tuple(Fraction(str(v)) if not isinstance(v, Fraction) else v for v in self.cp_ratios))
        set_(self, "n_ofdm_grid", tuple(int(v) for v in self.n_ofdm_grid))
        set_(self, "modulations", tuple(ModulationScheme.parse(m) for m in self.modulations))
        for name in ("snr_grid_db", "delta_db_grid", "cp_ratios", "n_ofdm_grid", "modulations"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        # validate every geometry up front
        for cp, n_ofdm in itertools.product(self.cp_ratios, self.n_ofdm_grid):
            self._ofdm(self.modulations[0], cp, n_ofdm)
        for d in self.delta_db_grid:
            NoiseUncertaintyModel(self.sigma2_nominal, d)

    def _ofdm(self, modulation, cp_ratio, n_ofdm) -> OfdmParams:
        return OfdmParams(
            n_fft=self.n_fft,
            cp_ratio=cp_ratio,
            n_ofdm_symbols=n_ofdm,
            modulation=modulation,
            used_subcarriers=self.used_subcarriers,
        )

    def points(self) -> Iterator[SweepPoint]:
        for mod, cp, n_ofdm, delta, snr in itertools.product(
            self.modulations, self.cp_ratios, self.n_ofdm_grid, self.delta_db_grid, self.snr_grid_db
        ):
            yield SweepPoint(mod, cp, n_ofdm, delta, snr)

    def ofdm_params(self, point: SweepPoint) -> OfdmParams:
        return self._ofdm(point.modulation, point.cp_ratio, point.n_ofdm)

    def noise_model(self, point: SweepPoint) -> NoiseUncertaintyModel:
        return NoiseUncertaintyModel(self.sigma2_nominal, point.delta_db)


@dataclass(frozen=True)
class PdResult:
    point: SweepPoint
    detector: str
    threshold: float
    estimate: MonteCarloEstimate


def _run_chunk(start, stop, plan, point, hypothesis, detectors, n_samples):
    params = plan.ofdm_params(point)
    noise = plan.noise_model(point)
    out = np.empty((len(detectors), stop - start))
    for j, idx in enumerate(range(start, stop)):
        rng = trial_stream(plan.master_seed, idx)
        obs = synthesize_observation(hypothesis, params, point.snr_db, noise, rng, n_samples)
        for i, det in enumerate(detectors):
            out[i, j] = det.statistic(obs.samples)
    return start, out


def simulate_statistics(
    plan: ExperimentPlan,
    point: SweepPoint,
    hypothesis: Hypothesis | str = Hypothesis.H1,
    detectors: Optional[dict] = None,
) -> dict[str, np.ndarray]:
    """Per-trial detector statistics at one sweep point, indexed by trial.

    The result is identical for any ``plan.threads``.
    """
    hypothesis = Hypothesis(hypothesis)
    params = plan.ofdm_params(point)
    if detectors is None:
        detectors = build_detectors(plan.detectors, params.n_fft, params.n_cp, plan.sigma2_nominal)
    n_samples = plan.n_samples if hypothesis is Hypothesis.H0 else None
    dets = list(detectors.values())
    stats = np.empty((len(dets), plan.trials))
    bounds = [(s, min(s + _CHUNK, plan.trials)) for s in range(0, plan.trials, _CHUNK)]
    args = (plan, point, hypothesis, dets, n_samples)
    if plan.threads == 1:
        results = (_run_chunk(s, e, *args) for s, e in bounds)
    else:
        pool = ThreadPoolExecutor(max_workers=plan.threads)
        results = pool.map(lambda b: _run_chunk(b[0], b[1], *args), bounds)
    try:
        for start, block in results:
            stats[:, start : start + block.shape[1]] = block
    finally:
        if plan.threads != 1:
            pool.shutdown()
    return {name: stats[i] for i, name in enumerate(detectors)}


def run_pf_experiment(
    plan: ExperimentPlan, thresholds: Sequence[float]
) -> dict[str, dict[float, MonteCarloEstimate]]:
    """Empirical false-alarm rates under H0 at each raw threshold.

    Uses the first entry of every grid for the noise geometry. One observation
    per trial serves all thresholds and detectors.
    """
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ValueError("at least one threshold is required")
    point = next(plan.points())
    stats = simulate_statistics(plan, point, Hypothesis.H0)
    table = {}
    for name, values in stats.items():
        table[name] = {
            lam: MonteCarloEstimate.from_counts(int(np.count_nonzero(values >= lam)), plan.trials)
            for lam in thresholds
        }
    return table


def run_pd_experiment(plan: ExperimentPlan, hypothesis: Hypothesis | str = Hypothesis.H1) -> list[PdResult]:
    """Detection rates over the full sweep at thresholds set for ``plan.target_pf``.

    Passing ``hypothesis="H0"`` measures realized false-alarm rates instead,
    which exposes how the energy detector's rate drifts under noise uncertainty.
    """
    results = []
    for point in plan.points():
        params = plan.ofdm_params(point)
        detectors = build_detectors(plan.detectors, params.n_fft, params.n_cp, plan.sigma2_nominal)
        stats = simulate_statistics(plan, point, hypothesis, detectors)
        n = params.frame_length
        if Hypothesis(hypothesis) is Hypothesis.H0 and plan.n_samples is not None:
            n = plan.n_samples
        for name, det in detectors.items():
            lam = det.threshold(plan.target_pf, n)
            hits = int(np.count_nonzero(stats[name] >= lam))
            results.append(PdResult(point, name, lam, MonteCarloEstimate.from_counts(hits, plan.trials)))
    return results
