"""
Synthesis of OFDM primary-user signals, uncertain-variance noise and labeled
sensing observations.

The generator is deliberately minimal: AWGN baseband, no oversampling, no
pulse shaping and no channel. Every random draw goes through an explicit
``numpy.random.Generator`` so callers control reproducibility.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "Hypothesis",
    "ModulationScheme",
    "OfdmParams",
    "NoiseUncertaintyModel",
    "Observation",
    "constellation",
    "map_bits_to_symbols",
    "default_used_subcarriers",
    "generate_ofdm_frame",
    "draw_noise_variance",
    "complex_gaussian_noise",
    "synthesize_observation",
    "remove_mean",
]


class Hypothesis(str, enum.Enum):
    H0 = "H0"
    H1 = "H1"


class ModulationScheme(enum.Enum):
    """Square Gray-coded QAM constellations used on the data subcarriers."""

    QPSK = 2
    QAM16 = 4
    QAM64 = 6

    @property
    def bits_per_symbol(self) -> int:
        return self.value

    @property
    def order(self) -> int:
        return 1 << self.value

    @classmethod
    def parse(cls, name: Union[str, "ModulationScheme"]) -> "ModulationScheme":
        """Accept ``QPSK``, ``16QAM``, ``qam16``, ``64-QAM`` and similar spellings."""
        if isinstance(name, cls):
            return name
        key = str(name).upper().replace("-", "").replace("_", "")
        aliases = {
            "QPSK": cls.QPSK,
            "4QAM": cls.QPSK,
            "QAM4": cls.QPSK,
            "16QAM": cls.QAM16,
            "QAM16": cls.QAM16,
            "64QAM": cls.QAM64,
            "QAM64": cls.QAM64,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown modulation scheme {name!r}") from None

    @property
    def label(self) -> str:
        return {2: "QPSK", 4: "16QAM", 6: "64QAM"}[self.value]


def _gray_to_binary(g: np.ndarray) -> np.ndarray:
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


@lru_cache(maxsize=None)
def _constellation_cached(scheme: ModulationScheme) -> np.ndarray:
    half = scheme.bits_per_symbol // 2
    levels_per_axis = 1 << half
    labels = np.arange(scheme.order)
    i_gray = labels >> half
    q_gray = labels & (levels_per_axis - 1)
    # gray label 0 sits on the most positive level, so QPSK bit 0 -> +1
    i_level = (levels_per_axis - 1) - 2 * _gray_to_binary(i_gray)
    q_level = (levels_per_axis - 1) - 2 * _gray_to_binary(q_gray)
    scale = math.sqrt(2.0 * (levels_per_axis**2 - 1) / 3.0)
    points = (i_level + 1j * q_level) / scale
    points.setflags(write=False)
    return points


def constellation(scheme: ModulationScheme) -> np.ndarray:
    """Return the unit-average-power constellation indexed by integer label.

    The label's high half of bits selects the in-phase level and the low half
    the quadrature level, each Gray coded per axis.
    """
    return _constellation_cached(scheme)


def map_bits_to_symbols(bits: Sequence[int], scheme: ModulationScheme) -> np.ndarray:
    """Map a flat bit vector (MSB first per symbol) to constellation points.

    Raises:
        ValueError: if the bit count is not a multiple of ``bits_per_symbol``.
    """
    bits = np.asarray(bits)
    k = scheme.bits_per_symbol
    if bits.ndim != 1 or bits.size % k:
        raise ValueError(
            f"bit vector length {bits.size} is not divisible by {k} ({scheme.label})"
        )
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("bits must be 0 or 1")
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.intp)
    labels = bits.reshape(-1, k).astype(np.intp) @ weights
    return constellation(scheme)[labels]


def default_used_subcarriers(n_fft: int) -> tuple[int, ...]:
    """Symmetric occupied band with a DC null, 240 of every 256 bins per side.

    For ``n_fft = 512`` this is {-240..-1} U {1..240}.
    """
    edge = (n_fft * 15) // 32
    if edge < 1:
        edge = max(1, n_fft // 2 - 1)
    return tuple(range(-edge, 0)) + tuple(range(1, edge + 1))


def _as_fraction(value: Union[Fraction, str, float, int]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(1 << 20)
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class OfdmParams:
    """OFDM frame geometry and subcarrier modulation."""

    n_fft: int = 512
    cp_ratio: Fraction = Fraction(1, 8)
    n_ofdm_symbols: int = 32
    modulation: ModulationScheme = ModulationScheme.QPSK
    used_subcarriers: Optional[tuple[int, ...]] = None
    n_cp: int = field(init=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "cp_ratio", _as_fraction(self.cp_ratio))
        set_(self, "modulation", ModulationScheme.parse(self.modulation))
        if int(self.n_fft) != self.n_fft or self.n_fft < 2:
            raise ValueError(f"n_fft must be an integer >= 2, got {self.n_fft}")
        set_(self, "n_fft", int(self.n_fft))
        if int(self.n_ofdm_symbols) != self.n_ofdm_symbols or self.n_ofdm_symbols < 1:
            raise ValueError(
                f"n_ofdm_symbols must be a positive integer, got {self.n_ofdm_symbols}"
            )
        set_(self, "n_ofdm_symbols", int(self.n_ofdm_symbols))
        if self.cp_ratio < 0:
            raise ValueError("cp_ratio must be non-negative")
        n_cp = self.cp_ratio * self.n_fft
        if n_cp.denominator != 1:
            raise ValueError(
                f"cp_ratio {self.cp_ratio} times n_fft {self.n_fft} is not an integer"
            )
        set_(self, "n_cp", int(n_cp))
        if self.n_cp > self.n_fft:
            raise ValueError("cyclic prefix longer than the FFT size")

        used = self.used_subcarriers
        if used is None:
            used = default_used_subcarriers(self.n_fft)
        used = tuple(sorted(int(k) for k in used))
        if not used:
            raise ValueError("used_subcarriers is empty")
        if len(set(used)) != len(used):
            raise ValueError("used_subcarriers contains duplicates")
        if 0 in used:
            raise ValueError("used_subcarriers must exclude the DC bin 0")
        if used[0] < -self.n_fft // 2 or used[-1] > self.n_fft // 2 - 1:
            raise ValueError(
                f"used_subcarriers must lie in [{-self.n_fft // 2}, {self.n_fft // 2 - 1}]"
            )
        set_(self, "used_subcarriers", used)

    @property
    def symbol_length(self) -> int:
        return self.n_fft + self.n_cp

    @property
    def frame_length(self) -> int:
        return self.n_ofdm_symbols * self.symbol_length

    @property
    def n_used(self) -> int:
        return len(self.used_subcarriers)

    def replace(self, **changes) -> "OfdmParams":
        fields = dict(
            n_fft=self.n_fft,
            cp_ratio=self.cp_ratio,
            n_ofdm_symbols=self.n_ofdm_symbols,
            modulation=self.modulation,
            used_subcarriers=self.used_subcarriers,
        )
        if "n_fft" in changes and "used_subcarriers" not in changes:
            fields["used_subcarriers"] = None
        fields.update(changes)
        return OfdmParams(**fields)


@dataclass(frozen=True)
class NoiseUncertaintyModel:
    """Nominal noise power plus a symmetric dB uncertainty interval.

    The realized variance of one observation is uniform on
    ``[sigma2_nominal / epsilon, epsilon * sigma2_nominal]`` with
    ``epsilon = 10 ** (delta_db / 10)``.
    """

    sigma2_nominal: float = 1.0
    delta_db: float = 0.0

    def __post_init__(self) -> None:
        if not self.sigma2_nominal > 0:
            raise ValueError("sigma2_nominal must be positive")
        if not self.delta_db >= 0:
            raise ValueError("delta_db must be >= 0")

    @property
    def epsilon(self) -> float:
        return 10.0 ** (self.delta_db / 10.0)

    @property
    def bounds(self) -> tuple[float, float]:
        eps = self.epsilon
        return self.sigma2_nominal / eps, self.sigma2_nominal * eps


@dataclass(frozen=True)
class Observation:
    samples: np.ndarray
    hypothesis: Hypothesis
    realized_noise_variance: float
    snr_db: Optional[float] = None

    def __post_init__(self) -> None:
        if len(self.samples) == 0:
            raise ValueError("observation must contain at least one sample")

    def __len__(self) -> int:
        return len(self.samples)


def generate_ofdm_frame(
    params: OfdmParams, target_power: float, rng: np.random.Generator
) -> np.ndarray:
    """Generate ``n_ofdm_symbols`` CP-OFDM symbols with random data.

    The frame starts at a symbol boundary. Its expected mean power equals
    ``target_power``; the empirical power fluctuates around it.
    """
    if target_power < 0:
        raise ValueError("target_power must be non-negative")
    scheme = params.modulation
    n_sym, n_fft, n_cp = params.n_ofdm_symbols, params.n_fft, params.n_cp
    n_bits = n_sym * params.n_used * scheme.bits_per_symbol
    packed = rng.integers(0, 256, size=(n_bits + 7) // 8, dtype=np.uint8)
    bits = np.unpackbits(packed)[:n_bits]
    data = map_bits_to_symbols(bits, scheme).reshape(n_sym, params.n_used)

    grid = np.zeros((n_sym, n_fft), dtype=np.complex128)
    grid[:, np.asarray(params.used_subcarriers) % n_fft] = data
    useful = np.fft.ifft(grid, axis=1, norm="ortho")
    if n_cp:
        useful = np.concatenate([useful[:, n_fft - n_cp :], useful], axis=1)
    # ortho IFFT leaves n_used/n_fft mean power per sample
    scale = math.sqrt(target_power * n_fft / params.n_used)
    return (useful * scale).ravel()


def draw_noise_variance(model: NoiseUncertaintyModel, rng: np.random.Generator) -> float:
    """Draw one observation's noise variance from the uncertainty interval."""
    if model.delta_db == 0:
        return float(model.sigma2_nominal)
    lo, hi = model.bounds
    return float(rng.uniform(lo, hi))


def complex_gaussian_noise(
    n: int, variance: float, rng: np.random.Generator
) -> np.ndarray:
    """Circularly symmetric complex Gaussian noise with ``E|w|^2 = variance``."""
    w = rng.standard_normal(2 * n).view(np.complex128)
    return w * math.sqrt(variance / 2.0)


def synthesize_observation(
    hypothesis: Union[Hypothesis, str],
    params: OfdmParams,
    snr_db: float,
    noise: NoiseUncertaintyModel,
    rng: np.random.Generator,
    n_samples: Optional[int] = None,
) -> Observation:
    """Draw one labeled observation.

    Draw order is fixed (variance, noise, then signal) so that two calls with
    identically seeded generators share the same noise realization whatever
    the modulation.

    Args:
        hypothesis: ``H0`` for noise only, ``H1`` for OFDM signal plus noise.
        params: frame geometry; the observation length is the frame length
            unless ``n_samples`` is given (H0 only).
        snr_db: signal power over the nominal noise power.
        noise: noise uncertainty model.
        rng: random stream.
        n_samples: override for the observation length under H0.
    """
    hypothesis = Hypothesis(hypothesis)
    n = params.frame_length if n_samples is None else int(n_samples)
    if hypothesis is Hypothesis.H1 and n != params.frame_length:
        raise ValueError("n_samples override is only supported under H0")
    variance = draw_noise_variance(noise, rng)
    x = complex_gaussian_noise(n, variance, rng)
    if hypothesis is Hypothesis.H1:
        signal_power = noise.sigma2_nominal * 10.0 ** (snr_db / 10.0)
        x += generate_ofdm_frame(params, signal_power, rng)
    return Observation(
        samples=x,
        hypothesis=hypothesis,
        realized_noise_variance=variance,
        snr_db=None if hypothesis is Hypothesis.H0 else float(snr_db),
    )


def remove_mean(samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples)
    return samples - samples.mean()
