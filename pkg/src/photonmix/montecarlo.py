"""Pulse-by-pulse Monte Carlo of the heralded HBT measurement.

Every simulated pulse is a heralded pulse: the herald detector fires on all
of them, so ``n_a`` equals the pulse count and the source's vacuum weight
(1 - eta) represents heralds whose signal photon was lost.  Per pulse the
total photon number is drawn from the exact distribution of the mixed state
(bunching lives in that distribution and cannot be produced by routing
photons classically from independent sources), each photon routes to one of
the two detectors with probability 1/2, and a threshold detector clicks when
at least one photon survives its efficiency thinning.

Random streams are counter-based: batch ``i`` of a run seeded ``s`` uses a
Philox generator keyed (s, i), so the merged counts are bit-identical no
matter how batches are distributed over workers.  Two statistically
equivalent samplers are provided:

* ``"pulse"``     literal per-pulse sampling as described above;
* ``"aggregate"`` per-photon-number-class multinomial tallies with the same
                  outcome distribution, whose cost is independent of the
                  pulse count.  Use it for very deep runs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analytic import DelayModel, SourceParams, k_of_delay
from .oracle import PartialStateSpec, photon_number_distribution

__all__ = [
    "DetectorConfig",
    "RunConfig",
    "CountRecord",
    "run_hbt",
    "run_delay_scan",
    "click_probabilities",
    "child_seed",
]

_M64 = (1 << 64) - 1
DEFAULT_BATCH = 1 << 20


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def child_seed(seed: int, index: int) -> int:
    """Stable 64-bit child seed for scan point ``index`` of a base seed."""
    return _splitmix64((seed & _M64) ^ _splitmix64(index + 1))


@dataclass(frozen=True)
class DetectorConfig:
    """Threshold (click / no-click) detectors behind the 50/50 splitter."""

    efficiency_b1: float = 1.0
    efficiency_b2: float = 1.0
    threshold: bool = True
    dark_b1: float = 0.0  # dark-count hook, zero in all standard runs
    dark_b2: float = 0.0

    def __post_init__(self):
        for name in ("efficiency_b1", "efficiency_b2", "dark_b1", "dark_b2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not self.threshold:
            raise ValueError("only threshold detectors are supported")


@dataclass(frozen=True)
class RunConfig:
    spec: PartialStateSpec
    pulses: int
    seed: int
    detectors: DetectorConfig = DetectorConfig()
    sampler: str = "pulse"
    batch_size: int = DEFAULT_BATCH

    def __post_init__(self):
        if self.pulses < 1:
            raise ValueError(f"pulses must be >= 1, got {self.pulses}")
        if self.sampler not in ("pulse", "aggregate"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class CountRecord:
    """Accumulated coincidence tallies of a heralded HBT run."""

    n_a: int
    n_ab1: int
    n_ab2: int
    n_ab1b2: int

    def __post_init__(self):
        counts = (self.n_a, self.n_ab1, self.n_ab2, self.n_ab1b2)
        if any(c < 0 for c in counts):
            raise ValueError(f"counts must be nonnegative, got {counts}")
        if self.n_ab1b2 > min(self.n_ab1, self.n_ab2):
            raise ValueError("triple coincidences exceed a pair count")
        if max(self.n_ab1, self.n_ab2) > self.n_a:
            raise ValueError("pair coincidences exceed the heralded count")

    def __add__(self, other: "CountRecord") -> "CountRecord":
        return CountRecord(
            self.n_a + other.n_a,
            self.n_ab1 + other.n_ab1,
            self.n_ab2 + other.n_ab2,
            self.n_ab1b2 + other.n_ab1b2,
        )


def _stream(seed: int, batch_index: int) -> np.random.Generator:
    key = np.array([seed & _M64, batch_index & _M64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_photon_numbers(rng, cumulative, size: int) -> np.ndarray:
    """Draw total photon numbers by inverting the cumulative distribution."""
    u = rng.random(size)
    return np.searchsorted(cumulative, u, side="right").astype(np.uint64)


def split_photons(rng, n: np.ndarray) -> np.ndarray:
    """Photons (out of ``n``) that take the first splitter output.

    Each photon routes independently with probability 1/2, sampled as the
    popcount of ``n`` fresh random bits; the remaining n - k photons take the
    other output, so photon number is conserved exactly.
    """
    bits = rng.integers(0, 1 << 62, size=n.size, dtype=np.uint64)
    mask = (np.uint64(1) << n) - np.uint64(1)
    return np.bitwise_count(bits & mask)


def detector_clicks(rng, k: np.ndarray, efficiency: float, dark: float) -> np.ndarray:
    """Threshold-detector clicks for ``k`` incident photons per pulse."""
    if efficiency == 1.0 and dark == 0.0:
        return k > 0
    p_click = 1.0 - (1.0 - efficiency) ** k.astype(np.float64) * (1.0 - dark)
    return rng.random(k.size) < p_click


def _batch_counts(rng, size, cumulative, det: DetectorConfig) -> CountRecord:
    n = sample_photon_numbers(rng, cumulative, size)
    k1 = split_photons(rng, n)
    k2 = n - k1
    c1 = detector_clicks(rng, k1, det.efficiency_b1, det.dark_b1)
    c2 = detector_clicks(rng, k2, det.efficiency_b2, det.dark_b2)
    return CountRecord(
        n_a=size,
        n_ab1=int(c1.sum()),
        n_ab2=int(c2.sum()),
        n_ab1b2=int((c1 & c2).sum()),
    )


def _class_outcome_probs(n: int, det: DetectorConfig) -> np.ndarray:
    """(both, only B1, only B2, neither) click probabilities for n photons."""
    no1 = (1.0 - det.efficiency_b1 / 2.0) ** n * (1.0 - det.dark_b1)
    no2 = (1.0 - det.efficiency_b2 / 2.0) ** n * (1.0 - det.dark_b2)
    lost = max(0.0, 1.0 - det.efficiency_b1 / 2.0 - det.efficiency_b2 / 2.0)
    neither = lost ** n * (1.0 - det.dark_b1) * (1.0 - det.dark_b2)
    p = np.array([1.0 - no1 - no2 + neither, no2 - neither, no1 - neither, neither])
    return np.clip(p, 0.0, 1.0)


def _aggregate_counts(config: RunConfig, p: np.ndarray) -> CountRecord:
    rng = _stream(config.seed, 0)
    per_class = rng.multinomial(config.pulses, p / p.sum())
    ab1 = ab2 = ab12 = 0
    for n, pulses_n in enumerate(per_class):
        if pulses_n == 0:
            continue
        probs = _class_outcome_probs(n, config.detectors)
        outcomes = rng.multinomial(int(pulses_n), probs / probs.sum())
        both, only1, only2, _ = (int(v) for v in outcomes)
        ab1 += both + only1
        ab2 += both + only2
        ab12 += both
    return CountRecord(config.pulses, ab1, ab2, ab12)


def run_hbt(config: RunConfig) -> CountRecord:
    """Simulate one heralded HBT run and return its coincidence tallies."""
    p = photon_number_distribution(config.spec)
    if config.sampler == "aggregate":
        return _aggregate_counts(config, p)
    cumulative = np.cumsum(p / p.sum())
    cumulative[-1] = 1.0
    total = CountRecord(0, 0, 0, 0)
    start = 0
    batch_index = 0
    while start < config.pulses:
        size = min(config.batch_size, config.pulses - start)
        rng = _stream(config.seed, batch_index)
        total = total + _batch_counts(rng, size, cumulative, config.detectors)
        start += size
        batch_index += 1
    return total


def run_delay_scan(base: RunConfig, delays, model: DelayModel):
    """Run one HBT simulation per delay, overlap set by the Gaussian model.

    Each point gets an independent child seed derived from (base.seed, index),
    so scans are reproducible and points are statistically independent.
    Returns [(delay_fs, CountRecord), ...] in the input order.
    """
    delays = list(delays)
    if not delays:
        raise ValueError("delays must be nonempty")
    out = []
    for i, tau in enumerate(delays):
        spec = replace(base.spec, k=k_of_delay(model, tau))
        config = replace(base, spec=spec, seed=child_seed(base.seed, i))
        out.append((tau, run_hbt(config)))
    return out


def click_probabilities(p: np.ndarray, det: DetectorConfig):
    """Exact per-pulse (P_b1, P_b2, P_coincidence) for a photon-number law."""
    n = np.arange(p.size)
    no1 = float(np.sum(p * (1.0 - det.efficiency_b1 / 2.0) ** n)) * (1.0 - det.dark_b1)
    no2 = float(np.sum(p * (1.0 - det.efficiency_b2 / 2.0) ** n)) * (1.0 - det.dark_b2)
    lost = max(0.0, 1.0 - det.efficiency_b1 / 2.0 - det.efficiency_b2 / 2.0)
    neither = (
        float(np.sum(p * lost ** n)) * (1.0 - det.dark_b1) * (1.0 - det.dark_b2)
    )
    return 1.0 - no1, 1.0 - no2, 1.0 - no1 - no2 + neither
