"""Exact g2(0) ground truth from a two-mode truncated Fock-space construction.

The mixed field is modeled with two orthogonal temporal modes: mode 0 carries
the coherent state, and the heralded photon is created in the superposition
mode  c^dag = sqrt(k) a^dag + sqrt(1-k) b^dag,  so ``k`` is exactly the
overlap between the heralded photon's mode and the coherent mode.

Two conventions matter and are fixed here:

* The heralded component enters the mixture with its stimulated-emission
  enhancement: the raw photon-added vector has squared norm 1 + k|alpha|^2,
  and that factor multiplies the heralding weight before the global
  renormalization.  This is what makes the k = 1 state reduce to the exact
  photon-added-coherent-state mixture.
* Detection does not resolve the temporal modes, so all observables are
  moments of the total photon number N = n_a + n_b.

No weak-field expansion is used anywhere in this module; results are exact
on the truncated space and serve as the reference for both the closed-form
models and the Monte Carlo counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import SourceParams
from .fock import (
    CutoffError,
    DensityMatrix,
    HilbertSpace,
    coherent_state,
    create,
    mix,
    normally_ordered_moment,
    pure_moment,
    vacuum,
)

__all__ = [
    "MODE_OVERLAP",
    "MODE_ORTHO",
    "PartialStateSpec",
    "build_mixed_state",
    "g2_of_density",
    "g2_oracle",
    "bunching_coefficient",
    "photon_number_distribution",
]

MODE_OVERLAP = 0  # shares the coherent state's mode
MODE_ORTHO = 1    # orthogonal temporal mode

DEFAULT_N_MAX = 6

# Dropped creation weight above this is treated as a cutoff failure.
DROP_TOL = 1e-9


@dataclass(frozen=True)
class PartialStateSpec:
    """Source strengths plus overlap ``k`` and the Fock cutoff."""

    params: SourceParams
    k: float
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"k must be in [0, 1], got {self.k}")
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace(mode_count=2, n_max=self.n_max)


def _added_photon_vector(spec: PartialStateSpec):
    """Unnormalized heralded component: (sqrt(k) a^dag + sqrt(1-k) b^dag)|coh>."""
    space = spec.space
    alpha = math.sqrt(spec.params.alpha_sq)
    base = coherent_state(space, MODE_OVERLAP, alpha)
    added = (
        math.sqrt(spec.k) * create(base, MODE_OVERLAP)
        + math.sqrt(1.0 - spec.k) * create(base, MODE_ORTHO)
    )
    if added.dropped_weight > DROP_TOL:
        raise CutoffError(
            f"creation dropped weight {added.dropped_weight:.3e} above {DROP_TOL:g}; "
            f"raise n_max"
        )
    return base, added


def build_mixed_state(spec: PartialStateSpec) -> DensityMatrix:
    """Density matrix of the heralded-photon / coherent-state mixture.

    Mixture weights are (1 - eta) on the bare coherent state and
    eta * ||added||^2 on the (normalized) photon-added component; the squared
    norm carries the bunching enhancement of the added photon.
    """
    base, added = _added_photon_vector(spec)
    eta = spec.params.eta
    enhancement = added.norm() ** 2
    return mix([(1.0 - eta, base), (eta * enhancement, added)])


def _total_number_moments(rho: DensityMatrix):
    """(<N>, <:N^2:>) for N = n_a + n_b."""
    mean = (
        normally_ordered_moment(rho, ((1, 1), (0, 0)))
        + normally_ordered_moment(rho, ((0, 0), (1, 1)))
    ).real
    pairs = (
        normally_ordered_moment(rho, ((2, 2), (0, 0)))
        + 2.0 * normally_ordered_moment(rho, ((1, 1), (1, 1)))
        + normally_ordered_moment(rho, ((0, 0), (2, 2)))
    ).real
    return mean, pairs


def g2_of_density(rho: DensityMatrix) -> float:
    """g2(0) = <:N^2:> / <N>^2 of a two-mode state, N the total number."""
    mean, pairs = _total_number_moments(rho)
    if mean == 0.0:
        raise ValueError("g2 undefined for a state with zero mean photon number")
    return pairs / mean ** 2


def g2_oracle(spec: PartialStateSpec) -> float:
    """Exact g2(0) of the mixture, free of any weak-field approximation."""
    return g2_of_density(build_mixed_state(spec))


def bunching_coefficient(k: float) -> float:
    """Two-photon weight 2(1+k) measured on the raw interference product.

    Constructed operationally:   psi = a^dag (sqrt(k) a^dag + sqrt(1-k) b^dag)|0>
    and evaluated as <psi|:N^2:|psi> without normalizing psi; the enhanced
    norm of the bunched component is the effect being measured.
    """
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"k must be in [0, 1], got {k}")
    space = HilbertSpace(mode_count=2, n_max=2)
    vac = vacuum(space)
    one = math.sqrt(k) * create(vac, MODE_OVERLAP) + math.sqrt(1.0 - k) * create(
        vac, MODE_ORTHO
    )
    two = create(one, MODE_OVERLAP)
    c2 = (
        pure_moment(two, ((2, 2), (0, 0)))
        + 2.0 * pure_moment(two, ((1, 1), (1, 1)))
        + pure_moment(two, ((0, 0), (2, 2)))
    ).real
    return c2


def photon_number_distribution(spec: PartialStateSpec) -> np.ndarray:
    """Probabilities p(n) of the total photon number, n = 0 .. 2*n_max."""
    rho = build_mixed_state(spec)
    diag = rho.diagonal()
    totals = rho.space.occupations().sum(axis=1)
    p = np.bincount(totals, weights=diag, minlength=2 * spec.n_max + 1)
    return np.clip(p, 0.0, None)
