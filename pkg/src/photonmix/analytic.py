"""Closed-form second-order coherence models for the single-photon/coherent mix.

All functions are pure and operate on scalars.  The mixing ratio ``r`` is the
coherent mean photon number divided by the heralded mean photon number; ``k``
is the mode overlap (indistinguishability) between the two sources.  The
limits r = 0 and r = infinity are handled explicitly so sweeps over extreme
grids never hit 0/0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SourceParams",
    "DelayModel",
    "g2_distinguishable",
    "g2_indistinguishable_full",
    "g2_weakfield_k1",
    "g2_partial",
    "g2_full_eta",
    "k_of_delay",
    "transition_boundary",
]


@dataclass(frozen=True)
class SourceParams:
    """Mean photon numbers of the two sources.

    ``eta``      heralded single-photon source (probability of the photon
                 actually being there in a heralded pulse)
    ``alpha_sq`` coherent source |alpha|^2
    """

    eta: float
    alpha_sq: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")
        if self.alpha_sq < 0.0:
            raise ValueError(f"alpha_sq must be >= 0, got {self.alpha_sq}")

    def ratio(self) -> float:
        """Mixing ratio r = |alpha|^2 / eta; undefined for a coherent-only mix."""
        if self.eta == 0.0:
            raise ValueError("mixing ratio is undefined at eta = 0")
        return self.alpha_sq / self.eta


@dataclass(frozen=True)
class DelayModel:
    """Gaussian overlap-vs-delay model: k(tau) = k_peak * exp(-((tau-center)/tau0)^2).

    ``tau0`` and ``center`` are in femtoseconds.
    """

    k_peak: float
    tau0: float
    center: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.k_peak <= 1.0:
            raise ValueError(f"k_peak must be in [0, 1], got {self.k_peak}")
        if self.tau0 <= 0.0:
            raise ValueError(f"tau0 must be > 0, got {self.tau0}")


def _check_r(r: float) -> float:
    if r < 0.0:
        raise ValueError(f"mixing ratio must be >= 0, got {r}")
    return r


def _check_k(k: float) -> float:
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"indistinguishability must be in [0, 1], got {k}")
    return k


def g2_distinguishable(r: float) -> float:
    """g2(0) of the fully distinguishable mix: (r^2 + 2r) / (1+r)^2.

    Always below 1 for finite r; approaches the coherent value 1 as r grows.
    """
    _check_r(r)
    if r == 0.0:
        return 0.0
    if math.isinf(r):
        return 1.0
    return (r * r + 2.0 * r) / (1.0 + r) ** 2


def g2_indistinguishable_full(params: SourceParams) -> float:
    """g2(0) of the fully overlapping mix, exact in eta and |alpha|^2.

    The heralded component contributes a photon-added coherent state whose
    two-photon amplitude is enhanced by stimulated emission; no weak-field
    approximation is made here.
    """
    eta, a2 = params.eta, params.alpha_sq
    if a2 == 0.0:
        return 0.0
    num = (a2 ** 2 + 4 * eta * a2 + 4 * eta * a2 ** 2 + eta * a2 ** 3) * (1 + eta * a2)
    den = (eta + a2 + 2 * eta * a2 + eta * a2 ** 2) ** 2
    return num / den


def g2_weakfield_k1(r: float) -> float:
    """Weak-field g2(0) at full overlap: (r^2 + 4r) / (1+r)^2.

    Crosses 1 at r = 0.5 and peaks at 4/3 for r = 2.
    """
    _check_r(r)
    if r == 0.0:
        return 0.0
    if math.isinf(r):
        return 1.0
    return (r * r + 4.0 * r) / (1.0 + r) ** 2


def g2_partial(r: float, k: float) -> float:
    """Weak-field g2(0) at partial overlap k: (r^2 + 2(1+k)r) / (1+r)^2."""
    _check_r(r)
    _check_k(k)
    if r == 0.0:
        return 0.0
    if math.isinf(r):
        return 1.0
    return (r * r + 2.0 * (1.0 + k) * r) / (1.0 + r) ** 2


def g2_full_eta(r: float, k: float, eta: float) -> float:
    """g2(0) keeping the heralded mean photon number eta to first order.

    ((1-eta) r^2 + 2(1+k) r) / ((1-eta) r + 1)^2; reduces to ``g2_partial``
    as eta -> 0.
    """
    _check_r(r)
    _check_k(k)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    if r == 0.0:
        return 0.0
    if math.isinf(r):
        return 1.0 if eta < 1.0 else math.inf
    return ((1.0 - eta) * r * r + 2.0 * (1.0 + k) * r) / ((1.0 - eta) * r + 1.0) ** 2


def k_of_delay(model: DelayModel, tau: float) -> float:
    """Overlap at relative delay ``tau`` (fs) under the Gaussian model."""
    u = (tau - model.center) / model.tau0
    return model.k_peak * math.exp(-u * u)


def transition_boundary(k: float):
    """Mixing ratio where the weak-field g2(0) crosses 1, i.e. r* = 1/(2k).

    Returns ``None`` for k = 0: the fully distinguishable mix never exceeds
    g2 = 1, so there is no crossing to report.
    """
    _check_k(k)
    if k == 0.0:
        return None
    return 1.0 / (2.0 * k)
