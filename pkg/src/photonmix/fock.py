"""Truncated Fock-space linear algebra for up to three bosonic modes.

Conventions used throughout:

* A state lives in a ``HilbertSpace(mode_count, n_max)``.  Amplitudes are a
  dense complex vector over the occupation basis |n_0, ..., n_{M-1}>,
  flattened in C order (mode 0 varies slowest).
* Operators act by index arithmetic on the amplitude vector; no operator
  matrices are stored.  At the default cutoff the dimension is at most
  7**3 = 343, so dense vectors are cheap and easy to verify.
* Creating a photon at the cutoff level silently drops that amplitude; the
  lost probability weight is recorded on the returned vector as
  ``dropped_weight`` so the caller can decide whether it matters.
* All values are immutable after construction.  Arithmetic returns new
  objects, which makes states safe to share across parallel workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "CutoffError",
    "HilbertSpace",
    "FockVector",
    "DensityMatrix",
    "vacuum",
    "number_state",
    "coherent_state",
    "create",
    "annihilate",
    "mix",
    "pure_moment",
    "normally_ordered_moment",
]

# Weight beyond which a truncated construction is considered unusable.
TRUNCATION_TOL = 1e-9


class CutoffError(Exception):
    """Raised when the photon-number cutoff is too small for the request."""


@dataclass(frozen=True)
class HilbertSpace:
    """Tensor product of ``mode_count`` oscillators truncated at ``n_max``."""

    mode_count: int
    n_max: int

    def __post_init__(self):
        if not 1 <= self.mode_count <= 3:
            raise ValueError(f"mode_count must be in 1..3, got {self.mode_count}")
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")

    @property
    def dimension(self) -> int:
        return (self.n_max + 1) ** self.mode_count

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_max + 1,) * self.mode_count

    def occupations(self) -> np.ndarray:
        """(dimension, mode_count) array of occupation numbers per basis state."""
        grids = np.indices(self.shape).reshape(self.mode_count, -1)
        return grids.T

    def check_mode(self, mode: int) -> int:
        if not 0 <= mode < self.mode_count:
            raise ValueError(f"mode {mode} out of range for {self.mode_count} modes")
        return mode


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockVector:
    """Pure state (possibly unnormalized) as a dense amplitude vector.

    ``dropped_weight`` tracks probability weight lost to the cutoff, either
    from coherent-state tail truncation or from creation at the top level.
    """

    space: HilbertSpace
    amplitudes: np.ndarray
    dropped_weight: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dimension,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, "
                f"expected ({self.space.dimension},)"
            )
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return replace(self, amplitudes=self.amplitudes / n)

    def inner(self, other: "FockVector") -> complex:
        self._check_space(other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, occupations) -> complex:
        """Amplitude on the basis state with the given per-mode occupations."""
        idx = int(np.ravel_multi_index(tuple(occupations), self.space.shape))
        return complex(self.amplitudes[idx])

    def to_density(self) -> "DensityMatrix":
        """Normalized projector |psi><psi| / <psi|psi>."""
        v = self.normalize().amplitudes
        return DensityMatrix(self.space, np.outer(v, v.conj()))

    def _check_space(self, other):
        if other.space != self.space:
            raise ValueError("operands live in different Hilbert spaces")

    def __add__(self, other: "FockVector") -> "FockVector":
        self._check_space(other)
        return FockVector(
            self.space,
            self.amplitudes + other.amplitudes,
            self.dropped_weight + other.dropped_weight,
        )

    def __sub__(self, other: "FockVector") -> "FockVector":
        self._check_space(other)
        return FockVector(
            self.space,
            self.amplitudes - other.amplitudes,
            self.dropped_weight + other.dropped_weight,
        )

    def __mul__(self, c) -> "FockVector":
        return FockVector(
            self.space, self.amplitudes * c, abs(c) ** 2 * self.dropped_weight
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state as a dense complex matrix in the occupation basis."""

    space: HilbertSpace
    elements: np.ndarray

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        d = self.space.dimension
        if el.shape != (d, d):
            raise ValueError(f"elements have shape {el.shape}, expected ({d}, {d})")
        object.__setattr__(self, "elements", _readonly(el))

    def trace(self) -> float:
        return float(np.trace(self.elements).real)

    def diagonal(self) -> np.ndarray:
        return self.elements.diagonal().real.copy()

    def validate(self, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-10):
        """Check Hermiticity, unit trace and positivity; raise on violation."""
        el = self.elements
        herm = np.abs(el - el.conj().T).max()
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: max asymmetry {herm:.3e}")
        tr = np.trace(el).real
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr!r} differs from 1 beyond {trace_tol}")
        evals = np.linalg.eigvalsh((el + el.conj().T) / 2.0)
        if evals.min() < eig_floor:
            raise ValueError(f"negative eigenvalue {evals.min():.3e}")
        return self


def vacuum(space: HilbertSpace) -> FockVector:
    amps = np.zeros(space.dimension, dtype=complex)
    amps[0] = 1.0
    return FockVector(space, amps)


def number_state(space: HilbertSpace, occupations) -> FockVector:
    """Basis state |n_0, ..., n_{M-1}>."""
    occ = tuple(int(n) for n in occupations)
    if len(occ) != space.mode_count:
        raise ValueError("one occupation number required per mode")
    if any(n < 0 or n > space.n_max for n in occ):
        raise CutoffError(f"occupations {occ} exceed cutoff {space.n_max}")
    amps = np.zeros(space.dimension, dtype=complex)
    amps[np.ravel_multi_index(occ, space.shape)] = 1.0
    return FockVector(space, amps)


def coherent_state(space: HilbertSpace, mode: int, alpha: complex) -> FockVector:
    """Coherent state with amplitude ``alpha`` in ``mode``, vacuum elsewhere.

    The number-basis tail beyond ``n_max`` is cut and the state renormalized;
    the removed weight is reported on ``dropped_weight``.  Raises
    ``CutoffError`` when the cutoff is too small to represent the state
    (mean photon number above n_max/4, or tail weight above 1e-9).
    """
    mode = space.check_mode(mode)
    mean = abs(alpha) ** 2
    if mean > space.n_max / 4.0:
        raise CutoffError(
            f"|alpha|^2 = {mean:g} exceeds n_max/4 = {space.n_max / 4:g}"
        )
    ns = np.arange(space.n_max + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(ns[1:]))))
    coeffs = np.exp(-mean / 2.0) * alpha ** ns / np.exp(log_fact / 2.0)
    kept = float(np.sum(np.abs(coeffs) ** 2))
    truncated = max(0.0, 1.0 - kept)
    if truncated > TRUNCATION_TOL:
        raise CutoffError(
            f"coherent tail weight {truncated:.3e} above {TRUNCATION_TOL:g}; "
            f"raise n_max"
        )
    block = np.zeros(space.shape, dtype=complex)
    index = [0] * space.mode_count
    index[mode] = slice(None)
    block[tuple(index)] = coeffs / math.sqrt(kept)
    return FockVector(space, block.reshape(-1), dropped_weight=truncated)


def _levels_first(amps: np.ndarray, space: HilbertSpace, mode: int) -> np.ndarray:
    """View of the amplitude vector as (levels of `mode`, everything else)."""
    arr = amps.reshape(space.shape)
    return np.moveaxis(arr, mode, 0).reshape(space.n_max + 1, -1)


def _from_levels_first(block: np.ndarray, space: HilbertSpace, mode: int) -> np.ndarray:
    rest = tuple(s for i, s in enumerate(space.shape) if i != mode)
    arr = block.reshape((space.n_max + 1,) + rest)
    return np.moveaxis(arr, 0, mode).reshape(-1)


def create(state: FockVector, mode: int) -> FockVector:
    """Apply the creation operator: a^dag |n> = sqrt(n+1) |n+1>.

    The result is unnormalized by design.  Weight raised past the cutoff is
    dropped and reported via ``dropped_weight``.
    """
    space = state.space
    mode = space.check_mode(mode)
    src = _levels_first(state.amplitudes, space, mode)
    out = np.zeros_like(src)
    factors = np.sqrt(np.arange(1, space.n_max + 1))
    out[1:] = src[:-1] * factors[:, None]
    dropped = float((space.n_max + 1) * np.sum(np.abs(src[-1]) ** 2))
    return FockVector(
        space,
        _from_levels_first(out, space, mode),
        dropped_weight=state.dropped_weight + dropped,
    )


def annihilate(state: FockVector, mode: int) -> FockVector:
    """Apply the annihilation operator: a |n> = sqrt(n) |n-1>, a |0> = 0."""
    space = state.space
    mode = space.check_mode(mode)
    src = _levels_first(state.amplitudes, space, mode)
    out = np.zeros_like(src)
    factors = np.sqrt(np.arange(1, space.n_max + 1))
    out[:-1] = src[1:] * factors[:, None]
    return FockVector(
        space, _from_levels_first(out, space, mode), state.dropped_weight
    )


def mix(components) -> DensityMatrix:
    """Convex combination of states, renormalized to unit trace.

    ``components`` is an iterable of ``(weight, state)`` pairs where each
    state is a ``FockVector`` or ``DensityMatrix``.  Pure components are
    normalized before mixing, so stimulated-emission style enhancements must
    be passed explicitly through the weights.
    """
    components = list(components)
    if not components:
        raise ValueError("mix() needs at least one component")
    space = components[0][1].space
    total = 0.0
    acc = np.zeros((space.dimension, space.dimension), dtype=complex)
    for weight, state in components:
        if weight < 0:
            raise ValueError(f"negative weight {weight}")
        if state.space != space:
            raise ValueError("mix components live in different Hilbert spaces")
        if weight == 0:
            continue
        if isinstance(state, FockVector):
            v = state.normalize().amplitudes
            acc += weight * np.outer(v, v.conj())
        else:
            acc += (weight / state.trace()) * state.elements
        total += weight
    if total == 0.0:
        raise ValueError("all mixture weights are zero")
    acc /= total
    # guard against accumulated rounding asymmetry
    acc = (acc + acc.conj().T) / 2.0
    return DensityMatrix(space, acc)


def _moment_action(space: HilbertSpace, powers):
    """Index map and coefficients of Prod_m (a_m^dag)^p a_m^q on basis states.

    Returns (targets, coeffs) such that O |j> = coeffs[j] |targets[j]>, with
    coeffs[j] = 0 where the string annihilates the state or would leave the
    truncated space.
    """
    powers = list(powers)
    if len(powers) != space.mode_count:
        raise ValueError("one (creations, annihilations) pair required per mode")
    for p, q in powers:
        if p < 0 or q < 0:
            raise ValueError("operator powers must be nonnegative")
        if p > space.n_max or q > space.n_max:
            raise CutoffError(
                f"operator power {max(p, q)} exceeds cutoff {space.n_max}"
            )
    occ = space.occupations()
    coeffs = np.ones(space.dimension)
    target = occ.copy()
    for m, (p, q) in enumerate(powers):
        n = occ[:, m]
        ok = n >= q
        coeffs = np.where(ok, coeffs, 0.0)
        level = np.where(ok, n - q, 0)
        for j in range(q):  # sqrt(n (n-1) ... (n-q+1))
            coeffs *= np.where(ok, np.sqrt(np.maximum(n - j, 0)), 0.0)
        for j in range(p):  # sqrt((n-q+1) ... (n-q+p))
            coeffs *= np.sqrt(level + j + 1)
        level = level + p
        fits = level <= space.n_max
        coeffs = np.where(fits, coeffs, 0.0)
        target[:, m] = np.where(fits, level, 0)
    targets = np.ravel_multi_index(target.T, space.shape)
    return targets, coeffs


def pure_moment(state: FockVector, powers) -> complex:
    """<psi| Prod_m (a_m^dag)^p_m (a_m)^q_m |psi> without normalizing psi."""
    targets, coeffs = _moment_action(state.space, powers)
    v = state.amplitudes
    return complex(np.sum(v[targets].conj() * coeffs * v))


def normally_ordered_moment(rho: DensityMatrix, powers) -> complex:
    """Tr(rho Prod_m (a_m^dag)^p_m (a_m)^q_m), exact on the truncated space.

    ``powers`` is a per-mode sequence of (creations, annihilations), e.g.
    ((2, 2),) for <a^dag a^dag a a> on a single-mode space.
    """
    targets, coeffs = _moment_action(rho.space, powers)
    j = np.arange(rho.space.dimension)
    return complex(np.sum(coeffs * rho.elements[j, targets]))
