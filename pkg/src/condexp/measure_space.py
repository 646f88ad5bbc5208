"""Finite measure spaces, partition sub-sigma-algebras, and conditional expectation.

Everything here works on a finite set of points carrying strictly positive
masses, so "almost everywhere" statements become exact pointwise statements
and the conditional expectation with respect to a partition is plain weighted
block averaging.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: default absolute tolerance for support / level-set / clustering decisions
DEFAULT_TOL = 1e-9
#: default tolerance used when deciding whether a conditional moment vanishes
DEFAULT_SUPPORT_TOL = 1e-12


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FiniteMeasureSpace:
    """A finite set of points, each carrying a strictly positive mass."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise ValueError("point masses must be finite")
        if np.any(w <= 0.0):
            raise ValueError("point masses must be strictly positive")
        object.__setattr__(self, "weights", _frozen_array(w, float))

    @property
    def point_count(self) -> int:
        return int(self.weights.size)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def __eq__(self, other):
        if not isinstance(other, FiniteMeasureSpace):
            return NotImplemented
        return self.weights.shape == other.weights.shape and bool(
            np.all(self.weights == other.weights)
        )

    def __hash__(self):
        return hash(self.weights.tobytes())


@dataclass(frozen=True)
class SubSigmaAlgebra:
    """A partition of the points into atoms; the finite stand-in for a
    sub-sigma-algebra of the power set."""

    blocks: tuple
    point_count: int
    labels: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.point_count)
        if n < 1:
            raise ValueError("point_count must be >= 1")
        blocks = tuple(
            _frozen_array(np.sort(np.asarray(b, dtype=int)), int) for b in self.blocks
        )
        labels = np.full(n, -1, dtype=int)
        for k, b in enumerate(blocks):
            if b.size == 0:
                raise ValueError("blocks must be nonempty")
            if b.min() < 0 or b.max() >= n:
                raise ValueError(f"block {k} contains out-of-range indices")
            if np.unique(b).size != b.size or np.any(labels[b] != -1):
                raise ValueError("blocks must be pairwise disjoint without repeats")
            labels[b] = k
        if np.any(labels == -1):
            raise ValueError("blocks must cover every point")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "point_count", n)
        object.__setattr__(self, "labels", _frozen_array(labels, int))

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @staticmethod
    def discrete(point_count: int) -> "SubSigmaAlgebra":
        """The full algebra: every point is its own atom (E = identity)."""
        return SubSigmaAlgebra(tuple([i] for i in range(point_count)), point_count)

    @staticmethod
    def trivial(point_count: int) -> "SubSigmaAlgebra":
        """The trivial algebra: a single atom (E = global weighted mean)."""
        return SubSigmaAlgebra((list(range(point_count)),), point_count)


@dataclass(frozen=True)
class MeasurableFunction:
    """A complex-valued function given by one value per point of a space."""

    values: np.ndarray
    space: FiniteMeasureSpace

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1 or v.size != self.space.point_count:
            raise ValueError("value vector length must match the space")
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must be finite")
        object.__setattr__(self, "values", _frozen_array(v, complex))

    def conj(self) -> "MeasurableFunction":
        return MeasurableFunction(np.conj(self.values), self.space)

    def abs(self) -> "MeasurableFunction":
        return MeasurableFunction(np.abs(self.values), self.space)

    def real_values(self) -> np.ndarray:
        return self.values.real.copy()

    def __mul__(self, other):
        if isinstance(other, MeasurableFunction):
            _check_same_space(self, other)
            return MeasurableFunction(self.values * other.values, self.space)
        return MeasurableFunction(self.values * other, self.space)

    __rmul__ = __mul__

    def __add__(self, other):
        _check_same_space(self, other)
        return MeasurableFunction(self.values + other.values, self.space)

    def __sub__(self, other):
        _check_same_space(self, other)
        return MeasurableFunction(self.values - other.values, self.space)

    @staticmethod
    def constant(space: FiniteMeasureSpace, value: complex) -> "MeasurableFunction":
        return MeasurableFunction(np.full(space.point_count, value, dtype=complex), space)


class IndexSet:
    """A sorted, immutable set of point indices (supports of functions,
    level sets, etc.)."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[int]):
        self.members: tuple = tuple(sorted(set(int(i) for i in members)))

    def __contains__(self, i) -> bool:
        return int(i) in set(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other):
        if isinstance(other, IndexSet):
            return self.members == other.members
        if isinstance(other, (set, frozenset, tuple, list)):
            return set(self.members) == set(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"IndexSet({list(self.members)})"

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(set(self.members) & set(other.members))

    def indicator(self, point_count: int) -> np.ndarray:
        chi = np.zeros(point_count)
        chi[list(self.members)] = 1.0
        return chi

    def covers(self, point_count: int) -> bool:
        return len(self.members) == point_count


def _check_same_space(f: MeasurableFunction, g: MeasurableFunction) -> None:
    if f.space.point_count != g.space.point_count or not np.array_equal(
        f.space.weights, g.space.weights
    ):
        raise ValueError("functions live on different spaces")


def conditional_expectation(
    space: FiniteMeasureSpace, algebra: SubSigmaAlgebra, f: MeasurableFunction
) -> MeasurableFunction:
    """Weighted block average of ``f`` over the atoms of ``algebra``.

    The result is constant on each atom B and satisfies the averaging
    identity sum_B (Ef) mu = sum_B f mu exactly.
    """
    if f.space.point_count != space.point_count:
        raise ValueError("function does not live on the given space")
    if algebra.point_count != space.point_count:
        raise ValueError("algebra does not partition the given space")
    mu = space.weights
    labels = algebra.labels
    k = algebra.block_count
    block_mass = np.bincount(labels, weights=mu, minlength=k)
    weighted = mu * f.values
    block_sum = np.bincount(labels, weights=weighted.real, minlength=k).astype(complex)
    block_sum += 1j * np.bincount(labels, weights=weighted.imag, minlength=k)
    means = block_sum / block_mass
    return MeasurableFunction(means[labels], space)


def weighted_inner(f: MeasurableFunction, g: MeasurableFunction) -> complex:
    """The L2(mu) inner product sum_i f_i conj(g_i) mu_i."""
    _check_same_space(f, g)
    return complex(np.sum(f.values * np.conj(g.values) * f.space.weights))


def weighted_norm(f: MeasurableFunction) -> float:
    return float(np.sqrt(max(weighted_inner(f, f).real, 0.0)))


def support(f: MeasurableFunction, tol: float = DEFAULT_SUPPORT_TOL) -> IndexSet:
    """Indices where |f| exceeds ``tol``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return IndexSet(np.nonzero(np.abs(f.values) > tol)[0])


def ess_sup_norm(f: MeasurableFunction) -> float:
    """max_i |f_i|; every point has positive mass, so the essential sup is
    the plain maximum."""
    return float(np.max(np.abs(f.values)))


def ess_range(f: MeasurableFunction, tol: float = DEFAULT_TOL) -> list:
    """The attained values of ``f``, merged into clusters of diameter ~tol.

    Each cluster is represented by its centroid. On a finite space with
    positive masses the essential range is exactly the attained-value set.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return cluster_values(f.values, tol)


def cluster_values(values: Sequence[complex], tol: float) -> list:
    """Greedy tolerance clustering of complex scalars; returns centroids."""
    vals = np.asarray(values, dtype=complex)
    order = np.lexsort((vals.imag, vals.real))
    reps: list = []
    counts: list = []
    for v in vals[order]:
        placed = False
        for j, r in enumerate(reps):
            if abs(v - r) <= tol:
                # running centroid keeps the representative inside the cluster
                counts[j] += 1
                reps[j] = r + (v - r) / counts[j]
                placed = True
                break
        if not placed:
            reps.append(complex(v))
            counts.append(1)
    return reps


def level_set(
    f: MeasurableFunction, lam: complex, tol: float = DEFAULT_TOL
) -> IndexSet:
    """Indices where f is within ``tol`` of ``lam``; nonempty iff the level
    set has positive measure."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return IndexSet(np.nonzero(np.abs(f.values - lam) <= tol)[0])


def is_algebra_measurable(
    f: MeasurableFunction, algebra: SubSigmaAlgebra, tol: float = DEFAULT_TOL
) -> bool:
    """True iff ``f`` varies by at most ``tol`` inside every atom."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    for b in algebra.blocks:
        block_vals = f.values[b]
        if block_vals.size > 1:
            spread = np.abs(block_vals[:, None] - block_vals[None, :]).max()
            if spread > tol:
                return False
    return True
