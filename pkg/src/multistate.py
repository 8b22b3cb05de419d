#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Multipartite state representation.

Composite spaces C^{d_1} ⊗ ... ⊗ C^{d_N} are described by `SubsystemDims`.
Basis states are addressed by `MultiIndex` values whose flat encoding is
row-major with subsystem 1 most significant:

    flat = Σ_m i_m · Π_{k>m} d_k

Subsystems are 1-indexed in every public signature.
"""

import functools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

logger = logging.getLogger(__name__)

DEFAULT_MAX_TOTAL_DIM = 4096
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
PROBABILITY_FLOOR = 1e-14
LBPS_THRESHOLD = 1e-8


class StateInvariantError(ValueError):
    """A state or operator violates one of its construction invariants."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class SubsystemDims:
    """
    Local dimensions (d_1, ..., d_N) of a composite space.

    Args:
        dims: Local dimensions, each at least 2
        max_total_dim: Cap on the product of the local dimensions

    Raises:
        StateInvariantError: If a dimension is below 2, no subsystem is given,
            or the total dimension exceeds the cap
    """

    def __init__(self, dims: Sequence[int], max_total_dim: int = DEFAULT_MAX_TOTAL_DIM):
        dims_tuple = tuple(int(d) for d in dims)
        if not dims_tuple:
            raise StateInvariantError("dims", "at least one subsystem is required")
        for position, d in enumerate(dims_tuple, start=1):
            if d < 2:
                raise StateInvariantError("dims", f"subsystem {position} has dimension {d} < 2")

        total = math.prod(dims_tuple)
        if total > max_total_dim:
            raise StateInvariantError(
                "dimension_cap", f"total dimension {total} exceeds the cap {max_total_dim}"
            )

        self._dims = dims_tuple
        self._total = total
        self._max_total_dim = max_total_dim

    @property
    def dims(self) -> Tuple[int, ...]:
        return self._dims

    @property
    def n_subsystems(self) -> int:
        return len(self._dims)

    @property
    def total_dim(self) -> int:
        return self._total

    @property
    def max_total_dim(self) -> int:
        return self._max_total_dim

    def dim(self, p: int) -> int:
        """Local dimension of subsystem p (1-indexed)."""
        return self._dims[self.axis(p)]

    def axis(self, p: int) -> int:
        """
        Convert a 1-indexed subsystem number to a tensor axis.

        Raises:
            ValueError: If p is not in 1..N
        """
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise ValueError(f"subsystem index must be an integer, got {p!r}")
        if not 1 <= p <= len(self._dims):
            raise ValueError(f"subsystem {p} out of range 1..{len(self._dims)}")
        return int(p) - 1

    def encode(self, indices: Sequence[int]) -> int:
        """Flat index of the multi-index (i_1, ..., i_N)."""
        if len(indices) != len(self._dims):
            raise ValueError(f"expected {len(self._dims)} indices, got {len(indices)}")
        for position, (i, d) in enumerate(zip(indices, self._dims), start=1):
            if not 0 <= int(i) < d:
                raise ValueError(f"index {i} out of range for subsystem {position} (dimension {d})")
        return int(np.ravel_multi_index(tuple(int(i) for i in indices), self._dims))

    def decode(self, flat: int) -> "MultiIndex":
        """Multi-index of a flat basis position."""
        if not 0 <= int(flat) < self._total:
            raise ValueError(f"flat index {flat} out of range 0..{self._total - 1}")
        digits = np.unravel_index(int(flat), self._dims)
        return MultiIndex(self, tuple(int(i) for i in digits))

    def restrict(self, keep: Iterable[int]) -> "SubsystemDims":
        """Dimensions of the kept subsystems, in their original order."""
        axes = sorted({self.axis(p) for p in keep})
        return SubsystemDims([self._dims[a] for a in axes], self._max_total_dim)

    def __iter__(self) -> Iterator[int]:
        return iter(self._dims)

    def __len__(self) -> int:
        return len(self._dims)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubsystemDims):
            return NotImplemented
        return self._dims == other._dims

    def __hash__(self) -> int:
        return hash(self._dims)

    def __repr__(self) -> str:
        return f"SubsystemDims({list(self._dims)})"


DimsLike = Union[SubsystemDims, Sequence[int]]


def as_dims(dims: DimsLike) -> SubsystemDims:
    if isinstance(dims, SubsystemDims):
        return dims
    return SubsystemDims(dims)


@dataclass(frozen=True)
class MultiIndex:
    """Basis label |i_1 ... i_N⟩ of a composite space."""

    dims: SubsystemDims
    indices: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.indices) != self.dims.n_subsystems:
            raise ValueError(
                f"multi-index of length {len(self.indices)} for {self.dims.n_subsystems} subsystems"
            )
        for position, (i, d) in enumerate(zip(self.indices, self.dims.dims), start=1):
            if not 0 <= i < d:
                raise ValueError(f"index {i} out of range for subsystem {position} (dimension {d})")

    @property
    def flat(self) -> int:
        return self.dims.encode(self.indices)


def hamming_distance(i: MultiIndex, j: MultiIndex) -> int:
    """Number of subsystems in which the two multi-indices differ."""
    if i.dims != j.dims:
        raise ValueError(f"dimension mismatch: {i.dims!r} vs {j.dims!r}")
    return sum(1 for a, b in zip(i.indices, j.indices) if a != b)


class PureState:
    """
    Normalized state vector on a composite space.

    Args:
        dims: Subsystem dimensions
        amplitudes: Complex amplitudes in flat (row-major) order
        renormalize: Divide by the norm instead of rejecting unnormalized input
        tol: Tolerance on Σ|amplitude|² = 1
    """

    def __init__(self, dims: DimsLike, amplitudes: Union[Sequence[complex], np.ndarray],
                 renormalize: bool = False, tol: float = NORM_TOL):
        self._dims = as_dims(dims)
        vector = np.array(amplitudes, dtype=complex).reshape(-1)
        if vector.shape != (self._dims.total_dim,):
            raise StateInvariantError(
                "shape", f"{vector.size} amplitudes for total dimension {self._dims.total_dim}"
            )
        if not np.isfinite(vector).all():
            raise StateInvariantError("finite", "amplitudes contain NaN or infinity")

        norm_sq = float(np.vdot(vector, vector).real)
        if renormalize:
            if norm_sq <= PROBABILITY_FLOOR:
                raise StateInvariantError("normalization", "the zero vector cannot be normalized")
            vector = vector / math.sqrt(norm_sq)
        elif abs(norm_sq - 1.0) > tol:
            raise StateInvariantError(
                "normalization", f"sum of |amplitude|^2 is {norm_sq!r}, expected 1 within {tol}"
            )

        vector.flags.writeable = False
        self._amplitudes = vector

    @classmethod
    def from_terms(cls, dims: DimsLike, terms: Dict[Tuple[int, ...], complex],
                   renormalize: bool = False) -> "PureState":
        """Build a state from {(i_1, ..., i_N): amplitude}; absent terms are zero."""
        space = as_dims(dims)
        vector = np.zeros(space.total_dim, dtype=complex)
        for indices, amplitude in terms.items():
            vector[space.encode(indices)] += amplitude
        return cls(space, vector, renormalize=renormalize)

    @property
    def dims(self) -> SubsystemDims:
        return self._dims

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def amplitude(self, indices: Sequence[int]) -> complex:
        return complex(self._amplitudes[self._dims.encode(indices)])

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self._amplitudes.reshape(self._dims.dims)

    def nonzero_terms(self, threshold: float = LBPS_THRESHOLD) -> List[Tuple[Tuple[int, ...], complex]]:
        """(multi-index, amplitude) pairs with modulus above threshold, in flat order."""
        terms = []
        for flat in np.flatnonzero(np.abs(self._amplitudes) > threshold):
            terms.append((self._dims.decode(int(flat)).indices, complex(self._amplitudes[flat])))
        return terms

    def __repr__(self) -> str:
        return f"PureState(dims={list(self._dims.dims)}, terms={len(self.nonzero_terms())})"


class Operator:
    """
    Hermitian, unit-trace matrix on a composite space.

    Shared base for density operators and their partial transposes. The
    matrix is copied and frozen at construction.
    """

    def __init__(self, dims: DimsLike, matrix: Union[Sequence[Sequence[complex]], np.ndarray],
                 hermitian_tol: float = HERMITIAN_TOL, trace_tol: float = NORM_TOL):
        self._dims = as_dims(dims)
        total = self._dims.total_dim
        m = np.array(matrix, dtype=complex)
        if m.shape != (total, total):
            raise StateInvariantError("shape", f"matrix shape {m.shape} for total dimension {total}")
        if not np.isfinite(m).all():
            raise StateInvariantError("finite", "matrix contains NaN or infinity")

        asymmetry = float(np.max(np.abs(m - m.conj().T)))
        if asymmetry > hermitian_tol:
            raise StateInvariantError(
                "hermitian", f"max |M - M^H| = {asymmetry:.3e} exceeds {hermitian_tol}"
            )

        trace = complex(np.trace(m))
        if abs(trace - 1.0) > trace_tol:
            raise StateInvariantError("unit_trace", f"trace is {trace!r}, expected 1 within {trace_tol}")

        m.flags.writeable = False
        self._matrix = m

    @property
    def dims(self) -> SubsystemDims:
        return self._dims

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n_subsystems(self) -> int:
        return self._dims.n_subsystems

    @property
    def total_dim(self) -> int:
        return self._dims.total_dim

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dims={list(self._dims.dims)})"


class DensityOperator(Operator):
    """
    State operator ρ. Positivity is checked lazily through `check_positive`.
    """

    @functools.cached_property
    def _eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(self._eigenvalues[0])

    def check_positive(self, tol: float = PSD_TOL) -> None:
        """
        Raises:
            StateInvariantError: If an eigenvalue lies below -tol
        """
        lowest = self.min_eigenvalue()
        if lowest < -tol:
            raise StateInvariantError(
                "positive_semidefinite", f"minimum eigenvalue {lowest:.3e} is below -{tol}"
            )

    def purity(self) -> float:
        """Tr(ρ²)."""
        return float(np.vdot(self.matrix, self.matrix).real)


def pure_to_density(psi: PureState) -> DensityOperator:
    """|ψ⟩⟨ψ|."""
    a = psi.amplitudes
    return DensityOperator(psi.dims, np.outer(a, a.conj()))


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """
    Reduced state on the subsystems in `keep` (1-indexed, original order kept).

    Raises:
        ValueError: If `keep` is empty or names an out-of-range subsystem
    """
    keep_list = list(keep)
    if not keep_list:
        raise ValueError("keep set is empty")
    dims = rho.dims.dims
    n = len(dims)
    kept = sorted({rho.dims.axis(p) for p in keep_list})
    if len(kept) == n:
        return rho

    traced = [axis for axis in range(n) if axis not in kept]
    kept_dim = math.prod(dims[a] for a in kept)
    traced_dim = math.prod(dims[a] for a in traced)

    tensor = rho.matrix.reshape(dims + dims)
    order = kept + traced + [n + a for a in kept] + [n + a for a in traced]
    blocks = tensor.transpose(order).reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    reduced = np.einsum("ajbj->ab", blocks)
    reduced = (reduced + reduced.conj().T) / 2

    logger.debug("Partial trace %s -> kept axes %s", list(dims), kept)
    return DensityOperator(rho.dims.restrict(p + 1 for p in kept), reduced)


def project_and_renormalize(psi: PureState, subsystem: int,
                            outcome: int) -> Tuple[float, Optional[PureState]]:
    """
    Projective measurement of one subsystem in its computational basis.

    The post-measurement state stays on the full space with the measured
    subsystem collapsed to |outcome⟩.

    Returns:
        (probability, post-measurement state), the state being None when the
        probability does not exceed 1e-14
    """
    axis = psi.dims.axis(subsystem)
    d = psi.dims.dims[axis]
    if isinstance(outcome, bool) or not 0 <= outcome < d:
        raise ValueError(f"outcome {outcome} out of range 0..{d - 1} for subsystem {subsystem}")

    tensor = psi.as_tensor()
    selector: List[Union[slice, int]] = [slice(None)] * psi.dims.n_subsystems
    selector[axis] = outcome
    collapsed = np.zeros_like(tensor)
    collapsed[tuple(selector)] = tensor[tuple(selector)]

    probability = float(np.sum(np.abs(collapsed) ** 2))
    if probability <= PROBABILITY_FLOOR:
        return probability, None
    return probability, PureState(psi.dims, collapsed.reshape(-1) / math.sqrt(probability))


def count_lbps(psi: PureState, threshold: float = LBPS_THRESHOLD) -> int:
    """Number of local basis product states with amplitude modulus above threshold."""
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    return int(np.count_nonzero(np.abs(psi.amplitudes) > threshold))


def schmidt_coefficients(psi: PureState, p: int) -> np.ndarray:
    """Singular values of the (subsystem p | rest) amplitude matrix, descending."""
    axis = psi.dims.axis(p)
    unfolded = np.moveaxis(psi.as_tensor(), axis, 0).reshape(psi.dims.dims[axis], -1)
    return linalg.svdvals(unfolded)


def tensor_product(states: Sequence[PureState]) -> PureState:
    if not states:
        raise ValueError("tensor product of an empty sequence")
    dims = [d for state in states for d in state.dims.dims]
    vector = functools.reduce(np.kron, (state.amplitudes for state in states))
    return PureState(SubsystemDims(dims, states[0].dims.max_total_dim), vector)


def mixture(states: Sequence[PureState], weights: Sequence[float]) -> DensityOperator:
    """
    Convex combination Σ_k w_k |ψ_k⟩⟨ψ_k|.

    Raises:
        ValueError: On empty input, mismatched dims, negative weights or
            weights not summing to 1
    """
    if not states or len(states) != len(weights):
        raise ValueError("need one weight per state and at least one state")
    dims = states[0].dims
    if any(state.dims != dims for state in states):
        raise ValueError("all states of a mixture must share the same dims")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("mixture weights must be non-negative")
    if abs(float(w.sum()) - 1.0) > NORM_TOL:
        raise ValueError(f"mixture weights sum to {float(w.sum())!r}, expected 1")

    matrix = np.zeros((dims.total_dim, dims.total_dim), dtype=complex)
    for weight, state in zip(w, states):
        a = state.amplitudes
        matrix += weight * np.outer(a, a.conj())
    return DensityOperator(dims, matrix)
