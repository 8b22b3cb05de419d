#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Global, K-way, subset and local partial transposes.

Every transpose with respect to subsystem p is a permutation of the flat
matrix: element (i, j) either keeps its value or takes the value found at
(i with i_p replaced by j_p, j with j_p replaced by i_p). The selective
transposes differ only in which elements are swapped:

    global  every element
    kway    elements whose multi-indices differ in exactly K subsystems
    subset  elements whose set of differing subsystems is exactly S (p ∈ S)
    local   elements differing in subsystem p only

The transpose itself is an axis swap of the (dims + dims) tensor view; only
the per-dims tables of differing-subsystem bit masks and Hamming distances
are cached, in the smallest unsigned dtypes.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.multistate import DimsLike, Operator

logger = logging.getLogger(__name__)

GLOBAL = "global"
KWAY = "kway"
SUBSET = "subset"
LOCAL = "local"

# (kind, value): value is K for kway and the bit mask of S for subset/local
Selection = Tuple[str, int]


@dataclass(frozen=True)
class Provenance:
    """Which transpose produced an operator."""

    subsystem: int
    kind: str
    ways: Optional[int] = None
    subset: Optional[Tuple[int, ...]] = None

    def label(self) -> str:
        if self.kind == KWAY:
            return f"T_{self.subsystem}^(K={self.ways})"
        if self.kind == SUBSET and self.subset is not None:
            return f"T_{self.subsystem}-{''.join(str(q) for q in self.subset)}"
        if self.kind == LOCAL:
            return f"T_{self.subsystem}^(local)"
        return f"T_{self.subsystem}"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"subsystem": self.subsystem, "kind": self.kind}
        if self.ways is not None:
            data["K"] = self.ways
        if self.subset is not None:
            data["S"] = list(self.subset)
        return data


class TransposedOperator(Operator):
    """Hermitian unit-trace operator produced by a partial transpose."""

    def __init__(self, dims: DimsLike, matrix: np.ndarray, provenance: Provenance):
        super().__init__(dims, matrix)
        self._provenance = provenance

    @property
    def provenance(self) -> Provenance:
        return self._provenance

    def __repr__(self) -> str:
        return f"TransposedOperator(dims={list(self.dims.dims)}, {self._provenance.label()})"


@lru_cache(maxsize=2)
def _pair_tables(dims: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """
    For every flat (row, col) pair, the bit mask of differing subsystems
    (bit a for axis a) and the Hamming distance, in the smallest unsigned dtypes.
    """
    total = math.prod(dims)
    pattern = np.zeros((total, total), dtype=np.min_scalar_type((1 << len(dims)) - 1))
    distance = np.zeros((total, total), dtype=np.min_scalar_type(len(dims)))
    for axis, digit in enumerate(np.unravel_index(np.arange(total), dims)):
        differs = digit[:, None] != digit[None, :]
        np.bitwise_or(pattern, pattern.dtype.type(1 << axis), out=pattern, where=differs)
        distance += differs
    for table in (pattern, distance):
        table.flags.writeable = False
    logger.debug("Pair tables built for dims %s (%d x %d, %d bytes)",
                 list(dims), total, total, pattern.nbytes + distance.nbytes)
    return pattern, distance


def _selection_mask(dims: Tuple[int, ...], selection: Selection) -> Optional[np.ndarray]:
    """Elements eligible for the swap; None means every element."""
    kind, value = selection
    if kind == GLOBAL:
        return None
    pattern, distance = _pair_tables(dims)
    return distance == value if kind == KWAY else pattern == value


def _moved_mask(dims: Tuple[int, ...], axis: int) -> np.ndarray:
    """Elements with i_p ≠ j_p, the only ones a transpose on p can change."""
    pattern, _ = _pair_tables(dims)
    return (pattern >> axis) & 1 == 1


def _transpose_axis(matrix: np.ndarray, dims: Tuple[int, ...], axis: int) -> np.ndarray:
    n = len(dims)
    order = list(range(2 * n))
    order[axis], order[n + axis] = order[n + axis], order[axis]
    return matrix.reshape(dims + dims).transpose(order).reshape(matrix.shape)


def _apply(rho: Operator, p: int, selection: Selection, provenance: Provenance) -> TransposedOperator:
    dims = rho.dims.dims
    transposed = _transpose_axis(rho.matrix, dims, rho.dims.axis(p))
    mask = _selection_mask(dims, selection)
    if mask is not None:
        transposed = np.where(mask, transposed, rho.matrix)
    return TransposedOperator(rho.dims, transposed, provenance)


def _check_ways(rho: Operator, K: int) -> int:
    n = rho.n_subsystems
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or not 2 <= K <= n:
        raise ValueError(f"K = {K!r} outside [2, {n}]")
    return int(K)


def _check_subset(rho: Operator, p: int, subset: Iterable[int]) -> Tuple[int, ...]:
    members = tuple(sorted({rho.dims.axis(q) + 1 for q in subset}))
    rho.dims.axis(p)
    if p not in members:
        raise ValueError(f"subsystem {p} is not in the subset {list(members)}")
    if len(members) < 2:
        raise ValueError(f"subset {list(members)} must contain at least two subsystems")
    return members


def _subset_mask(members: Iterable[int]) -> int:
    return sum(1 << (q - 1) for q in members)


def global_pt(rho: Operator, p: int) -> TransposedOperator:
    """ρ^{T_p}: transpose of the indices of subsystem p."""
    return _apply(rho, p, (GLOBAL, 0), Provenance(p, GLOBAL))


def kway_pt(rho: Operator, p: int, K: int) -> TransposedOperator:
    """ρ_K^{T_p}: swap only elements whose multi-indices differ in exactly K subsystems."""
    ways = _check_ways(rho, K)
    return _apply(rho, p, (KWAY, ways), Provenance(p, KWAY, ways=ways))


def subset_pt(rho: Operator, p: int, S: Iterable[int]) -> TransposedOperator:
    """ρ^{T_{p-S}}: swap only elements whose differing subsystems are exactly S."""
    members = _check_subset(rho, p, S)
    return _apply(rho, p, (SUBSET, _subset_mask(members)), Provenance(p, SUBSET, subset=members))


def local_pt(rho: Operator, p: int) -> TransposedOperator:
    """Transpose of the local coherences of p only (elements differing in p alone)."""
    rho.dims.axis(p)
    return _apply(rho, p, (LOCAL, _subset_mask([p])), Provenance(p, LOCAL, subset=(p,)))


def coherence_part(rho: Operator, p: int, ways: Optional[int] = None,
                   subset: Optional[Iterable[int]] = None) -> np.ndarray:
    """
    Matrix of the coherences moved by a selective transpose: the transposed
    value where the selection holds and i_p ≠ j_p, zero elsewhere.

    Exactly one of `ways` (K-way selection) or `subset` must be given.
    """
    if (ways is None) == (subset is None):
        raise ValueError("give exactly one of ways or subset")
    if ways is not None:
        selection: Selection = (KWAY, _check_ways(rho, ways))
        transposed = kway_pt(rho, p, ways)
    else:
        assert subset is not None
        members = _check_subset(rho, p, subset)
        selection = (SUBSET, _subset_mask(members))
        transposed = subset_pt(rho, p, members)

    dims = rho.dims.dims
    mask = _selection_mask(dims, selection)
    assert mask is not None
    moved = mask & _moved_mask(dims, rho.dims.axis(p))
    return np.where(moved, transposed.matrix, 0.0)


def subsets_containing(n_subsystems: int, p: int, size: int) -> List[Tuple[int, ...]]:
    """All subsets of {1..N} of the given size that contain p, in lexicographic order."""
    others = [q for q in range(1, n_subsystems + 1) if q != p]
    return [tuple(sorted((p,) + rest)) for rest in itertools.combinations(others, size - 1)]


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix)))


def verify_subset_decomposition(rho: Operator, p: int, K: int) -> float:
    """
    Max elementwise residual of ρ_K^{T_p} = Σ_{S∋p,|S|=K} ρ^{T_{p-S}} − (C(N−1,K−1) − 1)ρ.
    """
    ways = _check_ways(rho, K)
    subsets = subsets_containing(rho.n_subsystems, p, ways)
    summed = sum((subset_pt(rho, p, S).matrix for S in subsets), np.zeros_like(rho.matrix))
    residual = kway_pt(rho, p, ways).matrix - summed + (len(subsets) - 1) * rho.matrix
    return _max_abs(residual)


def verify_tripartite_decomposition(rho: Operator, p: int) -> float:
    """Max elementwise residual of ρ_2^{T_p} = ρ^{T_{p-pq}} + ρ^{T_{p-pr}} − ρ."""
    if rho.n_subsystems != 3:
        raise ValueError(f"tripartite decomposition needs N = 3, got N = {rho.n_subsystems}")
    return verify_subset_decomposition(rho, p, 2)


def verify_global_decomposition(rho: Operator, p: int, include_local: bool = True) -> float:
    """
    Max elementwise residual of ρ^{T_p} = Σ_{K=2}^N ρ_K^{T_p} − (N−2)ρ + (ρ_loc^{T_p} − ρ).

    The last term collects the local coherences of p, which only the global
    transpose touches; it is zero when they are real. With
    `include_local=False` the residual of the form without that term is
    returned.
    """
    n = rho.n_subsystems
    if n < 2:
        raise ValueError("global decomposition needs at least two subsystems")
    summed = sum((kway_pt(rho, p, K).matrix for K in range(2, n + 1)), np.zeros_like(rho.matrix))
    residual = global_pt(rho, p).matrix - summed + (n - 2) * rho.matrix
    if include_local:
        residual = residual - (local_pt(rho, p).matrix - rho.matrix)
    return _max_abs(residual)

