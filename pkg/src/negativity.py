#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Negativity measures built on the partial transposes.

N^p      = (‖ρ^{T_p}‖₁ − 1)/(d_p − 1)             global, K-way or subset
C^p      = ‖C‖₁/(d_p − 1)                         coherence negativity, C the moved coherences
E_K^p    = −2/(d_p − 1) · Tr(P_− ρ_K^{T_p})       P_− from the global transpose
E_0^p    = −2(N − 2)/(d_p − 1) · Tr(P_− ρ)

With E_local^p = −2/(d_p − 1) · Tr(P_− (ρ_loc^{T_p} − ρ)), the global negativity
splits as N_G^p = Σ_K E_K^p + E_local^p − E_0^p.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, NamedTuple, Tuple

import numpy as np

from src.multistate import (
    DensityOperator,
    Operator,
    PureState,
    partial_trace,
    project_and_renormalize,
    pure_to_density,
)
from src.ptranspose import (
    coherence_part,
    global_pt,
    kway_pt,
    local_pt,
    subset_pt,
)
from src.spectral import ZERO_TOL, MatrixLike, SpectralResult, eigendecompose, trace_norm

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
RANK_ONE_TOL = 1e-8


class IdentityViolation(ValueError):
    """An identity that must hold by construction failed beyond tolerance."""


def _scale(rho: Operator, p: int) -> float:
    return float(rho.dims.dim(p) - 1)


def negativity_routes(matrix: MatrixLike, d_p: int, zero_tol: float = ZERO_TOL) -> Tuple[float, float]:
    """
    Negativity of a transposed matrix computed two ways.

    Returns:
        ((‖M‖₁ − 1)/(d_p − 1), −2/(d_p − 1)·Σ_{λ<−tol} λ)
    """
    spectrum = eigendecompose(matrix, zero_tol=zero_tol)
    return _routes(spectrum, d_p)


def _routes(spectrum: SpectralResult, d_p: int) -> Tuple[float, float]:
    scale = float(d_p - 1)
    by_norm = (spectrum.trace_norm - 1.0) / scale
    by_eigenvalues = -2.0 * float(np.sum(spectrum.negative_eigenvalues)) / scale
    return by_norm, by_eigenvalues


def _negativity(spectrum: SpectralResult, d_p: int, label: str) -> float:
    by_norm, by_eigenvalues = _routes(spectrum, d_p)
    if abs(by_norm - by_eigenvalues) > IDENTITY_TOL:
        logger.warning("%s: trace-norm route %.12g and eigenvalue route %.12g disagree",
                       label, by_norm, by_eigenvalues)
    return max(0.0, by_norm)


def global_negativity(rho: Operator, p: int, zero_tol: float = ZERO_TOL) -> float:
    """N_G^p."""
    spectrum = eigendecompose(global_pt(rho, p), zero_tol=zero_tol)
    return _negativity(spectrum, rho.dims.dim(p), f"N_G^{p}")


def kway_negativity(rho: Operator, p: int, K: int, zero_tol: float = ZERO_TOL) -> float:
    """N_K^p from the trace norm of the K-way transpose."""
    spectrum = eigendecompose(kway_pt(rho, p, K), zero_tol=zero_tol)
    return _negativity(spectrum, rho.dims.dim(p), f"N_{K}^{p}")


def subset_negativity(rho: Operator, p: int, S: Iterable[int], zero_tol: float = ZERO_TOL) -> float:
    """N^{p−S} from the trace norm of the subset transpose."""
    transposed = subset_pt(rho, p, S)
    spectrum = eigendecompose(transposed, zero_tol=zero_tol)
    return _negativity(spectrum, rho.dims.dim(p), transposed.provenance.label())


def coherence_negativity(rho: Operator, p: int, K: int) -> float:
    """Negativity carried by the transposed K-way coherences alone."""
    return trace_norm(coherence_part(rho, p, ways=K)) / _scale(rho, p)


def subset_coherence_negativity(rho: Operator, p: int, S: Iterable[int]) -> float:
    """Negativity carried by the transposed coherences whose differing set is exactly S."""
    return trace_norm(coherence_part(rho, p, subset=S)) / _scale(rho, p)


def partial_subset_negativity(rho: Operator, p: int, S: Iterable[int], zero_tol: float = ZERO_TOL) -> float:
    """E^{p−S} = −2/(d_p − 1)·Tr(P_− ρ^{T_{p−S}}), P_− from the global transpose."""
    spectrum = eigendecompose(global_pt(rho, p), zero_tol=zero_tol)
    return -2.0 * spectrum.negative_expectation(subset_pt(rho, p, S)) / _scale(rho, p)


def monogamy_residual(rho: Operator, p: int, coherent: bool = True, zero_tol: float = ZERO_TOL) -> float:
    """
    (N_2^p)² − Σ_{q≠p} (N^{p−pq})², with coherence negativities when
    `coherent` is set and trace-norm negativities otherwise.
    """
    others = [q for q in range(1, rho.n_subsystems + 1) if q != p]
    if coherent:
        total = coherence_negativity(rho, p, 2)
        pairs = [subset_coherence_negativity(rho, p, (p, q)) for q in others]
    else:
        total = kway_negativity(rho, p, 2, zero_tol)
        pairs = [subset_negativity(rho, p, (p, q), zero_tol) for q in others]
    return total ** 2 - sum(value ** 2 for value in pairs)


@dataclass(frozen=True)
class NegativityReport:
    """
    All scalar measures of one state with respect to one subsystem.

    The splitting N_G = Σ_K E_K + E_local − E_0 is checked at construction.

    Raises:
        IdentityViolation: If the splitting fails beyond identity_tol
        ValueError: If a negativity is negative
    """

    subsystem: int
    d_p: int
    n_global: float
    n_kway: Dict[int, float]
    c_kway: Dict[int, float]
    e_kway: Dict[int, float]
    e_zero: float
    e_local: float
    nu_kway: Dict[int, int]
    nu_global: int
    identity_tol: float = field(default=IDENTITY_TOL, compare=False)

    def __post_init__(self) -> None:
        values = [self.n_global, *self.n_kway.values(), *self.c_kway.values()]
        if any(value < 0 for value in values):
            raise ValueError(f"negativities must be non-negative, got {values}")
        if self.identity_residual > self.identity_tol:
            raise IdentityViolation(
                f"subsystem {self.subsystem}: N_G = {self.n_global!r} but "
                f"sum E_K + E_local - E_0 = {self.split_sum!r}"
            )

    @property
    def split_sum(self) -> float:
        return sum(self.e_kway.values()) + self.e_local - self.e_zero

    @property
    def identity_residual(self) -> float:
        return abs(self.n_global - self.split_sum)

    @property
    def nu(self) -> int:
        return sum(self.nu_kway.values())

    def to_dict(self) -> Dict[str, Any]:
        """Plain mapping with a fixed key order, for the report emitters."""
        return {
            "subsystem": self.subsystem,
            "d_p": self.d_p,
            "N_G": self.n_global,
            "N_K": {str(k): v for k, v in sorted(self.n_kway.items())},
            "C_K": {str(k): v for k, v in sorted(self.c_kway.items())},
            "E_K": {str(k): v for k, v in sorted(self.e_kway.items())},
            "E_0": self.e_zero,
            "E_local": self.e_local,
            "nu_K": {str(k): v for k, v in sorted(self.nu_kway.items())},
            "nu_G": self.nu_global,
            "nu": self.nu,
        }


def partial_kway_negativities(rho: Operator, p: int, zero_tol: float = ZERO_TOL,
                              identity_tol: float = IDENTITY_TOL) -> NegativityReport:
    """
    Global, K-way and coherence negativities together with the partial
    K-way negativities E_K, E_0 and E_local for subsystem p.
    """
    d_p = rho.dims.dim(p)
    n = rho.n_subsystems
    scale = float(d_p - 1)

    spectrum = eigendecompose(global_pt(rho, p), zero_tol=zero_tol)
    n_global = _negativity(spectrum, d_p, f"N_G^{p}")

    n_kway: Dict[int, float] = {}
    c_kway: Dict[int, float] = {}
    e_kway: Dict[int, float] = {}
    nu_kway: Dict[int, int] = {}
    for K in range(2, n + 1):
        transposed = kway_pt(rho, p, K)
        kway_spectrum = eigendecompose(transposed, zero_tol=zero_tol)
        n_kway[K] = _negativity(kway_spectrum, d_p, f"N_{K}^{p}")
        nu_kway[K] = kway_spectrum.negative_count
        c_kway[K] = coherence_negativity(rho, p, K)
        e_kway[K] = -2.0 * spectrum.negative_expectation(transposed) / scale

    e_zero = -2.0 * (n - 2) * spectrum.negative_expectation(rho) / scale
    local_shift = local_pt(rho, p).matrix - rho.matrix
    e_local = -2.0 * spectrum.negative_expectation(local_shift) / scale

    report = NegativityReport(
        subsystem=p,
        d_p=d_p,
        n_global=n_global,
        n_kway=n_kway,
        c_kway=c_kway,
        e_kway=e_kway,
        e_zero=e_zero,
        e_local=e_local,
        nu_kway=nu_kway,
        nu_global=spectrum.negative_count,
        identity_tol=identity_tol,
    )
    logger.debug("Report for subsystem %d: N_G=%.12g, E_K=%s, E_0=%.12g",
                 p, n_global, e_kway, e_zero)
    return report


class SingleNegativeCheck(NamedTuple):
    applicable: bool
    residual: float
    nu_global: int


def single_negative_identity_check(rho: Operator, p: int, zero_tol: float = ZERO_TOL) -> SingleNegativeCheck:
    """
    When the global transpose has a single negative eigenvalue whose rank-one
    negative part equals the sum of the negative parts of the K-way
    transposes, (N_G)² = 4/(d_p − 1)²·Σ_K Σ_m (λ_m^{K−})².

    Returns:
        SingleNegativeCheck with residual NaN when not applicable
    """
    d_p = rho.dims.dim(p)
    spectrum = eigendecompose(global_pt(rho, p), zero_tol=zero_tol)
    if spectrum.negative_count != 1:
        return SingleNegativeCheck(False, math.nan, spectrum.negative_count)

    kway_spectra = [eigendecompose(kway_pt(rho, p, K), zero_tol=zero_tol)
                    for K in range(2, rho.n_subsystems + 1)]
    summed = sum((s.negative_part() for s in kway_spectra), np.zeros_like(rho.matrix))
    mismatch = float(np.max(np.abs(spectrum.negative_part() - summed)))
    if mismatch > RANK_ONE_TOL:
        logger.debug("Single-negative identity not applicable for subsystem %d (mismatch %.3e)", p, mismatch)
        return SingleNegativeCheck(False, math.nan, 1)

    n_global = _negativity(spectrum, d_p, f"N_G^{p}")
    squares = sum(float(np.sum(s.negative_eigenvalues ** 2)) for s in kway_spectra)
    residual = abs(n_global ** 2 - 4.0 * squares / float(d_p - 1) ** 2)
    return SingleNegativeCheck(True, residual, 1)


class ConvexityCheck(NamedTuple):
    lhs: float
    rhs: float
    probabilities: Tuple[float, ...]

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + IDENTITY_TOL


def reduced_convexity_check(psi: PureState, measured: int, entangled_pair: Tuple[int, int],
                            zero_tol: float = ZERO_TOL) -> ConvexityCheck:
    """
    Compare the negativity of the reduced pair state with the average
    negativity of the pair after measuring the third subsystem.

    Returns:
        ConvexityCheck(lhs = N(Tr_m ρ), rhs = Σ_k P_k N(pair state after outcome k))
    """
    if psi.dims.n_subsystems != 3:
        raise ValueError(f"convexity check needs N = 3, got N = {psi.dims.n_subsystems}")
    p, q = entangled_pair
    psi.dims.axis(p)
    psi.dims.axis(q)
    psi.dims.axis(measured)
    if p == q or measured in (p, q):
        raise ValueError(f"measured subsystem {measured} and pair {entangled_pair} must be distinct")

    keep = sorted((p, q))
    position = keep.index(p) + 1

    reduced = partial_trace(pure_to_density(psi), keep)
    lhs = global_negativity(reduced, position, zero_tol)

    rhs = 0.0
    probabilities: List[float] = []
    for outcome in range(psi.dims.dim(measured)):
        probability, post = project_and_renormalize(psi, measured, outcome)
        probabilities.append(probability)
        if post is None:
            continue
        pair_state = partial_trace(pure_to_density(post), keep)
        rhs += probability * global_negativity(pair_state, position, zero_tol)
    return ConvexityCheck(lhs, rhs, tuple(probabilities))


def literal_e_zero(rho: Operator, p: int, zero_tol: float = ZERO_TOL) -> float:
    """
    E_0 with the K-independent summand repeated for every K = 2..N, i.e.
    (N − 1) times the E_0 above. Kept for comparison only.
    """
    spectrum = eigendecompose(global_pt(rho, p), zero_tol=zero_tol)
    n = rho.n_subsystems
    return -2.0 * (n - 1) * (n - 2) * spectrum.negative_expectation(rho) / _scale(rho, p)


def as_density(state: Any) -> DensityOperator:
    """Density operator of a PureState or DensityOperator."""
    if isinstance(state, PureState):
        return pure_to_density(state)
    if isinstance(state, DensityOperator):
        return state
    raise TypeError(f"expected PureState or DensityOperator, got {type(state).__name__}")
