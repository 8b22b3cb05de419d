#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Negative-eigenvalue counting, GHZ-pair structure checks and a heuristic
search for a local-unitary representative with few product-basis terms.

The search result is a heuristic representative: its LBPS count is an
upper bound on the minimum over local unitaries, not a certified minimum.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from src.multistate import (
    LBPS_THRESHOLD,
    Operator,
    PureState,
    count_lbps,
    pure_to_density,
)
from src.negativity import IDENTITY_TOL, kway_negativity
from src.ptranspose import global_pt, kway_pt
from src.spectral import ZERO_TOL, count_negative

logger = logging.getLogger(__name__)

HEURISTIC_ANNOTATION = "measures computed on heuristic canonical representative"


@dataclass(frozen=True)
class NuProfile:
    """Negative-eigenvalue counts of the K-way and global transposes for one subsystem."""

    subsystem: int
    nu_kway: Dict[int, int]
    nu_global: int

    @property
    def nu(self) -> int:
        return sum(self.nu_kway.values())


def nu_profile(rho: Operator, p: int, zero_tol: float = ZERO_TOL) -> NuProfile:
    rho.dims.axis(p)
    nu_kway = {K: count_negative(kway_pt(rho, p, K), zero_tol) for K in range(2, rho.n_subsystems + 1)}
    return NuProfile(p, nu_kway, count_negative(global_pt(rho, p), zero_tol))


Term = Tuple[Tuple[int, ...], complex]


@dataclass(frozen=True)
class GhzProjectionCheck:
    """
    Pairing of the state's terms into GHZ-like pairs (multi-indices differing
    in every subsystem, disjoint supports). `predicted` = 2 Σ |a_i||b_i|.
    """

    matched: bool
    pairs: List[Tuple[Term, Term]] = field(default_factory=list)
    predicted: Optional[float] = None
    computed: Optional[float] = None

    @property
    def verified(self) -> bool:
        if not self.matched or self.predicted is None or self.computed is None:
            return False
        return abs(self.predicted - self.computed) <= IDENTITY_TOL


def _pair_terms(terms: List[Term]) -> Optional[List[Tuple[Term, Term]]]:
    """Perfect matching of terms into all-positions-differing pairs, or None."""
    if not terms or len(terms) % 2:
        return None
    first, rest = terms[0], terms[1:]
    for position, candidate in enumerate(rest):
        if all(a != b for a, b in zip(first[0], candidate[0])):
            remainder = _pair_terms(rest[:position] + rest[position + 1:]) if len(rest) > 1 else []
            if remainder is not None:
                return [(first, candidate)] + remainder
    return None


def ghz_projection_check(psi: PureState, p: int, threshold: float = LBPS_THRESHOLD,
                         zero_tol: float = ZERO_TOL) -> GhzProjectionCheck:
    """
    Test whether psi is a sum of GHZ-like pairs a_i|i⟩ + b_i|j⟩ with i_m ≠ j_m
    for every m, and if so compare N_N^p with 2 Σ_i |a_i||b_i|.
    """
    psi.dims.axis(p)
    pairs = _pair_terms(psi.nonzero_terms(threshold))
    if pairs is None:
        return GhzProjectionCheck(False)

    predicted = 2.0 * sum(abs(a[1]) * abs(b[1]) for a, b in pairs)
    n = psi.dims.n_subsystems
    computed = kway_negativity(pure_to_density(psi), p, n, zero_tol) if n >= 2 else 0.0
    return GhzProjectionCheck(True, pairs, predicted, computed)


@dataclass(frozen=True)
class CanonicalSearchResult:
    best_state: PureState
    best_lbps: int
    input_lbps: int
    nu_by_K: Dict[int, int]
    unitaries: List[np.ndarray]
    iterations: int
    converged: bool
    nu_before: NuProfile
    nu_after: NuProfile
    heuristic: bool = True
    annotation: str = HEURISTIC_ANNOTATION


def hermitian_generator(theta: np.ndarray, d: int) -> np.ndarray:
    """Hermitian d×d matrix from d² reals: diagonal, then (Re, Im) of the upper triangle."""
    h = np.diag(theta[:d]).astype(complex)
    position = d
    for k in range(d):
        for l in range(k + 1, d):
            h[k, l] = theta[position] + 1j * theta[position + 1]
            h[l, k] = theta[position] - 1j * theta[position + 1]
            position += 2
    return h


def parameterized_unitary(theta: np.ndarray, d: int) -> np.ndarray:
    """exp(iH(θ))."""
    return linalg.expm(1j * hermitian_generator(theta, d))


def apply_local_unitaries(tensor: np.ndarray, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """(U_1 ⊗ ... ⊗ U_N) applied to an amplitude tensor."""
    result = tensor
    for axis, unitary in enumerate(unitaries):
        result = np.moveaxis(np.tensordot(unitary, result, axes=([1], [axis])), 0, axis)
    return result


def _local_eigenbases(tensor: np.ndarray) -> List[np.ndarray]:
    """Unitaries rotating each single-subsystem reduced state to its eigenbasis (descending)."""
    bases = []
    for axis in range(tensor.ndim):
        unfolded = np.moveaxis(tensor, axis, 0).reshape(tensor.shape[axis], -1)
        reduced = unfolded @ unfolded.conj().T
        values, vectors = linalg.eigh((reduced + reduced.conj().T) / 2)
        order = np.argsort(-values, kind="stable")
        bases.append(vectors[:, order].conj().T)
    return bases


def _objective(tensor: np.ndarray, threshold: float) -> Tuple[int, float]:
    moduli = np.abs(tensor)
    return int(np.count_nonzero(moduli > threshold)), float(np.sum(moduli))


@dataclass
class _Descent:
    objective: Tuple[int, float]
    unitaries: List[np.ndarray]
    iterations: int
    converged: bool


def _coordinate_descent(tensor: np.ndarray, start: List[np.ndarray], theta: List[np.ndarray],
                        threshold: float, initial_step: float, min_step: float,
                        max_sweeps: int) -> _Descent:
    """
    Coordinate descent over the d² parameters of every local factor
    U_m = exp(iH(θ_m)) · B_m, with B_m the starting basis.
    """
    dims = tensor.shape
    factors = [parameterized_unitary(theta[m], dims[m]) @ start[m] for m in range(len(dims))]
    current = _objective(apply_local_unitaries(tensor, factors), threshold)

    step = initial_step
    iterations = 0
    converged = False
    while step >= min_step:
        improved = False
        for sweep in range(max_sweeps):
            improved = False
            for m, d in enumerate(dims):
                for k in range(d * d):
                    for sign in (1.0, -1.0):
                        trial_theta = theta[m].copy()
                        trial_theta[k] += sign * step
                        trial_factor = parameterized_unitary(trial_theta, d) @ start[m]
                        trial = factors[:m] + [trial_factor] + factors[m + 1:]
                        value = _objective(apply_local_unitaries(tensor, trial), threshold)
                        iterations += 1
                        if value < current:
                            current, theta[m], factors[m] = value, trial_theta, trial_factor
                            improved = True
                            break
            if not improved:
                break
        converged = not improved
        step /= 2.0
    return _Descent(current, factors, iterations, converged)


def heuristic_canonicalize(psi: PureState, restarts: int = 50, seed: int = 0, *,
                           initial_step: float = math.pi / 4, min_step: float = 1e-4,
                           max_sweeps: int = 8, threshold: float = LBPS_THRESHOLD,
                           subsystem: int = 1, zero_tol: float = ZERO_TOL) -> CanonicalSearchResult:
    """
    Search products of local unitaries for a representative of psi with the
    fewest product-basis terms.

    Each restart starts from the eigenbases of the single-subsystem reduced
    states, restart 0 without perturbation and the others with uniform random
    parameters in [-π, π). The objective is (LBPS count, ℓ1 norm of the
    amplitudes), compared lexicographically; ties keep the earliest restart.
    The input itself (identity unitaries) is always a candidate.

    Raises:
        ValueError: If restarts < 1
    """
    if restarts < 1:
        raise ValueError(f"restarts must be at least 1, got {restarts}")
    psi.dims.axis(subsystem)

    tensor = psi.as_tensor()
    dims = tensor.shape
    start = _local_eigenbases(tensor)
    children = np.random.SeedSequence(seed).spawn(restarts)

    best_objective = _objective(tensor, threshold)
    best_unitaries = [np.eye(d, dtype=complex) for d in dims]
    total_iterations = 0
    converged = True
    for restart, child in enumerate(children):
        rng = np.random.default_rng(child)
        if restart == 0:
            theta = [np.zeros(d * d) for d in dims]
        else:
            theta = [rng.uniform(-math.pi, math.pi, d * d) for d in dims]
        descent = _coordinate_descent(tensor, start, theta, threshold, initial_step, min_step, max_sweeps)
        total_iterations += descent.iterations
        logger.debug("Restart %d: objective %s after %d evaluations", restart, descent.objective,
                     descent.iterations)
        if descent.objective < best_objective:
            best_objective = descent.objective
            best_unitaries = descent.unitaries
            converged = descent.converged

    best_state = PureState(psi.dims, apply_local_unitaries(tensor, best_unitaries).reshape(-1),
                           renormalize=True)
    nu_before = nu_profile(pure_to_density(psi), subsystem, zero_tol)
    nu_after = nu_profile(pure_to_density(best_state), subsystem, zero_tol)
    result = CanonicalSearchResult(
        best_state=best_state,
        best_lbps=count_lbps(best_state, threshold),
        input_lbps=count_lbps(psi, threshold),
        nu_by_K=dict(nu_after.nu_kway),
        unitaries=best_unitaries,
        iterations=total_iterations,
        converged=converged,
        nu_before=nu_before,
        nu_after=nu_after,
    )
    logger.info("Heuristic search: LBPS %d -> %d over %d restarts", result.input_lbps,
                result.best_lbps, restarts)
    return result
