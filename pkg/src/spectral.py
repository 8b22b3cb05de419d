#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Dense Hermitian spectral kernel: eigendecomposition, trace norm, negative
eigenspace projector and negative-eigenvalue counting.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import linalg

from src.multistate import Operator

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-10
HERMITIAN_TOL = 1e-10

MatrixLike = Union[Operator, np.ndarray]


@dataclass(frozen=True)
class SpectralResult:
    """
    Eigenvalues (ascending) and eigenvectors of a Hermitian matrix, plus the
    projector onto the span of eigenvectors with eigenvalue < -zero_tol.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    negative_projector: np.ndarray
    zero_tol: float

    @property
    def negative_mask(self) -> np.ndarray:
        return self.eigenvalues < -self.zero_tol

    @property
    def negative_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.negative_mask]

    @property
    def negative_count(self) -> int:
        return int(np.count_nonzero(self.negative_mask))

    @property
    def trace_norm(self) -> float:
        return float(np.sum(np.abs(self.eigenvalues)))

    def negative_part(self) -> np.ndarray:
        """Σ_{λ<-tol} λ |v⟩⟨v|."""
        vectors = self.eigenvectors[:, self.negative_mask]
        part = (vectors * self.negative_eigenvalues) @ vectors.conj().T
        return (part + part.conj().T) / 2

    def negative_expectation(self, operator: MatrixLike) -> float:
        """Tr(P_− X)."""
        matrix = _as_array(operator)
        return float(np.einsum("ij,ji->", self.negative_projector, matrix).real)


def _as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, Operator):
        return matrix.matrix
    return np.asarray(matrix, dtype=complex)


def _hermitian_part(matrix: MatrixLike, hermitian_tol: float) -> np.ndarray:
    m = _as_array(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("cannot decompose a matrix of dimension 0")
    scale = max(1.0, float(np.max(np.abs(m))))
    asymmetry = float(np.max(np.abs(m - m.conj().T)))
    if asymmetry > hermitian_tol * scale:
        raise ValueError(f"matrix is not Hermitian: max |M - M^H| = {asymmetry:.3e}")
    return (m + m.conj().T) / 2


def eigendecompose(matrix: MatrixLike, zero_tol: float = ZERO_TOL,
                   hermitian_tol: float = HERMITIAN_TOL) -> SpectralResult:
    """
    Symmetrize and diagonalize a Hermitian matrix.

    Args:
        matrix: Operator or square array, Hermitian within hermitian_tol
        zero_tol: Eigenvalues below -zero_tol count as negative
        hermitian_tol: Allowed elementwise asymmetry, relative to max(1, max|M|)

    Returns:
        SpectralResult with ascending eigenvalues

    Raises:
        ValueError: On non-square, empty or non-Hermitian input, or zero_tol <= 0
    """
    if zero_tol <= 0:
        raise ValueError(f"zero_tol must be positive, got {zero_tol}")
    h = _hermitian_part(matrix, hermitian_tol)
    values, vectors = linalg.eigh(h)

    negative = vectors[:, values < -zero_tol]
    projector = negative @ negative.conj().T
    projector = (projector + projector.conj().T) / 2

    logger.debug("Eigendecomposition of %dx%d matrix: %d negative eigenvalue(s)",
                 h.shape[0], h.shape[0], negative.shape[1])
    return SpectralResult(values, vectors, projector, zero_tol)


def trace_norm(matrix: MatrixLike) -> float:
    """Σ|λ|."""
    h = _hermitian_part(matrix, HERMITIAN_TOL)
    return float(np.sum(np.abs(linalg.eigvalsh(h))))


def count_negative(matrix: MatrixLike, zero_tol: float = ZERO_TOL) -> int:
    """Number of eigenvalues below -zero_tol."""
    if zero_tol <= 0:
        raise ValueError(f"zero_tol must be positive, got {zero_tol}")
    h = _hermitian_part(matrix, HERMITIAN_TOL)
    return int(np.count_nonzero(linalg.eigvalsh(h) < -zero_tol))
