#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Balayages sur des états aléatoires à graine fixe : décompositions,
famille qutrit, convexité et critère PPT.
"""

import numpy as np
import pytest

from src.catalog import random_mixed, random_product_pure, random_pure
from src.multistate import pure_to_density
from src.negativity import partial_kway_negativities, reduced_convexity_check
from src.ptranspose import global_pt, verify_global_decomposition, verify_subset_decomposition
from src.spectral import eigendecompose
from src.verification import qutrit_checks

PROFILES = [(2, 2), (2, 2, 2), (2, 2, 3), (2, 2, 2, 2)]
STATES_PER_PROFILE = 50


def _sweep_states(dims):
    """Alternance d'états purs et d'états mixtes de rang 1 à 4."""
    for seed in range(STATES_PER_PROFILE):
        if seed % 2 == 0:
            yield seed, pure_to_density(random_pure(dims, seed=seed))
        else:
            yield seed, random_mixed(dims, rank=1 + (seed // 2) % 4, seed=seed)


@pytest.mark.parametrize("dims", PROFILES)
def test_identity_suite_on_random_states(dims):
    n = len(dims)
    for seed, rho in _sweep_states(dims):
        for p in range(1, n + 1):
            for K in range(2, n + 1):
                assert verify_subset_decomposition(rho, p, K) < 1e-12, (seed, p, K)
            assert verify_global_decomposition(rho, p) < 1e-12, (seed, p)
            report = partial_kway_negativities(rho, p)
            assert report.identity_residual < 1e-9, (seed, p)


def test_qutrit_family_on_random_complex_coefficients():
    rng = np.random.default_rng(606)
    for draw in range(100):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        z /= np.linalg.norm(z)
        failures = [(r.name, r.residual) for r in qutrit_checks([complex(c) for c in z]) if not r.passed]
        assert failures == [], draw


def test_reduced_convexity_on_random_three_qubit_states():
    for seed in range(50):
        psi = random_pure([2, 2, 2], seed=1000 + seed)
        for measured, pair in ((1, (2, 3)), (2, (1, 3)), (3, (1, 2))):
            check = reduced_convexity_check(psi, measured, pair)
            assert check.lhs <= check.rhs + 1e-9, (seed, measured)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2), (3, 2, 2)])
def test_product_states_have_positive_partial_transpose(dims):
    for seed in range(25):
        rho = pure_to_density(random_product_pure(dims, seed=seed))
        for p in range(1, len(dims) + 1):
            assert eigendecompose(global_pt(rho, p)).eigenvalues[0] >= -1e-10, (seed, p)
