#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests pour le module canonical.
"""

import math

import numpy as np
import pytest

from src.canonical import (
    HEURISTIC_ANNOTATION,
    apply_local_unitaries,
    ghz_projection_check,
    heuristic_canonicalize,
    hermitian_generator,
    nu_profile,
    parameterized_unitary,
)
from src.catalog import eq9, ghz, ghz_weighted, product, qutrit, random_product_pure, random_pure, w
from src.multistate import pure_to_density
from src.negativity import global_negativity


def test_hermitian_generator_and_unitary(rng):
    theta = rng.uniform(-1.0, 1.0, 9)
    h = hermitian_generator(theta, 3)
    np.testing.assert_allclose(h, h.conj().T)
    u = parameterized_unitary(theta, 3)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_zero_parameters_give_identity():
    np.testing.assert_allclose(parameterized_unitary(np.zeros(4), 2), np.eye(2), atol=1e-15)


def test_apply_local_unitaries_on_single_axis():
    tensor = ghz(3).as_tensor()
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    result = apply_local_unitaries(tensor, [flip, np.eye(2), np.eye(2)])
    assert result[1, 0, 0] == pytest.approx(2 ** -0.5)
    assert result[0, 1, 1] == pytest.approx(2 ** -0.5)


class TestNuProfile:
    def test_ghz(self, ghz_rho):
        profile = nu_profile(ghz_rho, 1)
        assert profile.nu_kway == {2: 0, 3: 1}
        assert profile.nu_global == 1
        assert profile.nu == 1

    def test_w(self, w_rho):
        profile = nu_profile(w_rho, 3)
        assert profile.nu_kway == {2: 1, 3: 0}

    def test_out_of_range_subsystem(self, ghz_rho):
        with pytest.raises(ValueError):
            nu_profile(ghz_rho, 4)


class TestGhzProjection:
    def test_ghz(self):
        check = ghz_projection_check(ghz(3), 1)
        assert check.matched
        assert len(check.pairs) == 1
        assert check.predicted == pytest.approx(1.0)
        assert check.verified

    @pytest.mark.parametrize("weight", [0.1, 0.3, 0.8])
    def test_weighted_ghz(self, weight):
        check = ghz_projection_check(ghz_weighted(weight), 2)
        assert check.predicted == pytest.approx(2 * math.sqrt(weight * (1 - weight)))
        assert check.verified

    @pytest.mark.parametrize("psi", [w(3), eq9(0.5)])
    def test_unmatched_states(self, psi):
        check = ghz_projection_check(psi, 1)
        assert not check.matched
        assert check.predicted is None
        assert not check.verified


class TestHeuristicCanonicalize:
    def test_product_state_reduces_to_one_term(self):
        psi = random_product_pure([2, 2, 2], seed=13)
        result = heuristic_canonicalize(psi, restarts=2, seed=0)
        assert result.input_lbps == 8
        assert result.best_lbps == 1

    def test_never_worse_than_input(self):
        result = heuristic_canonicalize(ghz(3), restarts=2, seed=1)
        assert result.input_lbps == 2
        assert result.best_lbps <= 2

    def test_result_is_local_unitary_image(self):
        psi = random_pure([2, 2, 2], seed=21)
        result = heuristic_canonicalize(psi, restarts=2, seed=3)

        for u in result.unitaries:
            np.testing.assert_allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10)
        image = apply_local_unitaries(psi.as_tensor(), result.unitaries).reshape(-1)
        np.testing.assert_allclose(image, result.best_state.amplitudes, atol=1e-10)

        before = [global_negativity(pure_to_density(psi), p) for p in (1, 2, 3)]
        after = [global_negativity(pure_to_density(result.best_state), p) for p in (1, 2, 3)]
        np.testing.assert_allclose(after, before, atol=1e-9)

    def test_deterministic_for_fixed_seed(self):
        psi = random_pure([2, 2, 2], seed=2)
        first = heuristic_canonicalize(psi, restarts=2, seed=5)
        second = heuristic_canonicalize(psi, restarts=2, seed=5)
        np.testing.assert_array_equal(first.best_state.amplitudes, second.best_state.amplitudes)
        assert first.iterations == second.iterations

    def test_annotation_and_counts(self):
        result = heuristic_canonicalize(ghz(3), restarts=1)
        assert result.heuristic
        assert result.annotation == HEURISTIC_ANNOTATION
        assert result.nu_by_K == result.nu_after.nu_kway
        assert result.nu_before.nu_kway == {2: 0, 3: 1}

    def test_rejects_zero_restarts(self):
        with pytest.raises(ValueError):
            heuristic_canonicalize(ghz(3), restarts=0)

    @pytest.mark.parametrize("psi,expected", [
        (product(3), 1),
        (ghz(3), 2),
        (qutrit(0.5, 0.5, 0.5, 0.5), 4),
    ])
    def test_default_budget_reaches_known_minimum(self, psi, expected):
        """Avec le budget par défaut: produit -> 1 terme, GHZ reste à 2, la famille qutrit reste à 4."""
        result = heuristic_canonicalize(psi, seed=7)
        assert result.best_lbps == expected
