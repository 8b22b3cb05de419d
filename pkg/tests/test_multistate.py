#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests pour le module multistate.
"""

import math

import numpy as np
import pytest

from src.catalog import bell, ghz, random_mixed, random_pure, w
from src.multistate import (
    DensityOperator,
    MultiIndex,
    PureState,
    StateInvariantError,
    SubsystemDims,
    count_lbps,
    hamming_distance,
    mixture,
    partial_trace,
    project_and_renormalize,
    pure_to_density,
    schmidt_coefficients,
    tensor_product,
)


class TestSubsystemDims:
    def test_encode_is_row_major(self):
        """Le sous-système 1 est le plus significatif."""
        dims = SubsystemDims([2, 2, 3])
        assert dims.encode([0, 0, 0]) == 0
        assert dims.encode([0, 0, 2]) == 2
        assert dims.encode([0, 1, 0]) == 3
        assert dims.encode([1, 0, 0]) == 6
        assert dims.total_dim == 12

    def test_decode_inverts_encode(self):
        dims = SubsystemDims([3, 2, 2])
        for flat in range(dims.total_dim):
            assert dims.decode(flat).flat == flat

    @pytest.mark.parametrize("bad", [[], [1, 2], [2, 0]])
    def test_rejects_invalid_dims(self, bad):
        with pytest.raises(StateInvariantError) as excinfo:
            SubsystemDims(bad)
        assert excinfo.value.invariant == "dims"

    def test_rejects_total_above_cap(self):
        with pytest.raises(StateInvariantError) as excinfo:
            SubsystemDims([2] * 13)
        assert excinfo.value.invariant == "dimension_cap"

    def test_custom_cap(self):
        assert SubsystemDims([2] * 13, max_total_dim=8192).total_dim == 8192

    @pytest.mark.parametrize("p", [0, 4, -1])
    def test_axis_out_of_range(self, p):
        with pytest.raises(ValueError):
            SubsystemDims([2, 2, 2]).axis(p)

    def test_encode_rejects_out_of_range_index(self):
        with pytest.raises(ValueError):
            SubsystemDims([2, 3]).encode([0, 3])

    def test_restrict_keeps_order(self):
        assert SubsystemDims([2, 3, 4]).restrict([3, 1]).dims == (2, 4)

    def test_equality_and_hash(self):
        assert SubsystemDims([2, 3]) == SubsystemDims((2, 3))
        assert len({SubsystemDims([2, 3]), SubsystemDims([2, 3])}) == 1


def test_hamming_distance():
    dims = SubsystemDims([2, 2, 3])
    assert hamming_distance(MultiIndex(dims, (0, 0, 0)), MultiIndex(dims, (1, 0, 2))) == 2
    assert hamming_distance(MultiIndex(dims, (1, 1, 2)), MultiIndex(dims, (1, 1, 2))) == 0


def test_multi_index_rejects_wrong_length():
    with pytest.raises(ValueError):
        MultiIndex(SubsystemDims([2, 2]), (0, 0, 0))


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(StateInvariantError) as excinfo:
            PureState([2, 2], [1, 0, 0, 1])
        assert excinfo.value.invariant == "normalization"

    def test_renormalize(self):
        psi = PureState([2, 2], [1, 0, 0, 1], renormalize=True)
        assert psi.amplitude([1, 1]) == pytest.approx(1 / math.sqrt(2))

    def test_rejects_zero_vector_even_with_renormalize(self):
        with pytest.raises(StateInvariantError):
            PureState([2, 2], [0, 0, 0, 0], renormalize=True)

    def test_rejects_wrong_length(self):
        with pytest.raises(StateInvariantError) as excinfo:
            PureState([2, 2], [1, 0, 0])
        assert excinfo.value.invariant == "shape"

    @pytest.mark.parametrize("bad", [math.nan, math.inf, complex(0.0, -math.inf)])
    def test_rejects_non_finite_amplitudes(self, bad):
        for renormalize in (False, True):
            with pytest.raises(StateInvariantError) as excinfo:
                PureState([2], [bad, 0.0], renormalize=renormalize)
            assert excinfo.value.invariant == "finite"

    def test_amplitudes_are_read_only(self):
        psi = ghz(3)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0

    def test_nonzero_terms_in_flat_order(self):
        terms = w(3).nonzero_terms()
        assert [indices for indices, _ in terms] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_from_terms(self):
        psi = PureState.from_terms([2, 3], {(0, 0): 0.6, (1, 2): 0.8j})
        assert psi.amplitude([1, 2]) == pytest.approx(0.8j)
        assert count_lbps(psi) == 2


class TestOperators:
    def test_density_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.1], [0.0, 0.5]])
        with pytest.raises(StateInvariantError) as excinfo:
            DensityOperator([2], m)
        assert excinfo.value.invariant == "hermitian"

    def test_density_rejects_wrong_trace(self):
        with pytest.raises(StateInvariantError) as excinfo:
            DensityOperator([2], np.eye(2))
        assert excinfo.value.invariant == "unit_trace"

    def test_density_rejects_non_finite_entries(self):
        m = np.diag([0.5, 0.5]).astype(complex)
        m[0, 1] = m[1, 0] = math.nan
        with pytest.raises(StateInvariantError) as excinfo:
            DensityOperator([2], m)
        assert excinfo.value.invariant == "finite"

    def test_check_positive(self):
        m = np.diag([1.5, -0.5])
        rho = DensityOperator([2], m)
        with pytest.raises(StateInvariantError) as excinfo:
            rho.check_positive()
        assert excinfo.value.invariant == "positive_semidefinite"

    def test_pure_state_purity(self):
        assert pure_to_density(ghz(3)).purity() == pytest.approx(1.0)

    def test_random_mixed_is_positive(self):
        rho = random_mixed([2, 3], rank=3, seed=7)
        rho.check_positive()
        assert rho.purity() < 1.0


class TestPartialTrace:
    def test_bell_reduces_to_maximally_mixed(self):
        reduced = partial_trace(pure_to_density(bell()), [1])
        np.testing.assert_allclose(reduced.matrix, np.eye(2) / 2, atol=1e-15)

    def test_keep_all_returns_same_operator(self):
        rho = pure_to_density(ghz(3))
        assert partial_trace(rho, [1, 2, 3]) is rho

    def test_trace_preserved_for_random_state(self):
        rho = random_mixed([2, 3, 2], rank=2, seed=3)
        reduced = partial_trace(rho, [3, 1])
        assert reduced.dims.dims == (2, 2)
        assert np.trace(reduced.matrix).real == pytest.approx(1.0)

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(pure_to_density(ghz(3)), [])

    def test_product_state_factor(self):
        first = PureState([2], [0.6, 0.8])
        second = PureState([3], [0, 1, 0])
        reduced = partial_trace(pure_to_density(tensor_product([first, second])), [1])
        np.testing.assert_allclose(reduced.matrix, np.outer([0.6, 0.8], [0.6, 0.8]), atol=1e-15)


class TestMeasurement:
    def test_ghz_outcomes(self):
        probability, post = project_and_renormalize(ghz(3), 1, 1)
        assert probability == pytest.approx(0.5)
        assert post is not None
        assert post.amplitude([1, 1, 1]) == pytest.approx(1.0)

    def test_zero_probability_gives_none(self):
        psi = PureState([2, 2], [1, 0, 0, 0])
        probability, post = project_and_renormalize(psi, 2, 1)
        assert probability == 0.0
        assert post is None

    def test_outcome_out_of_range(self):
        with pytest.raises(ValueError):
            project_and_renormalize(ghz(3), 1, 2)


def test_schmidt_coefficients_of_ghz():
    np.testing.assert_allclose(schmidt_coefficients(ghz(3), 2), [1 / math.sqrt(2)] * 2)


def test_count_lbps_threshold():
    psi = random_pure([2, 2], seed=1)
    assert count_lbps(psi) == 4
    assert count_lbps(psi, threshold=1.0) == 0
    with pytest.raises(ValueError):
        count_lbps(psi, threshold=-1.0)


def test_mixture_validation():
    with pytest.raises(ValueError):
        mixture([ghz(3)], [0.5])
    with pytest.raises(ValueError):
        mixture([ghz(3), w(3)], [1.5, -0.5])
    with pytest.raises(ValueError):
        mixture([ghz(3), bell()], [0.5, 0.5])
