#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests pour le module catalog.
"""

import logging
import math

import numpy as np
import pytest

from src.catalog import (
    GateSpec,
    apply_gate,
    build_named,
    cnot,
    eq9,
    ghz,
    ghz_weighted,
    local_unitary,
    named_states,
    parameter_warning,
    psi_f,
    psi_i,
    qutrit,
    qutrit_closed_forms,
    qutrit_computed,
    random_mixed,
    random_product_pure,
    random_pure,
    random_unitary,
    table1,
    table1_closed_forms,
    w,
)
from src.multistate import PureState, StateInvariantError, count_lbps, pure_to_density
from src.negativity import global_negativity

QUTRIT_PARAMETERS = [
    (0.5, 0.5, 0.5, 0.5),
    (0.6, 0.2, 0.7, math.sqrt(1 - 0.36 - 0.04 - 0.49)),
    (0.3, 0.5j, -0.4, math.sqrt(1 - 0.09 - 0.25 - 0.16)),
]


def test_named_states_registry():
    assert named_states() == sorted(["bell", "eq9", "ghz", "ghz_weighted", "product", "psiF", "psiI", "qutrit", "w"])


def test_ghz_and_w_amplitudes():
    assert ghz(3).amplitude([1, 1, 1]) == pytest.approx(1 / math.sqrt(2))
    assert w(4).amplitude([0, 0, 1, 0]) == pytest.approx(0.5)
    assert count_lbps(w(4)) == 4


def test_eq9_terms():
    psi = eq9(0.25)
    assert psi.amplitude([0, 0, 0]) == pytest.approx(0.5)
    for indices in ([1, 1, 0], [1, 0, 1], [1, 1, 1]):
        assert psi.amplitude(indices) == pytest.approx(0.5)
    assert psi.amplitude([1, 0, 0]) == 0


@pytest.mark.parametrize("builder,arg", [(eq9, 1.5), (ghz_weighted, -0.1), (psi_i, 0.6), (psi_f, -0.1)])
def test_builders_reject_out_of_range(builder, arg):
    with pytest.raises(ValueError):
        builder(arg)


def test_qutrit_requires_normalization():
    with pytest.raises(StateInvariantError):
        qutrit(1, 1, 1, 1)
    assert qutrit(1, 1, 1, 1, renormalize=True).amplitude([1, 1, 2]) == pytest.approx(0.5)


def test_cnot_maps_psi_i_to_psi_f():
    image = apply_gate(psi_i(0.4), cnot(1, 2, [2, 2, 2]))
    np.testing.assert_allclose(image.amplitudes, psi_f(0.4).amplitudes, atol=1e-15)


def test_cnot_on_qutrit_target_adds_modulo():
    basis_state = PureState.from_terms([2, 3], {(1, 2): 1.0})
    image = apply_gate(basis_state, cnot(1, 2, [2, 3]))
    assert image.amplitude([1, 0]) == pytest.approx(1.0)


def test_gate_validation():
    with pytest.raises(ValueError):
        GateSpec((1,), np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        GateSpec((1, 1), np.eye(4))
    with pytest.raises(ValueError):
        apply_gate(ghz(3), GateSpec((1,), np.eye(3)))


def test_local_unitaries_preserve_negativity(rng):
    psi = random_pure([2, 2, 2], rng=rng)
    rotated = psi
    for p in (1, 2, 3):
        rotated = apply_gate(rotated, local_unitary(p, random_unitary(2, rng)))
    for p in (1, 2, 3):
        before = global_negativity(pure_to_density(psi), p)
        after = global_negativity(pure_to_density(rotated), p)
        assert after == pytest.approx(before, abs=1e-10)


def test_random_unitary_is_unitary(rng):
    u = random_unitary(3, rng)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_random_states_are_reproducible():
    np.testing.assert_array_equal(random_pure([2, 3], seed=5).amplitudes, random_pure([2, 3], seed=5).amplitudes)
    np.testing.assert_array_equal(random_mixed([2, 2], 2, seed=5).matrix, random_mixed([2, 2], 2, seed=5).matrix)


def test_random_mixed_rejects_zero_rank():
    with pytest.raises(ValueError):
        random_mixed([2, 2], 0, seed=1)


def test_random_product_pure_is_separable():
    rho = pure_to_density(random_product_pure([2, 3, 2], seed=3))
    for p in (1, 2, 3):
        assert global_negativity(rho, p) == pytest.approx(0.0, abs=1e-10)


class TestBuildNamed:
    def test_suffix_gives_subsystem_count(self):
        assert build_named("ghz4").dims.dims == (2, 2, 2, 2)
        assert build_named("w5").dims.n_subsystems == 5

    def test_positional_parameters(self):
        psi = build_named("qutrit", {"0": 0.5, "1": 0.5, "2": 0.5, "3": 0.5})
        assert psi.dims.dims == (2, 2, 3)

    def test_keyword_parameters(self):
        assert build_named("eq9", {"mu0": 0.25}).amplitude([0, 0, 0]) == pytest.approx(0.5)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            build_named("cluster")

    def test_missing_parameter(self):
        with pytest.raises(ValueError):
            build_named("eq9")

    def test_warns_outside_reference_range(self, caplog):
        with caplog.at_level(logging.WARNING):
            build_named("psiI", {"a": 0.2})
        assert "outside [1/3, 1/2]" in caplog.text
        assert parameter_warning("psiF", {"a": 0.4}) is None


class TestTable1:
    @pytest.mark.parametrize("a", [1 / 3, 0.4, 0.45, 0.5])
    def test_computed_matches_closed_forms(self, a):
        for entry in table1(a):
            assert entry.residual <= 1e-9, entry

    def test_has_thirty_entries(self):
        entries = table1(0.4)
        assert len(entries) == 30
        assert {(e.state, e.subsystem) for e in entries} == {
            (s, p) for s in ("psiI", "psiF") for p in (1, 2, 3)
        }

    def test_reference_value(self):
        forms = table1_closed_forms(0.4)
        assert forms[("psiF", 1, "N_G")] == pytest.approx(0.565685424949238)
        assert forms[("psiI", 1, "N_3")] == 0.0

    def test_psi_f_vanishes_at_half(self):
        for entry in table1(0.5):
            if entry.state == "psiF":
                assert entry.computed == pytest.approx(0.0, abs=1e-9)

    def test_partial_negativities_sum_to_global(self):
        for entry_g, entry_2, entry_3 in _grouped(table1(0.4)):
            assert entry_2.computed + entry_3.computed == pytest.approx(entry_g.computed, abs=1e-9)


def _grouped(entries):
    by_key = {(e.state, e.subsystem, e.measure): e for e in entries}
    for state in ("psiI", "psiF"):
        for p in (1, 2, 3):
            yield by_key[(state, p, "N_G")], by_key[(state, p, "E_2")], by_key[(state, p, "E_3")]


@pytest.mark.parametrize("a", QUTRIT_PARAMETERS)
def test_qutrit_closed_forms(a):
    expected = qutrit_closed_forms(*a)
    computed = qutrit_computed(qutrit(*a))
    assert set(expected) == set(computed)
    for key, value in expected.items():
        assert computed[key] == pytest.approx(value, abs=1e-9), key
