#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests pour le module state_io.
"""

import json

import numpy as np
import pytest

from src.catalog import ghz, random_mixed, w
from src.multistate import DensityOperator, PureState, StateInvariantError, pure_to_density
from src.ptranspose import kway_pt
from src.state_io import (
    StateParseError,
    dump_state,
    load_state,
    parse_named_spec,
    parse_state,
    resolve_named,
    state_from_dict,
    state_to_dict,
)

BELL_DOCUMENT = {
    "dims": [2, 2],
    "pure": {"amplitudes": [
        {"index": [0, 0], "re": 0.7071067811865476},
        {"index": [1, 1], "re": 0.7071067811865476},
    ]},
}


def test_parse_pure_state():
    psi = parse_state(json.dumps(BELL_DOCUMENT))
    assert isinstance(psi, PureState)
    assert psi.amplitude([1, 1]) == pytest.approx(2 ** -0.5)
    assert psi.amplitude([0, 1]) == 0


def test_parse_accepts_bytes():
    assert isinstance(parse_state(json.dumps(BELL_DOCUMENT).encode("utf-8")), PureState)


def test_parse_mixed_state_with_hermitian_completion():
    document = {
        "dims": [2],
        "mixed": {"entries": [
            {"row": [0], "col": [0], "re": 0.5},
            {"row": [1], "col": [1], "re": 0.5},
            {"row": [1], "col": [0], "re": 0.1, "im": 0.2},
        ]},
    }
    rho = state_from_dict(document)
    assert isinstance(rho, DensityOperator)
    assert rho.matrix[0, 1] == pytest.approx(0.1 - 0.2j)


def test_malformed_json_reports_byte_offset():
    text = '{"dims": [2, 2], "pure": ]'
    with pytest.raises(StateParseError) as excinfo:
        parse_state(text)
    assert excinfo.value.offset == text.rindex("]")
    assert "byte offset" in str(excinfo.value)


def test_byte_offset_counts_utf8_bytes():
    text = '{"é": 1, ]'
    with pytest.raises(StateParseError) as excinfo:
        parse_state(text)
    assert excinfo.value.offset == len(text[:text.index("]")].encode("utf-8"))


@pytest.mark.parametrize("document", [
    [],
    {"pure": {"amplitudes": []}},
    {"dims": [2, 2]},
    {"dims": [2, 2], "pure": {"amplitudes": []}, "mixed": {"entries": []}},
    {"dims": "2,2", "pure": {"amplitudes": []}},
    {"dims": [2, 2], "pure": {"amplitudes": [{"index": [0, 2], "re": 1.0}]}},
    {"dims": [2, 2], "pure": {"amplitudes": [{"index": [0, 0], "re": "one"}]}},
    {"dims": [2, 2], "pure": {"amplitudes": [{"index": [0, 0], "re": 1.0}, {"index": [0, 0], "re": 0.0}]}},
    {"dims": [2], "mixed": {"entries": [{"row": [0], "col": [1], "re": 0.1}]}},
])
def test_schema_violations(document):
    with pytest.raises(StateParseError):
        state_from_dict(document)


def test_invariant_violations_are_not_parse_errors():
    document = {"dims": [2, 2], "pure": {"amplitudes": [{"index": [0, 0], "re": 0.5}]}}
    with pytest.raises(StateInvariantError) as excinfo:
        state_from_dict(document)
    assert excinfo.value.invariant == "normalization"


def test_non_finite_values_violate_an_invariant():
    text = '{"dims": [2], "mixed": {"entries": [{"row": [0], "col": [0], "re": NaN}, {"row": [1], "col": [1], "re": 0.5}]}}'
    with pytest.raises(StateInvariantError) as excinfo:
        parse_state(text)
    assert excinfo.value.invariant == "finite"


def test_renormalize_flag():
    document = {"dims": [2, 2], "renormalize": True,
                "pure": {"amplitudes": [{"index": [0, 0], "re": 3.0}, {"index": [1, 1], "im": 4.0}]}}
    psi = state_from_dict(document)
    assert psi.amplitude([1, 1]) == pytest.approx(0.8j)


def test_dimension_cap():
    document = {"dims": [2, 2, 2], "pure": {"amplitudes": [{"index": [0, 0, 0], "re": 1.0}]}}
    with pytest.raises(StateInvariantError):
        state_from_dict(document, max_total_dim=4)


def test_pure_round_trip(tmp_path):
    path = tmp_path / "w.json"
    dump_state(w(3), path)
    loaded = load_state(path)
    np.testing.assert_allclose(loaded.amplitudes, w(3).amplitudes)


def test_mixed_round_trip(tmp_path):
    rho = random_mixed([2, 3], rank=2, seed=6)
    path = tmp_path / "nested" / "rho.json"
    dump_state(rho, path)
    loaded = load_state(path)
    np.testing.assert_allclose(loaded.matrix, rho.matrix, atol=1e-15)


def test_pure_state_dumped_in_mixed_form():
    document = state_to_dict(ghz(3), mixed=True)
    assert "mixed" in document
    rho = state_from_dict(document)
    np.testing.assert_allclose(rho.matrix, pure_to_density(ghz(3)).matrix)


def test_transposed_operator_carries_provenance():
    document = state_to_dict(kway_pt(pure_to_density(ghz(3)), 2, 3))
    assert document["provenance"] == {"subsystem": 2, "kind": "kway", "K": 3}


def test_load_state_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_state(tmp_path / "absent.json")


class TestNamedSpecs:
    def test_plain_name(self):
        assert parse_named_spec("ghz3") == ("ghz3", {})

    def test_keyword_parameters(self):
        assert parse_named_spec("eq9:mu0=0.25") == ("eq9", {"mu0": 0.25})

    def test_positional_parameters_and_fractions(self):
        name, params = parse_named_spec("qutrit:0.5,1/2,0.5,0.5")
        assert name == "qutrit"
        assert params == {"0": 0.5, "1": 0.5, "2": 0.5, "3": 0.5}

    @pytest.mark.parametrize("spec", [":mu0=0.5", "eq9:mu0=0.5,", "psiI:a=1/0"])
    def test_invalid_specs(self, spec):
        with pytest.raises(StateParseError):
            parse_named_spec(spec)

    def test_resolve_named(self):
        assert resolve_named("eq9:0.25").amplitude([0, 0, 0]) == pytest.approx(0.5)

    def test_resolve_unknown_name(self):
        with pytest.raises(StateParseError):
            resolve_named("cluster4")

    def test_resolve_unnormalizable_qutrit(self):
        with pytest.raises(StateInvariantError):
            resolve_named("qutrit:1,1,1,1")


def test_tolerances_are_configurable():
    document = {"dims": [2], "pure": {"amplitudes": [{"index": [0], "re": 1.0 + 1e-10}]}}
    with pytest.raises(StateInvariantError):
        state_from_dict(document)
    assert state_from_dict(document, norm_tol=1e-8).amplitude([0]) == pytest.approx(1.0)
