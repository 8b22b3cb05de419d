#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Reading and writing states.

JSON schema:

    {"dims": [d1, ..., dN],
     "pure": {"amplitudes": [{"index": [i1, ..., iN], "re": x, "im": y}, ...]}}

    {"dims": [d1, ..., dN],
     "mixed": {"entries": [{"row": [...], "col": [...], "re": x, "im": y}, ...]}}

Omitted entries are zero. Mixed entries are given for row >= col in flat
order; the upper triangle follows by Hermitian completion. An optional
top-level "renormalize": true rescales a pure state, and transposed
operators carry an extra "provenance" object.

Named-state specs: ``name[:k=v,...]``, e.g. ``ghz3``, ``eq9:mu0=0.5``,
``qutrit:0.5,0.5,0.5,0.5`` (positional values).
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from src.catalog import build_named
from src.multistate import (
    HERMITIAN_TOL,
    NORM_TOL,
    DensityOperator,
    Operator,
    PureState,
    StateInvariantError,
    SubsystemDims,
)
from src.ptranspose import TransposedOperator
from src.utils import parse_fraction

logger = logging.getLogger(__name__)

State = Union[PureState, DensityOperator]


class StateParseError(ValueError):
    """Malformed state document or named-state spec."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise StateParseError(message)


def _as_int_list(value: Any, what: str) -> List[int]:
    _require(isinstance(value, list), f"{what} must be a list of integers")
    for item in value:
        _require(isinstance(item, int) and not isinstance(item, bool), f"{what} must contain integers only")
    return list(value)


def _number(entry: Mapping[str, Any], key: str) -> float:
    value = entry.get(key, 0.0)
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"field {key!r} must be a number, got {value!r}")
    return float(value)


def _flat(dims: SubsystemDims, indices: List[int], what: str) -> int:
    try:
        return dims.encode(indices)
    except ValueError as e:
        raise StateParseError(f"{what}: {e}") from e


def state_from_dict(document: Mapping[str, Any], max_total_dim: int = 4096, *,
                    norm_tol: float = NORM_TOL, hermitian_tol: float = HERMITIAN_TOL) -> State:
    """
    Build a state from a parsed JSON document.

    Raises:
        StateParseError: If the document does not follow the schema
        StateInvariantError: If the described state violates an invariant
    """
    _require(isinstance(document, dict), "state document must be a JSON object")
    _require("dims" in document, "missing field 'dims'")
    dims = SubsystemDims(_as_int_list(document["dims"], "dims"), max_total_dim)
    has_pure, has_mixed = "pure" in document, "mixed" in document
    _require(has_pure != has_mixed, "exactly one of 'pure' or 'mixed' is required")

    if has_pure:
        body = document["pure"]
        _require(isinstance(body, dict) and isinstance(body.get("amplitudes"), list),
                 "'pure' must hold an 'amplitudes' list")
        vector = np.zeros(dims.total_dim, dtype=complex)
        seen = set()
        for entry in body["amplitudes"]:
            _require(isinstance(entry, dict), "amplitude entries must be objects")
            flat = _flat(dims, _as_int_list(entry.get("index"), "index"), "index")
            _require(flat not in seen, f"duplicate amplitude for index {entry.get('index')}")
            seen.add(flat)
            vector[flat] = complex(_number(entry, "re"), _number(entry, "im"))
        renormalize = document.get("renormalize", False)
        _require(isinstance(renormalize, bool), "'renormalize' must be a boolean")
        return PureState(dims, vector, renormalize=renormalize, tol=norm_tol)

    body = document["mixed"]
    _require(isinstance(body, dict) and isinstance(body.get("entries"), list),
             "'mixed' must hold an 'entries' list")
    matrix = np.zeros((dims.total_dim, dims.total_dim), dtype=complex)
    seen_pairs = set()
    for entry in body["entries"]:
        _require(isinstance(entry, dict), "matrix entries must be objects")
        row = _flat(dims, _as_int_list(entry.get("row"), "row"), "row")
        col = _flat(dims, _as_int_list(entry.get("col"), "col"), "col")
        _require(row >= col, f"entry ({row}, {col}) lies above the diagonal; give row >= col")
        _require((row, col) not in seen_pairs, f"duplicate entry ({row}, {col})")
        seen_pairs.add((row, col))
        value = complex(_number(entry, "re"), _number(entry, "im"))
        matrix[row, col] = value
        if row != col:
            matrix[col, row] = value.conjugate()
    return DensityOperator(dims, matrix, hermitian_tol=hermitian_tol, trace_tol=norm_tol)


def parse_state(text: Union[str, bytes], max_total_dim: int = 4096, **tolerances: float) -> State:
    """
    Parse a JSON state document.

    Raises:
        StateParseError: Malformed JSON (with byte offset) or schema violation
    """
    raw = text.decode("utf-8") if isinstance(text, bytes) else text
    try:
        document = json.loads(raw)
    except json.JSONDecodeError as e:
        offset = len(raw[:e.pos].encode("utf-8"))
        raise StateParseError(f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}", offset) from e
    return state_from_dict(document, max_total_dim, **tolerances)


def load_state(path: Union[str, Path], max_total_dim: int = 4096, **tolerances: float) -> State:
    """
    Raises:
        FileNotFoundError: If the file does not exist
        StateParseError: As parse_state
    """
    logger.debug("Loading state from %s", path)
    file_path = Path(path)
    if not file_path.exists():
        logger.error("State file %s does not exist", path)
        raise FileNotFoundError(f"state file {path} does not exist")
    return parse_state(file_path.read_bytes(), max_total_dim, **tolerances)


def state_to_dict(state: Union[PureState, Operator], mixed: bool = False) -> Dict[str, Any]:
    """
    Serialize a state. Pure states use the pure form unless `mixed` is set;
    operators use the mixed form with lower-triangle nonzero entries.
    """
    dims = state.dims
    document: Dict[str, Any] = {"dims": list(dims.dims)}
    if isinstance(state, PureState) and not mixed:
        document["pure"] = {"amplitudes": [
            {"index": list(dims.decode(int(flat)).indices),
             "re": float(state.amplitudes[flat].real), "im": float(state.amplitudes[flat].imag)}
            for flat in np.flatnonzero(state.amplitudes)
        ]}
        return document

    if isinstance(state, PureState):
        a = state.amplitudes
        matrix = np.outer(a, a.conj())
    else:
        matrix = state.matrix
    rows, cols = np.nonzero(np.tril(matrix))
    document["mixed"] = {"entries": [
        {"row": list(dims.decode(int(r)).indices), "col": list(dims.decode(int(c)).indices),
         "re": float(matrix[r, c].real), "im": float(matrix[r, c].imag)}
        for r, c in zip(rows, cols)
    ]}
    if isinstance(state, TransposedOperator):
        document["provenance"] = state.provenance.to_dict()
    return document


def dump_state(state: Union[PureState, Operator], path: Union[str, Path], mixed: bool = False) -> None:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as file:
        json.dump(state_to_dict(state, mixed), file, indent=1)
        file.write("\n")
    logger.debug("State written to %s", path)


def _scalar(text: str) -> Union[int, float, complex, bool, str]:
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for kind in (int, float, complex):
        try:
            return kind(text.strip())
        except ValueError:
            continue
    return text.strip()


def parse_named_spec(spec: str) -> Tuple[str, Dict[str, Any]]:
    """
    Split ``name[:k=v,...]`` into the name and its parameters. Values
    without a key are stored under their position ("0", "1", ...); "1/3"
    style fractions are accepted.

    Raises:
        StateParseError: On an empty name or an empty parameter
    """
    name, _, arguments = spec.strip().partition(":")
    if not name:
        raise StateParseError(f"empty state name in {spec!r}")
    params: Dict[str, Any] = {}
    if arguments:
        for position, item in enumerate(arguments.split(",")):
            if not item.strip():
                raise StateParseError(f"empty parameter in {spec!r}")
            key, sep, value = item.partition("=")
            if not sep:
                key, value = str(position), item
            params[key.strip()] = _fraction_or_scalar(value)
    return name, params


def _fraction_or_scalar(value: str) -> Union[int, float, complex, bool, str]:
    if "/" in value:
        try:
            return parse_fraction(value)
        except ValueError as e:
            raise StateParseError(f"invalid fraction {value!r}") from e
    return _scalar(value)


def resolve_named(spec: str) -> PureState:
    """
    Build the state named by a ``name[:k=v,...]`` spec.

    Raises:
        StateParseError: Unknown name or unusable parameters
    """
    name, params = parse_named_spec(spec)
    try:
        return build_named(name, params)
    except StateInvariantError:
        raise
    except (ValueError, TypeError) as e:
        raise StateParseError(f"named state {spec!r}: {e}") from e
