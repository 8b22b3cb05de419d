#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Named states, random states, gates and the reference tables.

Named states:
    ghz(n), w(n), bell, product(n), ghz_weighted(w), eq9(mu0),
    psiI(a), psiF(a), qutrit(a0, a1, a2, a3)
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.multistate import (
    DensityOperator,
    DimsLike,
    PureState,
    as_dims,
    mixture,
    pure_to_density,
    schmidt_coefficients,
)
from src.negativity import (
    coherence_negativity,
    partial_kway_negativities,
    partial_subset_negativity,
    subset_coherence_negativity,
)
from src.spectral import ZERO_TOL

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
TABLE1_MEASURES = ("N_G", "N_2", "N_3", "E_2", "E_3")
TABLE1_STATES = ("psiI", "psiF")


@dataclass(frozen=True)
class GateSpec:
    """Unitary acting on an ordered list of target subsystems (1-indexed)."""

    targets: Tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if not self.targets:
            raise ValueError("a gate needs at least one target")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"gate targets must be distinct, got {list(self.targets)}")
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"gate matrix must be square, got shape {m.shape}")
        defect = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
        if defect > UNITARY_TOL:
            raise ValueError(f"gate matrix is not unitary: max |U^H U - I| = {defect:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def validate_for(self, dims: DimsLike) -> None:
        space = as_dims(dims)
        size = math.prod(space.dim(t) for t in self.targets)
        if size != self.matrix.shape[0]:
            raise ValueError(
                f"gate of dimension {self.matrix.shape[0]} does not match targets "
                f"{list(self.targets)} of dimension {size}"
            )


def apply_gate(psi: PureState, gate: GateSpec) -> PureState:
    """Apply the gate on its targets and the identity elsewhere."""
    gate.validate_for(psi.dims)
    axes = [psi.dims.axis(t) for t in gate.targets]
    front = list(range(len(axes)))

    tensor = np.moveaxis(psi.as_tensor(), axes, front)
    shape = tensor.shape
    block = gate.matrix @ tensor.reshape(gate.matrix.shape[0], -1)
    result = np.moveaxis(block.reshape(shape), front, axes)
    return PureState(psi.dims, result.reshape(-1))


def cnot(control: int, target: int, dims: DimsLike) -> GateSpec:
    """|c, t⟩ → |c, (t + c) mod d_t⟩; the usual CNOT on qubits."""
    space = as_dims(dims)
    d_c, d_t = space.dim(control), space.dim(target)
    matrix = np.zeros((d_c * d_t, d_c * d_t))
    for c in range(d_c):
        for t in range(d_t):
            matrix[c * d_t + (t + c) % d_t, c * d_t + t] = 1.0
    return GateSpec((control, target), matrix)


def local_unitary(p: int, unitary: np.ndarray) -> GateSpec:
    return GateSpec((p,), unitary)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


# --- Named states -----------------------------------------------------------

def ghz(n: int = 3) -> PureState:
    dims = [2] * n
    return PureState.from_terms(dims, {(0,) * n: 1.0, (1,) * n: 1.0}, renormalize=True)


def w(n: int = 3) -> PureState:
    dims = [2] * n
    terms = {tuple(1 if m == k else 0 for m in range(n)): 1.0 for k in range(n)}
    return PureState.from_terms(dims, terms, renormalize=True)


def bell() -> PureState:
    return ghz(2)


def product(n: int = 2) -> PureState:
    """|+⟩^{⊗n}."""
    return PureState([2] * n, np.full(2 ** n, 1.0 / math.sqrt(2 ** n)))


def ghz_weighted(weight: float, n: int = 3) -> PureState:
    """√w|0…0⟩ + √(1−w)|1…1⟩."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {weight}")
    return PureState.from_terms([2] * n, {(0,) * n: math.sqrt(weight), (1,) * n: math.sqrt(1.0 - weight)})


def eq9(mu0: float) -> PureState:
    """√μ₀|000⟩ + √(μ₁/3)(|110⟩ + |101⟩ + |111⟩), μ₁ = 1 − μ₀."""
    if not 0.0 <= mu0 <= 1.0:
        raise ValueError(f"mu0 must lie in [0, 1], got {mu0}")
    mu1 = 1.0 - mu0
    side = math.sqrt(mu1 / 3.0)
    terms = {(0, 0, 0): math.sqrt(mu0), (1, 1, 0): side, (1, 0, 1): side, (1, 1, 1): side}
    return PureState.from_terms([2, 2, 2], terms)


def _check_w_like(a: float) -> float:
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"a must lie in [0, 1/2] for a normalizable state, got {a}")
    return math.sqrt(max(0.0, 1.0 - 2.0 * a))


def psi_i(a: float) -> PureState:
    """√a|100⟩ + √a|010⟩ + √(1−2a)|001⟩."""
    rest = _check_w_like(a)
    root = math.sqrt(a)
    return PureState.from_terms([2, 2, 2], {(1, 0, 0): root, (0, 1, 0): root, (0, 0, 1): rest})


def psi_f(a: float) -> PureState:
    """√a|010⟩ + √a|110⟩ + √(1−2a)|001⟩, the CNOT(1→2) image of psi_i."""
    rest = _check_w_like(a)
    root = math.sqrt(a)
    return PureState.from_terms([2, 2, 2], {(0, 1, 0): root, (1, 1, 0): root, (0, 0, 1): rest})


def qutrit(a0: complex, a1: complex, a2: complex, a3: complex, renormalize: bool = False) -> PureState:
    """a₀|000⟩ + a₁|101⟩ + a₂|011⟩ + a₃|112⟩ on dims (2, 2, 3)."""
    terms = {(0, 0, 0): a0, (1, 0, 1): a1, (0, 1, 1): a2, (1, 1, 2): a3}
    return PureState.from_terms([2, 2, 3], terms, renormalize=renormalize)


def maximally_mixed(dims: DimsLike) -> DensityOperator:
    space = as_dims(dims)
    return DensityOperator(space, np.eye(space.total_dim) / space.total_dim)


def _positional(params: Mapping[str, Any], names: Sequence[str]) -> List[Any]:
    values = []
    for position, name in enumerate(names):
        if name in params:
            values.append(params[name])
        elif str(position) in params:
            values.append(params[str(position)])
        else:
            raise ValueError(f"missing parameter {name!r}")
    return values


def _build_ghz(params: Mapping[str, Any]) -> PureState:
    return ghz(int(params.get("n", 3)))


def _build_w(params: Mapping[str, Any]) -> PureState:
    return w(int(params.get("n", 3)))


def _build_product(params: Mapping[str, Any]) -> PureState:
    return product(int(params.get("n", 2)))


def _build_ghz_weighted(params: Mapping[str, Any]) -> PureState:
    return ghz_weighted(float(_positional(params, ["w"])[0]), int(params.get("n", 3)))


def _build_eq9(params: Mapping[str, Any]) -> PureState:
    return eq9(float(_positional(params, ["mu0"])[0]))


def _build_psi_i(params: Mapping[str, Any]) -> PureState:
    return psi_i(float(_positional(params, ["a"])[0]))


def _build_psi_f(params: Mapping[str, Any]) -> PureState:
    return psi_f(float(_positional(params, ["a"])[0]))


def _build_qutrit(params: Mapping[str, Any]) -> PureState:
    a0, a1, a2, a3 = (complex(v) for v in _positional(params, ["a0", "a1", "a2", "a3"]))
    return qutrit(a0, a1, a2, a3, renormalize=bool(params.get("renormalize", False)))


_BUILDERS: Dict[str, Callable[[Mapping[str, Any]], PureState]] = {
    "ghz": _build_ghz,
    "w": _build_w,
    "bell": lambda params: bell(),
    "product": _build_product,
    "ghz_weighted": _build_ghz_weighted,
    "eq9": _build_eq9,
    "psiI": _build_psi_i,
    "psiF": _build_psi_f,
    "qutrit": _build_qutrit,
}


def named_states() -> List[str]:
    return sorted(_BUILDERS)


def parameter_warning(name: str, params: Mapping[str, Any]) -> Optional[str]:
    """Message when a parameter lies outside the range the reference values assume."""
    if name in ("psiI", "psiF"):
        a = float(_positional(params, ["a"])[0])
        if not 1.0 / 3.0 - 1e-12 <= a <= 0.5 + 1e-12:
            return f"{name}: a = {a} outside [1/3, 1/2]"
    return None


def build_named(name: str, params: Optional[Mapping[str, Any]] = None) -> PureState:
    """
    Build a named state.

    Args:
        name: One of named_states(); "ghz3"/"w4" style suffixes give n
        params: Builder parameters, by keyword or by position ("0", "1", ...)

    Raises:
        ValueError: Unknown name, missing or non-normalizable parameters
    """
    params = dict(params or {})
    base = name
    if name not in _BUILDERS:
        stem = name.rstrip("0123456789")
        if stem in ("ghz", "w", "product") and stem != name:
            base = stem
            params.setdefault("n", int(name[len(stem):]))
        else:
            raise ValueError(f"unknown named state {name!r}; known: {', '.join(named_states())}")

    warning = parameter_warning(base, params)
    if warning:
        logger.warning(warning)
    return _BUILDERS[base](params)


# --- Random states ----------------------------------------------------------

def random_pure(dims: DimsLike, seed: Optional[int] = None,
                rng: Optional[np.random.Generator] = None) -> PureState:
    """Independent standard complex normal amplitudes, normalized."""
    space = as_dims(dims)
    generator = rng if rng is not None else np.random.default_rng(seed)
    z = generator.standard_normal(space.total_dim) + 1j * generator.standard_normal(space.total_dim)
    return PureState(space, z, renormalize=True)


def random_mixed(dims: DimsLike, rank: int, seed: Optional[int] = None,
                 rng: Optional[np.random.Generator] = None) -> DensityOperator:
    """Convex combination of `rank` random pure states with uniform-simplex weights."""
    if rank < 1:
        raise ValueError(f"rank must be at least 1, got {rank}")
    generator = rng if rng is not None else np.random.default_rng(seed)
    states = [random_pure(dims, rng=generator) for _ in range(rank)]
    weights = generator.dirichlet(np.ones(rank))
    weights = weights / weights.sum()
    return mixture(states, weights)


def random_product_pure(dims: DimsLike, seed: Optional[int] = None,
                        rng: Optional[np.random.Generator] = None) -> PureState:
    space = as_dims(dims)
    generator = rng if rng is not None else np.random.default_rng(seed)
    factors = [random_pure([d], rng=generator).amplitudes for d in space.dims]
    return PureState(space, reduce(np.kron, factors), renormalize=True)


# --- Reference tables -------------------------------------------------------

@dataclass(frozen=True)
class Table1Entry:
    state: str
    subsystem: int
    measure: str
    computed: float
    closed_form: float

    @property
    def residual(self) -> float:
        return abs(self.computed - self.closed_form)


def table1_closed_forms(a: float) -> Dict[Tuple[str, int, str], float]:
    """Closed forms of (N_G, N_2, N_3, E_2, E_3) for psiI(a) and psiF(a), p = 1..3."""
    s1 = 2.0 * math.sqrt(max(0.0, a - a * a))
    s2 = 2.0 * math.sqrt(max(0.0, 2.0 * a * (1.0 - 2.0 * a)))
    s3 = 2.0 * math.sqrt(max(0.0, a - 2.0 * a * a))
    half = s2 / 2.0
    rows = {
        ("psiI", 1): (s1, s1, 0.0, s1, 0.0),
        ("psiI", 2): (s1, s1, 0.0, s1, 0.0),
        ("psiI", 3): (s2, s2, 0.0, s2, 0.0),
        ("psiF", 1): (s3, 0.0, s3, 0.0, s3),
        ("psiF", 2): (s2, s3, s3, half, half),
        ("psiF", 3): (s2, s3, s3, half, half),
    }
    forms = {}
    for (state, p), values in rows.items():
        for measure, value in zip(TABLE1_MEASURES, values):
            forms[(state, p, measure)] = value
    return forms


def table1(a: float, zero_tol: float = ZERO_TOL) -> List[Table1Entry]:
    """
    Global, 2-way and 3-way negativities and partial negativities of psiI(a)
    and psiF(a) for every subsystem, next to their closed forms. The N_2 and
    N_3 columns are coherence negativities.
    """
    if not 1.0 / 3.0 - 1e-12 <= a <= 0.5 + 1e-12:
        logger.warning("table1: a = %s outside [1/3, 1/2]", a)
    forms = table1_closed_forms(a)
    builders = {"psiI": psi_i, "psiF": psi_f}
    entries = []
    for state in TABLE1_STATES:
        rho = pure_to_density(builders[state](a))
        for p in (1, 2, 3):
            report = partial_kway_negativities(rho, p, zero_tol)
            computed = {
                "N_G": report.n_global,
                "N_2": report.c_kway[2],
                "N_3": report.c_kway[3],
                "E_2": report.e_kway[2],
                "E_3": report.e_kway[3],
            }
            for measure in TABLE1_MEASURES:
                entries.append(Table1Entry(state, p, measure, computed[measure], forms[(state, p, measure)]))
    return entries


def qutrit_closed_forms(a0: complex, a1: complex, a2: complex, a3: complex) -> Dict[str, float]:
    """
    Analytic values for the qutrit family a₀|000⟩ + a₁|101⟩ + a₂|011⟩ + a₃|112⟩.

    Keys: mu0A, mu1A, mu0B, mu1B, NG_A, NG_B, N3_A, N3_B, C2_A, C2_B,
    N_A-AB, N_A-AC, N_B-AB, N_B-BC, E2_A, E3_A, E2_B, E3_B, E_A-AB, E_A-AC,
    E_B-AB, E_B-BC.
    """
    b0, b1, b2, b3 = (abs(complex(x)) for x in (a0, a1, a2, a3))
    mu0a, mu1a = math.sqrt(b0 ** 2 + b2 ** 2), math.sqrt(b1 ** 2 + b3 ** 2)
    mu0b, mu1b = math.sqrt(b0 ** 2 + b1 ** 2), math.sqrt(b2 ** 2 + b3 ** 2)
    den_a, den_b = mu0a * mu1a, mu0b * mu1b
    return {
        "mu0A": max(mu0a, mu1a),
        "mu1A": min(mu0a, mu1a),
        "mu0B": max(mu0b, mu1b),
        "mu1B": min(mu0b, mu1b),
        "NG_A": 2.0 * den_a,
        "NG_B": 2.0 * den_b,
        "N3_A": 2.0 * b0 * b3,
        "N3_B": 2.0 * b0 * b3,
        "C2_A": 2.0 * math.hypot(b0 * b1 + b2 * b3, b1 * b2),
        "C2_B": 2.0 * math.hypot(b0 * b2 + b1 * b3, b1 * b2),
        "N_A-AB": 2.0 * b1 * b2,
        "N_A-AC": 2.0 * (b0 * b1 + b2 * b3),
        "N_B-AB": 2.0 * b1 * b2,
        "N_B-BC": 2.0 * (b0 * b2 + b1 * b3),
        "E2_A": 2.0 * (b0 ** 2 * b1 ** 2 + b2 ** 2 * mu1a ** 2) / den_a,
        "E3_A": 2.0 * b0 ** 2 * b3 ** 2 / den_a,
        "E2_B": 2.0 * (b0 ** 2 * b2 ** 2 + b1 ** 2 * mu1b ** 2) / den_b,
        "E3_B": 2.0 * b0 ** 2 * b3 ** 2 / den_b,
        "E_A-AB": 2.0 * b1 ** 2 * b2 ** 2 / den_a,
        "E_A-AC": 2.0 * (b0 ** 2 * b1 ** 2 + b2 ** 2 * b3 ** 2) / den_a,
        "E_B-AB": 2.0 * b1 ** 2 * b2 ** 2 / den_b,
        "E_B-BC": 2.0 * (b0 ** 2 * b2 ** 2 + b1 ** 2 * b3 ** 2) / den_b,
    }


def qutrit_computed(psi: PureState, zero_tol: float = ZERO_TOL) -> Dict[str, float]:
    """The quantities of qutrit_closed_forms evaluated numerically on psi."""
    rho = pure_to_density(psi)
    schmidt_a = schmidt_coefficients(psi, 1)
    schmidt_b = schmidt_coefficients(psi, 2)
    report_a = partial_kway_negativities(rho, 1, zero_tol)
    report_b = partial_kway_negativities(rho, 2, zero_tol)
    return {
        "mu0A": float(schmidt_a[0]),
        "mu1A": float(schmidt_a[1]),
        "mu0B": float(schmidt_b[0]),
        "mu1B": float(schmidt_b[1]),
        "NG_A": report_a.n_global,
        "NG_B": report_b.n_global,
        "N3_A": coherence_negativity(rho, 1, 3),
        "N3_B": coherence_negativity(rho, 2, 3),
        "C2_A": report_a.c_kway[2],
        "C2_B": report_b.c_kway[2],
        "N_A-AB": subset_coherence_negativity(rho, 1, (1, 2)),
        "N_A-AC": subset_coherence_negativity(rho, 1, (1, 3)),
        "N_B-AB": subset_coherence_negativity(rho, 2, (1, 2)),
        "N_B-BC": subset_coherence_negativity(rho, 2, (2, 3)),
        "E2_A": report_a.e_kway[2],
        "E3_A": report_a.e_kway[3],
        "E2_B": report_b.e_kway[2],
        "E3_B": report_b.e_kway[3],
        "E_A-AB": partial_subset_negativity(rho, 1, (1, 2), zero_tol),
        "E_A-AC": partial_subset_negativity(rho, 1, (1, 3), zero_tol),
        "E_B-AB": partial_subset_negativity(rho, 2, (1, 2), zero_tol),
        "E_B-BC": partial_subset_negativity(rho, 2, (2, 3), zero_tol),
    }
