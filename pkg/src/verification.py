#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Identity and inequality checks run by the ``verify`` command.

Universal checks apply to any state of the right shape; family checks
compare against closed forms when the state was built from a named family.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Union

from src.catalog import (
    apply_gate,
    cnot,
    eq9,
    psi_f,
    psi_i,
    qutrit,
    qutrit_closed_forms,
    qutrit_computed,
    table1,
)
from src.multistate import DensityOperator, PureState, pure_to_density
from src.negativity import (
    IDENTITY_TOL,
    coherence_negativity,
    global_negativity,
    kway_negativity,
    monogamy_residual,
    negativity_routes,
    partial_kway_negativities,
    partial_subset_negativity,
    reduced_convexity_check,
    single_negative_identity_check,
    subset_coherence_negativity,
)
from src.ptranspose import global_pt, kway_pt, verify_global_decomposition, verify_tripartite_decomposition
from src.spectral import ZERO_TOL

logger = logging.getLogger(__name__)

DECOMPOSITION_TOL = 1e-12
SINGLE_NEGATIVE_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    applicable: bool = True

    @property
    def passed(self) -> bool:
        return not self.applicable or self.residual <= self.tolerance

    def status(self) -> str:
        if not self.applicable:
            return "N/A"
        return "PASS" if self.passed else "FAIL"


def _closeness(name: str, computed: float, expected: float, tol: float) -> CheckResult:
    return CheckResult(name, abs(computed - expected), tol)


def universal_checks(state: Union[PureState, DensityOperator], zero_tol: float = ZERO_TOL,
                     identity_tol: float = IDENTITY_TOL) -> List[CheckResult]:
    """Decomposition identities, negativity splitting, two-route agreement and convexity."""
    rho = pure_to_density(state) if isinstance(state, PureState) else state
    n = rho.n_subsystems
    results: List[CheckResult] = []
    for p in range(1, n + 1):
        d_p = rho.dims.dim(p)
        if n == 3:
            results.append(CheckResult(f"tripartite_decomposition[p={p}]",
                                       verify_tripartite_decomposition(rho, p), DECOMPOSITION_TOL))
        if n >= 2:
            results.append(CheckResult(f"global_decomposition[p={p}]",
                                       verify_global_decomposition(rho, p), DECOMPOSITION_TOL))
            report = partial_kway_negativities(rho, p, zero_tol, identity_tol=math.inf)
            results.append(CheckResult(f"negativity_splitting[p={p}]", report.identity_residual, identity_tol))

        by_norm, by_eigenvalues = negativity_routes(global_pt(rho, p), d_p, zero_tol)
        results.append(CheckResult(f"two_routes[p={p},G]", abs(by_norm - by_eigenvalues), identity_tol))
        for K in range(2, n + 1):
            by_norm, by_eigenvalues = negativity_routes(kway_pt(rho, p, K), d_p, zero_tol)
            results.append(CheckResult(f"two_routes[p={p},K={K}]", abs(by_norm - by_eigenvalues), identity_tol))

        single = single_negative_identity_check(rho, p, zero_tol)
        results.append(CheckResult(f"single_negative[p={p}]",
                                   single.residual if single.applicable else 0.0,
                                   SINGLE_NEGATIVE_TOL, applicable=single.applicable))

    if isinstance(state, PureState) and n == 3:
        for measured in (1, 2, 3):
            pair = tuple(q for q in (1, 2, 3) if q != measured)
            check = reduced_convexity_check(state, measured, (pair[0], pair[1]), zero_tol)
            results.append(CheckResult(f"reduced_convexity[measure={measured}]",
                                       max(0.0, check.lhs - check.rhs), identity_tol))
    return results


def eq9_checks(mu0: float, zero_tol: float = ZERO_TOL, tol: float = IDENTITY_TOL) -> List[CheckResult]:
    """Closed forms, monogamy and the measured-pair value of the eq9 family, subsystem A."""
    mu1 = 1.0 - mu0
    root = math.sqrt(mu0 * mu1)
    psi = eq9(mu0)
    rho = pure_to_density(psi)
    report = partial_kway_negativities(rho, 1, zero_tol)
    pair_value = 2.0 * math.sqrt(mu0 * mu1 / 3.0)
    convexity = reduced_convexity_check(psi, 3, (1, 2), zero_tol)
    return [
        _closeness("eq9.N_G", report.n_global, 2.0 * root, tol),
        _closeness("eq9.N_2", report.c_kway[2], 2.0 * math.sqrt(2.0 * mu0 * mu1 / 3.0), tol),
        _closeness("eq9.N_3", report.c_kway[3], pair_value, tol),
        _closeness("eq9.N_A-AB", subset_coherence_negativity(rho, 1, (1, 2)), pair_value, tol),
        _closeness("eq9.N_A-AC", subset_coherence_negativity(rho, 1, (1, 3)), pair_value, tol),
        _closeness("eq9.E_3", report.e_kway[3], 2.0 * root / 3.0, tol),
        _closeness("eq9.E_2", report.e_kway[2], 4.0 * root / 3.0, tol),
        CheckResult("eq9.monogamy", abs(monogamy_residual(rho, 1, coherent=True)), tol),
        _closeness("eq9.measured_pair", convexity.rhs, pair_value, tol),
    ]


def qutrit_checks(a: List[complex], zero_tol: float = ZERO_TOL, tol: float = IDENTITY_TOL) -> List[CheckResult]:
    """Closed forms, the squared-negativity inequality and the E_2 sum rules of the qutrit family."""
    psi = qutrit(*a)
    rho = pure_to_density(psi)
    expected = qutrit_closed_forms(*a)
    computed = qutrit_computed(psi, zero_tol)
    results = [_closeness(f"qutrit.{key}", computed[key], expected[key], tol) for key in expected]

    n_g = global_negativity(rho, 1, zero_tol)
    for coherent in (False, True):
        n_2 = coherence_negativity(rho, 1, 2) if coherent else kway_negativity(rho, 1, 2, zero_tol)
        n_3 = coherence_negativity(rho, 1, 3) if coherent else kway_negativity(rho, 1, 3, zero_tol)
        kind = "coherence" if coherent else "trace_norm"
        results.append(CheckResult(f"qutrit.squared_inequality[A,{kind}]",
                                   max(0.0, n_g ** 2 - n_2 ** 2 - n_3 ** 2), tol))

    e2_a = partial_kway_negativities(rho, 1, zero_tol).e_kway[2]
    e2_b = partial_kway_negativities(rho, 2, zero_tol).e_kway[2]
    sum_a = partial_subset_negativity(rho, 1, (1, 2), zero_tol) + partial_subset_negativity(rho, 1, (1, 3), zero_tol)
    sum_b = partial_subset_negativity(rho, 2, (1, 2), zero_tol) + partial_subset_negativity(rho, 2, (2, 3), zero_tol)
    results.append(_closeness("qutrit.sum_rule[A]", e2_a, sum_a, tol))
    results.append(_closeness("qutrit.sum_rule[B]", e2_b, sum_b, tol))
    return results


def w_like_checks(name: str, a: float, zero_tol: float = ZERO_TOL, tol: float = IDENTITY_TOL) -> List[CheckResult]:
    """Table entries of one of the two W-like states, plus the CNOT relation between them."""
    results = [
        _closeness(f"table1.{e.state}[p={e.subsystem}].{e.measure}", e.computed, e.closed_form, tol)
        for e in table1(a, zero_tol) if e.state == name
    ]
    image = apply_gate(psi_i(a), cnot(1, 2, [2, 2, 2]))
    defect = float(abs(image.amplitudes - psi_f(a).amplitudes).max())
    results.append(CheckResult("table1.cnot_relation", defect, DECOMPOSITION_TOL))
    return results


def family_checks(name: str, params: Mapping[str, Any], zero_tol: float = ZERO_TOL,
                  tol: float = IDENTITY_TOL) -> List[CheckResult]:
    """Checks specific to a named family; empty for names without closed forms."""
    def value(key: str, position: int) -> Any:
        return params[key] if key in params else params[str(position)]

    if name == "eq9":
        return eq9_checks(float(value("mu0", 0)), zero_tol, tol)
    if name == "qutrit":
        coefficients = [complex(value(k, i)) for i, k in enumerate(("a0", "a1", "a2", "a3"))]
        if params.get("renormalize", False):
            norm = math.sqrt(sum(abs(c) ** 2 for c in coefficients))
            coefficients = [c / norm for c in coefficients]
        return qutrit_checks(coefficients, zero_tol, tol)
    if name in ("psiI", "psiF"):
        return w_like_checks(name, float(value("a", 0)), zero_tol, tol)
    return []


def run_identity_suite(state: Union[PureState, DensityOperator], named: Optional[str] = None,
                       params: Optional[Mapping[str, Any]] = None, zero_tol: float = ZERO_TOL,
                       identity_tol: float = IDENTITY_TOL) -> List[CheckResult]:
    results = universal_checks(state, zero_tol, identity_tol)
    if named is not None:
        results.extend(family_checks(named, params or {}, zero_tol, identity_tol))
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning("%d check(s) failed: %s", len(failed), ", ".join(failed))
    return results


def summary(results: List[CheckResult]) -> Dict[str, int]:
    return {
        "passed": sum(1 for r in results if r.applicable and r.passed),
        "failed": sum(1 for r in results if not r.passed),
        "not_applicable": sum(1 for r in results if not r.applicable),
    }
