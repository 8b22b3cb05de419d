#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Report emitters for the command-line front end: text, JSON and CSV.

Reals are written with a fixed number of significant digits and '.' as the
decimal separator. Output never contains timestamps, so identical inputs
produce identical bytes.
"""

import csv
import io
import json
import logging
from typing import Any, Dict, List, Sequence

from src.canonical import CanonicalSearchResult, NuProfile
from src.catalog import Table1Entry
from src.negativity import NegativityReport
from src.utils import format_real, round_significant
from src.verification import CheckResult, summary

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "csv")


def _rounded(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        return round_significant(value, digits)
    if isinstance(value, dict):
        return {k: _rounded(v, digits) for k, v in value.items()}
    if isinstance(value, list):
        return [_rounded(v, digits) for v in value]
    return value


def _json(payload: Any, digits: int) -> str:
    return json.dumps(_rounded(payload, digits), indent=2) + "\n"


def _csv(header: Sequence[str], rows: List[Sequence[Any]], digits: int) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_real(v, digits) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit_reports(reports: Sequence[NegativityReport], fmt: str = "text", digits: int = 12,
                 ways: Sequence[int] = ()) -> str:
    """One negativity report per subsystem. `ways` restricts the K columns shown."""
    _check_format(fmt)
    dicts = []
    for report in reports:
        data = report.to_dict()
        if ways:
            for key in ("N_K", "C_K", "E_K", "nu_K"):
                data[key] = {k: v for k, v in data[key].items() if int(k) in ways}
        dicts.append(data)

    if fmt == "json":
        return _json(dicts, digits)

    if fmt == "csv":
        rows: List[Sequence[Any]] = []
        for data in dicts:
            rows.append((data["subsystem"], "N_G", "", data["N_G"]))
            for key in ("N_K", "C_K", "E_K", "nu_K"):
                for k, v in data[key].items():
                    rows.append((data["subsystem"], key.replace("_K", ""), k, v))
            for key in ("E_0", "E_local", "nu_G", "nu"):
                rows.append((data["subsystem"], key, "", data[key]))
        return _csv(("subsystem", "measure", "K", "value"), rows, digits)

    lines = []
    for data in dicts:
        lines.append(f"subsystem {data['subsystem']} (d_p = {data['d_p']})")
        lines.append(f"  N_G     = {format_real(data['N_G'], digits)}")
        for k in data["N_K"]:
            lines.append(f"  N_{k}     = {format_real(data['N_K'][k], digits)}"
                         f"   C_{k} = {format_real(data['C_K'][k], digits)}")
        for k, v in data["E_K"].items():
            lines.append(f"  E_{k}     = {format_real(v, digits)}")
        lines.append(f"  E_0     = {format_real(data['E_0'], digits)}")
        lines.append(f"  E_local = {format_real(data['E_local'], digits)}")
        nu_k = " ".join(f"nu_{k}={v}" for k, v in data["nu_K"].items())
        lines.append(f"  {nu_k} nu_G={data['nu_G']} nu={data['nu']}".rstrip())
    return "\n".join(lines) + "\n"


def emit_table1(a: float, entries: Sequence[Table1Entry], fmt: str = "text", digits: int = 12) -> str:
    _check_format(fmt)
    if fmt == "json":
        payload: Dict[str, Any] = {
            "a": a,
            "entries": [
                {"state": e.state, "subsystem": e.subsystem, "measure": e.measure,
                 "computed": e.computed, "closed_form": e.closed_form, "residual": e.residual}
                for e in entries
            ],
        }
        return _json(payload, digits)
    if fmt == "csv":
        rows = [(e.state, e.subsystem, e.measure, e.computed, e.closed_form, e.residual) for e in entries]
        return _csv(("state", "subsystem", "measure", "computed", "closed_form", "residual"), rows, digits)

    lines = [f"a = {format_real(a, digits)}"]
    for e in entries:
        lines.append(f"{e.state:<5} p={e.subsystem} {e.measure:<4} {format_real(e.computed, digits):>18}"
                     f"  closed form {format_real(e.closed_form, digits):>18}"
                     f"  residual {format_real(e.residual, 3)}")
    return "\n".join(lines) + "\n"


def emit_checks(results: Sequence[CheckResult], fmt: str = "text", digits: int = 12) -> str:
    _check_format(fmt)
    totals = summary(list(results))
    if fmt == "json":
        payload = {
            "checks": [
                {"name": r.name, "status": r.status(), "residual": r.residual, "tolerance": r.tolerance}
                for r in results
            ],
            "summary": totals,
        }
        return _json(payload, digits)
    if fmt == "csv":
        rows = [(r.name, r.status(), r.residual, r.tolerance) for r in results]
        return _csv(("check", "status", "residual", "tolerance"), rows, digits)

    lines = [f"{r.status():<4} {r.name}  residual={format_real(r.residual, 3)} tol={format_real(r.tolerance, 3)}"
             if r.applicable else f"{r.status():<4} {r.name}" for r in results]
    lines.append(f"{totals['passed']} passed, {totals['failed']} failed, "
                 f"{totals['not_applicable']} not applicable")
    return "\n".join(lines) + "\n"


def _nu_dict(profile: NuProfile) -> Dict[str, Any]:
    return {
        "subsystem": profile.subsystem,
        "nu_K": {str(k): v for k, v in sorted(profile.nu_kway.items())},
        "nu_G": profile.nu_global,
        "nu": profile.nu,
    }


def emit_nu(profiles: Sequence[NuProfile], fmt: str = "text", digits: int = 12) -> str:
    _check_format(fmt)
    dicts = [_nu_dict(p) for p in profiles]
    if fmt == "json":
        return _json(dicts, digits)
    if fmt == "csv":
        rows: List[Sequence[Any]] = []
        for data in dicts:
            rows.extend((data["subsystem"], f"nu_{k}", v) for k, v in data["nu_K"].items())
            rows.append((data["subsystem"], "nu_G", data["nu_G"]))
            rows.append((data["subsystem"], "nu", data["nu"]))
        return _csv(("subsystem", "count", "value"), rows, digits)
    lines = []
    for data in dicts:
        nu_k = " ".join(f"nu_{k}={v}" for k, v in data["nu_K"].items())
        lines.append(f"subsystem {data['subsystem']}: {nu_k} nu_G={data['nu_G']} nu={data['nu']}")
    return "\n".join(lines) + "\n"


def emit_canonical(result: CanonicalSearchResult, reports: Sequence[NegativityReport],
                   fmt: str = "text", digits: int = 12) -> str:
    """Search summary followed by the negativity reports of the representative."""
    _check_format(fmt)
    terms = [
        {"index": list(indices), "re": amplitude.real, "im": amplitude.imag}
        for indices, amplitude in result.best_state.nonzero_terms()
    ]
    header = {
        "annotation": result.annotation,
        "heuristic": result.heuristic,
        "input_lbps": result.input_lbps,
        "best_lbps": result.best_lbps,
        "iterations": result.iterations,
        "converged": result.converged,
        "nu_before": _nu_dict(result.nu_before),
        "nu_after": _nu_dict(result.nu_after),
        "terms": terms,
    }
    if fmt == "json":
        return _json({"search": header, "reports": [r.to_dict() for r in reports]}, digits)
    if fmt == "csv":
        rows = [("input_lbps", result.input_lbps), ("best_lbps", result.best_lbps),
                ("iterations", result.iterations), ("converged", result.converged)]
        return _csv(("field", "value"), rows, digits) + emit_reports(reports, "csv", digits)

    lines = [
        f"# {result.annotation}",
        f"LBPS {result.input_lbps} -> {result.best_lbps} "
        f"({result.iterations} evaluations, converged={result.converged})",
        "representative:",
    ]
    for term in terms:
        amplitude = complex(term["re"], term["im"])
        lines.append(f"  |{''.join(str(i) for i in term['index'])}>  "
                     f"{format_real(amplitude.real, digits)} {format_real(amplitude.imag, digits)}i")
    lines.append(f"nu before: {emit_nu([result.nu_before]).strip()}")
    lines.append(f"nu after:  {emit_nu([result.nu_after]).strip()}")
    return "\n".join(lines) + "\n" + emit_reports(reports, "text", digits)
