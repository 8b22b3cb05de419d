#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Module principal : interface en ligne de commande du calcul des négativités.

Commandes : analyze, table1, verify, canonicalize, nu.
Codes de sortie : 0 succès, 1 échec de vérification, 2 entrée illisible,
3 état violant un invariant.
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import yaml

from src.canonical import heuristic_canonicalize, nu_profile
from src.catalog import random_mixed, random_pure, table1
from src.multistate import DensityOperator, PureState, StateInvariantError, pure_to_density
from src.negativity import IdentityViolation, partial_kway_negativities
from src.reporting import FORMATS, emit_canonical, emit_checks, emit_nu, emit_reports, emit_table1
from src.state_io import StateParseError, dump_state, load_state, parse_named_spec, resolve_named
from src.utils import load_effective_config, parse_fraction, save_config, setup_rotating_file_logger
from src.verification import run_identity_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3

State = Union[PureState, DensityOperator]


@dataclass
class RunConfig:
    """Paramètres effectifs d'une exécution (configuration YAML + options CLI)."""

    command: str
    named: Optional[str] = None
    state_path: Optional[str] = None
    random_pure: Optional[str] = None
    random_mixed: Optional[str] = None
    subsystems: str = "all"
    ways: str = "all"
    output_format: str = "text"
    zero_tol: float = 1e-10
    identity_tol: float = 1e-9
    norm_tol: float = 1e-12
    hermitian_tol: float = 1e-12
    lbps_threshold: float = 1e-8
    seed: int = 0
    restarts: int = 50
    a: Optional[float] = None
    dump_path: Optional[str] = None
    digits: int = 12
    max_total_dim: int = 4096
    canonical: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command != "table1":
            sources = [s for s in (self.named, self.state_path, self.random_pure, self.random_mixed) if s]
            if len(sources) != 1:
                raise ValueError("exactly one input source is required "
                                 "(--named, --state, --random-pure or --random-mixed)")
        if min(self.zero_tol, self.identity_tol, self.norm_tol, self.hermitian_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")


def _add_input_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--named", help="État nommé, ex. ghz3, eq9:mu0=0.5, qutrit:0.5,0.5,0.5,0.5")
    group.add_argument("--state", dest="state_path", help="Fichier JSON décrivant l'état")
    group.add_argument("--random-pure", help="État pur aléatoire, dimensions d1,d2,...")
    group.add_argument("--random-mixed", help="État mixte aléatoire, d1,d2,...:rang")
    parser.add_argument("--subsystem", default="all", help="Sous-système (1..N), liste 1,3 ou 'all'")
    parser.add_argument("--dump-state", dest="dump_path", help="Écrit l'état chargé au format JSON (forme mixte)")


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default=None, help="Format de sortie")
    parser.add_argument("--zero-tol", type=float, default=None, help="Seuil des valeurs propres négatives")
    parser.add_argument("--seed", type=int, default=0, help="Graine des générateurs aléatoires")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse les arguments de ligne de commande.

    Returns:
        Les arguments parsés
    """
    parser = argparse.ArgumentParser(
        description="Négativités globales, K-way et partielles d'états multipartites"
    )
    parser.add_argument(
        "-c", "--config",
        default=None,
        help="Chemin vers le fichier de configuration YAML (valeurs par défaut sinon)"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Active le mode verbeux (debug)"
    )
    parser.add_argument(
        "--save-config",
        default=None,
        metavar="FILE",
        help="Écrit la configuration effective (défauts + fichier YAML) dans FILE"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Rapport de négativités par sous-système")
    _add_input_arguments(analyze)
    analyze.add_argument("--k", default="all", help="Valeur de K affichée ou 'all'")
    _add_common_arguments(analyze)

    table = commands.add_parser("table1", help="Table des états de type W et de leur image par CNOT")
    table.add_argument("--a", required=True, help="Paramètre a, ex. 0.4 ou 1/3")
    _add_common_arguments(table)

    verify = commands.add_parser("verify", help="Vérifie les identités et inégalités applicables")
    _add_input_arguments(verify)
    _add_common_arguments(verify)

    canonicalize = commands.add_parser("canonicalize", help="Recherche heuristique d'un représentant canonique")
    _add_input_arguments(canonicalize)
    canonicalize.add_argument("--restarts", type=int, default=None, help="Nombre de redémarrages")
    _add_common_arguments(canonicalize)

    nu = commands.add_parser("nu", help="Nombre de valeurs propres négatives par transposée")
    _add_input_arguments(nu)
    _add_common_arguments(nu)

    return parser.parse_args(argv)


def setup_logging(config: Dict[str, Any], verbose: bool = False) -> None:
    """
    Configure le système de logging (console sur stderr, fichier optionnel).

    Args:
        config: Dictionnaire de configuration
        verbose: Si True, active le mode verbeux (debug)
    """
    log_config = config.get("logging", {})
    log_level = log_config.get("level", "WARNING")

    if verbose:
        log_level = "DEBUG"

    logging.basicConfig(
        level=getattr(logging, log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)]
    )

    log_file = log_config.get("file")
    if log_file:
        max_size = log_config.get("max_size", 10485760)
        backup_count = log_config.get("backup_count", 5)
        setup_rotating_file_logger(log_file, max_size, backup_count, log_level)

    logger.debug("Niveau de logging configuré à %s", log_level)


def _parse_fraction(text: str) -> float:
    try:
        return parse_fraction(text)
    except ValueError as e:
        raise StateParseError(f"invalid number {text!r}") from e


def build_run_config(args: argparse.Namespace, config: Dict[str, Any]) -> RunConfig:
    """Fusionne la configuration YAML et les options de ligne de commande."""
    numerics = config["numerics"]
    output = config["output"]
    canonical = config["canonical"]
    return RunConfig(
        command=args.command,
        named=getattr(args, "named", None),
        state_path=getattr(args, "state_path", None),
        random_pure=getattr(args, "random_pure", None),
        random_mixed=getattr(args, "random_mixed", None),
        subsystems=getattr(args, "subsystem", "all"),
        ways=getattr(args, "k", "all"),
        output_format=args.format or output["format"],
        zero_tol=args.zero_tol if args.zero_tol is not None else float(numerics["zero_tol"]),
        identity_tol=float(numerics["identity_tol"]),
        norm_tol=float(numerics["norm_tol"]),
        hermitian_tol=float(numerics["hermitian_tol"]),
        lbps_threshold=float(numerics["lbps_threshold"]),
        seed=args.seed,
        restarts=args.restarts if getattr(args, "restarts", None) is not None else int(canonical["restarts"]),
        a=_parse_fraction(args.a) if getattr(args, "a", None) is not None else None,
        dump_path=getattr(args, "dump_path", None),
        digits=int(output["significant_digits"]),
        max_total_dim=int(numerics["max_total_dim"]),
        canonical=dict(canonical),
    )


def _parse_dims(text: str) -> List[int]:
    try:
        return [int(d) for d in text.split(",")]
    except ValueError as e:
        raise StateParseError(f"invalid dimension list {text!r}") from e


def load_input(run: RunConfig) -> State:
    """Construit l'état d'entrée à partir de la source unique de la configuration."""
    if run.named:
        state: State = resolve_named(run.named)
    elif run.state_path:
        state = load_state(run.state_path, run.max_total_dim,
                           norm_tol=run.norm_tol, hermitian_tol=run.hermitian_tol)
    elif run.random_pure:
        state = random_pure(_parse_dims(run.random_pure), seed=run.seed)
    else:
        assert run.random_mixed is not None
        dims_text, sep, rank_text = run.random_mixed.partition(":")
        if not sep:
            raise StateParseError(f"--random-mixed expects d1,d2,...:rank, got {run.random_mixed!r}")
        try:
            rank = int(rank_text)
        except ValueError as e:
            raise StateParseError(f"invalid rank {rank_text!r}") from e
        state = random_mixed(_parse_dims(dims_text), rank, seed=run.seed)

    if run.dump_path:
        dump_state(state, run.dump_path, mixed=True)
        logger.info("État écrit dans %s", run.dump_path)
    return state


def _selection(text: str, upper: int, lower: int, what: str) -> List[int]:
    if text == "all":
        return list(range(lower, upper + 1))
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError as e:
        raise ValueError(f"invalid {what} selection {text!r}") from e
    for value in values:
        if not lower <= value <= upper:
            raise ValueError(f"{what} {value} out of range {lower}..{upper}")
    return values


def _density(state: State) -> DensityOperator:
    return pure_to_density(state) if isinstance(state, PureState) else state


def cmd_analyze(run: RunConfig) -> Tuple[int, str]:
    state = load_input(run)
    rho = _density(state)
    n = rho.n_subsystems
    subsystems = _selection(run.subsystems, n, 1, "subsystem")
    ways = [] if run.ways == "all" else _selection(run.ways, n, 2, "K")
    reports = [partial_kway_negativities(rho, p, run.zero_tol, run.identity_tol) for p in subsystems]
    return EXIT_OK, emit_reports(reports, run.output_format, run.digits, ways)


def cmd_table1(run: RunConfig) -> Tuple[int, str]:
    assert run.a is not None
    entries = table1(run.a, run.zero_tol)
    return EXIT_OK, emit_table1(run.a, entries, run.output_format, run.digits)


def cmd_verify(run: RunConfig) -> Tuple[int, str]:
    state = load_input(run)
    named, params = parse_named_spec(run.named) if run.named else (None, None)
    results = run_identity_suite(state, named, params, run.zero_tol, run.identity_tol)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFICATION_FAILED
    return code, emit_checks(results, run.output_format, run.digits)


def cmd_canonicalize(run: RunConfig) -> Tuple[int, str]:
    state = load_input(run)
    if not isinstance(state, PureState):
        raise ValueError("canonicalize needs a pure state")
    subsystems = _selection(run.subsystems, state.dims.n_subsystems, 1, "subsystem")
    result = heuristic_canonicalize(
        state,
        restarts=run.restarts,
        seed=run.seed,
        initial_step=float(run.canonical.get("initial_step", math.pi / 4)),
        min_step=float(run.canonical.get("min_step", 1e-4)),
        max_sweeps=int(run.canonical.get("max_sweeps", 8)),
        threshold=run.lbps_threshold,
        subsystem=subsystems[0],
        zero_tol=run.zero_tol,
    )
    rho = pure_to_density(result.best_state)
    reports = [partial_kway_negativities(rho, p, run.zero_tol, run.identity_tol) for p in subsystems]
    return EXIT_OK, emit_canonical(result, reports, run.output_format, run.digits)


def cmd_nu(run: RunConfig) -> Tuple[int, str]:
    rho = _density(load_input(run))
    subsystems = _selection(run.subsystems, rho.n_subsystems, 1, "subsystem")
    profiles = [nu_profile(rho, p, run.zero_tol) for p in subsystems]
    return EXIT_OK, emit_nu(profiles, run.output_format, run.digits)


HANDLERS = {
    "analyze": cmd_analyze,
    "table1": cmd_table1,
    "verify": cmd_verify,
    "canonicalize": cmd_canonicalize,
    "nu": cmd_nu,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Exécute une commande et écrit le rapport sur la sortie standard.

    Returns:
        Le code de sortie
    """
    args = parse_arguments(argv)
    try:
        config = load_effective_config(args.config)
        setup_logging(config, args.verbose)
        if args.save_config:
            save_config(config, args.save_config)
        run_config = build_run_config(args, config)
        code, text = HANDLERS[run_config.command](run_config)
    except StateInvariantError as e:
        logger.error("État invalide (%s): %s", e.invariant, e)
        print(f"Erreur: invariant violé: {e}", file=sys.stderr)
        return EXIT_INVARIANT_VIOLATION
    except IdentityViolation as e:
        logger.error("Identité non vérifiée: %s", e)
        print(f"Erreur: {e}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    except (StateParseError, OSError, yaml.YAMLError, ValueError) as e:
        logger.error("Entrée invalide: %s", e)
        print(f"Erreur: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    sys.stdout.write(text)
    return code


def main() -> None:
    """Point d'entrée de l'application."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\nArrêt de l'application...", file=sys.stderr)
        sys.exit(0)


if __name__ == "__main__":
    main()
