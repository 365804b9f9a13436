# -*- coding: utf-8 -*-
"""
fracdec command line: one subcommand per construction, global budget flags, JSON/CSV artifacts with a meta
block, and exit codes 0 ok, 1 invalid input, 2 precondition or deficiency failure, 3 budget exceeded,
4 internal inconsistency.
"""
import argparse
import os
import sys
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

from fracDec import __version__
from fracDec.artifacts import (
    boundary_csv,
    certificate_to_json,
    deficiency_csv,
    dumps,
    load_graph,
    load_matching,
    load_packing,
    load_targets,
    meta_block,
    packing_to_json,
    read_json,
    write_bytes,
)
from fracDec.calculus import almost_to_full, fix_packing
from fracDec.config import ExperimentConfig, FracDecSettings, get_fracdec_settings
from fracDec.errorhandling import DeficiencyError, InputError, InternalConsistencyError, getFracDecExceptionHandler
from fracDec.helpers import parse_rational
from fracDec.hypercore import binom, complement, unrank_edge, vertex_set
from fracDec.logger import init_logging
from fracDec.lporacle import (
    build_feasibility_lp,
    edge_signature,
    feasible,
    lift_solution,
    matching_signature,
    orbit_reduce,
    verify_certificate,
)
from fracDec.matchdist import decompose_minus_matching, decompose_minus_matchings, deficiency_report
from fracDec.models.families import FamilyTypes
from fracDec.orchestrator import chernoff_report, main_parameters, pipeline
from fracDec.packing import ExplicitPacking, validate
from fracDec.profiler import FracDecProfiler
from fracDec.sampler import family_deficiency_exact, family_deficiency_mc, tail_bound
from fracDec.symdecomp import build_matrix, missing_edge_packing, solve_weights
from fracDec.utils.constants import EXIT_OK, EXIT_PRECONDITION, TOOL_NAME
from loguru import logger
from pydantic import ValidationError

GLOBAL_FLAGS = (
    "workers",
    "budget_pivots",
    "budget_columns",
    "materialize_limit",
    "log_level",
    "profile",
    "output_dir",
    "settings",
)


class Outcome(NamedTuple):
    exit_code: int
    artifacts: Dict[str, bytes]
    primary: str


class Context:
    """
    Settings of the run plus the meta block and output paths of its artifacts.
    """

    def __init__(self, settings: FracDecSettings, digest: str, seed: Optional[int], output_paths: Dict[str, str]):
        self.settings = settings
        self.meta = meta_block(digest, seed)
        self.seed = seed
        self.output_paths = output_paths

    def path_of(self, name: str) -> str:
        return self.output_paths.get(name) or os.path.join(self.settings.output_dir, name)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise InputError(message)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [name for name in names if getattr(args, name, None) is None]
    if missing:
        raise InputError(f"{args.command} needs --{', --'.join(name.replace('_', '-') for name in missing)}")


def _edge_arg(text: Optional[str]) -> Optional[List[int]]:
    if text is None or isinstance(text, list):
        return text
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as ex:
        raise InputError(f"edge expected as i,j,...: {text!r}") from ex


def _matching_sources(value: Any) -> List[Any]:
    """
    Paths, documents or inline edge lists; a list of edges is one matching.
    """
    if not isinstance(value, list):
        return [value]
    if not value or (isinstance(value[0], list) and value[0] and isinstance(value[0][0], int)):
        return [value]
    return value


def _p(args: argparse.Namespace, ctx: Context) -> Fraction:
    return parse_rational(args.p if getattr(args, "p", None) is not None else ctx.settings.default_p)


def _boundary_artifacts(P, ctx: Context, eta: Fraction = Fraction(0)) -> Dict[str, bytes]:
    report = validate(P, eta, workers=ctx.settings.workers)
    return {"boundary.csv": boundary_csv(report, ctx.meta)}


def solve_missing_edge_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "r", "q")
    weights = solve_weights(args.q, args.r)
    matrix = build_matrix(args.q, args.r)
    payload = {"r": args.r, "q": args.q, "n": matrix.n, "matrix": matrix.a, "weights": weights.w}
    artifacts = {"weights.json": dumps(payload, ctx.meta)}
    if args.expand:
        P = missing_edge_packing(args.q, args.r, range(args.r))
        artifacts["packing.json"] = dumps(packing_to_json(P, ctx.settings.materialize_limit), ctx.meta)
        artifacts.update(_boundary_artifacts(P, ctx))
    return Outcome(EXIT_OK, artifacts, "weights.json")


def fix_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "r", "q", "targets")
    targets = load_targets(args.targets)
    default = targets.pop(None, None)
    if default is not None:
        n = args.r * args.q
        for rank in range(binom(n, args.r)):
            targets.setdefault(unrank_edge(n, args.r, rank), default)
    P = fix_packing(targets, args.q, args.r)
    artifacts = {"packing.json": dumps(packing_to_json(P, ctx.settings.materialize_limit), ctx.meta)}
    artifacts.update(_boundary_artifacts(P, ctx))
    return Outcome(EXIT_OK, artifacts, "packing.json")


def almost_to_full_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "packing", "q")
    P = load_packing(args.packing)
    full = almost_to_full(P, args.q, P.host.r, workers=ctx.settings.workers, limit=ctx.settings.materialize_limit)
    artifacts = {"packing.json": dumps(packing_to_json(full, ctx.settings.materialize_limit), ctx.meta)}
    artifacts.update(_boundary_artifacts(full, ctx))
    return Outcome(EXIT_OK, artifacts, "packing.json")


def matching_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "n", "r", "q", "matching")
    settings = ctx.settings
    p = _p(args, ctx)
    matchings = [load_matching(source, args.n, args.r) for source in _matching_sources(args.matching)]
    artifacts: Dict[str, bytes] = {}
    if len(matchings) == 1:
        report = deficiency_report(
            args.n, args.r, args.q, matchings[0], p, limit=settings.materialize_limit, workers=settings.workers
        )
        artifacts["deficiency.json"] = dumps(report, ctx.meta)
        artifacts["deficiency.csv"] = deficiency_csv(report, ctx.meta)
        if args.chernoff:
            artifacts["chernoff.json"] = dumps(chernoff_report(args.n, args.r, args.q, matchings[0], p), ctx.meta)
        if args.deficiency_only:
            return Outcome(EXIT_OK, artifacts, "deficiency.csv")
        P = decompose_minus_matching(
            args.n, args.r, args.q, matchings[0], p, limit=settings.materialize_limit, workers=settings.workers
        )
    else:
        if args.deficiency_only:
            raise InputError("--deficiency-only takes a single matching")
        P = decompose_minus_matchings(
            args.n, args.r, args.q, matchings, p, limit=settings.materialize_limit, workers=settings.workers
        )
    boundary = validate(P, workers=settings.workers)
    summary = {
        "n": args.n,
        "r": args.r,
        "q": args.q,
        "p": p,
        "matchings": [len(M) for M in matchings],
        "passed": boundary.passed,
        "min_boundary": boundary.min_boundary,
        "max_boundary": boundary.max_boundary,
        "packing": P,
    }
    artifacts["matching.json"] = dumps(summary, ctx.meta)
    artifacts["boundary.csv"] = boundary_csv(boundary, ctx.meta)
    if args.expand:
        artifacts["packing.json"] = dumps(packing_to_json(P, settings.materialize_limit), ctx.meta)
    return Outcome(EXIT_OK if boundary.passed else EXIT_PRECONDITION, artifacts, "matching.json")


def sample_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "graph", "k", "m")
    settings = ctx.settings
    G = load_graph(args.graph)
    edge = _edge_arg(args.edge)
    edges = [vertex_set(edge, G.n)] if edge is not None else list(G.edges)
    deficiency = {
        ",".join(str(v) for v in e): family_deficiency_exact(G, args.k, args.m, e, settings.enumeration_budget)
        for e in edges
    }
    payload: Dict[str, Any] = {"k": args.k, "m": args.m, "n": G.n, "r": G.r, "deficiency": deficiency}
    if args.mc:
        seed = args.seed if args.seed is not None else (ctx.seed or 0)
        ctx.meta["seed"] = seed
        payload["monte_carlo"] = family_deficiency_mc(
            G, args.k, args.m, edges[0], args.mc, seed, workers=settings.workers
        )
    if args.d is not None and args.s is not None:
        payload["tail_bound"] = tail_bound(
            G.n, G.r, args.k, args.m, parse_rational(args.d), args.s, settings.decimal_precision
        )
    return Outcome(EXIT_OK, {"sample.json": dumps(payload, ctx.meta)}, "sample.json")


def lp_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "graph", "q")
    settings = ctx.settings
    G = load_graph(args.graph)
    L = build_feasibility_lp(G, args.q)
    solve = dict(
        budget_pivots=settings.budget_pivots, budget_columns=settings.budget_columns, self_check=settings.self_check
    )
    payload: Dict[str, Any] = {"n": G.n, "r": G.r, "q": args.q, "shape": list(L.shape), "orbit": args.orbit}
    if args.orbit:
        missing = complement(G).edges
        if args.orbit == "edge":
            edge = _edge_arg(args.edge) or (list(missing[0]) if missing else list(range(G.r)))
            sig = edge_signature(G, edge)
        else:
            sig = matching_signature(G, missing)
        reduced = orbit_reduce(L, sig)
        certificate = feasible(reduced, **solve)
        payload["reduced_shape"] = list(reduced.shape)
        emitted = certificate_to_json(reduced, certificate)
        if certificate.kind == "feasible":
            lifted = lift_solution(L, sig, reduced, certificate)
            if settings.self_check and not verify_certificate(L, lifted):
                raise InternalConsistencyError(f"{sig!r} lifted solution does not verify")
            emitted = certificate_to_json(L, lifted)
    else:
        certificate = feasible(L, **solve)
        emitted = certificate_to_json(L, certificate)
    payload["verdict"] = certificate.kind
    payload["pivots"] = certificate.pivots
    artifacts = {"lp.json": dumps(payload, ctx.meta), "certificate.json": dumps(emitted, ctx.meta)}
    if args.emit_certificate:
        ctx.output_paths.setdefault("certificate.json", args.emit_certificate)
    code = EXIT_OK if certificate.kind == "feasible" else EXIT_PRECONDITION
    return Outcome(code, artifacts, "lp.json")


def params_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "r", "eps", "q")
    report = main_parameters(
        args.r,
        parse_rational(args.eps),
        args.q,
        vacuity_budget=ctx.settings.vacuity_budget,
        precision=ctx.settings.decimal_precision,
    )
    return Outcome(EXIT_OK, {"params.json": dumps(report, ctx.meta)}, "params.json")


def pipeline_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "graph", "q")
    settings = ctx.settings
    G = load_graph(args.graph)
    report = pipeline(
        G,
        args.q,
        args.strategy,
        k=args.k,
        m=args.m,
        p=_p(args, ctx),
        epsilon=parse_rational(args.eps or "1"),
        workers=settings.workers,
        limit=settings.materialize_limit,
        enumeration_budget=settings.enumeration_budget,
        vacuity_budget=settings.vacuity_budget,
        budget_pivots=settings.budget_pivots,
        budget_columns=settings.budget_columns,
        cross_check=args.cross_check,
    )
    artifacts = {"pipeline.json": dumps(report, ctx.meta)}
    if report.success:
        artifacts["packing.json"] = dumps(packing_to_json(report.packing, settings.materialize_limit), ctx.meta)
    return Outcome(EXIT_OK if report.success else EXIT_PRECONDITION, artifacts, "pipeline.json")


def _missing_subsets(P: ExplicitPacking) -> List[Dict[str, Any]]:
    if P.family is FamilyTypes.induced_k_set:
        return []
    found = []
    for element, value in P.support():
        missing = [list(sub) for sub in combinations(element, P.host.r) if not P.host.has_edge(sub)]
        if value and missing:
            found.append({"element": list(element), "missing": missing})
    return found


def verify_command(args: argparse.Namespace, ctx: Context) -> Outcome:
    _require(args, "packing")
    P = load_packing(args.packing)
    if args.graph is not None:
        host = load_graph(args.graph)
        if (host.n, host.r) != (P.host.n, P.host.r):
            raise InputError(f"{host!r} does not match the packing host {P.host!r}")
        P = ExplicitPacking(host, P.family, dict(P.support()), order=P.order, check=False)
    not_cliques = _missing_subsets(P)
    eta = parse_rational(args.eta or "0")
    report = validate(P, eta, workers=ctx.settings.workers)
    failures = [
        {"edge": list(unrank_edge(P.host.n, P.host.r, rank)), "boundary": report.per_edge[rank]}
        for rank in report.failures
    ]
    if not_cliques:
        logger.bind(payload={"elements": len(not_cliques)}).warning("support elements are not cliques of the host")
    passed = report.passed and not not_cliques
    payload = {
        "passed": passed,
        "eta": eta,
        "min_boundary": report.min_boundary,
        "max_boundary": report.max_boundary,
        "failures": failures,
        "not_cliques": not_cliques,
    }
    artifacts = {"verify.json": dumps(payload, ctx.meta), "boundary.csv": boundary_csv(report, ctx.meta)}
    return Outcome(EXIT_OK if passed else EXIT_PRECONDITION, artifacts, "verify.json")


COMMANDS: Dict[str, Callable[[argparse.Namespace, Context], Outcome]] = {
    "solve-missing-edge": solve_missing_edge_command,
    "fix": fix_command,
    "almost-to-full": almost_to_full_command,
    "matching": matching_command,
    "sample": sample_command,
    "lp": lp_command,
    "params": params_command,
    "pipeline": pipeline_command,
    "verify": verify_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL_NAME, description="Exact fractional clique decompositions of uniform hypergraphs.")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--budget-pivots", type=int)
    parser.add_argument("--budget-columns", type=int)
    parser.add_argument("--materialize-limit", type=int)
    parser.add_argument("--log-level")
    parser.add_argument("--profile", help="write a pyinstrument report (.html or .txt)")
    parser.add_argument("--output-dir")
    parser.add_argument("--settings", default="config.json", help="settings JSON, FRACDEC_* variables win")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("solve-missing-edge", help="weights of K_rq^r minus one edge")
    sub.add_argument("--r", type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--expand", action="store_true")

    sub = commands.add_parser("fix", help="K_q^r packing of K_rq^r with given boundary")
    sub.add_argument("--r", type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--targets")

    sub = commands.add_parser("almost-to-full", help="full decomposition from an almost K_rq^r decomposition")
    sub.add_argument("--packing")
    sub.add_argument("--q", type=int)

    sub = commands.add_parser("matching", help="decompose K_n^r minus one or more matchings")
    sub.add_argument("--n", type=int)
    sub.add_argument("--r", type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--matching", action="append", help="matching JSON; repeat for a union of matchings")
    sub.add_argument("--p")
    sub.add_argument("--expand", action="store_true")
    sub.add_argument("--deficiency-only", action="store_true")
    sub.add_argument("--chernoff", action="store_true")

    sub = commands.add_parser("sample", help="uniform family deficiencies and tail bound")
    sub.add_argument("--graph")
    sub.add_argument("--k", type=int)
    sub.add_argument("--m", type=int)
    sub.add_argument("--edge")
    sub.add_argument("--mc", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--d")
    sub.add_argument("--s", type=int)

    sub = commands.add_parser("lp", help="exact LP feasibility with certificate")
    sub.add_argument("--graph")
    sub.add_argument("--q", type=int)
    sub.add_argument("--orbit", choices=["edge", "matching"])
    sub.add_argument("--edge")
    sub.add_argument("--emit-certificate")

    sub = commands.add_parser("params", help="constants of the main theorem")
    sub.add_argument("--r", type=int)
    sub.add_argument("--eps")
    sub.add_argument("--q", type=int)

    sub = commands.add_parser("pipeline", help="full construction on a host graph")
    sub.add_argument("--graph")
    sub.add_argument("--q", type=int)
    sub.add_argument("--strategy", default="empirical", choices=["paper-constants", "empirical", "lp-fallback"])
    sub.add_argument("--k", type=int)
    sub.add_argument("--m", type=int)
    sub.add_argument("--p")
    sub.add_argument("--eps")
    sub.add_argument("--cross-check", action="store_true")

    sub = commands.add_parser("verify", help="validate a packing artifact")
    sub.add_argument("--packing")
    sub.add_argument("--graph")
    sub.add_argument("--eta")

    sub = commands.add_parser("run", help="run an experiment config")
    sub.add_argument("--config")
    return parser


def _settings(args: argparse.Namespace) -> FracDecSettings:
    settings = get_fracdec_settings(args.settings)
    overrides = {
        name: getattr(args, name)
        for name in ("workers", "budget_pivots", "budget_columns", "materialize_limit", "log_level", "output_dir")
        if getattr(args, name, None) is not None
    }
    try:
        return FracDecSettings.parse_obj({**settings.dict(), **overrides})
    except ValidationError as ex:
        raise InputError(f"invalid settings: {ex}") from ex


def _flags(parameters: Dict[str, Any]) -> List[str]:
    argv: List[str] = []
    for name, value in sorted(parameters.items()):
        flag = "--" + name.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, list) and all(isinstance(item, str) for item in value):
            for item in value:
                argv += [flag, item]
        elif isinstance(value, list) and all(isinstance(item, int) for item in value):
            argv += [flag, ",".join(str(item) for item in value)]
        else:
            argv += [flag, str(value)]
    return argv


def _experiment(args: argparse.Namespace) -> ExperimentConfig:
    """
    The config of this invocation: loaded for run, rebuilt from the command line otherwise.
    """
    if args.command != "run":
        parameters = {
            name: value
            for name, value in vars(args).items()
            if name not in GLOBAL_FLAGS + ("command",) and value is not None and value is not False
        }
        return ExperimentConfig(command=args.command, parameters=parameters, seed=getattr(args, "seed", None))
    _require(args, "config")
    try:
        return ExperimentConfig.parse_obj(read_json(args.config))
    except ValidationError as ex:
        raise InputError(f"invalid experiment config: {ex}") from ex


def dispatch(config: ExperimentConfig, args: argparse.Namespace, parser: argparse.ArgumentParser, ctx: Context):
    if args.command == "run":
        if config.command not in COMMANDS:
            raise InputError(f"unknown command {config.command!r}")
        args = parser.parse_args([config.command] + _flags(config.parameters))
        for name, value in config.inputs.items():
            setattr(args, name, value)
        if config.seed is not None and hasattr(args, "seed") and args.seed is None:
            args.seed = config.seed
    return COMMANDS[args.command](args, ctx)


def write_artifacts(outcome: Outcome, ctx: Context) -> List[str]:
    return [write_bytes(ctx.path_of(name), content) for name, content in sorted(outcome.artifacts.items())]


def main(argv: Optional[Sequence[str]] = None) -> int:
    ctx: Optional[Context] = None
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        settings = _settings(args)
        init_logging(settings.log_level)
        config = _experiment(args)
        ctx = Context(settings, config.digest(), config.seed, dict(config.output_paths))
        with FracDecProfiler(args.profile):
            outcome = dispatch(config, args, parser, ctx)
        written = write_artifacts(outcome, ctx)
        logger.info("{} wrote {}", config.command, ", ".join(written))
        sys.stdout.write(outcome.artifacts[outcome.primary].decode())
        sys.stdout.write("\n")
        return outcome.exit_code
    except Exception as ex:
        code = getFracDecExceptionHandler().handle(ex)
        if isinstance(ex, DeficiencyError) and ex.report is not None and ctx is not None:
            write_bytes(ctx.path_of("deficiency.json"), dumps(ex.report, ctx.meta))
        return code


if __name__ == "__main__":
    sys.exit(main())
