"""Command-line front end.

Exit codes: 0 on success (and a true decision), 1 on domain failures,
mismatches or a false decision, 2 on unreadable or unparsable input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .approx import ApproxConfig, ApproxSolver, agreement_report
from .exact import DEFAULT_FLOAT_TOL, DecisionQuery, ExactSolver
from .generate import GeneratorConfig, generate_instance, generate_suite
from .model import (
    EMPTY_KNOWLEDGE,
    Instance,
    Knowledge,
    ModelError,
    format_pair,
    validate,
)
from .oracle import (
    WORLD_CAP,
    TooManyEdges,
    initial_scenarios,
    is_gap_instance,
    oracle_check,
    sight_blind_policy,
)
from .sim import run_trials

OK, DOMAIN_FAILURE, BAD_INPUT = 0, 1, 2


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_instance(path: str) -> Instance:
    try:
        return io.load_instance(path)
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}", BAD_INPUT) from None
    except io.FileFormatError as exc:
        raise _CliError(f"cannot parse {path}: {exc}", BAD_INPUT) from None


def _checked_instance(path: str) -> Instance:
    instance = _load_instance(path)
    report = validate(instance)
    if not report.ok:
        lines = "\n".join(f"violation {v}" for v in report.violations)
        raise _CliError(f"{path} is not a valid instance:\n{lines}", DOMAIN_FAILURE)
    return instance


def _load_knowledge(path: Optional[str], instance: Instance) -> Knowledge:
    if path is None:
        return EMPTY_KNOWLEDGE
    try:
        knowledge, _ = io.load_scenario(path, instance)
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}", BAD_INPUT) from None
    except io.FileFormatError as exc:
        raise _CliError(f"cannot parse {path}: {exc}", BAD_INPUT) from None
    return knowledge


def _parse_edge(text: str) -> tuple[int, int]:
    try:
        return io.parse_edge_key(text)
    except io.FileFormatError as exc:
        raise _CliError(str(exc), BAD_INPUT) from None


def _format_move(move) -> str:
    return format_pair(move) if move is not None else "halt"


# -- commands ----------------------------------------------------------------


def _cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    report = validate(instance)
    if report.ok:
        print("ok")
        return OK
    for violation in report.violations:
        print(f"violation {violation}")
    print(f"{len(report.violations)} violation(s)")
    return DOMAIN_FAILURE


def _solver_for(args, instance: Instance) -> ExactSolver:
    return ExactSolver(instance, mode=args.mode, tol=args.tol)


def _cmd_decide(args) -> int:
    instance = _checked_instance(args.instance)
    knowledge = _load_knowledge(args.scenario, instance)
    edge = _parse_edge(args.edge)
    solver = _solver_for(args, instance)
    try:
        query = DecisionQuery(instance, edge, knowledge)
    except (ModelError, ValueError) as exc:
        raise _CliError(str(exc), DOMAIN_FAILURE) from None
    taken = solver.decide(query)
    print(f"decision: {'true' if taken else 'false'}")
    print(f"success: {io.format_valuation(solver.success(edge, knowledge))}")
    print(f"selected: {_format_move(solver.next_move(instance.start, knowledge))}")
    return OK if taken else DOMAIN_FAILURE


def _cmd_oracle_check(args) -> int:
    instance = _checked_instance(args.instance)
    try:
        checks = oracle_check(instance, cap=args.cap)
    except TooManyEdges as exc:
        raise _CliError(str(exc), DOMAIN_FAILURE) from None
    all_match = True
    for check in checks:
        verdict = "ok" if check.match else "MISMATCH"
        all_match &= check.match
        print(
            f"scenario {check.knowledge!r}: solver {io.format_valuation(check.solver_value)}"
            f" / oracle {io.format_valuation(check.oracle_value)},"
            f" move {_format_move(check.solver_move)} / {_format_move(check.oracle_move)}"
            f" : {verdict}"
        )
    skipped = len([w for _, w in initial_scenarios(instance) if w == 0])
    summary = "all scenarios agree" if all_match else "solver and oracle disagree"
    print(f"{summary} ({len(checks)} checked, {skipped} impossible skipped)")
    return OK if all_match else DOMAIN_FAILURE


def _cmd_mc(args) -> int:
    instance = _checked_instance(args.instance)
    batch = run_trials(instance, args.trials, args.seed)
    print(
        f"trials={batch.n} successes={batch.successes}"
        f" rate={batch.rate:.12g} stderr={batch.stderr:.12g} seed={batch.seed}"
    )
    if not batch.rate_defined:
        print("rate undefined: no trials were run")
    return OK


def _generator_config(args) -> GeneratorConfig:
    try:
        palette = tuple(part.strip() for part in args.palette.split(","))
        return GeneratorConfig(
            n_min=args.n_min,
            n_max=args.n_max,
            edge_density=args.edge_density,
            sight_density=args.sight_density,
            p_palette=palette,
            seed=args.seed,
            max_edges=args.max_edges,
            max_sights=args.max_sights,
            neighbor_sight_only=args.neighbor_sight,
        )
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise _CliError(f"bad generator configuration: {exc}", BAD_INPUT) from None


def _write_instances(instances: Sequence[Instance], out: Optional[str], label: str) -> None:
    if out is None:
        for instance in instances:
            sys.stdout.write(io.serialize_instance(instance))
        return
    directory = Path(out)
    directory.mkdir(parents=True, exist_ok=True)
    for i, instance in enumerate(instances):
        path = directory / f"{label}_{i:03d}.json"
        io.save_instance(instance, path)
        print(path)


def _cmd_gen(args) -> int:
    config = _generator_config(args)
    instances = generate_suite(config, args.count)
    _write_instances(instances, args.out, "instance")
    return OK


def _cmd_gap_search(args) -> int:
    config = _generator_config(args)
    gaps = []
    for index in range(args.count):
        instance = generate_instance(config, index)
        if is_gap_instance(instance):
            gaps.append(instance)
            blind = sight_blind_policy(instance)(instance.start, EMPTY_KNOWLEDGE)
            print(
                f"gap at index {index}: blind first move {_format_move(blind)}"
                f" differs from the sighted solver"
            )
    if args.out is not None:
        _write_instances(gaps, args.out, "gap")
    print(f"found {len(gaps)} gap instance(s) out of {args.count}")
    return OK


def _cmd_approx(args) -> int:
    instance = _checked_instance(args.instance)
    knowledge = _load_knowledge(args.scenario, instance)
    edge = _parse_edge(args.edge)
    config = ApproxConfig(similarity_threshold=args.threshold, max_entries=args.cache_size)
    solver = ApproxSolver(instance, config, mode=args.mode, tol=args.tol)
    try:
        query = DecisionQuery(instance, edge, knowledge)
    except (ModelError, ValueError) as exc:
        raise _CliError(str(exc), DOMAIN_FAILURE) from None
    taken = solver.decide(query)
    value, report = solver.approx_success(edge, knowledge)
    print(f"decision: {'true' if taken else 'false'}")
    print(f"success: {io.format_valuation(value)}")
    print(f"selected: {_format_move(solver.next_move(instance.start, knowledge))}")
    print(
        f"cache: exact_hits={report.exact_hits} similar_hits={report.similar_hits}"
        f" misses={report.misses} evictions={report.evictions}"
    )
    return OK if taken else DOMAIN_FAILURE


def _cmd_approx_compare(args) -> int:
    directory = Path(args.instances)
    if not directory.is_dir():
        raise _CliError(f"{args.instances} is not a directory", BAD_INPUT)
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise _CliError(f"no *.json instances under {args.instances}", BAD_INPUT)
    instances = []
    for path in paths:
        instance = _checked_instance(str(path))
        instances.append((path.name, instance))
    config = ApproxConfig(similarity_threshold=args.threshold, max_entries=args.cache_size)
    rows = agreement_report([inst for _, inst in instances], config, mode=args.mode)
    matches = 0
    print("instance\tmatch\tvalue_gap\texact_hits\tsimilar_hits\tmisses\tevictions")
    for (name, _), row in zip(instances, rows):
        matches += row.decision_match
        gap = row.value_gap
        gap_text = io.format_valuation(gap) if isinstance(gap, Fraction) else f"{gap:.12g}"
        print(
            f"{name}\t{'yes' if row.decision_match else 'no'}\t{gap_text}"
            f"\t{row.report.exact_hits}\t{row.report.similar_hits}"
            f"\t{row.report.misses}\t{row.report.evictions}"
        )
    print(f"match rate: {matches}/{len(rows)}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sightpath",
        description="Solve, verify and simulate safest-path decisions on "
        "uncertain DAGs with line-of-sight information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p):
        p.add_argument("--mode", choices=("rational", "float"), default="rational")
        p.add_argument("--tol", type=float, default=DEFAULT_FLOAT_TOL,
                       help="tie tolerance in float mode")

    p = sub.add_parser("validate", help="check an instance file's structure")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("decide", help="will the walker's first step be this edge?")
    p.add_argument("instance")
    p.add_argument("--scenario", help="knowledge file covering the start's sight")
    p.add_argument("--edge", required=True, help="candidate first edge, e.g. 1-2")
    add_mode(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("oracle-check", help="compare solver and brute-force oracle")
    p.add_argument("instance")
    p.add_argument("--all-scenarios", action="store_true", default=True,
                   help="check every possible first-step scenario (default)")
    p.add_argument("--cap", type=int, default=WORLD_CAP)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("mc", help="Monte Carlo estimate of the policy's success")
    p.add_argument("instance")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_mc)

    def add_generator(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=1)
        p.add_argument("--n-min", type=int, default=3)
        p.add_argument("--n-max", type=int, default=6)
        p.add_argument("--edge-density", type=float, default=0.5)
        p.add_argument("--sight-density", type=float, default=0.3)
        p.add_argument("--palette", default="0,1/4,1/2,3/4,1",
                       help="comma-separated failure probabilities")
        p.add_argument("--max-edges", type=int, default=None)
        p.add_argument("--max-sights", type=int, default=None)
        p.add_argument("--neighbor-sight", action="store_true",
                       help="only generate sight lines from an edge's own tail")
        p.add_argument("--out", help="directory to write instance files to")

    p = sub.add_parser("gen", help="generate seeded random instances")
    add_generator(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("gap-search", help="find instances where sight changes the first move")
    add_generator(p)
    p.set_defaults(func=_cmd_gap_search)

    p = sub.add_parser("approx", help="decide using the bounded similarity cache")
    p.add_argument("instance")
    p.add_argument("--scenario")
    p.add_argument("--edge", required=True)
    p.add_argument("--threshold", type=int, default=0)
    p.add_argument("--cache-size", type=int, default=1024)
    add_mode(p)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("approx-compare", help="approximate vs exact over an instance directory")
    p.add_argument("instances", help="directory of *.json instance files")
    p.add_argument("--threshold", type=int, default=0)
    p.add_argument("--cache-size", type=int, default=1024)
    add_mode(p)
    p.set_defaults(func=_cmd_approx_compare)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except ModelError as exc:
        print(str(exc), file=sys.stderr)
        return DOMAIN_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
