"""Command-line interface: ``axisrules <command> ...``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 too many
candidates, 4 unknown or unsupported rule/axiom, 5 unknown candidate,
6 noise-model parameter out of range.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from axisrules.axioms import AxiomId, check_instance, reference_instances, random_instance
from axisrules.core import WeightedProfile
from axisrules.costs import Rule, ballot_cost, profile_cost
from axisrules.errors import (
    CandidateMismatchError,
    MalformedInstanceError,
    ParameterDomainError,
    ParseError,
    RuleUnsupportedError,
    SizeLimitError,
    UnknownRuleError,
)
from axisrules.ilp import export_ilp
from axisrules.io import format_profile, load_profile
from axisrules.linearity import consistent_axes
from axisrules.ranking import RankingProfile, ranking_cost, ranking_profile_cost, solve_ranking
from axisrules.solver import DECOMPOSABLE_RULES, SolveOptions, solve
from axisrules.synthetic import Experiment, NoiseModel, NoiseModelConfig, generate, parse_model_spec

EXIT_PARSE = 2
EXIT_SIZE = 3
EXIT_RULE = 4
EXIT_CANDIDATE = 5
EXIT_PARAM = 6

_EXIT_CODES = [
    (ParseError, EXIT_PARSE),
    (MalformedInstanceError, EXIT_PARSE),
    (SizeLimitError, EXIT_SIZE),
    (UnknownRuleError, EXIT_RULE),
    (RuleUnsupportedError, EXIT_RULE),
    (CandidateMismatchError, EXIT_CANDIDATE),
    (ParameterDomainError, EXIT_PARAM),
]


def _number(x: Fraction) -> int | float:
    return x.numerator if x.denominator == 1 else float(x)


def _oriented(axis, names) -> list[str]:
    """Names of ``axis`` read in the direction that is lexicographically smaller."""
    forward = axis.names(names)
    return min(forward, forward[::-1])


def _axes(axes, names) -> list[list[str]]:
    return sorted(_oriented(a, names) for a in axes)


def _dump(doc, out) -> None:
    json.dump(doc, out, indent=2, ensure_ascii=False)
    out.write("\n")


def _rule_for(profile, name: str) -> Rule:
    rule = Rule.parse(name)
    if isinstance(profile, RankingProfile) != rule.is_ranking:
        kind = "ranking" if isinstance(profile, RankingProfile) else "approval"
        raise RuleUnsupportedError(f"rule {rule.value} does not apply to a {kind} profile")
    return rule


def cmd_solve(args) -> int:
    profile = load_profile(args.input)
    rule = _rule_for(profile, args.rule)
    if args.decompose and rule not in DECOMPOSABLE_RULES:
        raise RuleUnsupportedError(f"{rule.value} cannot be solved by decomposition")
    if args.no_prune:
        options = SolveOptions.exhaustive(thread_count=args.threads)
    else:
        options = SolveOptions(use_decomposition=args.decompose, thread_count=args.threads)
    if args.export_ilp:
        if isinstance(profile, RankingProfile):
            raise RuleUnsupportedError("no ILP encoding for ranking rules")
        Path(args.export_ilp).write_text(export_ilp(profile, rule), encoding="utf-8", newline="\n")

    start = time.perf_counter()
    if rule.is_ranking:
        result = solve_ranking(profile, rule, options)
    else:
        result = solve(profile, rule, options)
    elapsed = (time.perf_counter() - start) * 1000

    doc = {
        "rule": rule.value,
        "candidates": list(profile.names),
        "optimal_cost": _number(result.optimal_cost),
        "optimal_cost_exact": str(result.optimal_cost),
        "optimal_axes": _axes(result.optimal_axes, profile.names),
    }
    if args.all_optimal:
        cost = ranking_profile_cost if rule.is_ranking else profile_cost
        doc["per_axis_costs"] = [_number(cost(rule, profile, profile.axis(a))) for a in doc["optimal_axes"]]
    doc["axes_examined"] = result.axes_examined
    doc["axes_pruned"] = result.axes_pruned
    doc["wall_time_ms"] = round(elapsed, 3)
    _dump(doc, sys.stdout)
    return 0


def cmd_cost(args) -> int:
    profile = load_profile(args.input)
    rule = _rule_for(profile, args.rule)
    axis = profile.axis(args.axis)
    entries = []
    if isinstance(profile, RankingProfile):
        total = ranking_profile_cost(rule, profile, axis)
        for r, w in profile.entries:
            entries.append({
                "ranking": [profile.names[c] for c in r.order],
                "weight": _number(w),
                "cost": ranking_cost(rule, r, axis),
            })
    else:
        total = profile_cost(rule, profile, axis)
        for b, w in profile.entries:
            entries.append({
                "ballot": profile.ballot_names(b),
                "weight": _number(w),
                "cost": ballot_cost(rule, b, axis),
            })
    _dump({
        "rule": rule.value,
        "axis": axis.names(profile.names),
        "cost": _number(total),
        "cost_exact": str(total),
        "entries": entries,
    }, sys.stdout)
    return 0


def cmd_gen(args) -> int:
    config = NoiseModelConfig(
        NoiseModel.parse(args.model), args.m, args.n, args.seed,
        p=args.p, phi=args.phi, sigma=args.sigma, radius=args.r,
    )
    sample = generate(config)
    if args.rankings and sample.rankings is None:
        raise ParameterDomainError("--rankings needs the noisy model")
    profile = sample.rankings if args.rankings else sample.profile
    out = Path(args.out)
    out.write_text(format_profile(profile), encoding="utf-8", newline="\n")
    truth = {
        "model": config.model.value,
        "params": config.params,
        "m": config.m,
        "n": config.n,
        "seed": config.seed,
        "axis": _oriented(sample.axis, profile.names),
    }
    if sample.candidate_positions is not None:
        truth["candidate_positions"] = dict(zip(profile.names, sample.candidate_positions))
    Path(str(out) + ".truth.json").write_text(
        json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    return 0


def cmd_experiment(args) -> int:
    models = parse_model_spec(args.models, args.m, args.n)
    rules = [Rule.parse(r) for r in args.rules.split(",") if r.strip()]
    experiment = Experiment(
        models, rules, args.replicates, seed=args.seed, options=SolveOptions(thread_count=args.threads)
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            experiment.write_csv(fh)
    else:
        experiment.write_csv(sys.stdout)
    return 0


def cmd_axioms(args) -> int:
    axiom = AxiomId.parse(args.axiom)
    rule = Rule.parse(args.rule)
    if args.random is None:
        instances = reference_instances(axiom)
        mode = "fixtures"
    else:
        rng = np.random.default_rng(args.seed)
        instances = [random_instance(axiom, rng) for _ in range(args.random)]
        mode = "random"
    violations = []
    for inst in instances:
        verdict = check_instance(axiom, rule, inst)
        if not verdict.holds:
            violations.append(verdict.witness)
    _dump({
        "axiom": axiom.value,
        "rule": rule.value,
        "mode": mode,
        "seed": args.seed if mode == "random" else None,
        "checked": len(instances),
        "holds": not violations,
        "violations": violations,
    }, sys.stdout)
    return 0


def cmd_check_linear(args) -> int:
    profile = load_profile(args.input)
    if not isinstance(profile, WeightedProfile):
        raise RuleUnsupportedError("linearity is defined for approval profiles")
    axes = consistent_axes(profile)
    _dump({
        "linear": bool(axes),
        "consistent_axes": _axes(axes, profile.names),
    }, sys.stdout)
    return 0


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _count(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="axisrules", description="Optimal axes for approval and ranking profiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="all optimal axes of a profile")
    p.add_argument("--rule", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--all-optimal", action="store_true", help="also report the recomputed cost of each axis")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--no-prune", action="store_true", help="plain enumeration, no bounds")
    p.add_argument("--decompose", action="store_true", help="solve co-approval classes separately (bc, ms, ft)")
    p.add_argument("--export-ilp", metavar="PATH")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cost", help="cost of one axis with a per-ballot breakdown")
    p.add_argument("--rule", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--axis", required=True, help='comma-separated candidate names, e.g. "a,b,c"')
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("gen", help="sample a profile from a noise model")
    p.add_argument("--model", required=True, choices=[m.value for m in NoiseModel])
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--r", "--radius", dest="r", type=float, default=0.0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rankings", action="store_true", help="write the ranking profile (noisy model)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="distance to the ground truth over replicates, as CSV")
    p.add_argument("--models", required=True, help='e.g. "noisy:sigma=0.1,r=0.4;maverick:p=0.2"')
    p.add_argument("--rules", required=True, help="comma-separated rule names")
    p.add_argument("--replicates", type=_count, required=True)
    p.add_argument("--m", type=int, default=7)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("axioms", help="check an axiom on fixtures or random instances")
    p.add_argument("--axiom", required=True)
    p.add_argument("--rule", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--fixtures", action="store_true", help="known separating profiles (default)")
    group.add_argument("--random", type=_positive, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("check-linear", help="is every ballot an interval of some axis?")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_check_linear)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except tuple(cls for cls, _ in _EXIT_CODES) as exc:
        code = next(c for cls, c in _EXIT_CODES if isinstance(exc, cls))
        print(f"axisrules: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
