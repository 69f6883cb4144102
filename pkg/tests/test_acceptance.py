"""Acceptance suite: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from axisrules import (
    Axis,
    Ballot,
    NoiseModelConfig,
    WeightedProfile,
    avg_distance_to_truth,
    axis_distance,
    ballot_cost,
    brute_force,
    check_instance,
    consistent_axes,
    export_ilp,
    generate,
    profile_cost,
    solve,
    solve_ranking,
)
from axisrules.axioms import random_instance, reference_instances
from axisrules.costs import APPROVAL_RULES, MAIN_RULES
from axisrules.ilp import axis_assignment, model_scale, parse_lp
from axisrules.metrics import max_axis_distance
from axisrules.solver import SolveOptions
from axisrules.synthetic import sample_interval_ballot

import oracles
from conftest import NAMES, WORKED, make_profile, random_pairs
from reference import FIXTURE_VERDICTS, GOLDEN, TWO_BLOCKS, worst_case_pair

RULES = [r.value for r in MAIN_RULES]
ALL_APPROVAL = [r.value for r in APPROVAL_RULES]


def classes(result, names) -> set[tuple]:
    return {oracles.canonical(a.names(names)) for a in result.optimal_axes}


def as_classes(labels) -> set[tuple]:
    return {oracles.canonical(tuple(x)) for x in labels}


def one_cost(rule, ballot: str, axis: str) -> int:
    p = make_profile([(ballot, 1)], candidates=axis)
    return ballot_cost(rule, p.entries[0][0], p.axis(axis))


@pytest.mark.criterion(1, "golden per-ballot cost tables and inline values")
def test_criterion_01_golden_costs():
    start = time.perf_counter()
    wrong = [
        (ballot, rule, one_cost(rule, ballot, "abcde"), want)
        for ballot, row in GOLDEN.items()
        for rule, want in row.items()
        if one_cost(rule, ballot, "abcde") != want
    ]
    inline = [("mf", "ad", "abcd", 1), ("bc", "ad", "abcd", 2), ("ft", "abde", "abcde", 4), ("ft", "abce", "abcde", 3)]
    wrong += [(b, r, one_cost(r, b, a), want) for r, b, a, want in inline if one_cost(r, b, a) != want]
    elapsed = time.perf_counter() - start
    assert sum(len(row) for row in GOLDEN.values()) + len(inline) == 29
    assert wrong == []
    assert elapsed < 1.0


@pytest.mark.criterion(2, "four-candidate worked profile optima per rule")
def test_criterion_02_worked_profile():
    start = time.perf_counter()
    p = make_profile(WORKED)
    expected = {
        "vd": as_classes(["abcd"]),
        "mf": as_classes(["abcd"]),
        "bc": as_classes(["dabc"]),
        "ms": as_classes(["dabc"]),
        "ft": as_classes(["adbc", "abdc"]),
    }
    got = {rule: classes(solve(p, rule), p.names) for rule in expected}
    elapsed = time.perf_counter() - start
    assert got == expected
    assert elapsed < 1.0


SEVEN = [
    ("ab", 18), ("bc", 1000), ("cd", 1000), ("de", 15), ("ef", 4),
    ("ag", 1), ("bcfg", 20), ("aefg", 15), ("adg", 2),
]
SEVEN_TABLE = {
    "aefgbcd": {"vd": 36, "mf": 38, "bc": 124, "ms": 126, "ft": 132},
    "efgabcd": {"vd": 37, "mf": 37, "bc": 99, "ms": 119, "ft": 163},
    "gfabcde": {"vd": 42, "mf": 42, "bc": 88, "ms": 108, "ft": 244},
    "agfbcde": {"vd": 39, "mf": 39, "bc": 99, "ms": 99, "ft": 195},
    "eagfbcd": {"vd": 40, "mf": 40, "bc": 122, "ms": 122, "ft": 128},
}
SEVEN_BOLD = {"vd": "aefgbcd", "mf": "efgabcd", "bc": "gfabcde", "ms": "agfbcde", "ft": "eagfbcd"}


@pytest.mark.criterion(3, "seven-candidate table: 25 costs and bold optima")
def test_criterion_03_seven_candidate_table():
    start = time.perf_counter()
    p = make_profile(SEVEN, candidates="abcdefg")
    cells = []
    for label, row in SEVEN_TABLE.items():
        for rule, want in row.items():
            got = profile_cost(rule, p, p.axis(label))
            if got != want:
                cells.append(f"{label}/{rule}: got {got}, table {want}")
    not_optimal = []
    for rule, label in SEVEN_BOLD.items():
        best = brute_force(p, rule)
        assert best.axes_examined == 2520
        bold = profile_cost(rule, p, p.axis(label))
        if bold != best.optimal_cost:
            not_optimal.append(f"{label} costs {bold} under {rule}, optimum {best.optimal_cost} at {best.labels(p.names)}")
    elapsed = time.perf_counter() - start
    assert not cells and not not_optimal, "; ".join(cells + not_optimal)
    assert elapsed < 10.0


@pytest.mark.criterion(4, "cost hierarchy VD <= MF <= BC <= MS <= FT")
def test_criterion_04_hierarchy():
    rng = random.Random(4)
    violations = []
    for _ in range(10_000):
        m = rng.randint(3, 10)
        axis = Axis(tuple(rng.sample(range(m), m)))
        ballot = Ballot(rng.randrange(1, 1 << m))
        costs = [ballot_cost(rule, ballot, axis) for rule in RULES]
        if costs != sorted(costs):
            violations.append((ballot.mask, axis.order, costs))
    assert violations == []


@pytest.mark.criterion(5, "small-m rule equivalences")
def test_criterion_05_small_m_equivalences():
    rng = random.Random(5)
    violations = []
    for _ in range(500):
        p = make_profile(random_pairs(rng, 3, rng.randint(1, 8)), candidates="abc")
        sets = {rule: solve(p, rule).axis_set for rule in ALL_APPROVAL}
        if len(set(sets.values())) != 1:
            violations.append(("m=3", p.entries))
    for _ in range(500):
        p = make_profile(random_pairs(rng, 4, rng.randint(1, 8)), candidates="abcd")
        sets = {rule: solve(p, rule).axis_set for rule in ("vd", "mf", "bc", "ms")}
        if sets["vd"] != sets["mf"] or sets["bc"] != sets["ms"]:
            violations.append(("m=4", p.entries))
    assert violations == []


@pytest.mark.criterion(6, "pruned solver equals naive enumeration; pruning active")
def test_criterion_06_oracle_equivalence():
    rng = random.Random(6)
    discrepancies = []
    solves = pruned = 0
    for _ in range(200):
        m = rng.randint(3, 7)
        pairs = random_pairs(rng, m, rng.randint(4, 12))
        p = make_profile(pairs, candidates=NAMES[:m])
        naive = oracles.exhaustive_optima([(set(b), w) for b, w in pairs], NAMES[:m])
        for rule in ALL_APPROVAL:
            want_cost, want_axes = naive[rule]
            for threads in (1, 4):
                res = solve(p, rule, SolveOptions(thread_count=threads))
                if res.optimal_cost != want_cost or classes(res, p.names) != want_axes:
                    discrepancies.append((rule, threads, pairs))
                if threads == 1:
                    solves += 1
                    pruned += res.axes_pruned > 0
    assert discrepancies == []
    # an instance is one (profile, rule) search
    assert pruned >= solves / 2, f"pruning on {pruned} of {solves} searches"


@pytest.mark.criterion(7, "linear profiles: optima equal consistent axes")
def test_criterion_07_linear_profiles():
    rng = np.random.default_rng(7)
    violations = []
    for _ in range(200):
        m = int(rng.integers(3, 8))
        truth = Axis(tuple(int(c) for c in rng.permutation(m)))
        entries = tuple((sample_interval_ballot(truth, rng), int(rng.integers(1, 4))) for _ in range(int(rng.integers(2, 10))))
        p = WeightedProfile(tuple(NAMES[:m]), entries)
        con = {oracles.canonical(a.names(p.names)) for a in consistent_axes(p)}
        named = [(set(p.ballot_names(b)), w) for b, w in entries]
        if con != oracles.consistent_axes(named, p.names) or oracles.canonical(truth.names(p.names)) not in con:
            violations.append(("consistent_axes", entries))
        for rule in ALL_APPROVAL:
            if classes(solve(p, rule), p.names) != con:
                violations.append((rule, entries))
    assert violations == []


def _verdicts(axiom, rule) -> str:
    return "".join("H" if check_instance(axiom, rule, inst).holds else "x" for inst in reference_instances(axiom))


def _random_failures(axiom, rule, trials, seed) -> int:
    rng = np.random.default_rng(seed)
    return sum(not check_instance(axiom, rule, random_instance(axiom, rng)).holds for _ in range(trials))


@pytest.mark.criterion(8, "axiom fixtures and randomized suites")
@pytest.mark.slow
def test_criterion_08_axioms():
    problems = []
    table = {axiom: {rule: _verdicts(axiom, rule) for rule in row} for axiom, row in FIXTURE_VERDICTS.items()}
    if table != FIXTURE_VERDICTS:
        problems.append(("verdict table", table))
    expect_witness = {
        "stability": ["mf", "bc", "ms", "ft"],
        "clearance": ["vd", "mf"],
        "clone-proximity": ["vd", "mf", "bc", "ms"],
        "clone-resistance": ["mf", "bc", "ms", "ft"],
        "veto-centrism": ["vd", "mf", "bc"],
    }
    for axiom, rules in expect_witness.items():
        for rule in rules:
            if "x" not in table[axiom][rule]:
                problems.append((axiom, rule, "no witness"))
    if "x" in table["veto-centrism"]["ms"] + table["veto-centrism"]["ft"]:
        problems.append(("veto-centrism", "ms/ft"))
    clean = [
        ("stability", "vd", 500),
        ("clearance", "bc", 200),
        ("clearance", "ms", 200),
        ("clearance", "ft", 200),
        ("clone-proximity", "ft", 200),
        ("clone-resistance", "vd", 200),
        ("veto-centrism", "ms", 200),
        ("veto-centrism", "ft", 200),
    ]
    for seed, (axiom, rule, trials) in enumerate(clean):
        failures = _random_failures(axiom, rule, trials, seed)
        if failures:
            problems.append((axiom, rule, f"{failures} of {trials} random trials fail"))
    p = make_profile(TWO_BLOCKS, candidates="abcdwxyz")
    blocks = as_classes(["bacdxywz", "bacdzwyx", "dcabxywz", "dcabzwyx"])
    for rule in ("bc", "ms", "ft"):
        if classes(solve(p, rule), p.names) != blocks:
            problems.append(("partition-consistency", rule))
    assert problems == []


@pytest.mark.criterion(9, "reinforcement on intersecting optima")
def test_criterion_09_reinforcement():
    rng = random.Random(9)
    violations = []
    for _ in range(100):
        m = rng.randint(3, 6)
        first = random_pairs(rng, m, rng.randint(2, 8))
        p1 = make_profile(first, candidates=NAMES[:m])
        for rule in ALL_APPROVAL:
            opt1 = solve(p1, rule)
            axis = rng.choice(opt1.optimal_axes).names(p1.names)
            second = []
            for _ in range(rng.randint(1, 5)):
                lo = rng.randrange(m)
                hi = rng.randrange(lo, m)
                second.append(("".join(axis[lo : hi + 1]), rng.randint(1, 3)))
            p2 = make_profile(second, candidates=NAMES[:m])
            both = make_profile(first + second, candidates=NAMES[:m])
            f1 = classes(opt1, p1.names)
            f2 = classes(solve(p2, rule), p2.names)
            assert f1 & f2
            if classes(solve(both, rule), both.names) != f1 & f2:
                violations.append((rule, first, second))
    assert violations == []


def _noisy_distances(sigma: float, replicates: int, rules) -> dict[str, list[float]]:
    out = {rule: [] for rule in rules}
    for seed in range(replicates):
        sample = generate(NoiseModelConfig("noisy", 7, 100, seed=seed, sigma=sigma, radius=0.4))
        for rule in rules:
            if rule.endswith("-rank"):
                res = solve_ranking(sample.rankings, rule)
            else:
                res = solve(sample.profile, rule)
            out[rule].append(avg_distance_to_truth(res, sample.axis))
    return out


@pytest.mark.criterion(10, "noisy model recovery at reduced scale")
@pytest.mark.slow
def test_criterion_10_synthetic():
    low = _noisy_distances(0.1, 200, RULES + ["vd-rank", "ft-rank"])
    high = _noisy_distances(0.3, 200, ["vd", "ft"])
    means = {rule: float(np.mean(d)) for rule, d in low.items()}
    failures = []
    for rule in RULES:
        if means[rule] >= 1.5:
            failures.append(f"(a) {rule} mean {means[rule]:.3f} at sigma 0.1")
    test = stats.ttest_rel(high["ft"], high["vd"], alternative="less")
    if not (np.mean(high["ft"]) < np.mean(high["vd"]) and test.pvalue < 0.05):
        failures.append(f"(b) FT {np.mean(high['ft']):.3f} vs VD {np.mean(high['vd']):.3f}, p={test.pvalue:.4f}")
    if not means["vd-rank"] > 5:
        failures.append(f"(c) VD-rank mean {means['vd-rank']:.3f} not above 5")
    if not means["ft-rank"] < 2:
        failures.append(f"(c) FT-rank mean {means['ft-rank']:.3f} not below 2")
    assert failures == [], f"means at sigma 0.1: {means}"


@pytest.mark.criterion(11, "MS and MF against definitional search, m <= 5")
@pytest.mark.slow
def test_criterion_11_definitional_oracles():
    mismatches = []
    for m in range(1, 6):
        names = NAMES[:m]
        for mask in range(1, 1 << m):
            members = {names[c] for c in range(m) if mask >> c & 1}
            for order in itertools.permutations(range(m)):
                axis = [names[c] for c in order]
                got_ms = ballot_cost("ms", Ballot(mask), Axis(order))
                got_mf = ballot_cost("mf", Ballot(mask), Axis(order))
                if got_ms != oracles.ms(members, axis) or got_mf != oracles.mf(members, axis):
                    mismatches.append((members, axis))
    assert mismatches == []


@pytest.mark.criterion(12, "ILP export of the worked profile")
def test_criterion_12_ilp():
    p = make_profile(WORKED)
    scale = model_scale(p)
    for rule, label, optimum in [("vd", "abcd", 4), ("bc", "dabc", 5)]:
        assert solve(p, rule).optimal_cost == optimum
        lp = parse_lp(export_ilp(p, rule))
        objective, violated = lp.evaluate(axis_assignment(p, rule, p.axis(label)))
        assert violated == []
        assert Fraction(objective, scale) == optimum


@pytest.mark.criterion(13, "axis distance maxima and pseudometric")
def test_criterion_13_metrics():
    for m, expected in [(11, 27), (12, 33)]:
        a, b = worst_case_pair(m)
        assert max_axis_distance(m) == expected
        assert axis_distance(a, b) == expected
        assert axis_distance(a, b) == oracles.axis_distance(a.order, b.order)
    rng = random.Random(13)
    for _ in range(1000):
        m = rng.randint(2, 12)
        a, b, c = (Axis(tuple(rng.sample(range(m), m))) for _ in range(3))
        assert axis_distance(a, a) == 0 == axis_distance(a, a.reversed())
        assert axis_distance(a, b) == axis_distance(b, a)
        assert axis_distance(a, c) <= axis_distance(a, b) + axis_distance(b, c)
        assert axis_distance(a, b) <= max_axis_distance(m)
