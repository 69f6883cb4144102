"""Instance-level verification of axis-rule axioms.

Each check solves the profiles involved exactly and inspects the full set of
optimal axes, so a verdict is a fact about one instance, never a proof of an
axiom.  Violations come with a JSON-ready witness whose ``instance`` field
can be fed back through :func:`instance_from_json` to reproduce them.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

from axisrules.core import Axis, Ballot, WeightedProfile, canonicalize, is_interval, restrict_axis
from axisrules.costs import Rule
from axisrules.errors import MalformedInstanceError, RuleUnsupportedError, UnknownRuleError
from axisrules.linearity import coapproval_partition, consistent_axes
from axisrules.metrics import median_candidate
from axisrules.solver import SolveOptions, SolveResult, combine_blocks, solve
from axisrules.synthetic import sample_interval_ballot


class AxiomId(enum.Enum):
    STABILITY = "stability"
    BALLOT_MONOTONICITY = "ballot-monotonicity"
    CLEARANCE = "clearance"
    VETO_CENTRISM = "veto-centrism"
    CLONE_PROXIMITY = "clone-proximity"
    CLONE_RESISTANCE = "clone-resistance"
    HEREDITY = "heredity"
    PARTITION_CONSISTENCY = "partition-consistency"
    CONSISTENCY_WITH_LINEARITY = "consistency-with-linearity"

    @classmethod
    def parse(cls, name: "str | AxiomId") -> "AxiomId":
        if isinstance(name, AxiomId):
            return name
        key = name.strip().lower().replace("_", "-")
        for axiom in cls:
            if axiom.value == key:
                return axiom
        raise UnknownRuleError(f"unknown axiom {name!r}")


@dataclass(frozen=True)
class Instance:
    """What an axiom quantifies over, beyond the rule.

    ``ballot`` is the added ballot for stability; for ballot monotonicity
    ``entry`` and ``axis`` optionally pin the completed entry and the chosen
    axis (otherwise all are tried).  ``clones`` names a clone pair; the second
    one is the candidate removed for resistance to cloning.  ``subset`` is
    the kept candidate set for heredity.
    """

    profile: WeightedProfile
    ballot: Ballot | None = None
    entry: int | None = None
    axis: Axis | None = None
    clones: tuple[int, int] | None = None
    subset: frozenset[int] | None = None


@dataclass(frozen=True)
class AxiomVerdict:
    holds: bool
    witness: dict[str, Any] | None = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("a witness is present exactly when the axiom fails")


_OPTIONS = SolveOptions(use_decomposition=False)


def _solve(profile: WeightedProfile, rule: Rule) -> SolveResult:
    return solve(profile, rule, _OPTIONS)


# --------------------------------------------------------------------------
# JSON round trip


def instance_to_json(inst: Instance) -> dict[str, Any]:
    p = inst.profile
    doc: dict[str, Any] = {
        "candidates": list(p.names),
        "ballots": [[p.ballot_names(b), str(w)] for b, w in p.entries],
    }
    if inst.ballot is not None:
        doc["ballot"] = p.ballot_names(inst.ballot)
    if inst.entry is not None:
        doc["entry"] = inst.entry
    if inst.axis is not None:
        doc["axis"] = inst.axis.names(p.names)
    if inst.clones is not None:
        doc["clones"] = [p.names[c] for c in inst.clones]
    if inst.subset is not None:
        doc["subset"] = [p.names[c] for c in sorted(inst.subset)]
    return doc


def instance_from_json(doc: dict[str, Any]) -> Instance:
    p = WeightedProfile.from_sets(
        [b for b, _ in doc["ballots"]], [Fraction(w) for _, w in doc["ballots"]], doc["candidates"]
    )
    return Instance(
        profile=p,
        ballot=p.ballot(doc["ballot"]) if "ballot" in doc else None,
        entry=doc.get("entry"),
        axis=p.axis(doc["axis"]) if "axis" in doc else None,
        clones=tuple(p.index(x) for x in doc["clones"]) if "clones" in doc else None,
        subset=frozenset(p.index(x) for x in doc["subset"]) if "subset" in doc else None,
    )


def _names(axes, names) -> list[list[str]]:
    return [a.names(names) for a in axes]


# --------------------------------------------------------------------------
# per-axiom checks; each returns None when the instance complies


def _stability(rule, inst):
    if inst.ballot is None:
        raise MalformedInstanceError("stability needs an added ballot")
    p = inst.profile
    before = _solve(p, rule)
    after = _solve(p.with_ballot(inst.ballot), rule)
    if before.axis_set & after.axis_set:
        return None
    return {
        "optimal_before": _names(before.optimal_axes, p.names),
        "cost_before": str(before.optimal_cost),
        "optimal_after": _names(after.optimal_axes, p.names),
        "cost_after": str(after.optimal_cost),
    }


def completion(ballot: Ballot, axis: Axis) -> Ballot:
    """Smallest interval of ``axis`` containing the ballot."""
    pos = axis.positions()
    spots = [pos[c] for c in ballot]
    return Ballot.of(axis.order[min(spots) : max(spots) + 1])


def _monotonicity(rule, inst):
    p = inst.profile
    result = _solve(p, rule)
    if inst.axis is not None:
        if canonicalize(inst.axis).order not in result.axis_set:
            raise MalformedInstanceError("the pinned axis is not optimal for the profile")
        axes = [inst.axis]
    else:
        axes = list(result.optimal_axes)
    entries = [inst.entry] if inst.entry is not None else range(len(p.entries))
    for i in entries:
        ballot, w = p.entries[i]
        if w == 0:
            continue
        for axis in axes:
            if is_interval(ballot, axis):
                continue
            full = completion(ballot, axis)
            changed = WeightedProfile(
                p.names, p.entries[:i] + ((full, w),) + p.entries[i + 1 :]
            )
            after = _solve(changed, rule)
            if canonicalize(axis).order not in after.axis_set:
                return {
                    "entry": i,
                    "ballot": p.ballot_names(ballot),
                    "completed": p.ballot_names(full),
                    "axis": axis.names(p.names),
                    "optimal_after": _names(after.optimal_axes, p.names),
                }
    return None


def _interferers(p: WeightedProfile, axis: Axis, x: int):
    pos = axis.positions()
    for ballot, w in p.entries:
        if w == 0 or x in ballot:
            continue
        spots = [pos[c] for c in ballot]
        if min(spots) < pos[x] < max(spots):
            yield ballot


def _clearance(rule, inst):
    p = inst.profile
    never = p.never_approved()
    if not never:
        raise MalformedInstanceError("clearance needs a never-approved candidate")
    result = _solve(p, rule)
    for axis in result.optimal_axes:
        for x in never:
            for ballot in _interferers(p, axis, x):
                return {
                    "axis": axis.names(p.names),
                    "candidate": p.names[x],
                    "ballot": p.ballot_names(ballot),
                }
    return None


def is_veto_profile(p: WeightedProfile) -> bool:
    live = [b for b, w in p.entries if w > 0]
    return bool(live) and all(len(b) == p.m - 1 for b in live)


def _veto(rule, inst):
    p = inst.profile
    if not is_veto_profile(p):
        raise MalformedInstanceError("every ballot must approve all but one candidate")
    scores = p.approval_scores()
    top = max(scores)
    winners = {c for c in range(p.m) if scores[c] == top}
    result = _solve(p, rule)
    for axis in result.optimal_axes:
        medians = median_candidate(axis)
        if not medians & winners:
            return {
                "axis": axis.names(p.names),
                "median": sorted(p.names[c] for c in medians),
                "most_approved": sorted(p.names[c] for c in winners),
            }
    return None


def are_clones(p: WeightedProfile, a: int, b: int) -> bool:
    return a != b and all((a in ballot) == (b in ballot) for ballot, w in p.entries if w > 0)


def _clone_pair(inst) -> tuple[int, int]:
    if inst.clones is None:
        raise MalformedInstanceError("a clone pair is required")
    a, b = inst.clones
    if not (0 <= a < inst.profile.m and 0 <= b < inst.profile.m) or not are_clones(inst.profile, a, b):
        raise MalformedInstanceError("the named candidates are not clones")
    return a, b


def _clone_proximity(rule, inst):
    p = inst.profile
    a, b = _clone_pair(inst)
    result = _solve(p, rule)
    for axis in result.optimal_axes:
        pos = axis.positions()
        lo, hi = sorted((pos[a], pos[b]))
        for x in axis.order[lo + 1 : hi]:
            for ballot, w in p.entries:
                if w > 0 and a in ballot and b in ballot and x not in ballot:
                    return {
                        "axis": axis.names(p.names),
                        "between": p.names[x],
                        "ballot": p.ballot_names(ballot),
                    }
    return None


def _restricted(axis: Axis, keep) -> tuple[int, ...]:
    return canonicalize(restrict_axis(axis, keep)).order


def _clone_resistance(rule, inst):
    p = inst.profile
    a, removed = _clone_pair(inst)
    keep = [c for c in range(p.m) if c != removed]
    sub = p.restrict(keep)
    full = _solve(p, rule)
    reduced = _solve(sub, rule)
    # condition (1): every optimal axis stays optimal once the clone is gone
    for axis in full.optimal_axes:
        if _restricted(axis, keep) not in reduced.axis_set:
            return {
                "condition": 1,
                "axis": axis.names(p.names),
                "restricted": list(Axis(_restricted(axis, keep)).names(sub.names)),
                "optimal_without_clone": _names(reduced.optimal_axes, sub.names),
            }
    # condition (2): every optimal axis without the clone extends to one with it
    extended = {_restricted(axis, keep) for axis in full.optimal_axes}
    for axis in reduced.optimal_axes:
        if axis.order not in extended:
            return {
                "condition": 2,
                "axis_without_clone": axis.names(sub.names),
                "optimal_with_clone": _names(full.optimal_axes, p.names),
            }
    return None


def _heredity(rule, inst):
    p = inst.profile
    if not inst.subset or not inst.subset <= set(range(p.m)):
        raise MalformedInstanceError("heredity needs a non-empty candidate subset")
    keep = sorted(inst.subset)
    sub = p.restrict(keep)
    full = _solve(p, rule)
    reduced = _solve(sub, rule)
    for axis in full.optimal_axes:
        if _restricted(axis, keep) not in reduced.axis_set:
            return {
                "axis": axis.names(p.names),
                "restricted": Axis(_restricted(axis, keep)).names(sub.names),
                "optimal_on_subset": _names(reduced.optimal_axes, sub.names),
            }
    return None


def partition_prediction(p: WeightedProfile, rule: Rule) -> set[tuple[int, ...]]:
    """Canonical axes the co-approval partition predicts: every concatenation
    of per-class optimal axes."""
    blocks = []
    for cls in coapproval_partition(p).classes:
        keep = sorted(cls)
        res = _solve(p.restrict(keep), rule)
        blocks.append([tuple(keep[c] for c in a.order) for a in res.optimal_axes])
    return combine_blocks(blocks)


def _partition(rule, inst):
    p = inst.profile
    actual = _solve(p, rule).axis_set
    predicted = partition_prediction(p, rule)
    if actual == predicted:
        return None
    extra = sorted(actual - predicted)
    missing = sorted(predicted - actual)
    return {
        "classes": [sorted(p.names[c] for c in cls) for cls in coapproval_partition(p).classes],
        "optimal_not_predicted": _names(map(Axis, extra), p.names),
        "predicted_not_optimal": _names(map(Axis, missing), p.names),
    }


def _linearity(rule, inst):
    p = inst.profile
    con = {a.order for a in consistent_axes(p)}
    if not con:
        raise MalformedInstanceError("the profile is not linear")
    actual = _solve(p, rule).axis_set
    if actual == con:
        return None
    return {
        "optimal": _names(map(Axis, sorted(actual)), p.names),
        "consistent": _names(map(Axis, sorted(con)), p.names),
    }


_CHECKS = {
    AxiomId.STABILITY: _stability,
    AxiomId.BALLOT_MONOTONICITY: _monotonicity,
    AxiomId.CLEARANCE: _clearance,
    AxiomId.VETO_CENTRISM: _veto,
    AxiomId.CLONE_PROXIMITY: _clone_proximity,
    AxiomId.CLONE_RESISTANCE: _clone_resistance,
    AxiomId.HEREDITY: _heredity,
    AxiomId.PARTITION_CONSISTENCY: _partition,
    AxiomId.CONSISTENCY_WITH_LINEARITY: _linearity,
}


def check_instance(axiom, rule, instance: Instance) -> AxiomVerdict:
    axiom = AxiomId.parse(axiom)
    rule = Rule.parse(rule)
    if rule.is_ranking:
        raise RuleUnsupportedError("axioms are checked for approval rules only")
    details = _CHECKS[axiom](rule, instance)
    if details is None:
        return AxiomVerdict(True)
    witness = {"axiom": axiom.value, "rule": rule.value, "instance": instance_to_json(instance)}
    witness["details"] = details
    return AxiomVerdict(False, witness)


# --------------------------------------------------------------------------
# fixtures and randomized search


def _profile(ballots, weights=None, candidates=None) -> WeightedProfile:
    return WeightedProfile.from_sets(
        [b.split(",") if "," in b else list(b) for b in ballots], weights, candidates
    )


def _names_profile(ballots, weights, candidates) -> WeightedProfile:
    return WeightedProfile.from_sets(ballots, weights, candidates)


def reference_instances(axiom) -> list[Instance]:
    """Hand-built profiles on which the axioms are known to separate rules."""
    axiom = AxiomId.parse(axiom)
    if axiom is AxiomId.STABILITY:
        p = _profile(["abe", "abce", "bcdef"], candidates="abcdef")
        return [Instance(p, ballot=p.ballot("abdf"))]
    if axiom is AxiomId.BALLOT_MONOTONICITY:
        sets = ["".join(s) for s in itertools.combinations("abcdef", 4)]
        p = _profile(sets, candidates="abcdef")
        return [Instance(p, entry=sets.index("abcf"), axis=p.axis("abcdef"))]
    if axiom is AxiomId.CLEARANCE:
        return [Instance(_profile(["ab", "ac", "ad"], candidates="abcde"))]
    if axiom is AxiomId.VETO_CENTRISM:
        # vetoes a:5 b:4 c:1 d:2 e:3, so c is the most approved candidate
        names = "abcde"
        return [Instance(_profile([names.replace(x, "") for x in names], [5, 4, 1, 2, 3], names))]
    if axiom is AxiomId.CLONE_PROXIMITY:
        p1 = _names_profile(
            [["a1", "a2"], ["a2", "a3"], ["x", "x'", "a1", "a3"]], [2, 2, 1], ["x", "a1", "a2", "a3", "x'"]
        )
        p2 = _names_profile(
            [["a", "a'", "b", "b'"], ["b", "b'", "x", "x'"], ["x", "x'", "a", "a'"]],
            None,
            ["a", "a'", "b", "b'", "x", "x'"],
        )
        return [
            Instance(p1, clones=(p1.index("x"), p1.index("x'"))),
            Instance(p2, clones=(p2.index("x"), p2.index("x'"))),
        ]
    if axiom is AxiomId.CLONE_RESISTANCE:
        cands = ["a", "a'", "b", "c"]
        bc = _names_profile([["b", "a", "a'"], ["c", "a", "a'"], ["b", "c"]], [3, 4, 2], cands)
        # MF needs six candidates; found by random search, re-verified in tests
        mf = _names_profile(
            [["b", "c"], ["a", "a'", "c", "e"], ["a", "a'", "b", "d"]], [3, 2, 1], ["a", "a'", "b", "c", "d", "e"]
        )
        ft = _names_profile(
            [["a'", "a", "b"], ["b", "c"], ["a'", "a", "c", "d"]], [3, 3, 1], ["a", "a'", "b", "c", "d"]
        )
        return [Instance(p, clones=(p.index("a"), p.index("a'"))) for p in (bc, mf, ft)]
    if axiom is AxiomId.HEREDITY:
        p = _profile(["ab", "ac", "ad"], candidates="abcd")
        return [Instance(p, subset=frozenset(p.index(x) for x in "abc"))]
    if axiom is AxiomId.PARTITION_CONSISTENCY:
        two_blocks = _profile(
            ["abc", "cd", "xy", "wxy", "abd", "ac", "wyz"], [5, 4, 3, 2, 1, 1, 1], "abcdwxyz"
        )
        return [Instance(two_blocks), Instance(_profile(["ab", "ac", "ad"], candidates="abcde"))]
    return [Instance(_profile(["ab", "bc", "cd", "bcd"], candidates="abcde"))]


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_ballot(m: int, rng: np.random.Generator, min_size: int = 2) -> Ballot:
    size = int(rng.integers(min(min_size, m), m)) if m > min_size else m
    return Ballot.of(int(c) for c in rng.choice(m, size=max(size, 1), replace=False))


def random_profile(m: int, n: int, rng: np.random.Generator, max_weight: int = 3) -> WeightedProfile:
    names = tuple("abcdefghijkl"[:m]) if m <= 12 else tuple(f"c{i}" for i in range(m))
    entries = tuple((random_ballot(m, rng), int(rng.integers(1, max_weight + 1))) for _ in range(n))
    return WeightedProfile(names, entries)


def add_clone(p: WeightedProfile, a: int) -> WeightedProfile:
    """Append a clone of candidate ``a`` named after it with a prime."""
    name = p.names[a] + "'"
    while name in p.names:
        name += "'"
    bit = 1 << p.m
    entries = tuple((Ballot(b.mask | bit) if a in b else b, w) for b, w in p.entries)
    return WeightedProfile(p.names + (name,), entries)


def random_instance(axiom, rng, m_range: tuple[int, int] = (4, 6)) -> Instance:
    axiom = AxiomId.parse(axiom)
    rng = _as_generator(rng)
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(2, 7))
    if axiom is AxiomId.STABILITY:
        return Instance(random_profile(m, n, rng), ballot=random_ballot(m, rng))
    if axiom is AxiomId.CLEARANCE:
        base = random_profile(m - 1, n, rng)
        x = int(rng.integers(m))
        names = base.names + ("z",)
        order = [i for i in range(m - 1)]
        order.insert(x, m - 1)
        # relabel so the never-approved candidate sits at index x
        new_index = {old: new for new, old in enumerate(order)}
        entries = tuple((Ballot.of(new_index[c] for c in b), w) for b, w in base.entries)
        return Instance(WeightedProfile(tuple(names[o] for o in order), entries))
    if axiom is AxiomId.VETO_CENTRISM:
        m = max(m, 5)
        full = (1 << m) - 1
        weights = rng.integers(1, 6, size=m)
        entries = tuple((Ballot(full ^ (1 << c)), int(weights[c])) for c in range(m))
        return Instance(WeightedProfile(tuple("abcdefghijkl"[:m]), entries))
    if axiom in (AxiomId.CLONE_PROXIMITY, AxiomId.CLONE_RESISTANCE):
        base = random_profile(m - 1, n, rng)
        a = int(rng.integers(m - 1))
        return Instance(add_clone(base, a), clones=(a, m - 1))
    if axiom is AxiomId.HEREDITY:
        p = random_profile(m, n, rng)
        k = int(rng.integers(2, m))
        return Instance(p, subset=frozenset(int(c) for c in rng.choice(m, size=k, replace=False)))
    if axiom is AxiomId.PARTITION_CONSISTENCY:
        split = int(rng.integers(1, m))
        perm = [int(c) for c in rng.permutation(m)]
        blocks = [perm[:split], perm[split:]]
        entries = []
        for _ in range(n):
            block = blocks[int(rng.integers(2))]
            if len(block) < 2:
                continue
            sub = random_ballot(len(block), rng)
            entries.append((Ballot.of(block[c] for c in sub), int(rng.integers(1, 4))))
        return Instance(WeightedProfile(tuple("abcdefghijkl"[:m]), tuple(entries)))
    if axiom is AxiomId.CONSISTENCY_WITH_LINEARITY:
        truth = Axis(tuple(int(c) for c in rng.permutation(m)))
        entries = tuple((sample_interval_ballot(truth, rng), 1) for _ in range(n))
        return Instance(WeightedProfile(tuple("abcdefghijkl"[:m]), entries))
    return Instance(random_profile(m, n, rng))


def candidate_instances(axiom, rng, budget: int) -> Iterator[Instance]:
    """Fixtures first, then random instances, ``budget`` in total."""
    rng = _as_generator(rng)
    produced = 0
    for inst in reference_instances(axiom):
        if produced >= budget:
            return
        produced += 1
        yield inst
    while produced < budget:
        produced += 1
        yield random_instance(axiom, rng)


def search_counterexample(axiom, rule, budget: int, rng=None) -> dict[str, Any] | None:
    """First violation among fixtures and random instances, or None."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    for inst in candidate_instances(axiom, rng, budget):
        verdict = check_instance(axiom, rule, inst)
        if not verdict.holds:
            return verdict.witness
    return None
