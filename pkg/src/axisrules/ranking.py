"""Axis rules for profiles of complete rankings.

VD-rank counts the voters whose ranking is not single-peaked on the axis.
FT-rank counts, over all voters, the triples ``x < y < z`` along the axis
where the voter ranks ``y`` below both ``x`` and ``z``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from axisrules.core import Axis, MAX_CANDIDATES
from axisrules.costs import Rule
from axisrules.errors import (
    CandidateMismatchError,
    EmptyProfileError,
    RuleUnsupportedError,
    SizeLimitError,
    UnknownCandidateError,
)
from axisrules.solver import SolveOptions, SolveResult, canonical_permutations, integer_weights, run_search


@dataclass(frozen=True)
class RankingBallot:
    """A complete strict ranking, best candidate first."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"{order} is not a complete ranking")

    @property
    def m(self) -> int:
        return len(self.order)

    def ranks(self) -> list[int]:
        """``ranks()[c]`` is 0 for the favourite candidate."""
        r = [0] * len(self.order)
        for i, c in enumerate(self.order):
            r[c] = i
        return r


@dataclass(frozen=True)
class RankingProfile:
    names: tuple[str, ...]
    entries: tuple[tuple[RankingBallot, Fraction], ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise EmptyProfileError("a profile needs at least one candidate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate candidate names in {names}")
        if len(names) > MAX_CANDIDATES:
            raise ValueError(f"at most {MAX_CANDIDATES} candidates are supported")
        entries = tuple((r, Fraction(w)) for r, w in self.entries)
        object.__setattr__(self, "entries", entries)
        for r, w in entries:
            if r.m != len(names):
                raise CandidateMismatchError(f"ranking of {r.m} candidates in a {len(names)}-candidate profile")
            if w < 0:
                raise ValueError(f"negative weight {w}")

    @classmethod
    def from_orders(
        cls,
        rankings: Iterable[Sequence[str]],
        weights: Iterable | None = None,
        candidates: Sequence[str] | None = None,
    ) -> "RankingProfile":
        rankings = [list(r) for r in rankings]
        if candidates is None:
            if not rankings:
                raise EmptyProfileError("cannot infer candidates from an empty list")
            candidates = rankings[0]
        names = tuple(candidates)
        index = {x: i for i, x in enumerate(names)}
        ballots = []
        for r in rankings:
            unknown = [x for x in r if x not in index]
            if unknown:
                raise UnknownCandidateError(f"unknown candidate {unknown[0]!r}")
            ballots.append(RankingBallot(tuple(index[x] for x in r)))
        ws = [Fraction(1)] * len(ballots) if weights is None else [Fraction(w) for w in weights]
        if len(ws) != len(ballots):
            raise ValueError("weights and rankings differ in length")
        return cls(names, tuple(zip(ballots, ws)))

    @property
    def m(self) -> int:
        return len(self.names)

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownCandidateError(f"unknown candidate {name!r}") from None

    def axis(self, names: Iterable[str] | str) -> Axis:
        if isinstance(names, str):
            if "," in names or any(len(x) > 1 for x in self.names):
                names = [x.strip() for x in names.split(",")]
            else:
                names = list(names)
        order = tuple(self.index(x) for x in names)
        if len(order) != self.m:
            raise CandidateMismatchError(f"axis has {len(order)} candidates, profile has {self.m}")
        if len(set(order)) != len(order):
            raise CandidateMismatchError("axis lists a candidate twice")
        return Axis(order)


def preprocess_rankings(profile: RankingProfile) -> RankingProfile:
    merged: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for r, w in profile.entries:
        merged[r.order] += w
    entries = [(RankingBallot(o), w) for o, w in merged.items() if w > 0]
    entries.sort(key=lambda e: (-e[1], e[0].order))
    return RankingProfile(profile.names, tuple(entries))


def _check(ranking: RankingBallot, axis: Axis) -> None:
    if ranking.m != axis.m:
        raise CandidateMismatchError(f"ranking over {ranking.m} candidates, axis over {axis.m}")


def _peaked(order: Sequence[int], pos: Sequence[int]) -> bool:
    # each next candidate must extend the interval covered so far
    it = iter(order)
    first = next(it, None)
    if first is None:
        return True
    lo = hi = pos[first]
    for c in it:
        p = pos[c]
        if p == lo - 1:
            lo = p
        elif p == hi + 1:
            hi = p
        else:
            return False
    return True


def is_single_peaked(ranking: RankingBallot, axis: Axis) -> bool:
    """True iff every top-k set of the ranking is an interval of the axis."""
    _check(ranking, axis)
    return _peaked(ranking.order, axis.positions())


def forbidden_triples(ranking: RankingBallot, axis: Axis) -> int:
    _check(ranking, axis)
    ranks = ranking.ranks()
    above = [0] * axis.m
    for c in range(axis.m):
        for x in range(axis.m):
            if ranks[x] < ranks[c]:
                above[c] |= 1 << x
    total = 0
    left = 0
    full = (1 << axis.m) - 1
    for c in axis.order:
        right = full ^ left ^ (1 << c)
        total += (above[c] & left).bit_count() * (above[c] & right).bit_count()
        left |= 1 << c
    return total


def ranking_cost(rule, ranking: RankingBallot, axis: Axis) -> int:
    rule = Rule.parse(rule)
    if rule is Rule.VD_RANK:
        return 0 if is_single_peaked(ranking, axis) else 1
    if rule is Rule.FT_RANK:
        return forbidden_triples(ranking, axis)
    raise RuleUnsupportedError(f"{rule.value} is not a ranking rule")


def ranking_profile_cost(rule, profile: RankingProfile, axis: Axis) -> Fraction:
    if axis.m != profile.m:
        raise CandidateMismatchError(f"axis has {axis.m} candidates, profile has {profile.m}")
    return sum((w * ranking_cost(rule, r, axis) for r, w in profile.entries), Fraction(0))


class RankingEvaluator:
    """Search-side cost of (possibly partial) axes for a ranking profile.

    Candidates missing from a partial axis are deleted from every ranking,
    which can only lower the cost.
    """

    def __init__(self, profile: RankingProfile, rule: Rule):
        self.m = profile.m
        self.rule = rule
        ints, self.scale = integer_weights(w for _, w in profile.entries)
        self.entries = [(r.order, w) for (r, _), w in zip(profile.entries, ints)]
        m = self.m
        rank_sum = [0] * m
        for (r, _), w in zip(profile.entries, ints):
            for i, c in enumerate(r.order):
                rank_sum[c] += i * w
        self._rank_sum = rank_sum
        if rule is Rule.FT_RANK:
            # weight[x, y, z]: voters ranking y below both x and z
            weight = np.zeros((m, m, m), dtype=np.int64)
            for (r, _), w in zip(profile.entries, ints):
                ranks = np.array(r.ranks())
                above = ranks[:, None] < ranks[None, :]
                weight += w * (above[:, :, None] & above.T[None, :, :])
            self._weight = weight
            self._triples = {
                k: tuple(np.array(t, dtype=np.intp) for t in zip(*itertools.combinations(range(k), 3)))
                if k >= 3 else None
                for k in range(m + 1)
            }

    def priority(self) -> list[int]:
        """Candidates by average rank, best first."""
        return sorted(range(self.m), key=lambda c: (self._rank_sum[c], c))

    def cost(self, order: Sequence[int], bound=float("inf")):
        if self.rule is Rule.FT_RANK:
            idx = self._triples[len(order)]
            if idx is None:
                return 0
            o = np.asarray(order, dtype=np.intp)
            total = int(self._weight[o[idx[0]], o[idx[1]], o[idx[2]]].sum())
            return None if total > bound else total
        pos = [-1] * self.m
        for i, c in enumerate(order):
            pos[c] = i
        total = 0
        for ranking, w in self.entries:
            if not _peaked([c for c in ranking if pos[c] >= 0], pos):
                total += w
                if total > bound:
                    return None
        return total


def solve_ranking(profile: RankingProfile, rule, options: SolveOptions | None = None) -> SolveResult:
    rule = Rule.parse(rule)
    if not rule.is_ranking:
        raise RuleUnsupportedError(f"{rule.value} is an approval rule; use axisrules.solver.solve")
    options = options or SolveOptions()
    if profile.m > options.enumeration_bound:
        raise SizeLimitError(f"{profile.m} candidates exceed the enumeration bound of {options.enumeration_bound}")
    return run_search(RankingEvaluator(preprocess_rankings(profile), rule), options)


def brute_force_ranking(profile: RankingProfile, rule) -> SolveResult:
    best = None
    axes = []
    count = 0
    for order in canonical_permutations(range(profile.m)):
        count += 1
        value = ranking_profile_cost(rule, profile, Axis(order))
        if best is None or value < best:
            best, axes = value, [order]
        elif value == best:
            axes.append(order)
    return SolveResult(best, tuple(Axis(a) for a in sorted(axes)), count, 0)
