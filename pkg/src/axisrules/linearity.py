"""Linear (consecutive-ones) profiles and the co-approval partition."""

from __future__ import annotations

from dataclasses import dataclass

from axisrules.core import Axis, WeightedProfile, preprocess
from axisrules.costs import Rule
from axisrules.solver import DEFAULT_ENUMERATION_BOUND, ApprovalEvaluator, SolveOptions, run_search
from axisrules.errors import SizeLimitError


@dataclass(frozen=True)
class CandidatePartition:
    classes: tuple[frozenset[int], ...]

    def class_of(self, c: int) -> frozenset[int]:
        for cls in self.classes:
            if c in cls:
                return cls
        raise KeyError(c)


def consistent_axes(profile: WeightedProfile, enumeration_bound: int = DEFAULT_ENUMERATION_BOUND) -> frozenset[Axis]:
    """Canonical axes on which every ballot is an interval."""
    if profile.m > enumeration_bound:
        raise SizeLimitError(f"{profile.m} candidates exceed the enumeration bound of {enumeration_bound}")
    ev = ApprovalEvaluator(preprocess(profile), Rule.VD)
    res = run_search(ev, SolveOptions(enumeration_bound=enumeration_bound), upper_bound=0)
    return frozenset(res.optimal_axes) if res is not None else frozenset()


def is_linear(profile: WeightedProfile, enumeration_bound: int = DEFAULT_ENUMERATION_BOUND) -> bool:
    return bool(consistent_axes(profile, enumeration_bound))


def coapproval_partition(profile: WeightedProfile) -> CandidatePartition:
    """Classes of the transitive closure of "approved together in some ballot".

    Ballots of zero weight are ignored.  Classes are listed by smallest member.
    """
    parent = list(range(profile.m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ballot, w in profile.entries:
        if w == 0:
            continue
        members = ballot.members
        root = find(members[0])
        for c in members[1:]:
            other = find(c)
            if other != root:
                parent[other] = root
    groups: dict[int, set[int]] = {}
    for c in range(profile.m):
        groups.setdefault(find(c), set()).add(c)
    classes = sorted((frozenset(g) for g in groups.values()), key=min)
    return CandidatePartition(tuple(classes))
