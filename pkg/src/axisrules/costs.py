"""Per-ballot cost functions of the axis rules and the weighted profile cost.

Every approval rule here depends only on the approval vector a ballot induces
on the axis, so each is written as a function of that 0/1 vector.  The solver
uses the same functions tabulated over all ``2**m`` packed vectors.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from axisrules.core import Axis, Ballot, WeightedProfile, approval_vector
from axisrules.errors import CandidateMismatchError, RuleUnsupportedError, UnknownRuleError


class Rule(enum.Enum):
    VD = "vd"
    MF = "mf"
    BC = "bc"
    MS = "ms"
    FT = "ft"
    GENUS = "genus"
    VD_RANK = "vd-rank"
    FT_RANK = "ft-rank"

    @property
    def is_ranking(self) -> bool:
        return self in (Rule.VD_RANK, Rule.FT_RANK)

    @classmethod
    def parse(cls, name: "str | Rule") -> "Rule":
        if isinstance(name, Rule):
            return name
        key = name.strip().lower().replace("_", "-")
        for rule in cls:
            if rule.value == key:
                return rule
        raise UnknownRuleError(f"unknown rule {name!r}")


#: the five protagonists plus the genus rule
APPROVAL_RULES = (Rule.VD, Rule.MF, Rule.BC, Rule.MS, Rule.FT, Rule.GENUS)
MAIN_RULES = APPROVAL_RULES[:5]
RANKING_RULES = (Rule.VD_RANK, Rule.FT_RANK)

# Alias kept for readers who think of the enumeration as "the cost rule".
CostRule = Rule


def _span(x: Sequence[int]) -> tuple[int, int]:
    first = x.index(1)
    last = len(x) - 1 - x[::-1].index(1)
    return first, last


def _side_counts(x: Sequence[int]):
    """Yield (approved on the left, approved on the right) for each 0 in ``x``."""
    total = sum(x)
    left = 0
    for bit in x:
        if bit:
            left += 1
        else:
            yield left, total - left


def vd_vector(x: Sequence[int]) -> int:
    return 1 if bc_vector(x) else 0


def bc_vector(x: Sequence[int]) -> int:
    if not any(x):
        return 0
    first, last = _span(x)
    return (last - first + 1) - sum(x)


def mf_vector(x: Sequence[int]) -> int:
    """Min over anchor pairs i <= j (both approved) of ones outside [i, j]
    plus zeros inside [i, j]."""
    if not any(x):
        return 0
    ones = [0]
    for bit in x:
        ones.append(ones[-1] + bit)
    total = ones[-1]
    approved = [i for i, bit in enumerate(x) if bit]
    best = total
    for a, i in enumerate(approved):
        for j in approved[a:]:
            inside = ones[j + 1] - ones[i]
            cost = (total - inside) + (j - i + 1 - inside)
            if cost < best:
                best = cost
    return best


def ms_vector(x: Sequence[int]) -> int:
    return sum(min(l, r) for l, r in _side_counts(x))


def ft_vector(x: Sequence[int]) -> int:
    return sum(l * r for l, r in _side_counts(x))


def genus_vector(x: Sequence[int]) -> int:
    """Number of maximal runs of zeros lying strictly between ones."""
    if not any(x):
        return 0
    first, last = _span(x)
    holes = 0
    for i in range(first + 1, last + 1):
        if x[i] and not x[i - 1]:
            holes += 1
    return holes


VECTOR_COSTS = {
    Rule.VD: vd_vector,
    Rule.MF: mf_vector,
    Rule.BC: bc_vector,
    Rule.MS: ms_vector,
    Rule.FT: ft_vector,
    Rule.GENUS: genus_vector,
}


def _approval_rule(rule) -> Rule:
    rule = Rule.parse(rule)
    if rule.is_ranking:
        raise RuleUnsupportedError(f"{rule.value} is a ranking rule; use axisrules.ranking")
    return rule


def vector_cost(rule, x: Sequence[int]) -> int:
    return VECTOR_COSTS[_approval_rule(rule)](x)


@lru_cache(maxsize=None)
def cost_table(rule: Rule, length: int) -> tuple[int, ...]:
    """Cost of every packed approval vector of the given length.

    Index ``p`` encodes the vector whose leftmost entry is the most
    significant bit of ``p``.
    """
    fn = VECTOR_COSTS[_approval_rule(rule)]
    table = []
    for p in range(1 << length):
        x = [(p >> (length - 1 - i)) & 1 for i in range(length)]
        table.append(fn(x))
    return tuple(table)


def ballot_cost(rule, ballot: Ballot, axis: Axis) -> int:
    """Cost a single ballot incurs on ``axis`` under ``rule``."""
    return VECTOR_COSTS[_approval_rule(rule)](approval_vector(ballot, axis))


def profile_cost(rule, profile: WeightedProfile, axis: Axis) -> Fraction:
    """Weighted sum of ballot costs."""
    rule = _approval_rule(rule)
    if axis.m != profile.m:
        raise CandidateMismatchError(f"axis has {axis.m} candidates, profile has {profile.m}")
    fn = VECTOR_COSTS[rule]
    total = Fraction(0)
    for ballot, w in profile.entries:
        total += w * fn(approval_vector(ballot, axis))
    return total
