"""Exact computation of optimal axes.

The search enumerates canonical axes (first candidate index smaller than the
last one) and evaluates each with an early-abort loop over the ballots, which
are sorted by decreasing weight.  Axes are grouped by their restriction to all
candidates but a fixed pair ``{u, v}``; the cost of that reduced axis is a
lower bound for every member of the group because every rule's cost weakly
decreases when candidates are deleted, so a group whose reduced cost already
exceeds the incumbent is skipped whole.

Weights are scaled to integers before the search so that comparisons in the
hot loop are exact and cheap.
"""

from __future__ import annotations

import itertools
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from axisrules.core import Axis, WeightedProfile, canonical_order, preprocess
from axisrules.costs import Rule, cost_table, profile_cost
from axisrules.errors import EmptyProfileError, RuleUnsupportedError, SizeLimitError

DEFAULT_ENUMERATION_BOUND = 12

#: rules for which optimal axes decompose along the co-approval partition
DECOMPOSABLE_RULES = (Rule.BC, Rule.MS, Rule.FT)

_INF = math.inf


@dataclass(frozen=True)
class SolveOptions:
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND
    use_pair_pruning: bool = True
    use_decomposition: bool = True
    warm_start: Axis | None = None
    thread_count: int = 1
    # abort an axis as soon as its partial sum exceeds the incumbent
    early_abort: bool = True

    def __post_init__(self):
        if self.enumeration_bound < 1:
            raise ValueError("enumeration_bound must be at least 1")
        if self.thread_count < 1:
            raise ValueError("thread_count must be positive")

    @classmethod
    def exhaustive(cls, **kw) -> "SolveOptions":
        """No pruning, no early abort, no decomposition."""
        return cls(use_pair_pruning=False, use_decomposition=False, early_abort=False, **kw)


@dataclass(frozen=True)
class SolveResult:
    optimal_cost: Fraction
    optimal_axes: tuple[Axis, ...]
    axes_examined: int = 0
    axes_pruned: int = 0

    @property
    def axis_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(a.order for a in self.optimal_axes)

    def labels(self, names: Sequence[str], sep: str = "") -> list[str]:
        return [a.label(names, sep) for a in self.optimal_axes]


# --------------------------------------------------------------------------
# evaluators: cost of a (possibly partial) axis with an abort bound


def integer_weights(weights: Iterable[Fraction]) -> tuple[list[int], int]:
    """Scale rational weights to integers; returns (ints, scale)."""
    weights = [Fraction(w) for w in weights]
    scale = 1
    for w in weights:
        scale = scale * w.denominator // math.gcd(scale, w.denominator)
    return [int(w * scale) for w in weights], scale


class ApprovalEvaluator:
    """Integer-weighted approval ballots evaluated through a cost table.

    ``cost`` accepts partial axes: candidates not on the axis are treated as
    deleted from every ballot.
    """

    def __init__(self, profile: WeightedProfile, rule: Rule):
        self.m = profile.m
        self.rule = rule
        ints, self.scale = integer_weights(w for _, w in profile.entries)
        self.entries = [(b.members, w) for (b, _), w in zip(profile.entries, ints)]
        self.tables = [cost_table(rule, length) for length in range(self.m + 1)]
        self._scores = [0] * self.m
        for members, w in self.entries:
            for c in members:
                self._scores[c] += w

    def priority(self) -> list[int]:
        """Candidates from most to least approved."""
        return sorted(range(self.m), key=lambda c: (-self._scores[c], c))

    def cost(self, order: Sequence[int], bound=_INF):
        length = len(order)
        table = self.tables[length]
        pw = [0] * self.m
        bit = 1 << length
        for c in order:
            bit >>= 1
            pw[c] = bit
        total = 0
        for members, w in self.entries:
            pattern = 0
            for c in members:
                pattern |= pw[c]
            total += w * table[pattern]
            if total > bound:
                return None
        return total


# --------------------------------------------------------------------------
# enumeration


def canonical_permutations(cands: Sequence[int]):
    """All orders of ``cands`` whose first element is smaller than the last."""
    cands = list(cands)
    if len(cands) <= 1:
        yield tuple(cands)
        return
    for perm in itertools.permutations(cands):
        if perm[0] < perm[-1]:
            yield perm


def pair_group(reduced: Sequence[int], u: int, v: int):
    """Every axis whose restriction to the other candidates is ``reduced``."""
    reduced = tuple(reduced)
    for i in range(len(reduced) + 1):
        with_u = reduced[:i] + (u,) + reduced[i:]
        for j in range(len(with_u) + 1):
            yield with_u[:j] + (v,) + with_u[j:]


class _Incumbent:
    """Best cost seen by any worker; only ever decreases."""

    def __init__(self, value):
        self.value = value
        self._lock = threading.Lock()

    def offer(self, value):
        with self._lock:
            if value < self.value:
                self.value = value


class _Worker:
    def __init__(self, ev, incumbent: _Incumbent, early_abort: bool):
        self.ev = ev
        self.incumbent = incumbent
        self.early_abort = early_abort
        self.best = _INF
        self.axes: set[tuple[int, ...]] = set()
        self.examined = 0
        self.pruned = 0

    def visit(self, order):
        self.examined += 1
        bound = min(self.incumbent.value, self.best) if self.early_abort else _INF
        value = self.ev.cost(order, bound)
        if value is None:
            return
        if value < self.best:
            self.best = value
            self.axes = {canonical_order(order)}
            self.incumbent.offer(value)
        elif value == self.best:
            self.axes.add(canonical_order(order))

    def run_plain(self, orders):
        for order in orders:
            self.visit(order)

    def run_groups(self, reduced_orders, u, v, group_size):
        for reduced in reduced_orders:
            bound = min(self.incumbent.value, self.best)
            if self.ev.cost(reduced, bound) is None:
                self.pruned += group_size
                continue
            for order in pair_group(reduced, u, v):
                self.visit(order)


def _merge(workers) -> tuple:
    best = min(w.best for w in workers)
    axes = set()
    for w in workers:
        if w.best == best:
            axes |= w.axes
    return best, axes, sum(w.examined for w in workers), sum(w.pruned for w in workers)


def greedy_order(ev) -> tuple[int, ...]:
    """Insertion heuristic: most approved first, each candidate inserted at
    the position of least partial cost (leftmost on ties)."""
    order: tuple[int, ...] = ()
    for c in ev.priority():
        best = None
        for i in range(len(order) + 1):
            cand = order[:i] + (c,) + order[i:]
            value = ev.cost(cand)
            if best is None or value < best[0]:
                best = (value, cand)
        order = best[1]
    return order


def run_search(ev, options: SolveOptions, upper_bound=None) -> SolveResult | None:
    """Exact argmin of ``ev.cost`` over all canonical axes.

    With ``upper_bound`` only axes costing at most that much (integer-scaled)
    are collected, and ``None`` is returned if there are none.
    """
    m = ev.m
    if upper_bound is not None:
        start = upper_bound
    elif options.warm_start is not None:
        if options.warm_start.m != m:
            raise ValueError("warm start axis has the wrong number of candidates")
        start = ev.cost(options.warm_start.order)
    elif options.use_pair_pruning or options.early_abort:
        start = ev.cost(greedy_order(ev))
    else:
        start = _INF
    incumbent = _Incumbent(start)
    n_workers = options.thread_count
    workers = [_Worker(ev, incumbent, options.early_abort) for _ in range(n_workers)]

    if options.use_pair_pruning and m >= 4:
        # drop the two least-approved candidates; they tend to sit at the ends
        prio = ev.priority()
        u, v = prio[-1], prio[-2]
        rest = sorted(set(range(m)) - {u, v})
        reduced = list(canonical_permutations(rest))
        chunks = [reduced[k::n_workers] for k in range(n_workers)]
        jobs = [(w.run_groups, (chunk, u, v, m * (m - 1))) for w, chunk in zip(workers, chunks)]
    else:
        orders = list(canonical_permutations(range(m)))
        chunks = [orders[k::n_workers] for k in range(n_workers)]
        jobs = [(w.run_plain, (chunk,)) for w, chunk in zip(workers, chunks)]

    if n_workers == 1:
        fn, args = jobs[0]
        fn(*args)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            for fut in [pool.submit(fn, *args) for fn, args in jobs]:
                fut.result()

    best, axes, examined, pruned = _merge(workers)
    if best == _INF or (upper_bound is not None and best > upper_bound):
        return None
    return SolveResult(
        optimal_cost=Fraction(best, ev.scale),
        optimal_axes=tuple(Axis(a) for a in sorted(axes)),
        axes_examined=examined,
        axes_pruned=pruned,
    )


# --------------------------------------------------------------------------
# public entry points


def _check_size(m: int, options: SolveOptions) -> None:
    if m > options.enumeration_bound:
        raise SizeLimitError(
            f"{m} candidates exceed the enumeration bound of {options.enumeration_bound}"
        )


def solve(profile: WeightedProfile, rule, options: SolveOptions | None = None) -> SolveResult:
    """All canonical axes minimizing the profile cost under ``rule``."""
    rule = Rule.parse(rule)
    if rule.is_ranking:
        raise RuleUnsupportedError("ranking rules need a RankingProfile; see axisrules.ranking")
    options = options or SolveOptions()
    if profile.m == 0:
        raise EmptyProfileError("no candidates")
    _check_size(profile.m, options)
    profile = preprocess(profile)
    if options.use_decomposition and rule in DECOMPOSABLE_RULES:
        from axisrules.linearity import coapproval_partition  # linearity imports this module

        if len(coapproval_partition(profile).classes) > 1:
            return solve_decomposed(profile, rule, options)
    return run_search(ApprovalEvaluator(profile, rule), options)


def brute_force(profile: WeightedProfile, rule) -> SolveResult:
    """Reference enumeration through :func:`profile_cost`; no shortcuts."""
    rule = Rule.parse(rule)
    best = None
    axes = []
    count = 0
    for order in canonical_permutations(range(profile.m)):
        count += 1
        value = profile_cost(rule, profile, Axis(order))
        if best is None or value < best:
            best, axes = value, [order]
        elif value == best:
            axes.append(order)
    return SolveResult(best, tuple(Axis(a) for a in sorted(axes)), count, 0)


def greedy_warm_start(profile: WeightedProfile, rule) -> Axis:
    rule = Rule.parse(rule)
    if rule.is_ranking:
        raise RuleUnsupportedError("use axisrules.ranking for ranking rules")
    return Axis(greedy_order(ApprovalEvaluator(preprocess(profile), rule)))


def lower_bound_pair_removal(profile: WeightedProfile, rule, reduced_axis: Sequence[int]) -> Fraction:
    """Cost of the axis obtained by deleting two candidates.

    ``reduced_axis`` lists ``m - 2`` candidate indices of ``profile``; the
    value bounds from below the cost of every axis in
    ``pair_group(reduced_axis, u, v)`` where ``u, v`` are the two missing
    candidates.
    """
    reduced_axis = tuple(reduced_axis)
    if len(reduced_axis) != profile.m - 2 or len(set(reduced_axis)) != len(reduced_axis):
        raise ValueError("reduced axis must list m - 2 distinct candidates")
    sub = profile.restrict(reduced_axis)
    remap = {c: i for i, c in enumerate(sorted(reduced_axis))}
    return profile_cost(rule, sub, Axis(tuple(remap[c] for c in reduced_axis)))


def combine_blocks(block_axes: Sequence[Sequence[tuple[int, ...]]]) -> set[tuple[int, ...]]:
    """All canonical concatenations: every block order, every optimal block
    axis, both orientations of each block."""
    oriented = []
    for axes in block_axes:
        options = set()
        for a in axes:
            options.add(tuple(a))
            options.add(tuple(a)[::-1])
        oriented.append(sorted(options))
    out = set()
    for perm in itertools.permutations(range(len(oriented))):
        for choice in itertools.product(*(oriented[k] for k in perm)):
            out.add(canonical_order(tuple(itertools.chain.from_iterable(choice))))
    return out


def solve_decomposed(profile: WeightedProfile, rule, options: SolveOptions | None = None) -> SolveResult:
    """Solve each co-approval class separately and concatenate the optima.

    Only valid for rules satisfying partition consistency.
    """
    from axisrules.linearity import coapproval_partition  # linearity imports this module

    rule = Rule.parse(rule)
    if rule not in DECOMPOSABLE_RULES:
        raise RuleUnsupportedError(f"{rule.value} does not satisfy partition consistency")
    options = options or SolveOptions()
    _check_size(profile.m, options)
    profile = preprocess(profile)
    inner = SolveOptions(
        enumeration_bound=options.enumeration_bound,
        use_pair_pruning=options.use_pair_pruning,
        use_decomposition=False,
        thread_count=options.thread_count,
        early_abort=options.early_abort,
    )
    total = Fraction(0)
    examined = pruned = 0
    blocks = []
    for cls in coapproval_partition(profile).classes:
        keep = sorted(cls)
        sub = profile.restrict(keep)
        res = run_search(ApprovalEvaluator(preprocess(sub), rule), inner)
        total += res.optimal_cost
        examined += res.axes_examined
        pruned += res.axes_pruned
        blocks.append([tuple(keep[c] for c in a.order) for a in res.optimal_axes])
    axes = combine_blocks(blocks)
    return SolveResult(total, tuple(Axis(a) for a in sorted(axes)), examined, pruned)
