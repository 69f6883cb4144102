"""Candidates, ballots, axes and weighted approval profiles.

Ballots are stored as integer bit masks over candidate indices (bit ``c`` set
iff candidate ``c`` is approved).  An axis is a permutation of candidate
indices, read left to right.  Weights are kept as :class:`fractions.Fraction`
so that optimal-axis sets are computed exactly.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from axisrules.errors import CandidateMismatchError, EmptyProfileError, UnknownCandidateError

MAX_CANDIDATES = 64


class Candidate(NamedTuple):
    index: int
    name: str


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Ballot:
    """A non-empty set of approved candidates, as a bit mask."""

    mask: int

    def __post_init__(self):
        if self.mask <= 0:
            raise ValueError("a ballot must approve at least one candidate")

    @classmethod
    def of(cls, members: Iterable[int]) -> "Ballot":
        mask = 0
        for c in members:
            if c < 0:
                raise ValueError(f"negative candidate index {c}")
            mask |= 1 << c
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, c: int) -> bool:
        return bool(self.mask >> c & 1)

    def __iter__(self) -> Iterator[int]:
        return _bits(self.mask)


@dataclass(frozen=True)
class Axis:
    """A strict linear order of the candidates ``0..m-1``.

    ``order[i]`` is the candidate at position ``i``.
    """

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"{order} is not a permutation of 0..{len(order) - 1}")

    @property
    def m(self) -> int:
        return len(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def reversed(self) -> "Axis":
        return Axis(self.order[::-1])

    def positions(self) -> list[int]:
        pos = [0] * len(self.order)
        for i, c in enumerate(self.order):
            pos[c] = i
        return pos

    def names(self, names: Sequence[str]) -> list[str]:
        return [names[c] for c in self.order]

    def label(self, names: Sequence[str], sep: str = "") -> str:
        return sep.join(self.names(names))


def canonicalize(axis: Axis) -> Axis:
    """Return the lexicographically smaller of ``axis`` and its reverse."""
    rev = axis.order[::-1]
    return axis if axis.order <= rev else Axis(rev)


def canonical_order(order: tuple[int, ...]) -> tuple[int, ...]:
    rev = order[::-1]
    return order if order <= rev else rev


def _check_ballot(ballot: Ballot, axis: Axis) -> None:
    if ballot.mask >> axis.m:
        raise CandidateMismatchError(
            f"ballot {ballot.members} references candidates outside the {axis.m}-candidate axis"
        )


def approval_vector(ballot: Ballot, axis: Axis) -> tuple[int, ...]:
    """0/1 vector of the ballot read along the axis."""
    _check_ballot(ballot, axis)
    mask = ballot.mask
    return tuple(mask >> c & 1 for c in axis.order)


def approval_pattern(mask: int, order: Sequence[int]) -> int:
    """Approval vector packed into an int, most significant bit = leftmost position."""
    pattern = 0
    for c in order:
        pattern = pattern << 1 | (mask >> c & 1)
    return pattern


def is_interval(ballot: Ballot, axis: Axis) -> bool:
    _check_ballot(ballot, axis)
    pattern = approval_pattern(ballot.mask, axis.order)
    # strip trailing zeros; the rest is a run of ones iff pattern+1 is a power of two
    pattern >>= (pattern & -pattern).bit_length() - 1
    return pattern & (pattern + 1) == 0


def interfering_candidates(ballot: Ballot, axis: Axis) -> set[int]:
    _check_ballot(ballot, axis)
    vec = approval_vector(ballot, axis)
    first = vec.index(1)
    last = len(vec) - 1 - vec[::-1].index(1)
    return {axis.order[i] for i in range(first + 1, last) if not vec[i]}


@dataclass(frozen=True)
class WeightedProfile:
    """Candidate registry plus a list of weighted approval ballots."""

    names: tuple[str, ...]
    entries: tuple[tuple[Ballot, Fraction], ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise EmptyProfileError("a profile needs at least one candidate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate candidate names in {names}")
        if any(not isinstance(x, str) or not x for x in names):
            raise ValueError("candidate names must be non-empty strings")
        if len(names) > MAX_CANDIDATES:
            raise ValueError(f"at most {MAX_CANDIDATES} candidates are supported")
        entries = tuple((b, Fraction(w)) for b, w in self.entries)
        object.__setattr__(self, "entries", entries)
        m = len(names)
        for ballot, w in entries:
            if ballot.mask >> m:
                raise CandidateMismatchError(f"ballot {ballot.members} uses unregistered candidates")
            if w < 0:
                raise ValueError(f"negative weight {w}")

    @classmethod
    def from_sets(
        cls,
        ballots: Iterable[Iterable[str]],
        weights: Iterable | None = None,
        candidates: Sequence[str] | None = None,
    ) -> "WeightedProfile":
        """Build a profile from ballots given as collections of names.

        Candidates are registered in ``candidates`` order first, then in order
        of first appearance.
        """
        names = list(candidates or [])
        index = {x: i for i, x in enumerate(names)}
        masks = []
        for ballot in ballots:
            mask = 0
            for x in ballot:
                if x not in index:
                    if candidates is not None:
                        raise UnknownCandidateError(f"unknown candidate {x!r}")
                    index[x] = len(names)
                    names.append(x)
                mask |= 1 << index[x]
            masks.append(Ballot(mask))
        ws = [Fraction(1)] * len(masks) if weights is None else [Fraction(w) for w in weights]
        if len(ws) != len(masks):
            raise ValueError("weights and ballots differ in length")
        return cls(tuple(names), tuple(zip(masks, ws)))

    @property
    def m(self) -> int:
        return len(self.names)

    @property
    def candidates(self) -> tuple[Candidate, ...]:
        return tuple(Candidate(i, x) for i, x in enumerate(self.names))

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownCandidateError(f"unknown candidate {name!r}") from None

    def ballot(self, names: Iterable[str]) -> Ballot:
        return Ballot.of(self.index(x) for x in names)

    def axis(self, names: Iterable[str] | str) -> Axis:
        """Axis from candidate names; a plain string is split into characters
        when every name is a single character, otherwise on commas."""
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

    def ballot_names(self, ballot: Ballot) -> list[str]:
        return [self.names[c] for c in ballot.members]

    def __add__(self, other: "WeightedProfile") -> "WeightedProfile":
        if other.names != self.names:
            raise CandidateMismatchError("profiles are defined on different candidates")
        return WeightedProfile(self.names, self.entries + other.entries)

    def with_ballot(self, ballot: Ballot, weight=1) -> "WeightedProfile":
        return WeightedProfile(self.names, self.entries + ((ballot, Fraction(weight)),))

    def approval_scores(self) -> list[Fraction]:
        scores = [Fraction(0)] * self.m
        for ballot, w in self.entries:
            for c in ballot:
                scores[c] += w
        return scores

    def never_approved(self) -> list[int]:
        union = 0
        for ballot, w in self.entries:
            if w > 0:
                union |= ballot.mask
        return [c for c in range(self.m) if not union >> c & 1]

    def restrict(self, keep: Iterable[int]) -> "WeightedProfile":
        """Profile restricted to the candidates in ``keep`` (re-indexed in
        their original order).  Ballots that become empty are dropped."""
        keep = sorted(set(keep))
        remap = {c: i for i, c in enumerate(keep)}
        entries = []
        for ballot, w in self.entries:
            mask = 0
            for c in ballot:
                if c in remap:
                    mask |= 1 << remap[c]
            if mask:
                entries.append((Ballot(mask), w))
        return WeightedProfile(tuple(self.names[c] for c in keep), tuple(entries))


def restrict_axis(axis: Axis, keep: Iterable[int]) -> Axis:
    """Axis restricted to ``keep``, re-indexed like :meth:`WeightedProfile.restrict`."""
    keep = sorted(set(keep))
    remap = {c: i for i, c in enumerate(keep)}
    return Axis(tuple(remap[c] for c in axis.order if c in remap))


def preprocess(profile: WeightedProfile) -> WeightedProfile:
    """Merge identical ballots, drop ballots that are intervals of every axis
    (singletons and the full set) and zero-weight entries, then sort by
    decreasing weight."""
    full = (1 << profile.m) - 1
    merged: dict[int, Fraction] = defaultdict(Fraction)
    for ballot, w in profile.entries:
        merged[ballot.mask] += w
    entries = [
        (Ballot(mask), w)
        for mask, w in merged.items()
        if w > 0 and mask != full and mask & (mask - 1)
    ]
    entries.sort(key=lambda e: (-e[1], e[0].mask))
    return WeightedProfile(profile.names, tuple(entries))
