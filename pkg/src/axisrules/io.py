"""Reading and writing profile files.

One ballot per line, ``<weight> : <names>``.  Approval ballots separate
names with commas, rankings with ``>`` (best first).  ``#`` starts a
comment.  An optional ``candidates: a,b,c`` line declares the candidate
order up front, which is the only way to keep never-approved candidates;
otherwise candidates are declared by first use.  Weights are positive
decimals (``p/q`` fractions are also accepted so that any profile can be
written back exactly).
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from axisrules.core import Ballot, WeightedProfile
from axisrules.errors import AxisRulesError, ParseError
from axisrules.ranking import RankingBallot, RankingProfile

_WEIGHT = re.compile(r"^(\d+(\.\d+)?|\.\d+|\d+/\d+)$")
_BAD_NAME = re.compile(r"[,>:#]")


def _weight(text: str, line: int) -> Fraction:
    text = text.strip()
    if not _WEIGHT.match(text):
        raise ParseError(f"weight {text!r} is not a positive decimal", line)
    try:
        w = Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"weight {text!r} divides by zero", line) from None
    if w <= 0:
        raise ParseError(f"weight {text!r} is not positive", line)
    return w


def _names(text: str, sep: str, line: int) -> list[str]:
    names = [x.strip() for x in text.split(sep)]
    for x in names:
        if not x:
            raise ParseError("empty candidate name", line)
        if _BAD_NAME.search(x):
            raise ParseError(f"invalid candidate name {x!r}", line)
    if len(set(names)) != len(names):
        raise ParseError("a candidate is listed twice", line)
    return names


def parse_profile(text: str) -> WeightedProfile | RankingProfile:
    declared: list[str] | None = None
    names: list[str] = []
    index: dict[str, int] = {}
    kind = None
    approvals: list[tuple[int, Fraction]] = []
    rankings: list[tuple[list[str], Fraction, int]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError("expected '<weight> : <candidates>'", lineno)
        if head.strip().lower() == "candidates":
            if declared is not None or names:
                raise ParseError("the candidates line must come first and only once", lineno)
            declared = _names(body, ",", lineno)
            names = list(declared)
            index = {x: i for i, x in enumerate(names)}
            continue
        w = _weight(head, lineno)
        body = body.strip()
        if not body:
            raise ParseError("empty ballot", lineno)
        line_kind = "ranking" if ">" in body else "approval"
        if kind is None:
            kind = line_kind
        elif kind != line_kind:
            raise ParseError("approval and ranking ballots cannot be mixed", lineno)
        if line_kind == "approval":
            mask = 0
            for x in _names(body, ",", lineno):
                if x not in index:
                    if declared is not None:
                        raise ParseError(f"undeclared candidate {x!r}", lineno)
                    index[x] = len(names)
                    names.append(x)
                mask |= 1 << index[x]
            approvals.append((mask, w))
        else:
            order = _names(body, ">", lineno)
            if not names:
                names = list(order)
                index = {x: i for i, x in enumerate(names)}
            if set(order) != set(names):
                raise ParseError("a ranking must list every candidate exactly once", lineno)
            rankings.append((order, w, lineno))

    if not names:
        raise ParseError("no candidates declared")
    try:
        if kind == "ranking":
            entries = tuple((RankingBallot(tuple(index[x] for x in o)), w) for o, w, _ in rankings)
            return RankingProfile(tuple(names), entries)
        return WeightedProfile(tuple(names), tuple((Ballot(mask), w) for mask, w in approvals))
    except AxisRulesError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_profile(path: str | Path) -> WeightedProfile | RankingProfile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_profile(text)


def format_weight(w: Fraction) -> str:
    w = Fraction(w)
    if w.denominator == 1:
        return str(w.numerator)
    d = w.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{w.numerator}/{w.denominator}"
    digits = 0
    while (w * 10**digits).denominator != 1:
        digits += 1
    scaled = w.numerator * 10**digits // w.denominator
    whole, frac = divmod(scaled, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


def format_profile(profile: WeightedProfile | RankingProfile) -> str:
    lines = ["candidates: " + ",".join(profile.names)]
    if isinstance(profile, RankingProfile):
        for r, w in profile.entries:
            if w == 0:
                continue
            lines.append(f"{format_weight(w)} : " + ">".join(profile.names[c] for c in r.order))
    else:
        for b, w in profile.entries:
            if w == 0:
                continue
            lines.append(f"{format_weight(w)} : " + ",".join(profile.ballot_names(b)))
    return "\n".join(lines) + "\n"


def save_profile(profile: WeightedProfile | RankingProfile, path: str | Path) -> None:
    Path(path).write_text(format_profile(profile), encoding="utf-8", newline="\n")
