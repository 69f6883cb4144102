"""Integer-program export for VD and BC in CPLEX LP format.

Variables, all indexed by candidate or ballot position:

* ``x_a_b`` (binary) is 1 iff candidate ``a`` precedes ``b``; antisymmetry
  and the triangle inequalities make it a total order.
* VD: ``z_i`` (binary) is 1 iff ballot ``i`` is not an interval.
* BC: ``p_a`` (integer) is the position of ``a``; ``hi_i`` / ``lo_i`` bound
  the positions approved by ballot ``i`` and ``g_i = hi_i - lo_i - |A_i| + 1``
  counts the gaps.

Ballots are preprocessed first, and weights are scaled to integers; the
scale is written in the header comment and returned by :func:`model_scale`.
No solver is invoked here.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from axisrules.core import Axis, WeightedProfile, preprocess
from axisrules.costs import Rule
from axisrules.errors import ParseError, RuleUnsupportedError
from axisrules.solver import integer_weights

ILP_RULES = (Rule.VD, Rule.BC)
_TERMS_PER_LINE = 8


def _expr(terms: list[tuple[int, str]]) -> str:
    parts = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        body = var if abs(coef) == 1 else f"{abs(coef)} {var}"
        if k == 0:
            parts.append(body if coef > 0 else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    lines = [" ".join(parts[i : i + _TERMS_PER_LINE]) for i in range(0, len(parts), _TERMS_PER_LINE)]
    return "\n   ".join(lines)


def _x(a: int, b: int) -> str:
    return f"x_{a}_{b}"


def _check_rule(rule) -> Rule:
    rule = Rule.parse(rule)
    if rule not in ILP_RULES:
        raise RuleUnsupportedError(f"no ILP encoding for {rule.value}; only vd and bc")
    return rule


def model_scale(profile: WeightedProfile) -> int:
    """Factor by which the exported objective exceeds the profile cost."""
    return integer_weights(w for _, w in preprocess(profile).entries)[1]


def export_ilp(profile: WeightedProfile, rule) -> str:
    rule = _check_rule(rule)
    p = preprocess(profile)
    m = p.m
    weights, scale = integer_weights(w for _, w in p.entries)
    ballots = [b.members for b, _ in p.entries]
    pairs = [(a, b) for a in range(m) for b in range(m) if a != b]

    out = [
        f"\\ {rule.value} model over {m} candidates, {len(ballots)} ballots",
        f"\\ objective = {scale} x profile cost",
        "\\ candidates: " + " ".join(f"{i}={name}" for i, name in enumerate(p.names)),
    ]
    cons: list[tuple[str, list[tuple[int, str]], str, int]] = []
    for a, b in itertools.combinations(range(m), 2):
        cons.append((f"anti_{a}_{b}", [(1, _x(a, b)), (1, _x(b, a))], "=", 1))
    for a, b, c in itertools.permutations(range(m), 3):
        cons.append((f"tri_{a}_{b}_{c}", [(1, _x(a, b)), (1, _x(b, c)), (-1, _x(a, c))], "<=", 1))

    binaries = [_x(a, b) for a, b in pairs]
    generals: list[str] = []
    if rule is Rule.VD:
        objective = [(w, f"z{i}") for i, w in enumerate(weights)]
        for i, members in enumerate(ballots):
            outside = [c for c in range(m) if c not in members]
            for a, c in itertools.permutations(members, 2):
                for b in outside:
                    cons.append((
                        f"hole_{i}_{a}_{b}_{c}",
                        [(1, _x(a, b)), (1, _x(b, c)), (-1, f"z{i}")],
                        "<=",
                        1,
                    ))
        binaries += [f"z{i}" for i in range(len(ballots))]
    else:
        objective = [(w, f"g{i}") for i, w in enumerate(weights)]
        for a in range(m):
            terms = [(1, f"p{a}")] + [(-1, _x(b, a)) for b in range(m) if b != a]
            cons.append((f"pos_{a}", terms, "=", 0))
        for i, members in enumerate(ballots):
            for a in members:
                cons.append((f"hi_{i}_{a}", [(1, f"hi{i}"), (-1, f"p{a}")], ">=", 0))
                cons.append((f"lo_{i}_{a}", [(1, f"lo{i}"), (-1, f"p{a}")], "<=", 0))
            cons.append((f"gap_{i}", [(1, f"g{i}"), (-1, f"hi{i}"), (1, f"lo{i}")], "=", 1 - len(members)))
        generals = [f"p{a}" for a in range(m)]
        for i in range(len(ballots)):
            generals += [f"hi{i}", f"lo{i}", f"g{i}"]

    if not objective:
        objective = [(0, binaries[0])] if binaries else []
    out.append("Minimize")
    out.append(" obj: " + (_expr(objective) if objective else "0 dummy"))
    out.append("Subject To")
    for name, terms, sense, rhs in cons:
        out.append(f" {name}: {_expr(terms)} {sense} {rhs}")
    out.append("Binary")
    for var in binaries or ["dummy"]:
        out.append(f" {var}")
    if generals:
        out.append("Generals")
        for var in generals:
            out.append(f" {var}")
    out.append("End")
    return "\n".join(out) + "\n"


def axis_assignment(profile: WeightedProfile, rule, axis: Axis) -> dict[str, int]:
    """Variable values encoding ``axis``, with auxiliaries at their tightest
    feasible values."""
    rule = _check_rule(rule)
    p = preprocess(profile)
    pos = axis.positions()
    values: dict[str, int] = {}
    for a in range(p.m):
        for b in range(p.m):
            if a != b:
                values[_x(a, b)] = int(pos[a] < pos[b])
    for i, (ballot, _) in enumerate(p.entries):
        spots = [pos[c] for c in ballot]
        gap = max(spots) - min(spots) + 1 - len(spots)
        if rule is Rule.VD:
            values[f"z{i}"] = int(gap > 0)
        else:
            values[f"hi{i}"] = max(spots)
            values[f"lo{i}"] = min(spots)
            values[f"g{i}"] = gap
    if rule is Rule.BC:
        for a in range(p.m):
            values[f"p{a}"] = pos[a]
    return values


# --------------------------------------------------------------------------
# minimal reader for the dialect written above


@dataclass
class LinearProgram:
    objective: dict[str, Fraction] = field(default_factory=dict)
    constraints: list[tuple[str, dict[str, Fraction], str, Fraction]] = field(default_factory=list)
    binaries: set[str] = field(default_factory=set)
    generals: set[str] = field(default_factory=set)

    @property
    def variables(self) -> set[str]:
        out = set(self.objective) | self.binaries | self.generals
        for _, coeffs, _, _ in self.constraints:
            out |= set(coeffs)
        return out

    def evaluate(self, values: dict[str, int]) -> tuple[Fraction, list[str]]:
        """Objective value at ``values`` and the names of violated
        constraints or domains (missing variables count as 0)."""
        bad = []
        for name, coeffs, sense, rhs in self.constraints:
            lhs = sum((c * values.get(v, 0) for v, c in coeffs.items()), Fraction(0))
            ok = lhs <= rhs if sense == "<=" else lhs >= rhs if sense == ">=" else lhs == rhs
            if not ok:
                bad.append(name)
        for v in self.binaries:
            if values.get(v, 0) not in (0, 1):
                bad.append(f"binary:{v}")
        for v in self.generals:
            if values.get(v, 0) < 0 or int(values.get(v, 0)) != values.get(v, 0):
                bad.append(f"integer:{v}")
        obj = sum((c * values.get(v, 0) for v, c in self.objective.items()), Fraction(0))
        return obj, bad


_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?)?\s*([A-Za-z_][\w.]*)")
_SECTIONS = {"minimize": "obj", "subject to": "st", "binary": "bin", "binaries": "bin", "generals": "gen", "end": "end"}


def _parse_terms(text: str, line: int) -> dict[str, Fraction]:
    coeffs: dict[str, Fraction] = {}
    text = text.strip()
    pos = 0
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match:
            raise ParseError(f"cannot read term at {text[pos:]!r}", line)
        sign, num, var = match.groups()
        coef = Fraction(num) if num else Fraction(1)
        if sign == "-":
            coef = -coef
        coeffs[var] = coeffs.get(var, Fraction(0)) + coef
        pos = match.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return coeffs


def parse_lp(text: str) -> LinearProgram:
    lp = LinearProgram()
    section = None
    statements: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            continue
        if section in ("obj", "st"):
            # continuation lines have no "name:" prefix and no relation yet
            if statements and statements[-1][0] == section and not re.match(r"^\w+\s*:", line):
                sec, body, first = statements[-1]
                statements[-1] = (sec, body + " " + line, first)
            else:
                statements.append((section, line, lineno))
        elif section == "bin":
            lp.binaries.update(line.split())
        elif section == "gen":
            lp.generals.update(line.split())
        elif section is None:
            raise ParseError("content before the objective section", lineno)
    for sec, body, lineno in statements:
        name, sep, expr = body.partition(":")
        if not sep:
            raise ParseError("missing name", lineno)
        if sec == "obj":
            lp.objective = _parse_terms(expr, lineno)
            continue
        match = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+(?:\.\d+)?)\s*$", expr)
        if not match:
            raise ParseError(f"constraint {name.strip()!r} has no relation", lineno)
        lhs, sense, rhs = match.groups()
        lp.constraints.append((name.strip(), _parse_terms(lhs, lineno), sense, Fraction(rhs)))
    return lp
