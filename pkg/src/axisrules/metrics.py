"""Distances between axes."""

from __future__ import annotations

from statistics import fmean

from axisrules.core import Axis
from axisrules.errors import CandidateMismatchError


def _check(a: Axis, b: Axis) -> None:
    if a.m != b.m:
        raise CandidateMismatchError(f"axes over {a.m} and {b.m} candidates")


def kendall_tau(a: Axis, b: Axis) -> int:
    """Number of candidate pairs ordered differently by ``a`` and ``b``."""
    _check(a, b)
    pos = b.positions()
    seq = [pos[c] for c in a.order]
    # O(m^2) is fine for m <= 12
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def axis_distance(a: Axis, b: Axis) -> int:
    """Kendall-tau distance minimized over the orientation of ``b``.

    For ``m`` candidates this is at most ``m(m-1)//4``.
    """
    d = kendall_tau(a, b)
    return min(d, a.m * (a.m - 1) // 2 - d)


def max_axis_distance(m: int) -> int:
    return m * (m - 1) // 4


def avg_distance_to_truth(result, truth: Axis) -> float:
    """Mean axis distance from each optimal axis of ``result`` to ``truth``."""
    return fmean(axis_distance(a, truth) for a in result.optimal_axes)


def median_candidate(axis: Axis) -> set[int]:
    m = axis.m
    if m == 0:
        raise ValueError("empty axis")
    if m % 2:
        return {axis[m // 2]}
    return {axis[m // 2 - 1], axis[m // 2]}
