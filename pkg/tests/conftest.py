import random
import string
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from axisrules import WeightedProfile  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = string.ascii_lowercase

WORKED = [("bcd", 4), ("ab", 4), ("ad", 3), ("ac", 1), ("bc", 1)]


def make_profile(pairs, candidates=None) -> WeightedProfile:
    """``pairs`` is a list of (ballot as a string or iterable of names, weight)."""
    return WeightedProfile.from_sets([list(b) for b, _ in pairs], [w for _, w in pairs], candidates)


def random_pairs(rng: random.Random, m: int, n: int, max_weight: int = 3):
    """Random non-empty ballots over the first ``m`` letters."""
    cands = NAMES[:m]
    out = []
    for _ in range(n):
        size = rng.randint(1, m)
        out.append(("".join(sorted(rng.sample(cands, size))), rng.randint(1, max_weight)))
    return out


def random_interval_pairs(rng: random.Random, m: int, n: int):
    """Ballots that are all intervals of one hidden axis."""
    axis = list(NAMES[:m])
    rng.shuffle(axis)
    out = []
    for _ in range(n):
        lo = rng.randrange(m)
        hi = rng.randrange(lo, m)
        out.append(("".join(axis[lo : hi + 1]), rng.randint(1, 3)))
    return out, axis


@st.composite
def ballots_and_axis(draw, min_m=1, max_m=8):
    m = draw(st.integers(min_m, max_m))
    axis = draw(st.permutations(list(NAMES[:m])))
    ballot = draw(st.sets(st.sampled_from(list(NAMES[:m]))))
    return set(ballot), list(axis)


@st.composite
def small_profiles(draw, min_m=2, max_m=6, max_n=6):
    m = draw(st.integers(min_m, max_m))
    cands = list(NAMES[:m])
    n = draw(st.integers(1, max_n))
    pairs = []
    for _ in range(n):
        ballot = draw(st.sets(st.sampled_from(cands), min_size=1))
        pairs.append(("".join(sorted(ballot)), draw(st.integers(1, 4))))
    return pairs, cands


@pytest.fixture
def worked() -> WeightedProfile:
    return make_profile(WORKED)


_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    if report.passed:
        status, note = "PASS", ""
    elif report.skipped:
        status, note = "SKIP", ""
    else:
        status = "FAIL"
        crash = getattr(report.longrepr, "reprcrash", None)
        note = crash.message.splitlines()[0][:160] if crash else ""
    _CRITERIA[number] = (status, title, note)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, note = _CRITERIA[number]
        line = f"criterion {number:2d}  {status}  {title}"
        terminalreporter.line(f"{line}  [{note}]" if note else line)
