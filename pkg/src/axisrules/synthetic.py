"""Random profiles drawn around a ground-truth axis.

Four approval noise models perturb ballots that are intervals of the truth
(maverick voters, random flips, random omissions, Mallows-perturbed axes).
The noisy observation model places voters and candidates on [0, 1] and has
each voter perceive candidate positions with Gaussian noise; it yields both
approval ballots and rankings for the same voters.
"""

from __future__ import annotations

import csv
import enum
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from axisrules.core import Axis, Ballot, WeightedProfile
from axisrules.costs import Rule
from axisrules.errors import ParameterDomainError, RuleUnsupportedError
from axisrules.metrics import avg_distance_to_truth
from axisrules.ranking import RankingBallot, RankingProfile, solve_ranking
from axisrules.solver import SolveOptions, solve


class NoiseModel(enum.Enum):
    MAVERICK = "maverick"
    FLIPS = "flips"
    OMISSIONS = "omissions"
    SWAPS = "swaps"
    NOISY = "noisy"

    @classmethod
    def parse(cls, name: "str | NoiseModel") -> "NoiseModel":
        if isinstance(name, NoiseModel):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ParameterDomainError(f"unknown noise model {name!r}") from None


_PARAMS = {
    NoiseModel.MAVERICK: ("p",),
    NoiseModel.FLIPS: ("p",),
    NoiseModel.OMISSIONS: ("p",),
    NoiseModel.SWAPS: ("phi",),
    NoiseModel.NOISY: ("sigma", "radius"),
}


@dataclass(frozen=True)
class NoiseModelConfig:
    model: NoiseModel
    m: int
    n: int
    seed: int = 0
    p: float = 0.0
    phi: float = 0.0
    sigma: float = 0.0
    radius: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", NoiseModel.parse(self.model))
        if self.m < 1:
            raise ParameterDomainError(f"m must be positive, got {self.m}")
        if self.n < 0:
            raise ParameterDomainError(f"n must be non-negative, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise ParameterDomainError("seed must be a 64-bit unsigned integer")
        if self.model in (NoiseModel.MAVERICK, NoiseModel.FLIPS, NoiseModel.OMISSIONS):
            if not 0 <= self.p < 0.5:
                raise ParameterDomainError(f"p must lie in [0, 1/2), got {self.p}")
        elif self.model is NoiseModel.SWAPS:
            if not 0 <= self.phi <= 1:
                raise ParameterDomainError(f"phi must lie in [0, 1], got {self.phi}")
        else:
            if not self.sigma >= 0:
                raise ParameterDomainError(f"sigma must be non-negative, got {self.sigma}")
            if not self.radius > 0:
                raise ParameterDomainError(f"radius must be positive, got {self.radius}")

    @property
    def params(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in _PARAMS[self.model]}

    def param_label(self) -> str:
        return ";".join(f"{k}={v:g}" for k, v in self.params.items())


@dataclass(frozen=True)
class GroundTruthSample:
    axis: Axis
    profile: WeightedProfile
    # NOISY only
    rankings: RankingProfile | None = None
    candidate_positions: tuple[float, ...] | None = None
    voter_positions: tuple[float, ...] | None = None


def candidate_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"c{i}" for i in range(m))


def sample_interval_ballot(axis: Axis, rng: np.random.Generator) -> Ballot:
    """Uniform over the m(m+1)/2 non-empty intervals of ``axis``."""
    m = axis.m
    k = int(rng.integers(m * (m + 1) // 2))
    # intervals of length L are indexed after all longer ones
    length = m
    while k >= m - length + 1:
        k -= m - length + 1
        length -= 1
    return Ballot.of(axis.order[k : k + length])


def mallows_sample(center: Axis, phi: float, rng: np.random.Generator) -> Axis:
    """Repeated insertion: the i-th center item (0-based) goes to slot j of
    the current list with probability proportional to phi**(i - j)."""
    if not 0 <= phi <= 1:
        raise ParameterDomainError(f"phi must lie in [0, 1], got {phi}")
    out: list[int] = []
    for i, c in enumerate(center.order):
        weights = phi ** np.arange(i, -1, -1, dtype=float)
        j = int(rng.choice(i + 1, p=weights / weights.sum()))
        out.insert(j, c)
    return Axis(tuple(out))


def _random_subset(m: int, rng) -> Ballot:
    return Ballot(int(rng.integers(1, 1 << m)))


def _flip(mask: int, m: int, p: float, rng, approved_only: bool) -> int:
    flips = rng.random(m) < p
    for c in range(m):
        if flips[c] and (not approved_only or mask >> c & 1):
            mask ^= 1 << c
    return mask


def _approval_ballot(config: NoiseModelConfig, truth: Axis, rng) -> Ballot:
    m = config.m
    model = config.model
    if model is NoiseModel.MAVERICK:
        if rng.random() < config.p:
            return _random_subset(m, rng)
        return sample_interval_ballot(truth, rng)
    if model is NoiseModel.SWAPS:
        return sample_interval_ballot(mallows_sample(truth, config.phi, rng), rng)
    while True:
        mask = sample_interval_ballot(truth, rng).mask
        mask = _flip(mask, m, config.p, rng, approved_only=model is NoiseModel.OMISSIONS)
        if mask:
            return Ballot(mask)


def _noisy(config: NoiseModelConfig, rng) -> GroundTruthSample:
    m, names = config.m, candidate_names(config.m)
    cand = rng.random(m)
    truth = Axis(tuple(int(c) for c in np.argsort(cand, kind="stable")))
    ballots, rankings, voters = [], [], []
    while len(ballots) < config.n:
        v = rng.random()
        perceived = cand + rng.normal(0.0, config.sigma, m)
        dist = np.abs(v - perceived)
        approved = np.flatnonzero(dist <= config.radius)
        if approved.size == 0:
            continue
        ballots.append((Ballot.of(int(c) for c in approved), 1))
        rankings.append((RankingBallot(tuple(int(c) for c in np.argsort(dist, kind="stable"))), 1))
        voters.append(float(v))
    return GroundTruthSample(
        axis=truth,
        profile=WeightedProfile(names, tuple(ballots)),
        rankings=RankingProfile(names, tuple(rankings)),
        candidate_positions=tuple(float(x) for x in cand),
        voter_positions=tuple(voters),
    )


def generate(config: NoiseModelConfig) -> GroundTruthSample:
    rng = np.random.default_rng(config.seed)
    if config.model is NoiseModel.NOISY:
        return _noisy(config, rng)
    truth = Axis(tuple(int(c) for c in rng.permutation(config.m)))
    entries = tuple((_approval_ballot(config, truth, rng), 1) for _ in range(config.n))
    return GroundTruthSample(truth, WeightedProfile(candidate_names(config.m), entries))


# --------------------------------------------------------------------------
# experiments

CSV_FIELDS = ("model", "params", "rule", "replicate", "distance")


@dataclass(frozen=True)
class ExperimentRow:
    model: str
    params: str
    rule: str
    replicate: int
    distance: float


def replicate_seed(seed: int, model_index: int, replicate: int) -> int:
    return int(np.random.SeedSequence((seed, model_index, replicate)).generate_state(1, np.uint64)[0])


@dataclass
class Experiment:
    """Every (model, replicate) profile is solved by every rule.

    Ranking rules need the NOISY model.
    """

    models: Sequence[NoiseModelConfig]
    rules: Sequence[Rule]
    replicates: int
    seed: int = 0
    options: SolveOptions = field(default_factory=SolveOptions)

    def __post_init__(self):
        self.rules = [Rule.parse(r) for r in self.rules]
        if self.replicates < 0:
            raise ParameterDomainError("replicates must be non-negative")
        for cfg in self.models:
            if cfg.model is not NoiseModel.NOISY and any(r.is_ranking for r in self.rules):
                raise RuleUnsupportedError(f"ranking rules need the noisy model, not {cfg.model.value}")

    def rows(self) -> Iterable[ExperimentRow]:
        for k, base in enumerate(self.models):
            for rep in range(self.replicates):
                cfg = NoiseModelConfig(
                    base.model, base.m, base.n, replicate_seed(self.seed, k, rep),
                    base.p, base.phi, base.sigma, base.radius,
                )
                sample = generate(cfg)
                for rule in self.rules:
                    if rule.is_ranking:
                        result = solve_ranking(sample.rankings, rule, self.options)
                    else:
                        result = solve(sample.profile, rule, self.options)
                    yield ExperimentRow(
                        cfg.model.value, cfg.param_label(), rule.value, rep,
                        avg_distance_to_truth(result, sample.axis),
                    )

    def write_csv(self, out: TextIO) -> int:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        count = 0
        for row in self.rows():
            writer.writerow([row.model, row.params, row.rule, row.replicate, repr(row.distance)])
            count += 1
        return count


def parse_model_spec(text: str, m: int, n: int) -> list[NoiseModelConfig]:
    """Parse ``"noisy:sigma=0.1,r=0.4;maverick:p=0.2"``.

    ``r`` is accepted as an alias of ``radius``.
    """
    configs = []
    for part in filter(None, (s.strip() for s in text.split(";"))):
        name, _, rest = part.partition(":")
        kwargs: dict[str, float] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, sep, value = item.partition("=")
            key = {"r": "radius"}.get(key.strip(), key.strip())
            if not sep or key not in ("p", "phi", "sigma", "radius"):
                raise ParameterDomainError(f"bad model parameter {item!r}")
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise ParameterDomainError(f"bad value in {item!r}") from None
        configs.append(NoiseModelConfig(NoiseModel.parse(name), m, n, **kwargs))
    return configs
