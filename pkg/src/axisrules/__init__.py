"""Exact axis rules for approval and ranking profiles.

Finds every candidate ordering (axis) minimizing a voter-additive cost
that measures how far ballots are from being intervals of the axis.
"""

from axisrules.axioms import AxiomId, AxiomVerdict, Instance, check_instance, search_counterexample
from axisrules.core import Axis, Ballot, Candidate, WeightedProfile, canonicalize, is_interval, preprocess
from axisrules.costs import Rule, ballot_cost, profile_cost, vector_cost
from axisrules.errors import (
    AxisRulesError,
    CandidateMismatchError,
    EmptyProfileError,
    MalformedInstanceError,
    ParameterDomainError,
    ParseError,
    RuleUnsupportedError,
    SizeLimitError,
    UnknownCandidateError,
    UnknownRuleError,
)
from axisrules.ilp import export_ilp
from axisrules.io import format_profile, load_profile, parse_profile, save_profile
from axisrules.linearity import coapproval_partition, consistent_axes, is_linear
from axisrules.metrics import avg_distance_to_truth, axis_distance, kendall_tau, median_candidate
from axisrules.ranking import RankingBallot, RankingProfile, ranking_cost, ranking_profile_cost, solve_ranking
from axisrules.solver import SolveOptions, SolveResult, brute_force, solve, solve_decomposed
from axisrules.synthetic import Experiment, GroundTruthSample, NoiseModel, NoiseModelConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AxiomId",
    "AxiomVerdict",
    "Axis",
    "AxisRulesError",
    "Ballot",
    "Candidate",
    "CandidateMismatchError",
    "EmptyProfileError",
    "Experiment",
    "GroundTruthSample",
    "Instance",
    "MalformedInstanceError",
    "NoiseModel",
    "NoiseModelConfig",
    "ParameterDomainError",
    "ParseError",
    "RankingBallot",
    "RankingProfile",
    "Rule",
    "RuleUnsupportedError",
    "SizeLimitError",
    "SolveOptions",
    "SolveResult",
    "UnknownCandidateError",
    "UnknownRuleError",
    "WeightedProfile",
    "avg_distance_to_truth",
    "axis_distance",
    "ballot_cost",
    "brute_force",
    "canonicalize",
    "check_instance",
    "coapproval_partition",
    "consistent_axes",
    "export_ilp",
    "format_profile",
    "generate",
    "is_interval",
    "is_linear",
    "kendall_tau",
    "load_profile",
    "median_candidate",
    "parse_profile",
    "preprocess",
    "profile_cost",
    "ranking_cost",
    "ranking_profile_cost",
    "save_profile",
    "search_counterexample",
    "solve",
    "solve_decomposed",
    "solve_ranking",
    "vector_cost",
]
