"""Safest-path decisions on uncertain DAGs with line-of-sight information.

Exact solver, brute-force oracles, Monte Carlo simulation, a cache-based
approximate solver, a seeded instance generator and a CLI.
"""

from .approx import (
    AgreementRow,
    ApproxConfig,
    ApproxSolver,
    CacheReport,
    agreement_report,
    knowledge_distance,
)
from .exact import (
    DecisionQuery,
    EmptyCandidates,
    ExactSolver,
    IncompleteKnowledge,
    MemoStats,
    cross_prob,
    decide,
    reveal_distribution,
    tiebreak,
)
from .generate import GeneratorConfig, generate_instance, generate_suite
from .model import (
    EMPTY_KNOWLEDGE,
    Edge,
    EdgePair,
    InconsistentKnowledge,
    Instance,
    Knowledge,
    ModelError,
    NoPath,
    SightLine,
    Status,
    Task,
    UnknownEdge,
    UnknownVertex,
    ValidationReport,
    Violation,
    World,
    observe,
    prune_extraneous,
    restrict,
    validate,
)
from .oracle import (
    Outcome,
    PolicyChoseKnownDown,
    ScenarioCheck,
    TooManyEdges,
    TrialTrace,
    WorldWeight,
    WORLD_CAP,
    blind_value,
    candidate_values,
    enumerate_worlds,
    find_greedy_gap,
    first_move,
    initial_scenarios,
    is_gap_instance,
    max_product_values,
    oracle_check,
    policy_value,
    sight_blind_policy,
    simulate_policy,
    value,
)
from .seeds import derive_seed
from .sim import TrialBatch, run_trials, sample_world

__version__ = "0.1.0"

__all__ = [
    "AgreementRow",
    "ApproxConfig",
    "ApproxSolver",
    "CacheReport",
    "DecisionQuery",
    "EMPTY_KNOWLEDGE",
    "Edge",
    "EdgePair",
    "EmptyCandidates",
    "ExactSolver",
    "GeneratorConfig",
    "IncompleteKnowledge",
    "InconsistentKnowledge",
    "Instance",
    "Knowledge",
    "MemoStats",
    "ModelError",
    "NoPath",
    "Outcome",
    "PolicyChoseKnownDown",
    "ScenarioCheck",
    "SightLine",
    "Status",
    "Task",
    "TooManyEdges",
    "TrialBatch",
    "TrialTrace",
    "UnknownEdge",
    "UnknownVertex",
    "ValidationReport",
    "Violation",
    "WORLD_CAP",
    "World",
    "WorldWeight",
    "agreement_report",
    "blind_value",
    "candidate_values",
    "cross_prob",
    "decide",
    "derive_seed",
    "enumerate_worlds",
    "find_greedy_gap",
    "first_move",
    "generate_instance",
    "generate_suite",
    "initial_scenarios",
    "is_gap_instance",
    "knowledge_distance",
    "max_product_values",
    "observe",
    "oracle_check",
    "policy_value",
    "prune_extraneous",
    "restrict",
    "reveal_distribution",
    "run_trials",
    "sample_world",
    "sight_blind_policy",
    "simulate_policy",
    "tiebreak",
    "validate",
    "value",
]
