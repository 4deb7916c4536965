"""Monte Carlo harness: sample worlds, run the exact policy, estimate success."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .exact import ExactSolver
from .model import Instance, Status, World
from .oracle import Outcome, simulate_policy
from .seeds import derive_seed


@dataclass(frozen=True)
class TrialBatch:
    n: int
    seed: int
    successes: int
    rate: float
    stderr: float
    rate_defined: bool


def _thresholds(instance: Instance) -> list[tuple[tuple[int, int], float]]:
    # float(p_fail) is exact for 0 and 1, so degenerate edges stay degenerate:
    # random() lies in [0, 1), hence r < 0.0 never and r < 1.0 always holds.
    return [(edge.pair, float(edge.p_fail)) for edge in instance.edges]


def _draw_statuses(rng: random.Random, thresholds) -> dict:
    return {
        pair: Status.DOWN if rng.random() < threshold else Status.UP
        for pair, threshold in thresholds
    }


def sample_world(instance: Instance, trial_seed: int) -> World:
    """One world draw: each edge goes down independently with its p_fail.

    Deterministic in ``trial_seed``: one uniform draw per edge, in edge order.
    """
    rng = random.Random(trial_seed)
    return World(_draw_statuses(rng, _thresholds(instance)))


def run_trials(
    instance: Instance,
    n: int,
    seed: int,
    solver: Optional[ExactSolver] = None,
) -> TrialBatch:
    """Run ``n`` independent trials of the exact policy.

    Trial ``i`` uses the derived seed ``derive_seed(seed, i)``, so the batch
    is identical for a fixed (instance, n, seed) no matter how the trials are
    ordered or distributed.
    """
    solver = solver if solver is not None else ExactSolver(instance)
    policy = solver.policy()
    thresholds = _thresholds(instance)
    successes = 0
    for i in range(n):
        world = World(_draw_statuses(random.Random(derive_seed(seed, i)), thresholds))
        if simulate_policy(instance, world, policy).outcome is Outcome.REACHED:
            successes += 1
    if n == 0:
        return TrialBatch(n=0, seed=seed, successes=0, rate=0.0, stderr=0.0, rate_defined=False)
    rate = successes / n
    stderr = math.sqrt(rate * (1 - rate) / n)
    return TrialBatch(n=n, seed=seed, successes=successes, rate=rate, stderr=stderr, rate_defined=True)
