"""Independent brute-force verification of the exact solver.

The value oracle here never touches the solver's machinery: it enumerates
whole worlds, conditions on the knowledge by filtering them, and recurses on
full observed knowledge with no forward-cone truncation and no memo table.
A conceptual bug would have to be made twice, in two different formalisms,
to slip past the equality tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import TYPE_CHECKING, Optional

from .exact import ExactSolver, Policy, tiebreak
from .model import (
    EMPTY_KNOWLEDGE,
    EdgePair,
    Instance,
    Knowledge,
    ModelError,
    Status,
    UnknownEdge,
    World,
    format_pair,
    observe,
)

if TYPE_CHECKING:  # pragma: no cover
    from .generate import GeneratorConfig

WORLD_CAP = 20


class TooManyEdges(ModelError):
    """World enumeration refused: 2^|E| would exceed the configured cap."""


class PolicyChoseKnownDown(ModelError):
    """A simulated policy tried to cross an edge it knew was down."""


@dataclass(frozen=True)
class WorldWeight:
    world: World
    weight: Fraction


def enumerate_worlds(instance: Instance, cap: int = WORLD_CAP) -> list[WorldWeight]:
    """All 2^|E| worlds with their product-measure weights (they sum to 1)."""
    pairs = sorted(instance.pairs)
    if len(pairs) > cap:
        raise TooManyEdges(f"{len(pairs)} edges exceed the enumeration cap of {cap}")
    acc: list[tuple[dict, Fraction]] = [({}, Fraction(1))]
    for pair in pairs:
        p = instance.p_fail(pair)
        nxt = []
        for statuses, weight in acc:
            nxt.append(({**statuses, pair: Status.UP}, weight * (1 - p)))
            nxt.append(({**statuses, pair: Status.DOWN}, weight * p))
        acc = nxt
    return [WorldWeight(World(statuses), weight) for statuses, weight in acc]


# -- conditional value by world filtering ----------------------------------


class _MaskTable:
    """Worlds as up-bitmasks with integer weight numerators over a fixed denominator."""

    def __init__(self, instance: Instance, cap: int):
        pairs = sorted(instance.pairs)
        if len(pairs) > cap:
            raise TooManyEdges(f"{len(pairs)} edges exceed the enumeration cap of {cap}")
        self.pairs = pairs
        self.bit = {pair: 1 << i for i, pair in enumerate(pairs)}
        denominator = 1
        worlds: list[tuple[int, int]] = [(0, 1)]
        for pair in pairs:
            p = instance.p_fail(pair)
            denominator *= p.denominator
            up_num = p.denominator - p.numerator
            down_num = p.numerator
            bit = self.bit[pair]
            worlds = [
                w
                for mask, num in worlds
                for w in ((mask | bit, num * up_num), (mask, num * down_num))
            ]
        self.denominator = denominator
        self.worlds = worlds
        self.sight_mask = {
            v: self._mask_of(instance.sight_of(v)) for v in instance.vertices
        }
        self.out = {v: instance.out_edges(v) for v in instance.vertices}
        self.dest = instance.dest

    def _mask_of(self, pairs) -> int:
        mask = 0
        for pair in pairs:
            mask |= self.bit[pair]
        return mask

    def knowledge_masks(self, knowledge: Knowledge) -> tuple[int, int]:
        up = down = 0
        for pair, status in knowledge.as_dict().items():
            try:
                bit = self.bit[pair]
            except KeyError:
                raise UnknownEdge(
                    f"knowledge references missing edge {format_pair(pair)}"
                ) from None
            if status is Status.UP:
                up |= bit
            else:
                down |= bit
        return up, down


def candidate_values(
    instance: Instance,
    v: int,
    knowledge: Knowledge = EMPTY_KNOWLEDGE,
    cap: int = WORLD_CAP,
) -> list[tuple[EdgePair, Fraction]]:
    """Value of each candidate edge at ``v`` by direct expectation over worlds.

    A candidate's value is the probability, conditioned on the knowledge, that
    the edge is up times the value of the head vertex under the knowledge the
    walker would then hold.  Known-down edges are not candidates.
    """
    instance._check_vertex(v)
    table = _MaskTable(instance, cap)
    known_up, known_down = table.knowledge_masks(knowledge)
    consistent = [
        (mask, num)
        for mask, num in table.worlds
        if num and not (mask & known_down) and not (known_up & ~mask)
    ]
    mass = sum(num for _, num in consistent)
    if mass == 0:
        raise ValueError("knowledge has probability zero; conditioning is undefined")

    def go(at: int, k_up: int, k_down: int, worlds, mass: int) -> Fraction:
        if at == table.dest:
            return Fraction(1)
        best = Fraction(0)
        for pair in table.out[at]:
            bit = table.bit[pair]
            if k_down & bit:
                continue
            value = _edge_value(pair, bit, k_up, k_down, worlds, mass)
            if value > best:
                best = value
        return best

    def _edge_value(pair, bit, k_up, k_down, worlds, mass) -> Fraction:
        head = pair[1]
        sight = table.sight_mask[head]
        groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for mask, num in worlds:
            if not mask & bit:
                continue
            up2 = k_up | bit | (sight & mask)
            down2 = k_down | (sight & ~mask)
            groups.setdefault((up2, down2), []).append((mask, num))
        total = Fraction(0)
        for (up2, down2), sub in groups.items():
            sub_mass = sum(num for _, num in sub)
            total += Fraction(sub_mass, mass) * go(head, up2, down2, sub, sub_mass)
        return total

    return [
        (pair, _edge_value(pair, table.bit[pair], known_up, known_down, consistent, mass))
        for pair in table.out[v]
        if not (known_down & table.bit[pair])
    ]


def value(
    instance: Instance,
    v: int,
    knowledge: Knowledge = EMPTY_KNOWLEDGE,
    cap: int = WORLD_CAP,
) -> Fraction:
    """Best achievable success probability from ``v`` under ``knowledge``."""
    if v == instance.dest:
        instance._check_vertex(v)
        return Fraction(1)
    best = Fraction(0)
    for _, candidate in candidate_values(instance, v, knowledge, cap):
        if candidate > best:
            best = candidate
    return best


def first_move(
    instance: Instance,
    v: int,
    knowledge: Knowledge = EMPTY_KNOWLEDGE,
    cap: int = WORLD_CAP,
) -> Optional[EdgePair]:
    """The move the oracle's values prescribe at ``v`` (None at a dead end)."""
    scored = candidate_values(instance, v, knowledge, cap)
    if not scored:
        return None
    best = max(val for _, val in scored)
    if best <= 0:
        return None
    return tiebreak(pair for pair, val in scored if val == best)


# -- policy simulation ------------------------------------------------------


class Outcome(Enum):
    REACHED = "reached"
    FAILED_EDGE = "failed-edge"
    HALTED = "halted"


@dataclass(frozen=True)
class TrialTrace:
    visited: tuple[int, ...]
    chosen: tuple[EdgePair, ...]
    outcome: Outcome
    failed_edge: Optional[EdgePair] = None

    @property
    def reached(self) -> bool:
        return self.outcome is Outcome.REACHED


def simulate_policy(instance: Instance, world: World, policy: Policy) -> TrialTrace:
    """Walk one trial: observe at each vertex, follow the policy, stop on
    failure, arrival, or a halt."""
    if world.pairs != instance.pairs:
        raise ValueError("world must assign a status to exactly the instance's edges")
    v = instance.start
    knowledge = observe(instance, EMPTY_KNOWLEDGE, v, world)
    visited = [v]
    chosen: list[EdgePair] = []
    while v != instance.dest:
        move = policy(v, knowledge)
        if move is None:
            return TrialTrace(tuple(visited), tuple(chosen), Outcome.HALTED)
        move = tuple(move)
        if move not in instance.out_edges(v):
            raise ValueError(
                f"policy chose {format_pair(move)}, which does not leave vertex {v}"
            )
        if knowledge.status(move) is Status.DOWN:
            raise PolicyChoseKnownDown(
                f"policy tried to cross {format_pair(move)} while knowing it is down"
            )
        chosen.append(move)
        if not world.up(move):
            return TrialTrace(tuple(visited), tuple(chosen), Outcome.FAILED_EDGE, move)
        knowledge = knowledge.with_statuses({move: Status.UP})
        v = move[1]
        visited.append(v)
        knowledge = observe(instance, knowledge, v, world)
    return TrialTrace(tuple(visited), tuple(chosen), Outcome.REACHED)


def policy_value(instance: Instance, policy: Policy, cap: int = WORLD_CAP) -> Fraction:
    """Expected success of ``policy`` under the world measure."""
    total = Fraction(0)
    for ww in enumerate_worlds(instance, cap):
        if simulate_policy(instance, ww.world, policy).reached:
            total += ww.weight
    return total


# -- the sight-blind baseline ------------------------------------------------


def max_product_values(instance: Instance) -> dict[int, Fraction]:
    """Per-vertex best survival product ignoring all sight."""
    values = {v: Fraction(0) for v in instance.vertices}
    values[instance.dest] = Fraction(1)
    for v in sorted(instance.vertices, reverse=True):
        if v == instance.dest:
            continue
        best = Fraction(0)
        for pair in instance.out_edges(v):
            candidate = (1 - instance.p_fail(pair)) * values[pair[1]]
            if candidate > best:
                best = candidate
        values[v] = best
    return values


def sight_blind_policy(instance: Instance) -> Policy:
    """The best policy for the same instance with every sight line deleted.

    It never learns anything, so it simply follows the maximum survival
    product, re-ranked at each vertex, with the usual highest-head tiebreak.
    """
    values = max_product_values(instance)

    def policy(v: int, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> Optional[EdgePair]:
        scored = [
            (pair, (1 - instance.p_fail(pair)) * values[pair[1]])
            for pair in instance.out_edges(v)
        ]
        if not scored:
            return None
        best = max(val for _, val in scored)
        if best <= 0:
            return None
        return tiebreak(pair for pair, val in scored if val == best)

    return policy


def blind_value(instance: Instance) -> Fraction:
    """Success probability of the sight-blind policy."""
    return max_product_values(instance)[instance.start]


# -- first-step scenarios and solver/oracle comparison -----------------------


def initial_scenarios(instance: Instance) -> list[tuple[Knowledge, Fraction]]:
    """Every status assignment to the edges visible from the start vertex.

    These are exactly the knowledge states a walker can hold when a trial
    begins; weights follow the product measure and sum to one.  Assignments
    with probability zero (possible when a failure probability is 0 or 1)
    are included with weight zero.
    """
    sight = sorted(instance.sight_of(instance.start))
    if not sight:
        return [(EMPTY_KNOWLEDGE, Fraction(1))]
    per_edge = [
        ((Status.UP, 1 - instance.p_fail(p)), (Status.DOWN, instance.p_fail(p)))
        for p in sight
    ]
    scenarios = []
    for combo in product(*per_edge):
        weight = Fraction(1)
        assignment = {}
        for pair, (status, w) in zip(sight, combo):
            weight *= w
            assignment[pair] = status
        scenarios.append((Knowledge(assignment), weight))
    return scenarios


@dataclass(frozen=True)
class ScenarioCheck:
    knowledge: Knowledge
    weight: Fraction
    solver_value: Fraction
    oracle_value: Fraction
    solver_move: Optional[EdgePair]
    oracle_move: Optional[EdgePair]

    @property
    def match(self) -> bool:
        return (
            self.solver_value == self.oracle_value
            and self.solver_move == self.oracle_move
        )


def oracle_check(
    instance: Instance,
    cap: int = WORLD_CAP,
    solver: Optional[ExactSolver] = None,
) -> list[ScenarioCheck]:
    """Compare solver and oracle on every possible first-step scenario.

    Zero-probability scenarios are skipped: conditioning on them is undefined
    for the oracle.  ``solver`` may be replaced to self-test the harness.
    """
    solver = solver if solver is not None else ExactSolver(instance)
    start = instance.start
    checks = []
    for knowledge, weight in initial_scenarios(instance):
        if weight == 0:
            continue
        scored = candidate_values(instance, start, knowledge, cap)
        oracle_best = Fraction(0)
        for _, val in scored:
            if val > oracle_best:
                oracle_best = val
        if oracle_best > 0:
            oracle_move = tiebreak(p for p, val in scored if val == oracle_best)
        else:
            oracle_move = None
        checks.append(
            ScenarioCheck(
                knowledge=knowledge,
                weight=weight,
                solver_value=solver.root_value(knowledge),
                oracle_value=oracle_best,
                solver_move=solver.next_move(start, knowledge),
                oracle_move=oracle_move,
            )
        )
    return checks


# -- greedy-gap search --------------------------------------------------------


def is_gap_instance(instance: Instance) -> bool:
    """True when sight changes the first move: the exact solver disagrees with
    the sight-blind baseline on at least one possible first-step scenario."""
    blind_move = sight_blind_policy(instance)(instance.start, EMPTY_KNOWLEDGE)
    solver = ExactSolver(instance)
    for knowledge, weight in initial_scenarios(instance):
        if weight == 0:
            continue
        if solver.next_move(instance.start, knowledge) != blind_move:
            return True
    return False


def find_greedy_gap(config: "GeneratorConfig", count: int) -> list[Instance]:
    """Generate ``count`` instances and keep those where blind and exact
    first moves differ."""
    from .generate import generate_instance

    gaps = []
    for index in range(count):
        instance = generate_instance(config, index)
        if is_gap_instance(instance):
            gaps.append(instance)
    return gaps
