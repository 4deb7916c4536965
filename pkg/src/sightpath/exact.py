"""Exact decision engine for the safest-path-with-sight problem.

``success(edge, knowledge)`` is the probability that an ideal walker who has
just committed to ``edge`` eventually reaches the destination, given what it
currently knows.  The recursion multiplies the chance of surviving the edge
itself by the expected value of the best onward choice, averaged over the
statuses newly revealed on arrival at the edge's head.

Values are memoized per instance.  A memo key contains the queried edge, the
edge's own known status, and the knowledge restricted to the forward cone of
the edge's head: statuses of edges that can no longer influence any onward
decision are marginalized away, which is what makes the no-sight and
neighbor-sight special cases collapse to one memo entry per edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, FrozenSet, Iterable, Literal, Optional, Union

from .model import (
    EMPTY_KNOWLEDGE,
    EdgePair,
    Instance,
    Knowledge,
    ModelError,
    Status,
    UnknownEdge,
    format_pair,
)

Valuation = Union[Fraction, float]
Mode = Literal["rational", "float"]
MemoKey = tuple[EdgePair, FrozenSet[tuple[EdgePair, Status]]]
Policy = Callable[[int, Knowledge], Optional[EdgePair]]

DEFAULT_FLOAT_TOL = 1e-9

_MISS = object()


class EmptyCandidates(ModelError):
    """tiebreak() was asked to choose from nothing."""


class IncompleteKnowledge(ModelError):
    """A first-step query must assign a status to every edge visible from the start."""


def cross_prob(instance: Instance, edge: EdgePair, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> Fraction:
    """Probability of safely crossing ``edge`` under ``knowledge``.

    Known-up edges cross with certainty, known-down edges never do, and an
    unknown edge crosses with one minus its failure probability.
    """
    pair = tuple(edge)
    p = instance.p_fail(pair)
    status = knowledge.status(pair)
    if status is Status.UP:
        return Fraction(1)
    if status is Status.DOWN:
        return Fraction(0)
    return 1 - p


def reveal_distribution(
    instance: Instance, v: int, knowledge: Knowledge = EMPTY_KNOWLEDGE
) -> list[tuple[Knowledge, Fraction]]:
    """All ways arrival at ``v`` can extend ``knowledge``, with probabilities.

    Enumerates status assignments for the not-yet-known edges that ``v``
    watches and that still lie on some path to the destination; statuses of
    watched edges behind that cone cannot affect any onward decision and are
    marginalized away.  Weights are products of the independent per-edge
    probabilities and sum to one.
    """
    fresh = sorted(
        (instance.sight_of(v) & instance.forward_cone(v)) - knowledge.known
    )
    if not fresh:
        return [(knowledge, Fraction(1))]
    per_edge = [
        ((Status.UP, 1 - instance.p_fail(p)), (Status.DOWN, instance.p_fail(p)))
        for p in fresh
    ]
    out = []
    for combo in product(*per_edge):
        weight = Fraction(1)
        assignment = {}
        for pair, (status, w) in zip(fresh, combo):
            weight *= w
            assignment[pair] = status
        out.append((knowledge.with_statuses(assignment), weight))
    return out


def tiebreak(candidates: Iterable[EdgePair]) -> EdgePair:
    """Among equally good edges, pick the one with the highest head index."""
    pool = [tuple(c) for c in candidates]
    if not pool:
        raise EmptyCandidates("no candidate edges to break a tie between")
    return max(pool, key=lambda pair: (pair[1], pair[0]))


@dataclass(frozen=True)
class MemoStats:
    entries: int
    hits: int


@dataclass(frozen=True)
class DecisionQuery:
    """A first-step query: will the walker take ``edge`` out of the start?

    The knowledge must assign a status to every edge the walker can see from
    the start vertex: exactly what it holds when the trial begins.
    """

    instance: Instance
    edge: EdgePair
    knowledge: Knowledge = EMPTY_KNOWLEDGE

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge", tuple(self.edge))
        inst = self.instance
        if not inst.has_edge(self.edge):
            raise UnknownEdge(f"edge {format_pair(self.edge)} is not in the instance")
        if self.edge[0] != inst.start:
            raise ValueError(
                f"queried edge {format_pair(self.edge)} does not leave the start vertex {inst.start}"
            )
        for pair in self.knowledge.known:
            if not inst.has_edge(pair):
                raise UnknownEdge(f"knowledge references missing edge {format_pair(pair)}")
        missing = inst.sight_of(inst.start) - self.knowledge.known
        if missing:
            raise IncompleteKnowledge(
                "knowledge must assign a status to every edge visible from the start; "
                "missing " + ", ".join(format_pair(p) for p in sorted(missing))
            )


class _SolverCore:
    """Shared recursion for the exact solver and its cache-based variant.

    Subclasses supply the cache policy through ``_cache_get``/``_cache_put``;
    the recursion itself is identical, which is what makes the threshold-zero
    cached variant agree with the exact solver bit for bit.
    """

    def __init__(
        self,
        instance: Instance,
        mode: Mode = "rational",
        tol: float = DEFAULT_FLOAT_TOL,
    ):
        if mode not in ("rational", "float"):
            raise ValueError(f"mode must be 'rational' or 'float', got {mode!r}")
        self.instance = instance
        self.mode = mode
        self.tol = tol
        self._zero: Valuation = Fraction(0) if mode == "rational" else 0.0
        self._one: Valuation = Fraction(1) if mode == "rational" else 1.0
        self._move_cache: dict[tuple[int, Knowledge], Optional[EdgePair]] = {}

    # -- cache hooks -------------------------------------------------------

    def _cache_get(self, key: MemoKey):
        raise NotImplementedError

    def _cache_put(self, key: MemoKey, value: Valuation) -> None:
        raise NotImplementedError

    # -- the recursion -----------------------------------------------------

    def memo_key(self, edge: EdgePair, knowledge: Knowledge) -> MemoKey:
        edge = tuple(edge)
        cone = self.instance.forward_cone(edge[1])
        items = [(p, s) for p, s in knowledge.items() if p in cone]
        own = knowledge.status(edge)
        if own is not None:
            items.append((edge, own))
        return (edge, frozenset(items))

    def success(self, edge: EdgePair, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> Valuation:
        """Probability of reaching the destination after committing to ``edge``."""
        pair = tuple(edge)
        if not self.instance.has_edge(pair):
            raise UnknownEdge(f"edge {format_pair(pair)} is not in the instance")
        for known in knowledge.known:
            if not self.instance.has_edge(known):
                raise UnknownEdge(f"knowledge references missing edge {format_pair(known)}")
        return self._success(pair, knowledge)

    def _success(self, edge: EdgePair, knowledge: Knowledge) -> Valuation:
        key = self.memo_key(edge, knowledge)
        cached = self._cache_get(key)
        if cached is not _MISS:
            return cached
        value = self._evaluate(key)
        self._cache_put(key, value)
        return value

    def _evaluate(self, key: MemoKey) -> Valuation:
        edge, items = key
        knowledge = Knowledge(dict(items))
        own = knowledge.status(edge)
        if own is Status.DOWN:
            return self._zero
        if own is Status.UP:
            crossing = self._one
        else:
            crossing = self._one - self._to_mode(self.instance.p_fail(edge))
        head = edge[1]
        if head == self.instance.dest or crossing == self._zero:
            return crossing
        total = self._zero
        for revealed, weight in reveal_distribution(self.instance, head, knowledge):
            if weight == 0:
                continue
            best = self._zero
            for onward in self.instance.out_edges(head):
                candidate = self._success(onward, revealed)
                if candidate > best:
                    best = candidate
            total += self._to_mode(weight) * best
        return crossing * total

    def _to_mode(self, value: Fraction) -> Valuation:
        return value if self.mode == "rational" else float(value)

    # -- decisions ---------------------------------------------------------

    def candidate_successes(
        self, v: int, knowledge: Knowledge = EMPTY_KNOWLEDGE
    ) -> list[tuple[EdgePair, Valuation]]:
        """Success of each outgoing edge of ``v`` that is not known down."""
        return [
            (pair, self._success(pair, knowledge))
            for pair in self.instance.out_edges(v)
            if knowledge.status(pair) is not Status.DOWN
        ]

    def optimal_set(self, v: int, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> frozenset[EdgePair]:
        """The outgoing edges of ``v`` attaining the best positive success.

        Empty when ``v`` has no outgoing edges left or every continuation is
        certain to fail: the walker is at a dead end.
        """
        if v == self.instance.dest:
            raise ValueError("no decision is made at the destination")
        scored = self.candidate_successes(v, knowledge)
        if not scored:
            return frozenset()
        best = max(value for _, value in scored)
        if best <= self._zero:
            return frozenset()
        if self.mode == "rational":
            return frozenset(pair for pair, value in scored if value == best)
        return frozenset(pair for pair, value in scored if best - value <= self.tol)

    def next_move(self, v: int, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> Optional[EdgePair]:
        """The edge the walker takes at ``v``, or None when it halts."""
        cache_key = (v, knowledge)
        try:
            return self._move_cache[cache_key]
        except KeyError:
            pass
        chosen = self.optimal_set(v, knowledge)
        move = tiebreak(chosen) if chosen else None
        self._move_cache[cache_key] = move
        return move

    def decide(self, query: DecisionQuery) -> bool:
        """True iff the walker's first step out of the start is ``query.edge``."""
        if query.instance != self.instance:
            raise ValueError("query was built for a different instance")
        chosen = self.optimal_set(self.instance.start, query.knowledge)
        return query.edge in chosen and tiebreak(chosen) == query.edge

    def root_value(self, knowledge: Knowledge = EMPTY_KNOWLEDGE) -> Valuation:
        """Best success over the start vertex's candidate edges (0 at a dead end)."""
        scored = self.candidate_successes(self.instance.start, knowledge)
        best = self._zero
        for _, value in scored:
            if value > best:
                best = value
        return best

    def policy(self) -> Policy:
        return self.next_move


class ExactSolver(_SolverCore):
    """Memoized exact solver; one per instance, results are deterministic."""

    def __init__(
        self,
        instance: Instance,
        mode: Mode = "rational",
        tol: float = DEFAULT_FLOAT_TOL,
    ):
        super().__init__(instance, mode, tol)
        self._memo: dict[MemoKey, Valuation] = {}
        self._hits = 0

    def _cache_get(self, key: MemoKey):
        value = self._memo.get(key, _MISS)
        if value is not _MISS:
            self._hits += 1
        return value

    def _cache_put(self, key: MemoKey, value: Valuation) -> None:
        self._memo[key] = value

    def memo_stats(self) -> MemoStats:
        return MemoStats(entries=len(self._memo), hits=self._hits)

    def memo_keys(self) -> frozenset[MemoKey]:
        return frozenset(self._memo)


def decide(query: DecisionQuery, mode: Mode = "rational", tol: float = DEFAULT_FLOAT_TOL) -> bool:
    return ExactSolver(query.instance, mode=mode, tol=tol).decide(query)
