"""Problem model: uncertain DAG instances, knowledge states, and worlds.

An instance is a DAG on vertices 1..n whose edges fail independently with
known probabilities, plus a set of sight lines (a vertex may watch the
status of an edge ahead of it) and a start/destination task.  Knowledge
states record which edge statuses the walker has learned so far; worlds fix
the status of every edge for one trial.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

EdgePair = tuple[int, int]
ProbabilityLike = Union[str, int, Fraction]


class ModelError(Exception):
    """Base class for domain errors raised by this package."""


class NoPath(ModelError):
    """The destination is unreachable from the start."""


class UnknownVertex(ModelError):
    """A vertex id outside the instance was referenced."""


class UnknownEdge(ModelError):
    """An edge absent from the instance was referenced."""


class InconsistentKnowledge(ModelError):
    """A knowledge state contradicts a world or another knowledge state."""


class Status(Enum):
    UP = "up"
    DOWN = "down"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return self.value


def as_probability(value: ProbabilityLike) -> Fraction:
    """Parse a probability given as a decimal string, fraction string or int.

    Floats are rejected: a binary float does not say which decimal the user
    meant, and the solvers rely on exact arithmetic.
    """
    if isinstance(value, float):
        raise TypeError(
            "probabilities must be given as strings, ints or Fractions, not floats"
        )
    return Fraction(value)


def format_pair(pair: EdgePair) -> str:
    return f"{pair[0]}-{pair[1]}"


@dataclass(frozen=True, order=True)
class Edge:
    tail: int
    head: int
    p_fail: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_fail", as_probability(self.p_fail))

    @property
    def pair(self) -> EdgePair:
        return (self.tail, self.head)


@dataclass(frozen=True, order=True)
class SightLine:
    """Vertex ``observer`` watches the status of ``edge``."""

    observer: int
    edge: EdgePair

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge", (int(self.edge[0]), int(self.edge[1])))


@dataclass(frozen=True)
class Task:
    start: int
    dest: int


@dataclass(frozen=True)
class Instance:
    """The full problem tuple: graph, failure probabilities, sight, task.

    Construction is permissive so that :func:`validate` can report structural
    problems as data; operations assume a valid instance.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    sights: tuple[SightLine, ...]
    task: Task

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "sights", tuple(sorted(set(self.sights))))

    @classmethod
    def build(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, ProbabilityLike]],
        sights: Iterable[tuple[int, int, int]] = (),
        task: tuple[int, int] = (1, 2),
    ) -> "Instance":
        """Assemble an instance from plain tuples.

        ``edges`` are ``(tail, head, p_fail)`` triples and ``sights`` are
        ``(observer, tail, head)`` triples.
        """
        return cls(
            vertex_count=vertex_count,
            edges=tuple(Edge(t, h, p) for t, h, p in edges),
            sights=tuple(SightLine(o, (t, h)) for o, t, h in sights),
            task=Task(*task),
        )

    # -- lookups ---------------------------------------------------------

    @property
    def start(self) -> int:
        return self.task.start

    @property
    def dest(self) -> int:
        return self.task.dest

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    @cached_property
    def pairs(self) -> frozenset[EdgePair]:
        return frozenset(e.pair for e in self.edges)

    @cached_property
    def _edge_map(self) -> dict[EdgePair, Edge]:
        return {e.pair: e for e in self.edges}

    @cached_property
    def _out(self) -> dict[int, tuple[EdgePair, ...]]:
        out: dict[int, list[EdgePair]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.tail, []).append(e.pair)
        return {v: tuple(sorted(ps)) for v, ps in out.items()}

    @cached_property
    def _sight_map(self) -> dict[int, frozenset[EdgePair]]:
        seen: dict[int, set[EdgePair]] = {v: set() for v in self.vertices}
        for s in self.sights:
            seen.setdefault(s.observer, set()).add(s.edge)
        return {v: frozenset(ps) for v, ps in seen.items()}

    def has_vertex(self, v: int) -> bool:
        return 1 <= v <= self.vertex_count

    def _check_vertex(self, v: int) -> None:
        if not self.has_vertex(v):
            raise UnknownVertex(f"vertex {v} is not in 1..{self.vertex_count}")

    def has_edge(self, pair: EdgePair) -> bool:
        return tuple(pair) in self._edge_map

    def edge(self, pair: EdgePair) -> Edge:
        try:
            return self._edge_map[tuple(pair)]
        except KeyError:
            raise UnknownEdge(f"edge {format_pair(pair)} is not in the instance") from None

    def p_fail(self, pair: EdgePair) -> Fraction:
        return self.edge(pair).p_fail

    def out_edges(self, v: int) -> tuple[EdgePair, ...]:
        self._check_vertex(v)
        return self._out.get(v, ())

    def sight_of(self, v: int) -> frozenset[EdgePair]:
        """All edges whose status vertex ``v`` can observe."""
        self._check_vertex(v)
        return self._sight_map.get(v, frozenset())

    # -- reachability ----------------------------------------------------

    @cached_property
    def _reaches_dest(self) -> frozenset[int]:
        into: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges:
            into.setdefault(e.head, []).append(e.tail)
        seen = {self.dest}
        stack = [self.dest]
        while stack:
            v = stack.pop()
            for u in into.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return frozenset(seen)

    def _reachable_from(self, v: int) -> frozenset[int]:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for pair in self._out.get(u, ()):
                if pair[1] not in seen:
                    seen.add(pair[1])
                    stack.append(pair[1])
        return frozenset(seen)

    @cached_property
    def _cones(self) -> dict[int, frozenset[EdgePair]]:
        cones = {}
        for v in self.vertices:
            ahead = self._reachable_from(v)
            cones[v] = frozenset(
                p for p in self.pairs if p[0] in ahead and p[1] in self._reaches_dest
            )
        return cones

    def forward_cone(self, v: int) -> frozenset[EdgePair]:
        """Edges lying on at least one directed path from ``v`` to the destination."""
        self._check_vertex(v)
        return self._cones[v]


class Knowledge:
    """Immutable map from edge to observed status; absent edges are unknown.

    A single edge can never be recorded as both up and down: merging a
    contradictory status raises :class:`InconsistentKnowledge`.
    """

    __slots__ = ("_statuses", "_items", "_hash")

    def __init__(self, statuses: Optional[Mapping[EdgePair, Status]] = None):
        cleaned: dict[EdgePair, Status] = {}
        for pair, status in (statuses or {}).items():
            if not isinstance(status, Status):
                raise TypeError(f"status for {pair!r} must be a Status, got {status!r}")
            cleaned[(int(pair[0]), int(pair[1]))] = status
        self._statuses = cleaned
        self._items = frozenset(cleaned.items())
        self._hash = hash(self._items)

    def status(self, pair: EdgePair) -> Optional[Status]:
        return self._statuses.get(tuple(pair))

    @property
    def known(self) -> frozenset[EdgePair]:
        return frozenset(self._statuses)

    def as_dict(self) -> dict[EdgePair, Status]:
        return dict(self._statuses)

    def items(self) -> frozenset[tuple[EdgePair, Status]]:
        return self._items

    def sorted_items(self) -> tuple[tuple[EdgePair, Status], ...]:
        return tuple(sorted(self._statuses.items()))

    def with_statuses(self, updates: Mapping[EdgePair, Status]) -> "Knowledge":
        if not updates:
            return self
        merged = dict(self._statuses)
        for pair, status in updates.items():
            pair = (int(pair[0]), int(pair[1]))
            if not isinstance(status, Status):
                raise TypeError(f"status for {pair!r} must be a Status, got {status!r}")
            old = merged.get(pair)
            if old is not None and old is not status:
                raise InconsistentKnowledge(
                    f"edge {format_pair(pair)} is already known {old.value}"
                )
            merged[pair] = status
        return Knowledge(merged)

    def restrict(self, pairs: Iterable[EdgePair]) -> "Knowledge":
        """Project onto ``pairs``; everything else becomes unknown."""
        keep_set = frozenset(tuple(p) for p in pairs)
        kept = {p: s for p, s in self._statuses.items() if p in keep_set}
        if len(kept) == len(self._statuses):
            return self
        return Knowledge(kept)

    def __contains__(self, pair: EdgePair) -> bool:
        return tuple(pair) in self._statuses

    def __len__(self) -> int:
        return len(self._statuses)

    def __iter__(self) -> Iterator[EdgePair]:
        return iter(sorted(self._statuses))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Knowledge) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            f"{format_pair(p)}: {s.value}" for p, s in self.sorted_items()
        )
        return "{" + body + "}"


class World:
    """A total assignment of up/down to edges: one realization of a trial."""

    __slots__ = ("_statuses", "_hash")

    def __init__(self, statuses: Mapping[EdgePair, Status]):
        cleaned: dict[EdgePair, Status] = {}
        for pair, status in statuses.items():
            if not isinstance(status, Status):
                raise TypeError(f"status for {pair!r} must be a Status, got {status!r}")
            cleaned[(int(pair[0]), int(pair[1]))] = status
        self._statuses = cleaned
        self._hash = hash(frozenset(cleaned.items()))

    def status(self, pair: EdgePair) -> Status:
        try:
            return self._statuses[tuple(pair)]
        except KeyError:
            raise UnknownEdge(f"edge {format_pair(pair)} has no status in this world") from None

    def up(self, pair: EdgePair) -> bool:
        return self.status(pair) is Status.UP

    @property
    def pairs(self) -> frozenset[EdgePair]:
        return frozenset(self._statuses)

    def as_dict(self) -> dict[EdgePair, Status]:
        return dict(self._statuses)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, World) and self._statuses == other._statuses

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            f"{format_pair(p)}: {s.value}" for p, s in sorted(self._statuses.items())
        )
        return "World{" + body + "}"


EMPTY_KNOWLEDGE = Knowledge()


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}


def validate(instance: Instance) -> ValidationReport:
    """Check every structural invariant and report all violations found.

    Violations are data, not exceptions: an invalid instance is returned to
    the caller with the full list of problems.
    """
    found: list[Violation] = []
    n = instance.vertex_count

    if n < 1:
        found.append(Violation("vertex-count", f"vertex count {n} is not positive"))

    task = instance.task
    if not (1 <= task.start <= n) or not (1 <= task.dest <= n):
        found.append(
            Violation("task-bounds", f"task {task.start}->{task.dest} leaves 1..{n}")
        )
    if task.start >= task.dest:
        found.append(
            Violation("task-bounds", f"start {task.start} must precede dest {task.dest}")
        )

    seen_pairs: set[EdgePair] = set()
    for e in instance.edges:
        if e.tail >= e.head:
            found.append(Violation("tail<head", f"edge {format_pair(e.pair)}"))
        if not (1 <= e.tail <= n) or not (1 <= e.head <= n):
            found.append(
                Violation("vertex-range", f"edge {format_pair(e.pair)} leaves 1..{n}")
            )
        if not (0 <= e.p_fail <= 1):
            found.append(
                Violation("p-range", f"edge {format_pair(e.pair)} has p_fail {e.p_fail}")
            )
        if e.pair in seen_pairs:
            found.append(Violation("duplicate-edge", f"edge {format_pair(e.pair)}"))
        seen_pairs.add(e.pair)

    for s in instance.sights:
        if not (1 <= s.observer <= n):
            found.append(
                Violation("vertex-range", f"sight observer {s.observer} leaves 1..{n}")
            )
        if s.edge not in seen_pairs:
            found.append(
                Violation(
                    "unknown-edge",
                    f"sight ({s.observer}, {format_pair(s.edge)}) references a missing edge",
                )
            )
        if s.observer > s.edge[0]:
            found.append(
                Violation(
                    "observer≤tail",
                    f"sight ({s.observer}, {format_pair(s.edge)}) looks behind itself",
                )
            )

    return ValidationReport(tuple(found))


def prune_extraneous(instance: Instance) -> Instance:
    """Drop every edge that lies on no start->dest path.

    Sight lines referencing a dropped edge are dropped with it.  Idempotent;
    raises :class:`NoPath` when the destination is unreachable.
    """
    forward = instance._reachable_from(instance.start)
    if instance.dest not in forward:
        raise NoPath(
            f"no path from {instance.start} to {instance.dest}"
        )
    backward = instance._reaches_dest
    kept = tuple(
        e for e in instance.edges if e.tail in forward and e.head in backward
    )
    kept_pairs = {e.pair for e in kept}
    sights = tuple(s for s in instance.sights if s.edge in kept_pairs)
    if kept == instance.edges and sights == instance.sights:
        return instance
    return Instance(instance.vertex_count, kept, sights, instance.task)


def observe(instance: Instance, knowledge: Knowledge, v: int, world: World) -> Knowledge:
    """Add the statuses of every edge visible from ``v`` to ``knowledge``.

    The existing knowledge must agree with the world: the network does not
    change during a trial, so a recorded status can never be contradicted.
    """
    sight = instance.sight_of(v)
    for pair, status in knowledge.as_dict().items():
        if world.status(pair) is not status:
            raise InconsistentKnowledge(
                f"knowledge says {format_pair(pair)} is {status.value}, "
                f"world says {world.status(pair).value}"
            )
    return knowledge.with_statuses({p: world.status(p) for p in sight})


def restrict(knowledge: Knowledge, pairs: Iterable[EdgePair]) -> Knowledge:
    return knowledge.restrict(pairs)
