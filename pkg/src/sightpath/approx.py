"""Cache-based approximate solver: reuse valuations of similar knowledge states.

Same recursion as the exact solver, but the memo table is bounded (LRU) and,
above threshold zero, a lookup may be answered by a cached entry for the same
edge whose knowledge differs in at most ``similarity_threshold`` edge
statuses.  That trades exactness for time and space; at threshold zero the
results are identical to the exact solver.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Union

from .exact import (
    DEFAULT_FLOAT_TOL,
    ExactSolver,
    MemoKey,
    Mode,
    Valuation,
    _MISS,
    _SolverCore,
)
from .model import EdgePair, Instance, Knowledge, Status
from .oracle import initial_scenarios

KnowledgeItems = FrozenSet[tuple[EdgePair, Status]]


@dataclass(frozen=True)
class ApproxConfig:
    """Similarity threshold (max differing statuses) and cache capacity."""

    similarity_threshold: int = 0
    max_entries: int = 1024

    def __post_init__(self) -> None:
        if self.similarity_threshold < 0:
            raise ValueError("similarity_threshold must be non-negative")
        if self.max_entries < 1:
            raise ValueError("max_entries must be at least 1")


@dataclass(frozen=True)
class CacheReport:
    exact_hits: int
    similar_hits: int
    misses: int
    evictions: int


def knowledge_distance(a: KnowledgeItems, b: KnowledgeItems) -> int:
    """Number of edges whose status differs between two knowledge maps.

    An edge known in one map and unknown in the other counts as one, as does
    an edge known up in one and down in the other.
    """
    left = dict(a)
    right = dict(b)
    return sum(
        1 for pair in left.keys() | right.keys() if left.get(pair) is not right.get(pair)
    )


class ApproxSolver(_SolverCore):
    """Bounded-cache solver that may substitute similar cached valuations."""

    def __init__(
        self,
        instance: Instance,
        config: ApproxConfig = ApproxConfig(),
        mode: Mode = "rational",
        tol: float = DEFAULT_FLOAT_TOL,
    ):
        super().__init__(instance, mode, tol)
        self.config = config
        self._cache: OrderedDict[MemoKey, Valuation] = OrderedDict()
        self._by_edge: dict[EdgePair, set[MemoKey]] = {}
        self._stamp = 0
        self._stamps: dict[MemoKey, int] = {}
        self._exact_hits = 0
        self._similar_hits = 0
        self._misses = 0
        self._evictions = 0
        self._peak = 0

    def _touch(self, key: MemoKey) -> None:
        self._cache.move_to_end(key)
        self._stamp += 1
        self._stamps[key] = self._stamp

    def _cache_get(self, key: MemoKey):
        if key in self._cache:
            self._exact_hits += 1
            self._touch(key)
            return self._cache[key]
        threshold = self.config.similarity_threshold
        if threshold > 0:
            edge, items = key
            best_key = None
            best_rank = None
            for candidate in self._by_edge.get(edge, ()):
                distance = knowledge_distance(items, candidate[1])
                if distance > threshold:
                    continue
                rank = (distance, -self._stamps[candidate])
                if best_rank is None or rank < best_rank:
                    best_rank = rank
                    best_key = candidate
            if best_key is not None:
                self._similar_hits += 1
                self._touch(best_key)
                return self._cache[best_key]
        self._misses += 1
        return _MISS

    def _cache_put(self, key: MemoKey, value: Valuation) -> None:
        if key not in self._cache and len(self._cache) >= self.config.max_entries:
            evicted, _ = self._cache.popitem(last=False)
            self._by_edge[evicted[0]].discard(evicted)
            del self._stamps[evicted]
            self._evictions += 1
        self._cache[key] = value
        self._by_edge.setdefault(key[0], set()).add(key)
        self._touch(key)
        self._peak = max(self._peak, len(self._cache))

    @property
    def report(self) -> CacheReport:
        return CacheReport(
            exact_hits=self._exact_hits,
            similar_hits=self._similar_hits,
            misses=self._misses,
            evictions=self._evictions,
        )

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    @property
    def peak_cache_size(self) -> int:
        return self._peak

    def approx_success(
        self, edge: EdgePair, knowledge: Knowledge = Knowledge()
    ) -> tuple[Valuation, CacheReport]:
        """Approximate success of ``edge`` plus the cache counters so far."""
        value = self.success(edge, knowledge)
        return value, self.report


@dataclass(frozen=True)
class AgreementRow:
    instance: Instance
    decision_match: bool
    value_gap: Union[Fraction, float]
    report: CacheReport


def agreement_report(
    instances: Iterable[Instance],
    config: ApproxConfig,
    mode: Mode = "rational",
) -> list[AgreementRow]:
    """Compare approximate first moves and root values against exact, per instance.

    The gap is the largest absolute root-value difference over the possible
    first-step scenarios; the decision matches when the first move agrees on
    every one of them.
    """
    rows = []
    for instance in instances:
        exact = ExactSolver(instance, mode=mode)
        approx = ApproxSolver(instance, config, mode=mode)
        match = True
        gap: Union[Fraction, float] = exact._zero
        for knowledge, weight in initial_scenarios(instance):
            if weight == 0:
                continue
            if approx.next_move(instance.start, knowledge) != exact.next_move(
                instance.start, knowledge
            ):
                match = False
            difference = abs(
                approx.root_value(knowledge) - exact.root_value(knowledge)
            )
            if difference > gap:
                gap = difference
        rows.append(
            AgreementRow(
                instance=instance,
                decision_match=match,
                value_gap=gap,
                report=approx.report,
            )
        )
    return rows
