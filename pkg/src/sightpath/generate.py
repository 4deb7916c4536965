"""Seeded random instance generator for test suites and gap searches."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .model import Instance, NoPath, ProbabilityLike, as_probability, prune_extraneous
from .seeds import derive_seed

DEFAULT_PALETTE = ("0", "1/4", "1/2", "3/4", "1")


@dataclass(frozen=True)
class GeneratorConfig:
    n_min: int = 3
    n_max: int = 6
    edge_density: float = 0.5
    sight_density: float = 0.3
    p_palette: tuple[ProbabilityLike, ...] = DEFAULT_PALETTE
    seed: int = 0
    max_edges: Optional[int] = None
    max_sights: Optional[int] = None
    neighbor_sight_only: bool = False
    max_attempts: int = 200

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "p_palette", tuple(as_probability(p) for p in self.p_palette)
        )
        if self.n_min < 2 or self.n_max < self.n_min:
            raise ValueError("need 2 <= n_min <= n_max")
        if not self.p_palette:
            raise ValueError("p_palette must not be empty")


def _draw(config: GeneratorConfig, rng: random.Random, plant_path: bool) -> Instance:
    n = rng.randint(config.n_min, config.n_max)
    pairs = [
        (i, j)
        for i in range(1, n)
        for j in range(i + 1, n + 1)
        if rng.random() < config.edge_density
    ]
    if plant_path:
        # ensure a start->dest backbone so the attempt cannot be a NoPath
        waypoints = sorted(
            rng.sample(range(2, n), rng.randint(0, n - 2)) if n > 2 else []
        )
        route = [1, *waypoints, n]
        pairs.extend(zip(route, route[1:]))
        pairs = sorted(set(pairs))
    if config.max_edges is not None and len(pairs) > config.max_edges:
        pairs = sorted(rng.sample(pairs, config.max_edges))
    edges = [(t, h, rng.choice(config.p_palette)) for t, h in pairs]

    if config.neighbor_sight_only:
        candidates = [(t, t, h) for t, h in pairs]
    else:
        candidates = [
            (observer, t, h)
            for t, h in pairs
            for observer in range(1, t + 1)
        ]
    sights = [c for c in candidates if rng.random() < config.sight_density]
    if config.max_sights is not None and len(sights) > config.max_sights:
        sights = sorted(rng.sample(sights, config.max_sights))

    return Instance.build(n, edges, sights, task=(1, n))


def generate_instance(config: GeneratorConfig, index: int = 0) -> Instance:
    """Deterministically generate the ``index``-th instance of a seeded stream.

    Draws are rejected and redrawn while no start->dest path exists; after
    ``max_attempts`` rejections a random backbone path is planted so the
    stream always terminates (an all-zero edge density would otherwise never
    produce a path).  The returned instance is pruned and valid.
    """
    rng = random.Random(derive_seed(config.seed, index))
    for attempt in range(config.max_attempts):
        try:
            return prune_extraneous(_draw(config, rng, plant_path=False))
        except NoPath:
            continue
    return prune_extraneous(_draw(config, rng, plant_path=True))


def generate_suite(config: GeneratorConfig, count: int) -> list[Instance]:
    return [generate_instance(config, index) for index in range(count)]
