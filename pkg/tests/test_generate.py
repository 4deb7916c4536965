"""Seeded instance generator: determinism, bounds, structural validity."""

from __future__ import annotations

import pytest

from sightpath import (
    GeneratorConfig,
    generate_instance,
    generate_suite,
    prune_extraneous,
    validate,
)


def test_same_seed_same_instances():
    cfg = GeneratorConfig(seed=9)
    assert generate_suite(cfg, 10) == generate_suite(cfg, 10)


def test_different_seeds_differ():
    a = generate_suite(GeneratorConfig(seed=1), 10)
    b = generate_suite(GeneratorConfig(seed=2), 10)
    assert a != b


def test_instances_are_pruned_and_valid():
    for inst in generate_suite(GeneratorConfig(seed=3), 40):
        assert validate(inst).ok
        assert prune_extraneous(inst) == inst


def test_bounds_are_respected():
    cfg = GeneratorConfig(n_min=3, n_max=6, seed=4, max_edges=9, max_sights=4)
    for inst in generate_suite(cfg, 60):
        assert 3 <= inst.vertex_count <= 6
        assert len(inst.edges) <= 9
        assert len(inst.sights) <= 4
        palette = set(cfg.p_palette)
        assert all(e.p_fail in palette for e in inst.edges)


def test_neighbor_sight_only():
    cfg = GeneratorConfig(seed=5, sight_density=0.8, neighbor_sight_only=True)
    suite = generate_suite(cfg, 30)
    assert any(inst.sights for inst in suite)
    for inst in suite:
        assert all(s.observer == s.edge[0] for s in inst.sights)


def test_zero_density_plants_a_path():
    cfg = GeneratorConfig(edge_density=0.0, sight_density=0.0, seed=6, max_attempts=5)
    inst = generate_instance(cfg, 0)
    assert validate(inst).ok
    # the planted backbone is a single monotone path from 1 to n
    tails = [e.tail for e in inst.edges]
    heads = [e.head for e in inst.edges]
    assert tails[0] == 1 and heads[-1] == inst.vertex_count
    assert heads[:-1] == tails[1:]


def test_palette_is_validated():
    with pytest.raises(TypeError):
        GeneratorConfig(p_palette=(0.25,))
    with pytest.raises(ValueError):
        GeneratorConfig(p_palette=())


def test_vertex_range_is_validated():
    with pytest.raises(ValueError):
        GeneratorConfig(n_min=1)
    with pytest.raises(ValueError):
        GeneratorConfig(n_min=5, n_max=4)
