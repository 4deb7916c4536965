"""Model types, validation, pruning, sight and knowledge propagation."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sightpath import (
    EMPTY_KNOWLEDGE,
    Edge,
    GeneratorConfig,
    InconsistentKnowledge,
    Instance,
    Knowledge,
    NoPath,
    Task,
    UnknownEdge,
    UnknownVertex,
    World,
    generate_instance,
    observe,
    prune_extraneous,
    restrict,
    sample_world,
    validate,
)
from sightpath.model import as_probability

from conftest import DOWN, UP, know


instances = st.builds(
    generate_instance,
    st.builds(GeneratorConfig, seed=st.integers(0, 2**32)),
    index=st.integers(0, 7),
)


class TestValidate:
    def test_triangle_is_ok(self, triangle_plain):
        assert validate(triangle_plain).ok

    def test_reversed_edge(self):
        inst = Instance.build(3, [(1, 2, "0.5"), (3, 2, "0.5"), (1, 3, "0.5")], [], (1, 3))
        report = validate(inst)
        assert not report.ok
        assert "tail<head" in report.rules()

    def test_observer_behind_edge(self):
        inst = Instance.build(3, [(1, 2, "0.5"), (2, 3, "0.5")], [(3, 1, 2)], (1, 3))
        report = validate(inst)
        assert "observer≤tail" in report.rules()

    def test_duplicate_edges(self):
        inst = Instance(
            3,
            (Edge(1, 2, "0.5"), Edge(1, 2, "0.25"), Edge(2, 3, "0.5")),
            (),
            Task(1, 3),
        )
        assert "duplicate-edge" in validate(inst).rules()

    def test_probability_out_of_range(self):
        inst = Instance.build(2, [(1, 2, "3/2")], [], (1, 2))
        assert "p-range" in validate(inst).rules()

    def test_task_bounds(self):
        inst = Instance.build(3, [(1, 2, "0.5")], [], (2, 2))
        assert "task-bounds" in validate(inst).rules()
        inst = Instance.build(3, [(1, 2, "0.5")], [], (1, 9))
        assert "task-bounds" in validate(inst).rules()

    def test_sight_of_missing_edge(self):
        inst = Instance.build(3, [(1, 2, "0.5"), (2, 3, "0.5")], [(1, 1, 3)], (1, 3))
        assert "unknown-edge" in validate(inst).rules()

    def test_edge_outside_vertex_range(self):
        inst = Instance.build(3, [(1, 2, "0.5"), (2, 7, "0.5")], [], (1, 3))
        assert "vertex-range" in validate(inst).rules()

    def test_all_violations_reported_at_once(self):
        inst = Instance.build(3, [(3, 2, "2")], [(3, 3, 2)], (1, 3))
        rules = validate(inst).rules()
        assert {"tail<head", "p-range"} <= rules


class TestPrune:
    def test_drops_dangling_edge(self, triangle_plain):
        extended = Instance.build(
            4,
            [(1, 2, "1/2"), (2, 3, "1/2"), (1, 3, "0.3"), (2, 4, "1/2")],
            [],
            task=(1, 3),
        )
        pruned = prune_extraneous(extended)
        assert pruned.pairs == {(1, 2), (2, 3), (1, 3)}
        assert pruned.vertex_count == 4

    def test_idempotent(self, triangle_plain):
        assert prune_extraneous(triangle_plain) == triangle_plain
        once = prune_extraneous(triangle_plain)
        assert prune_extraneous(once) == once

    def test_no_path_raises(self):
        inst = Instance.build(3, [(1, 2, "0.5")], [], (1, 3))
        with pytest.raises(NoPath):
            prune_extraneous(inst)

    def test_sight_on_removed_edge_dropped(self):
        inst = Instance.build(
            4,
            [(1, 2, "1/2"), (2, 3, "1/2"), (2, 4, "1/2")],
            [(1, 2, 4), (1, 2, 3)],
            task=(1, 3),
        )
        pruned = prune_extraneous(inst)
        assert {s.edge for s in pruned.sights} == {(2, 3)}

    @settings(max_examples=60, deadline=None)
    @given(instances)
    def test_generated_instances_prune_to_valid(self, inst):
        assert validate(inst).ok
        assert prune_extraneous(inst) == inst


class TestSightOf:
    def test_watcher_sees_far_edge(self, lookout_triangle):
        assert lookout_triangle.sight_of(1) == {(2, 3)}

    def test_vertex_without_entries(self, lookout_triangle):
        assert lookout_triangle.sight_of(2) == frozenset()

    def test_scout_sees_both_exits(self, scouted_fork):
        assert scouted_fork.sight_of(2) == {(2, 3), (2, 4)}

    def test_unknown_vertex(self, lookout_triangle):
        with pytest.raises(UnknownVertex):
            lookout_triangle.sight_of(9)


class TestForwardCone:
    def test_single_onward_edge(self, lookout_triangle):
        assert lookout_triangle.forward_cone(2) == {(2, 3)}

    def test_start_sees_every_edge_when_pruned(self, lookout_triangle):
        assert lookout_triangle.forward_cone(1) == lookout_triangle.pairs

    def test_fork_tail(self, scouted_fork):
        assert scouted_fork.forward_cone(3) == {(3, 5)}

    def test_destination_cone_empty(self, scouted_fork):
        assert scouted_fork.forward_cone(scouted_fork.dest) == frozenset()

    @settings(max_examples=60, deadline=None)
    @given(instances)
    def test_pruned_cone_properties(self, inst):
        assert inst.forward_cone(inst.start) == inst.pairs
        assert inst.forward_cone(inst.dest) == frozenset()


class TestObserve:
    def test_single_entry(self, lookout_triangle):
        world = World({(1, 2): UP, (2, 3): DOWN, (1, 3): UP})
        k = observe(lookout_triangle, EMPTY_KNOWLEDGE, 1, world)
        assert k == know(e_2_3=DOWN)

    def test_vertex_that_sees_nothing(self, lookout_triangle):
        world = World({(1, 2): UP, (2, 3): DOWN, (1, 3): UP})
        k = know(e_2_3=DOWN)
        assert observe(lookout_triangle, k, 2, world) == k

    def test_two_entries(self, scouted_fork):
        world = World(
            {(1, 2): UP, (1, 5): UP, (2, 3): UP, (2, 4): DOWN, (3, 5): UP, (4, 5): UP}
        )
        k = observe(scouted_fork, EMPTY_KNOWLEDGE, 2, world)
        assert k == know(e_2_3=UP, e_2_4=DOWN)

    def test_inconsistent_knowledge_rejected(self, lookout_triangle):
        world = World({(1, 2): UP, (2, 3): DOWN, (1, 3): UP})
        with pytest.raises(InconsistentKnowledge):
            observe(lookout_triangle, know(e_2_3=UP), 1, world)

    @settings(max_examples=60, deadline=None)
    @given(instances, st.integers(0, 2**32), st.data())
    def test_monotone_and_idempotent(self, inst, seed, data):
        world = sample_world(inst, seed)
        v = data.draw(st.sampled_from(sorted(inst.vertices)))
        k1 = observe(inst, EMPTY_KNOWLEDGE, v, world)
        assert k1.known >= EMPTY_KNOWLEDGE.known
        assert observe(inst, k1, v, world) == k1
        w = data.draw(st.sampled_from(sorted(inst.vertices)))
        k2 = observe(inst, k1, w, world)
        assert k2.known >= k1.known


class TestRestrict:
    def test_projection(self):
        k = Knowledge({(2, 3): DOWN, (1, 2): UP})
        assert k.restrict({(2, 3)}) == know(e_2_3=DOWN)

    def test_empty_knowledge(self):
        assert EMPTY_KNOWLEDGE.restrict({(1, 2)}) == EMPTY_KNOWLEDGE

    def test_empty_cone(self):
        assert know(e_2_3=UP).restrict(set()) == EMPTY_KNOWLEDGE

    def test_idempotent(self):
        k = Knowledge({(2, 3): DOWN, (1, 2): UP, (1, 3): UP})
        cone = {(2, 3), (1, 3)}
        assert restrict(restrict(k, cone), cone) == restrict(k, cone)


class TestKnowledge:
    def test_conflicting_merge_raises(self):
        with pytest.raises(InconsistentKnowledge):
            know(e_1_2=UP).with_statuses({(1, 2): DOWN})

    def test_merging_same_value_is_fine(self):
        k = know(e_1_2=UP)
        assert k.with_statuses({(1, 2): UP}) == k

    def test_equality_and_hash(self):
        assert know(e_1_2=UP, e_2_3=DOWN) == Knowledge({(2, 3): DOWN, (1, 2): UP})
        assert hash(know(e_1_2=UP)) == hash(Knowledge({(1, 2): UP}))

    def test_repr_is_sorted(self):
        assert repr(know(e_2_3=DOWN, e_1_2=UP)) == "{1-2: up, 2-3: down}"

    def test_status_of_unknown_edge_is_none(self):
        assert know(e_1_2=UP).status((7, 8)) is None

    def test_rejects_non_status_values(self):
        with pytest.raises(TypeError):
            Knowledge({(1, 2): "up"})


class TestWorld:
    def test_missing_edge(self):
        with pytest.raises(UnknownEdge):
            World({(1, 2): UP}).status((2, 3))

    def test_up_helper(self):
        world = World({(1, 2): UP, (2, 3): DOWN})
        assert world.up((1, 2)) and not world.up((2, 3))


class TestProbabilities:
    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_probability(0.25)

    def test_decimal_strings_are_exact(self):
        assert as_probability("0.1") == Fraction(1, 10)
        assert as_probability("1/3") == Fraction(1, 3)
        assert as_probability(1) == 1

    def test_instance_build_rejects_float_probability(self):
        with pytest.raises(TypeError):
            Instance.build(2, [(1, 2, 0.25)], [], (1, 2))


def test_instance_canonical_order():
    a = Instance.build(3, [(2, 3, "1/2"), (1, 2, "1/2")], [(1, 2, 3), (1, 2, 3)], (1, 3))
    b = Instance.build(3, [(1, 2, "1/2"), (2, 3, "1/2")], [(1, 2, 3)], (1, 3))
    assert a == b
