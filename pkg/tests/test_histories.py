from __future__ import annotations

import pytest

from qhopper import (
    Event,
    InfeasibleSizeError,
    LatticeSpec,
    SpaceMismatchError,
    amplitude_classes,
    circulation,
    enumerate_histories,
    half_hop_count,
    history_amplitude,
    history_index,
    initial_state,
    rest_count,
    root,
    visited,
)


def space(n, steps, label, final):
    spec = LatticeSpec(n, steps)
    return enumerate_histories(spec, initial_state(spec, label), final)


def test_space_sizes(spec3, plus_space):
    unrestricted = enumerate_histories(spec3, plus_space.state, None)
    assert unrestricted.size == 81
    assert plus_space.size == 27
    assert space(2, 1, "ground", None).size == 4


def test_canonical_order_is_little_endian():
    sp = space(3, 2, "ground", None)
    for i, h in enumerate(sp.histories):
        assert history_index(h, 3) == i
    restricted = space(3, 2, "ground", 0)
    for i, h in enumerate(restricted.histories):
        assert restricted.index_of(h) == i
        assert h[-1] == 0


def test_size_guard():
    spec = LatticeSpec(3, 3)
    with pytest.raises(InfeasibleSizeError):
        enumerate_histories(spec, initial_state(spec, "plus"), None, max_histories=16)


def test_resting_history_amplitude(plus_space):
    assert history_amplitude(plus_space, (0, 0, 0, 0)) == 1


def test_cycle_history_amplitude(plus_space):
    # one full lap: three hops of phase w on top of a unit start amplitude
    assert history_amplitude(plus_space, (0, 1, 2, 0)) == 1


def test_initial_phase_carries_through(plus_space):
    assert history_amplitude(plus_space, (1, 1, 1, 1)) == root(3, 1)


def test_ground_amplitude_ignores_start_site():
    sp = space(3, 3, "ground", None)
    for shape in [(0, 1, 2, 2), (0, 0, 1, 0), (0, 2, 1, 1)]:
        amps = [
            history_amplitude(sp, tuple((start + d) % 3 for d in shape))
            for start in range(3)
        ]
        assert amps[0] == amps[1] == amps[2]


def test_amplitude_class_counts(plus_classes, ground_classes):
    w, wb = root(3, 1), root(3, 2)
    for classes in (plus_classes, ground_classes):
        counts = {}
        for c in classes.classes:
            if c.value == 1:
                counts["one"] = c.count
            elif c.value == w:
                counts["w"] = c.count
            elif c.value == wb:
                counts["wb"] = c.count
        assert counts == {"one": 9, "w": 6, "wb": 12}


def test_classes_partition_space(plus_classes):
    union = 0
    total = 0
    for c in plus_classes.classes:
        assert union & c.members == 0
        union |= c.members
        total += c.count
    assert union == plus_classes.space.universe_mask
    assert total == plus_classes.space.size


def test_one_step_ground_classes():
    classes = amplitude_classes(space(3, 1, "ground", 0))
    assert [(str(c.value), c.count) for c in classes.classes] == [("1", 1), ("z3", 2)]


def test_class_membership_differs_between_states(plus_classes, ground_classes):
    plus_one = next(c.members for c in plus_classes.classes if c.value == 1)
    ground_one = next(c.members for c in ground_classes.classes if c.value == 1)
    assert plus_one != ground_one


# -- per-history observables -----------------------------------------------------


def test_circulation_full_lap():
    assert circulation((0, 1, 2, 0), 3) == 3
    assert rest_count((0, 1, 2, 0)) == 0
    assert visited((0, 1, 2, 0)) == {0, 1, 2}


def test_circulation_resting():
    assert circulation((0, 0, 0, 0), 3) == 0
    assert rest_count((0, 0, 0, 0)) == 3
    assert visited((0, 0, 0, 0)) == {0}


def test_circulation_cancellation():
    # backward, forward, rest
    assert circulation((0, 2, 0, 0), 3) == 0
    assert rest_count((0, 2, 0, 0)) == 1


def test_half_hops_are_neutral():
    assert circulation((0, 2, 0), 4) == 0
    assert half_hop_count((0, 2, 0), 4) == 2
    assert half_hop_count((0, 1, 2), 4) == 0
    assert half_hop_count((0, 1, 2, 0), 3) == 0


def test_reflection_negates_circulation():
    sp = space(3, 3, "ground", None)
    for h in sp.histories:
        mirrored = tuple((3 - s) % 3 for s in h)
        assert circulation(mirrored, 3) == -circulation(h, 3)
        assert rest_count(mirrored) == rest_count(h)


# -- events ------------------------------------------------------------------------


def test_event_basics(plus_space):
    e = Event.from_indices(plus_space, [0, 3, 5])
    assert e.count == 3
    assert e.indices() == (0, 3, 5)
    assert e.issubset(Event.full(plus_space))
    assert Event.empty(plus_space).issubset(e)
    assert (e | e.complement()).members == plus_space.universe_mask
    assert (e & e.complement()).count == 0
    assert (e - Event.from_indices(plus_space, [3])).indices() == (0, 5)


def test_event_bounds(plus_space):
    with pytest.raises(ValueError):
        Event.from_indices(plus_space, [27])
    with pytest.raises(ValueError):
        Event(plus_space, 1 << 27)


def test_events_from_different_spaces_do_not_mix(plus_space, ground_space):
    with pytest.raises(SpaceMismatchError):
        Event.full(plus_space) | Event.full(ground_space)
