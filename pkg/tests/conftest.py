from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qhopper import (
    LatticeSpec,
    amplitude_classes,
    enumerate_histories,
    enumerate_primitive,
    initial_state,
)


@pytest.fixture(scope="session")
def spec3():
    return LatticeSpec(3, 3)


@pytest.fixture(scope="session")
def plus_space(spec3):
    return enumerate_histories(spec3, initial_state(spec3, "plus"), 0)


@pytest.fixture(scope="session")
def ground_space(spec3):
    return enumerate_histories(spec3, initial_state(spec3, "ground"), 0)


@pytest.fixture(scope="session")
def minus_space(spec3):
    return enumerate_histories(spec3, initial_state(spec3, "minus"), 0)


@pytest.fixture(scope="session")
def plus_classes(plus_space):
    return amplitude_classes(plus_space)


@pytest.fixture(scope="session")
def ground_classes(ground_space):
    return amplitude_classes(ground_space)


@pytest.fixture(scope="session")
def plus_coevents(plus_space):
    return enumerate_primitive(plus_space)


@pytest.fixture(scope="session")
def ground_coevents(ground_space):
    return enumerate_primitive(ground_space)


@pytest.fixture(scope="session")
def minus_coevents(minus_space):
    return enumerate_primitive(minus_space)


def space_family(max_histories: int = 20):
    """Every (n, T, state, final) space small enough for exhaustive oracles."""
    spaces = []
    for n in (2, 3):
        for steps in (1, 2, 3):
            spec = LatticeSpec(n, steps)
            for label in ("ground", "plus", "minus", "standing"):
                state = initial_state(spec, label)
                for final in [*range(n), None]:
                    size = n ** (steps + (1 if final is None else 0))
                    if size <= max_histories:
                        spaces.append(enumerate_histories(spec, state, final))
    return spaces
