import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hnnkit.presentation import MultipleHnnPresentation

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def bs12():
    return MultipleHnnPresentation.load(fixture_path("bs12.hnn"))


@pytest.fixture(scope="session")
def ff():
    return MultipleHnnPresentation.load(fixture_path("ff.hnn"))


@pytest.fixture(scope="session")
def two_t():
    return MultipleHnnPresentation.load(fixture_path("two_t.hnn"))


@pytest.fixture(scope="session")
def all_presentations(bs12, ff, two_t):
    return {"bs12": bs12, "ff": ff, "two_t": two_t}


class BallCache:
    """Session-wide cache of Cayley balls, keyed by (fixture name, radius)."""

    def __init__(self, presentations):
        self.presentations = presentations
        self._balls = {}

    def get(self, name: str, radius: int):
        from hnnkit.cayley import ball
        best = max((r for (n, r) in self._balls if n == name and r >= radius),
                   default=None)
        if best is not None:
            return self._balls[(name, best)]
        b = ball(self.presentations[name], radius)
        self._balls[(name, radius)] = b
        return b


@pytest.fixture(scope="session")
def balls(all_presentations):
    return BallCache(all_presentations)
