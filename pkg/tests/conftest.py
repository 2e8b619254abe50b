import random

import pytest

from txreach.pointset import PointSet, build_point_set


def random_instance_1d(rng: random.Random, n: int, psi: float, box: float) -> PointSet:
    """Random 1D instance with radii in [1, psi], 6-decimal coordinates."""
    raw = []
    for _ in range(n):
        x = round(rng.uniform(0, box), 6)
        r = round(rng.uniform(1.0, psi), 6)
        raw.append((x, max(r, 1.0)))
    return build_point_set(raw, 1)


def random_instance_2d(rng: random.Random, n: int, psi: float, box: float) -> PointSet:
    raw = []
    for _ in range(n):
        x = round(rng.uniform(0, box), 6)
        y = round(rng.uniform(0, box), 6)
        r = round(rng.uniform(1.0, psi), 6)
        raw.append(((x, y), max(r, 1.0)))
    return build_point_set(raw, 2)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
