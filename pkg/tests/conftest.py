import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fujita.qlinalg import VecQ


def vec(*xs) -> VecQ:
    return VecQ(xs)


def frac(p, q=1) -> Fraction:
    return Fraction(p, q)


@pytest.fixture
def rng():
    return random.Random(20240517)


def random_rational_vector(rng, dim, num_range=(-12, 12), den_range=(1, 7)) -> VecQ:
    return VecQ(
        [
            Fraction(rng.randint(*num_range), rng.randint(*den_range))
            for _ in range(dim)
        ]
    )


def sample_big_classes(model, rng, count, lo=-5, hi=10, max_tries=200000):
    """The seeded box sampler used by the dual-path and invariance suites:
    integer coordinate vectors in [lo, hi] filtered by interior membership."""
    from fujita.cones import Containment

    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise AssertionError("sampler exhausted; cone too thin for the box")
        v = VecQ([rng.randint(lo, hi) for _ in range(model.ns_rank)])
        if model.eff_cone.contains(v) is Containment.INSIDE:
            out.append(v)
    return out
