import random
from fractions import Fraction

import pytest

from qjd import make_params


@pytest.fixture(scope="session")
def base_params():
    """Reference parameter set used across suites: small q keeps tail bounds certified."""
    return make_params(
        Fraction(1, 4), Fraction(1, 5), Fraction(1, 2), Fraction(-1, 3),
        Fraction(1, 2), Fraction(5, 16),
    )


@pytest.fixture(scope="session")
def sim_params():
    """Larger q for simulation suites: the window then mixes within the event budget."""
    return make_params(
        Fraction(2, 3), Fraction(1, 5), Fraction(1, 2), Fraction(-1, 3),
        Fraction(1, 2), Fraction(5, 16),
    )


def random_params(rng: random.Random):
    """A random admissible parameter tuple (0 < q, t < 1, b < 0 < a, conjugate pair)."""
    q = Fraction(rng.randint(1, 9), rng.randint(10, 24))
    t = Fraction(rng.randint(1, 9), rng.randint(10, 24))
    a = Fraction(rng.randint(1, 6), rng.randint(1, 6))
    b = -Fraction(rng.randint(1, 6), rng.randint(1, 6))
    s1 = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    s2 = s1 * s1 / 4 + Fraction(rng.randint(1, 6), rng.randint(2, 8))
    return make_params(q, t, a, b, s1, s2)


def random_partition(rng: random.Random, max_size: int, max_length: int):
    size = rng.randint(0, max_size)
    parts = []
    remaining = size
    while remaining > 0 and len(parts) < max_length:
        hi = remaining if not parts else min(parts[-1], remaining)
        p = rng.randint(1, hi)
        parts.append(p)
        remaining -= p
    if remaining > 0:  # could not fit; retry smaller
        return random_partition(rng, max_size - 1, max_length)
    return tuple(parts)
