import random

import pytest

from algebra import FieldConfig, Poly
from polytext import parse_poly

RITTY_FACTORS = ["x^2", "x^3", "x^3 - 3*x", "x*(x+1)^2", "x^3 + x^2"]


@pytest.fixture
def Q():
    return FieldConfig()


@pytest.fixture
def poly(Q):
    def make(text, field=None):
        return parse_poly(text, field or Q)
    return make


@pytest.fixture(scope="session")
def ritt_corpus():
    """Seeded composites of 2 to 4 ritty factors, linearly related at each joint."""
    field = FieldConfig()
    factors = [parse_poly(text, field) for text in RITTY_FACTORS]
    rng = random.Random(20240611)
    corpus = []
    while len(corpus) < 200:
        f = Poly.x(field)
        for _ in range(rng.choice([2, 2, 2, 3, 3, 4])):
            joint = Poly(field, [rng.choice([-1, 0, 0, 1]), rng.choice([1, 1, -1, 2])])
            f = joint.compose(rng.choice(factors)).compose(f)
        corpus.append(f)
    return corpus
