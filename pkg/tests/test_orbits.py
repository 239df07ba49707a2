from fractions import Fraction

import pytest
import sympy as sp

from errors import DomainError
from orbits import (CONTAINED_IN, DENSE_UP_TO, EXACT, MODULAR, construct_dense_point,
                    density_test, monomials, orbit, random_prime, subsample)

P = 1000003


def test_exact_orbit(poly):
    sample = orbit([poly("x^2 + 1")], [0], 4, EXACT)
    assert [str(pt[0]) for pt in sample.points] == ["0", "1", "2", "5", "26"]
    assert sample.mode == EXACT


def test_nonlinear_orbit_defaults_to_modular(poly):
    sample = orbit([poly("x^2 + 1")], [1], 30)
    assert sample.mode == MODULAR
    assert sp.isprime(sample.prime)
    assert sample.prime >= 2 ** 29
    assert orbit([poly("x^2 + 1")], [1], 3).mode == MODULAR


def test_linear_orbit_defaults_to_exact(poly):
    assert orbit([poly("2*x"), poly("3*x")], [1, 1], 30).mode == EXACT


def test_prime_selects_modular(poly):
    sample = orbit([poly("2*x")], [1], 3, prime=101)
    assert sample.mode == MODULAR
    assert sample.points[-1] == (8,)


def test_modular_orbit(poly):
    sample = orbit([poly("x^2 + 1")], [0], 5, MODULAR, 101)
    assert sample.points[-1] == (71,)
    assert sample.prime == 101


def test_modular_denominator_collision(poly):
    with pytest.raises(DomainError) as exc:
        orbit([poly("x^2 + 1")], [Fraction(1, 101)], 3, MODULAR, 101)
    assert exc.value.code == "DENOMINATOR_COLLISION"


def test_orbit_arity_checked(poly):
    with pytest.raises(DomainError) as exc:
        orbit([poly("2*x")], [1, 1], 3)
    assert exc.value.code == "BAD_INDEX"


def test_random_prime_size():
    p = random_prime(20)
    assert sp.isprime(p)
    assert 2 ** 19 <= p


def test_monomial_order():
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_independent_scalings_are_dense(poly):
    sample = orbit([poly("2*x"), poly("3*x")], [1, 1], 10)
    verdict = density_test(sample, 2)
    assert verdict.kind == DENSE_UP_TO
    assert verdict.certified


def test_modular_density(poly):
    sample = orbit([poly("2*x"), poly("3*x")], [1, 1], 19, MODULAR, P)
    assert len(sample.points) == 20
    verdict = density_test(sample, 4)
    assert verdict.kind == DENSE_UP_TO
    assert not verdict.certified
    assert verdict.prime == P


def test_dependent_scalings_found(poly):
    sample = orbit([poly("2*x"), poly("4*x")], [1, 1], 8)
    verdict = density_test(sample, 2)
    assert verdict.kind == CONTAINED_IN
    assert verdict.equation == "x1^2 - x2 = 0"
    assert verdict.kernel_dimension == 1


def test_fixed_point_orbit(poly):
    sample = orbit([poly("2*x - 1")], [1], 3)
    verdict = density_test(sample, 1)
    assert verdict.kind == CONTAINED_IN
    assert verdict.equation == "x1 - 1 = 0"


def test_insufficient_points(poly):
    sample = orbit([poly("2*x"), poly("3*x")], [1, 1], 2)
    with pytest.raises(DomainError) as exc:
        density_test(sample, 2)
    assert exc.value.code == "INSUFFICIENT_POINTS"


def test_subsample(poly):
    sample = orbit([poly("x + 1")], [0], 9)
    every_other = subsample(sample, 2, 1)
    assert [str(pt[0]) for pt in every_other.points] == ["1", "3", "5", "7", "9"]
    assert (every_other.step, every_other.offset) == (2, 1)
    with pytest.raises(DomainError):
        subsample(sample, 0)


def test_dense_point_single_map(poly):
    dense = construct_dense_point([poly("x^2")])
    assert [str(c) for c in dense.point] == ["3"]


def test_dense_point_fresh_primes(poly):
    dense = construct_dense_point([poly("x^2"), poly("x^2 - 1")])
    assert [str(c) for c in dense.point] == ["3", "1/5"]
    assert dense.audit["fresh_primes"] == [5]
    assert dense.audit["height_bound"] == 3


@pytest.mark.parametrize("maps", [["2*x", "4*x"], ["x"], ["x + 1", "x + 2"]])
def test_dependent_linear_maps_rejected(poly, maps):
    with pytest.raises(DomainError) as exc:
        construct_dense_point([poly(m) for m in maps])
    assert exc.value.code == "INDEPENDENCE_FAILED"


def test_dense_point_orbit_is_dense(poly):
    maps = [poly("x^2"), poly("x^2 - 1")]
    dense = construct_dense_point(maps)
    sample = orbit(maps, dense.point, 30, MODULAR, P)
    assert density_test(sample, 3).kind == DENSE_UP_TO
