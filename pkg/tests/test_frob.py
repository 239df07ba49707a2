import random

import pytest

from errors import DomainError
from frob import (ZqContext, _horner, _ring_coeffs, default_modulus, frobenius,
                  frobenius_power, lift_sharp_points, lift_sharp_points_product,
                  periodic_capture_check)


def test_default_modulus():
    assert default_modulus(3, 1) == (0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)
    with pytest.raises(DomainError) as exc:
        default_modulus(4, 1)
    assert exc.value.code == "BAD_FIELD"


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        ZqContext(2, 2, 3, (1, 0, 1))


def test_frobenius_on_t():
    ctx = ZqContext(2, 2, 4)
    assert ctx.sigma_t == ctx.elem([-1, -1])
    assert frobenius(ctx, ctx.t) == ctx.elem([-1, -1])
    for x in ctx.residues():
        assert frobenius_power(ctx, x, 2) == x


def test_inverse():
    ctx = ZqContext(3, 2, 5)
    x = ctx.elem([2, 1])
    assert x * x.inverse() == ctx.one
    with pytest.raises(DomainError):
        ctx.elem([3, 0]).inverse()


def test_teichmuller_lifts(poly):
    ctx = ZqContext(5, 1, 3)
    points = lift_sharp_points(ctx, poly("x^5"))
    assert [x.coords[0] for x in points] == [0, 1, 57, 68, 124]


def test_lifts_of_x3_plus_3x(poly):
    ctx = ZqContext(3, 1, 4)
    f = poly("x^3 + 3*x")
    points = lift_sharp_points(ctx, f)
    coeffs = _ring_coeffs(ctx, f)
    assert len(points) == 3
    assert {x.reduce().coords for x in points} == {(0,), (1,), (2,)}
    assert all(_horner(ctx, coeffs, x) == x for x in points)


def _random_lift(rng, p, e):
    """x^(p^j) plus p times a small random polynomial."""
    j = rng.randint(1, e)
    N = p ** j
    coeffs = [p * rng.randint(-3, 3) for _ in range(N)] + [1]
    return coeffs, j


@pytest.mark.parametrize("p, e, m", [(3, 1, 4), (5, 1, 3), (7, 1, 3), (2, 2, 4)])
def test_random_lifts(p, e, m):
    ctx = ZqContext(p, e, m)
    rng = random.Random(p * 10 + e)
    for _ in range(4):
        coeffs, j = _random_lift(rng, p, e)
        ring = _ring_coeffs(ctx, coeffs)
        points = lift_sharp_points(ctx, coeffs)
        assert len(points) == ctx.q
        assert len({x.reduce().coords for x in points}) == ctx.q
        for x in points:
            assert _horner(ctx, ring, x) == frobenius_power(ctx, x, j)


def test_second_power_of_frobenius():
    ctx = ZqContext(2, 2, 4)
    coeffs = [2, 0, 2, 0, 1]
    points = lift_sharp_points(ctx, coeffs, j=2)
    ring = _ring_coeffs(ctx, coeffs)
    assert len(points) == 4
    assert all(_horner(ctx, ring, x) == x for x in points)
    with pytest.raises(DomainError):
        lift_sharp_points(ctx, coeffs, j=1)


def test_precision_refines(poly):
    f = poly("x^3 + 3*x + 3")
    coarse = lift_sharp_points(ZqContext(3, 1, 3), f)
    fine = lift_sharp_points(ZqContext(3, 1, 6), f)
    assert sorted(x.coords[0] % 27 for x in fine) == sorted(x.coords[0] for x in coarse)


def test_brute_force_agrees(poly):
    f = poly("x^3 + 3*x + 3")
    points = lift_sharp_points(ZqContext(3, 1, 3), f)
    brute = [x for x in range(27) if (x ** 3 + 3 * x + 3 - x) % 27 == 0]
    assert [x.coords[0] for x in points] == brute


def test_not_a_frobenius_lift(poly):
    ctx = ZqContext(3, 1, 3)
    for text in ("x^2", "x^3 + x", "2*x^3"):
        with pytest.raises(DomainError) as exc:
            lift_sharp_points(ctx, poly(text))
        assert exc.value.code == "NOT_FROBENIUS_LIFT"


def test_denominator_collision(poly):
    with pytest.raises(DomainError) as exc:
        lift_sharp_points(ZqContext(3, 1, 3), poly("x^3 + 1/3"))
    assert exc.value.code == "DENOMINATOR_COLLISION"


def test_product_lifts(poly):
    ctx = ZqContext(5, 1, 3)
    points = lift_sharp_points_product(ctx, [poly("x^5"), poly("x^5")])
    assert len(points) == 25


@pytest.mark.parametrize("p, text, M, m, count", [
    (5, "x^5", 2, 3, 25),
    (3, "x^3 + 3*x", 2, 4, 9),
])
def test_periodic_capture(poly, p, text, M, m, count):
    report = periodic_capture_check(p, poly(text), M, m)
    assert len(report.points) == count
    assert report.periodic == count
    assert report.violations == []
