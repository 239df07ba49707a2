import pytest

from algebra import FieldConfig
from errors import ParseError
from polytext import parse_linear, parse_poly


def test_products_and_powers(poly):
    f = poly("x^2*(x-1)^3")
    assert f.degree == 5
    assert f.lc == 1
    assert poly("x**2") == poly("x^2")


def test_unary_minus_binds_looser_than_power(poly):
    assert poly("-x^2") == poly("0 - x^2")


def test_division_by_constant(poly):
    assert poly("(x + 1)/2") == poly("1/2*x + 1/2")
    with pytest.raises(ParseError):
        parse_poly("x / x")


@pytest.mark.parametrize("text, position", [
    ("x + s", 4),
    ("x $ 1", 2),
    ("x +", 3),
])
def test_error_positions(text, position):
    with pytest.raises(ParseError) as exc:
        parse_poly(text)
    assert exc.value.position == position
    assert "^" in str(exc.value)


def test_sqrt_symbol_needs_quadratic_field():
    f = parse_poly("s*x + 1", FieldConfig(3))
    assert f.coeff(1) == FieldConfig(3).root_d


def test_empty_input():
    with pytest.raises(ParseError):
        parse_poly("   ")


def test_parse_linear():
    assert parse_linear("2*x + 1").degree == 1
    with pytest.raises(ParseError):
        parse_linear("x^2")


@pytest.mark.parametrize("text", ["x^5", "x^3 - 3*x", "x*(x^2 + 2)^2", "1/3*x^4 - x + 7"])
def test_print_then_parse(poly, text):
    f = poly(text)
    assert poly(str(f)) == f
