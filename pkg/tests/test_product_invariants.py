import pytest

from algebra import FieldConfig, Poly
from errors import DomainError
from product_invariants import (CHEBYSHEV_CONJUGATE, LINEAR, MONOMIAL_CONJUGATE, TRIVIAL,
                                UNRESOLVED_WITNESS, classify_coordinate, conjugation_holds,
                                invariant_skeleton, is_invariant_subtorus,
                                linear_block_skeleton, multiplicative_relations)
from skew import format_curve, implicit_equation, verify_correspondence


@pytest.mark.parametrize("text, verdict, n", [
    ("2*x + 1", LINEAR, 1),
    ("x^2", MONOMIAL_CONJUGATE, 2),
    ("(x - 1)^3 + 1", MONOMIAL_CONJUGATE, 3),
    ("x^3 - 3*x^2 + 3", CHEBYSHEV_CONJUGATE, 3),
    ("x*(1 + x^3)^2", TRIVIAL, 7),
])
def test_classify_coordinate(poly, text, verdict, n):
    cls = classify_coordinate(poly(text))
    assert (cls.verdict, cls.n) == (verdict, n)
    if verdict in (MONOMIAL_CONJUGATE, CHEBYSHEV_CONJUGATE):
        assert conjugation_holds(poly(text), cls)


def test_conjugate_only_over_closure(poly):
    cls = classify_coordinate(poly("2*x^3"))
    assert cls.verdict == MONOMIAL_CONJUGATE
    assert cls.L is None
    assert UNRESOLVED_WITNESS in cls.flags
    assert not conjugation_holds(poly("2*x^3"), cls)


def test_constant_coordinate_rejected(poly):
    with pytest.raises(DomainError) as exc:
        classify_coordinate(poly("5"))
    assert exc.value.code == "DEGREE_TOO_SMALL"


@pytest.mark.parametrize("values, relations, rank", [
    ((2, 3), [], 2),
    ((2, 4), [(2, -1)], 1),
    ((6, 10, 15), [], 3),
    ((-1,), [(2,)], 0),
    ((-2, 2), [(2, -2)], 1),
])
def test_multiplicative_relations(values, relations, rank):
    found = multiplicative_relations(values)
    assert found.rank == rank
    assert found.relations == relations
    assert found.independent == (not relations)


def test_multiplicative_relations_errors():
    with pytest.raises(DomainError) as exc:
        multiplicative_relations([0])
    assert exc.value.code == "ZERO_SCALAR"
    with pytest.raises(DomainError) as exc:
        multiplicative_relations([FieldConfig(2).root_d])
    assert exc.value.code == "UNSUPPORTED_FIELD"


def test_independent_scalings(poly):
    skeleton = linear_block_skeleton([poly("2*x"), poly("3*x")])
    assert skeleton.rank == 2
    assert skeleton.hyperplanes == ["x1 = 0", "x2 = 0"]
    assert skeleton.characters == []


def test_dependent_scalings(poly):
    skeleton = linear_block_skeleton([poly("2*x"), poly("4*x")])
    assert skeleton.rank == 1
    assert skeleton.characters == ["x1^2*x2^-1 = c"]


def test_translations_and_fixed_points(poly):
    assert linear_block_skeleton([poly("x + 1")]).rank == 1
    skeleton = linear_block_skeleton([poly("2*x + 2")])
    assert skeleton.hyperplanes == ["x1 = -2"]
    skeleton = linear_block_skeleton([poly("x + 1"), poly("x + 2")])
    assert skeleton.rank == 1
    assert skeleton.translation_relations == ["-2*x1 + x2 = c"]
    assert linear_block_skeleton([poly("x")]).identities == [1]


def test_linear_block_needs_rational_maps(poly):
    field = FieldConfig(2)
    with pytest.raises(DomainError) as exc:
        linear_block_skeleton([Poly(field, [0, field.root_d])])
    assert exc.value.code == "UNSUPPORTED_FIELD"


def test_invariant_subtorus():
    assert is_invariant_subtorus([2, 2], [1, -1], 1)
    assert not is_invariant_subtorus([2, 3], [1, 1], 1)
    assert not is_invariant_subtorus([2, 2], [1, 1], 0)
    assert not is_invariant_subtorus([2], [1], -1)
    assert is_invariant_subtorus([3], [1], -1)


def test_skeleton_blocks(poly):
    maps = [poly("2*x"), poly("x^2"), poly("x*(1 + x^3)^2")]
    skeleton = invariant_skeleton(maps, bound=3)
    assert skeleton.blocks == {"linear": [1], "group": [2], "trivial": [3]}
    assert skeleton.linear.hyperplanes == ["x1 = 0"]
    curves = skeleton.trivial_curves[(3, 3)]
    assert [format_curve(implicit_equation(c)[0]) for c in curves] == ["x - y = 0"]


def test_group_points_without_cross_curves(poly):
    skeleton = invariant_skeleton([poly("x^2"), poly("x^3")], bound=3)
    assert {p["equation"] for p in skeleton.group_points} == {
        "x1 = 0", "x1 = 1", "x2 = 0", "x2 = 1", "x2 = -1"}
    assert skeleton.group_curves == []


def test_group_pair_curves(poly):
    skeleton = invariant_skeleton([poly("x^2"), poly("x^2")], bound=2)
    pairs = [g["correspondence"] for g in skeleton.group_curves]
    assert all(verify_correspondence(c) for c in pairs)
    assert any(c.pi == c.rho == Poly.x(c.f.field) for c in pairs)
    assert all(g["pair"] == [1, 2] for g in skeleton.group_curves)


def test_skeleton_json(poly):
    out = invariant_skeleton([poly("x + 1"), poly("x^2")], bound=2).to_json()
    assert out["blocks"]["linear"] == [1]
    assert out["linear"]["rank"] == 1
    assert out["trivial"] == {}
