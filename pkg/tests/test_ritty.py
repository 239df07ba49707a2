import random
from fractions import Fraction

import pytest

from algebra import FieldConfig, LinearMap, Poly, chebyshev
from errors import DomainError
from ritty import (CHEBYSHEV_LIKE, SFORM, TYPE_B, TYPE_C, TYPE_COJ, TYPE_J, UNSWAPPABLE,
                   TYPE_MONOMIAL, chebyshev_relation, chebyshev_u, classify,
                   hat_identity_holds, in_out_degree, monomial_relation,
                   ritty_presentations, type_c_hat_operator, type_c_hat_polynomial,
                   type_w_operator, type_w_polynomial)

TAXONOMY = [
    ("x^5", TYPE_MONOMIAL),
    ("x^3 - 3*x", TYPE_C),
    ("x^2*(x-1)^3", TYPE_J),
    ("x^2*(x^3-1)", TYPE_COJ),
    ("x*(x^2+2)^2", TYPE_B),
]


@pytest.mark.parametrize("text, verdict", TAXONOMY)
def test_worked_verdicts(poly, text, verdict):
    assert classify(poly(text)).verdict == verdict


@pytest.mark.parametrize("text, verdict", TAXONOMY)
def test_verdict_survives_linear_relating(poly, text, verdict):
    f = poly(text)
    rng = random.Random(len(text))
    for _ in range(50):
        a = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 5]))
        c = Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 3]))
        L = LinearMap(f.field, a, rng.randint(-4, 4))
        M = Poly(f.field, [rng.randint(-3, 3), c])
        assert classify(L(f.compose(M))).verdict == verdict


def test_unswappable_quartic(poly):
    verdict = classify(poly("x^4 + x^2 + x"))
    assert verdict.verdict == UNSWAPPABLE


def test_type_b_lists_every_redistribution_tried(poly):
    verdict = classify(poly("x*(x^2+2)^2"))
    assert verdict.verdict == TYPE_B
    assert set(verdict.evidence["tried"]) >= {str(poly("x^5 + 2*x")), str(poly("x*(x+2)^4"))}


def test_decomposable_input_rejected(poly):
    with pytest.raises(DomainError) as exc:
        classify(poly("x^4 + 1"))
    assert exc.value.code == "DECOMPOSABLE_INPUT"


def test_monomial_relation_witnesses(poly):
    f = poly("2*(x - 1)^3 + 5")
    form = monomial_relation(f)
    assert form.recompose(f.field) == f
    assert monomial_relation(poly("x^3 + x")) is None


def test_chebyshev_relation_in_Q(poly):
    f = poly("x^3 - 3*x^2 + 3")
    rel = chebyshev_relation(f)
    assert rel.n == 3
    assert rel.L(chebyshev(3).compose(rel.M.as_poly())) == f


def test_chebyshev_relation_needs_extension(poly):
    rel = chebyshev_relation(poly("x^3 - 6*x"))
    assert rel.L is None
    assert str(rel.witness_field) == "x^2 - 2"
    assert rel.s == 2


def test_sform_presentations_recompose(poly):
    f = poly("x^2*(x-1)^3")
    forms = [r for r in ritty_presentations(f) if r.variant == SFORM]
    assert len(forms) >= 2
    for form in forms:
        assert form.recompose(f.field) == f
        assert in_out_degree(form) == (form.l, form.n)


def test_in_out_degree_rejects_other_shapes(poly):
    form = ritty_presentations(poly("x^3 - 3*x"))[0]
    assert form.variant == CHEBYSHEV_LIKE
    with pytest.raises(DomainError) as exc:
        in_out_degree(form)
    assert exc.value.code == "NOT_SFORM"


def test_type_w_and_hat_base_case(poly):
    u, _, _ = type_w_polynomial(1)
    assert u == poly("x - 3/4")
    u, _, _ = type_c_hat_polynomial(1)
    assert u == poly("x - 3/2")


@pytest.mark.parametrize("s", range(1, 13))
def test_translation_solvers(s):
    field = FieldConfig()
    x = Poly.x(field)
    shift = Poly(field, [1, 1])
    for solver, operator in ((type_w_polynomial, type_w_operator),
                             (type_c_hat_polynomial, type_c_hat_operator)):
        u, B, u2 = solver(s)
        assert operator(s).rank() == s
        assert u.degree == s and u.lc == 1
        lhs = (x * u * u).compose(shift) + B
        if solver is type_w_polynomial:
            assert lhs == x * u2 * u2
        else:
            assert lhs == x * u2.compose(x * x)


@pytest.mark.parametrize("s", range(1, 11))
def test_chebyshev_cross_checks(s):
    x = Poly.x(FieldConfig())
    assert x * chebyshev_u(s).compose(x * x) == chebyshev(2 * s + 1)
    assert hat_identity_holds(s)


