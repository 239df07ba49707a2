import pytest

from algebra import chebyshev
from decomp import Decomposition, complete_decomposition, enumerate_D_f, normalize
from errors import DomainError
from swaps import NEEDS_EXTENSION, UNDEFINED, apply_word, chebyclumps, try_ritt_swap


def test_monomial_past_sform(poly):
    d = Decomposition([poly("x*(x+1)^5"), poly("x^5")])
    result = try_ritt_swap(d, 1)
    assert result.defined
    assert result.decomposition.key() == ("x^5", "x^6 + x")
    assert result.decomposition.composite() == d.composite()


def test_equal_degrees_are_undefined(poly):
    d = Decomposition([poly("x^2 + 1"), poly("x^2")])
    result = try_ritt_swap(d, 1)
    assert result.outcome == UNDEFINED
    assert "equal degrees" in result.reason


def test_no_swap_for_generic_pair(poly):
    d = normalize([poly("x^3 + x + 1"), poly("x^2 + x")])
    assert not try_ritt_swap(d, 1).defined


def test_swap_position_checked(poly):
    d = complete_decomposition(poly("x^6"))
    with pytest.raises(DomainError) as exc:
        try_ritt_swap(d, 2)
    assert exc.value.code == "BAD_INDEX"


def test_swap_is_an_involution(poly):
    d = complete_decomposition(poly("(x^6 + x)^5"))
    there = try_ritt_swap(d, 1)
    assert there.defined
    back = try_ritt_swap(there.decomposition, 1)
    assert back.defined
    assert back.decomposition.key() == d.key()


def test_far_commutation_and_braid(poly):
    d = complete_decomposition(poly("x^210"))
    assert d.k == 4
    left = apply_word(d, [1, 3])
    right = apply_word(d, [3, 1])
    assert left.defined and right.defined
    assert left.decomposition.key() == right.decomposition.key()
    a = apply_word(d, [1, 2, 1])
    b = apply_word(d, [2, 1, 2])
    assert a.defined and b.defined
    assert a.decomposition.key() == b.decomposition.key()
    assert a.decomposition.composite() == d.composite()


def test_undefined_step_absorbs(poly):
    d = Decomposition([poly("x^2 + 1"), poly("x^2")])
    assert apply_word(d, [1, 1]).outcome == UNDEFINED


def test_word_letters_checked(poly):
    d = complete_decomposition(poly("x^6"))
    with pytest.raises(DomainError):
        apply_word(d, [0])


def test_chebyclump_of_c15():
    d = complete_decomposition(chebyshev(15))
    report = chebyclumps(d)
    assert [(c.j, c.i, c.n) for c in report.intervals] == [(2, 1, 15)]


def test_chebyclump_witnesses(poly):
    f = poly("x*(x-3)^2")
    report = chebyclumps(Decomposition([f]))
    (clump,) = report.intervals
    assert clump.n == 3
    assert clump.L(f.compose(clump.M.as_poly())) == chebyshev(3)


def test_no_chebyclump_in_monomials(poly):
    assert chebyclumps(complete_decomposition(poly("x^6"))).intervals == []


def test_swap_past_type_j_is_undefined(poly):
    d = Decomposition([poly("x^3"), poly("x^2*(x-1)^3")])
    assert not try_ritt_swap(d, 1).defined


def _comparable(a, b):
    return NEEDS_EXTENSION not in (a.outcome, b.outcome)


def test_near_action_laws_over_corpus(ritt_corpus):
    for f in ritt_corpus[::2]:
        d = normalize(complete_decomposition(f))
        for i in range(1, d.k):
            once = try_ritt_swap(d, i)
            if once.defined:
                back = try_ritt_swap(once.decomposition, i)
                assert back.defined
                assert back.decomposition.key() == d.key()
        for i in range(1, d.k):
            for j in range(i + 2, d.k):
                a, b = apply_word(d, [i, j]), apply_word(d, [j, i])
                if _comparable(a, b):
                    assert a.defined == b.defined
                if a.defined and b.defined:
                    assert a.decomposition.key() == b.decomposition.key()
        for i in range(1, d.k - 1):
            a, b = apply_word(d, [i, i + 1, i]), apply_word(d, [i + 1, i, i + 1])
            if _comparable(a, b):
                assert a.defined == b.defined
            if a.defined and b.defined:
                assert a.decomposition.key() == b.decomposition.key()


def _odd_parts(d):
    parts = []
    for clump in chebyclumps(d).intervals:
        n = clump.n
        while n % 2 == 0:
            n //= 2
        parts.append(n)
    return sorted(parts)


@pytest.mark.parametrize("f", [chebyshev(30), chebyshev(3).compose(chebyshev(2))])
def test_chebyclump_odd_part_survives_swaps(f):
    for d in enumerate_D_f(f).classes:
        before = _odd_parts(d)
        for i in range(1, d.k):
            result = try_ritt_swap(d, i)
            if result.defined:
                assert _odd_parts(result.decomposition) == before
