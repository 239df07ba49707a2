"""Ritty presentations, the swap taxonomy and the translation-relation solvers."""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, gcd
from functools import reduce

import sympy as sp

from algebra import (FieldConfig, FieldElem, LinearMap, Poly, chebyshev, chebyshev_hat,
                     rational_critical_values, rescale, squarefree_multiplicities)
from config import log
from decomp import is_indecomposable
from errors import DomainError, InternalError

MONOMIAL = "Monomial"
QUADRATIC = "Quadratic"
CHEBYSHEV_LIKE = "ChebyshevLike"
SFORM = "SForm"

UNSWAPPABLE = "Unswappable"
TYPE_MONOMIAL = "Monomial"
TYPE_C = "TypeC"
TYPE_J = "TypeJ"
TYPE_COJ = "TypeCoJ"
TYPE_B = "TypeB"

UNRESOLVED_WITNESS = "UNRESOLVED_WITNESS"


def sform_poly(field, k, l, n, u):
    """x^k * u(x^l)^n."""
    return Poly.monomial(field, k) * u.compose(Poly.monomial(field, l)) ** n


@dataclass(frozen=True)
class RittyForm:
    """A ritty shape R with L o R o M = f, or the quadratic field the witnesses need."""

    variant: str
    p: int = 0
    k: int = 0
    l: int = 0
    n: int = 0
    u: Poly = None
    scale: FieldElem = None
    hat: bool = False
    L: LinearMap = None
    M: LinearMap = None
    witness_field: Poly = None

    def core(self, field):
        if self.variant in (MONOMIAL, QUADRATIC):
            return Poly.monomial(field, self.p)
        if self.variant == CHEBYSHEV_LIKE:
            return chebyshev_hat(self.p, field) if self.hat else chebyshev(self.p, field)
        return sform_poly(field, self.k, self.l, self.n, self.u)

    @property
    def has_witnesses(self):
        return self.L is not None and self.M is not None

    def recompose(self, field):
        return self.L(self.core(field).compose(self.M.as_poly()))

    def to_json(self):
        out = {"variant": self.variant}
        if self.variant == SFORM:
            out.update(k=self.k, l=self.l, n=self.n, u=self.u.to_text("y"))
        else:
            out["p"] = self.p
        if self.variant == CHEBYSHEV_LIKE:
            out.update(scale=str(self.scale), hat=self.hat)
        if self.has_witnesses:
            out.update(L=str(self.L), M=str(self.M))
        if self.witness_field is not None:
            out["witness_field"] = self.witness_field.to_text("y")
        return out


@dataclass
class SwapClass:
    verdict: str
    presentations: list = dc_field(default_factory=list)
    evidence: dict = dc_field(default_factory=dict)
    flags: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "presentations": [r.to_json() for r in self.presentations],
            "evidence": self.evidence,
            "flags": list(self.flags),
        }


def centroid(f):
    """The m that kills the x^{n-1} coefficient of f(x + m)."""
    n = f.degree
    return -f.coeff(n - 1) / (f.lc * n)


def monomial_relation(f):
    """RittyForm for f = L o x^n o M, or None."""
    if f.degree < 2:
        return None
    field = f.field
    m = centroid(f)
    shifted = f.compose(Poly(field, [m, 1]))
    if shifted - shifted.constant_term != Poly.monomial(field, f.degree, f.lc):
        return None
    variant = QUADRATIC if f.degree == 2 else MONOMIAL
    return RittyForm(variant, p=f.degree,
                     L=LinearMap(field, f.lc, f(m)), M=LinearMap(field, 1, -m))


@dataclass(frozen=True)
class ChebyshevRelation:
    n: int
    s: FieldElem
    L: LinearMap = None
    M: LinearMap = None
    witness_field: Poly = None


def chebyshev_relation(f):
    """Test L o C_n o M = f over the closure; witnesses when they lie in K.

    With M = x/nu - m/nu and s = nu^2, f(x + m) - f(m) must equal
    lc * sum_k c_k(C_n) s^((n-k)/2) x^k.
    """
    n = f.degree
    if n < 3:
        return None
    field = f.field
    m = centroid(f)
    shifted = f.compose(Poly(field, [m, 1])) - f(m)
    lc = f.lc
    s = -shifted.coeff(n - 2) / (lc * n)
    if s.is_zero:
        return None
    cheb = chebyshev(n, field)
    expected = Poly(field, [0] + [cheb.coeff(i) * s ** ((n - i) // 2) if (n - i) % 2 == 0 else 0
                                  for i in range(1, n + 1)])
    if shifted != expected.scale(lc):
        return None
    nu = field.sqrt(s)
    if nu is None:
        return ChebyshevRelation(n, s, witness_field=Poly(field, [-s, 0, 1]))
    alpha = lc * nu ** n
    beta = f(m) - alpha * cheb.constant_term
    inner = LinearMap(field, nu, m)
    return ChebyshevRelation(n, s, LinearMap(field, alpha, beta), inner.inverse())


def _chebyshev_form(f, rel):
    return RittyForm(CHEBYSHEV_LIKE, p=rel.n, scale=rel.s, L=rel.L, M=rel.M,
                     witness_field=rel.witness_field)


def candidate_centers(f):
    """Centroid plus K-rational points of K-rational critical fibers."""
    field = f.field
    found = {centroid(f)}
    if f.degree >= 2:
        for c0 in rational_critical_values(f):
            found.update(field.roots(f - c0))
    return sorted(found, key=FieldElem.sort_key)


def sform_at(f, m):
    """SForm presentation of f centered at m, or None."""
    field = f.field
    lc = f.lc
    g = (f.compose(Poly(field, [m, 1])) - f(m)).scale(lc.inverse())
    k = g.order_at_zero()
    rest = g.shift_down(k)
    if rest.is_constant:
        return None
    exps = [i for i, c in enumerate(rest.coeffs) if not c.is_zero and i > 0]
    l = reduce(gcd, exps)
    h = Poly(field, [rest.coeff(i * l) for i in range(rest.degree // l + 1)])
    parts = squarefree_multiplicities(h)
    n = reduce(gcd, [mult for _, mult in parts])
    u = Poly.const(field, 1)
    for part, mult in parts:
        u = u * part ** (mult // n)
    if gcd(k, l) != 1 or gcd(k, n) != 1 or (l == 1 and n == 1):
        return None
    if u.constant_term.is_zero:
        raise InternalError(f"S-form with u(0) = 0 for {f} at {m}")
    return RittyForm(SFORM, k=k, l=l, n=n, u=u,
                     L=LinearMap(field, lc, f(m)), M=LinearMap(field, 1, -m))


def sform_presentations(f):
    out = []
    for m in candidate_centers(f):
        form = sform_at(f, m)
        if form is not None:
            out.append(form)
    return out


def _require_indecomposable(f):
    if f.degree < 2:
        raise DomainError("DEGREE_TOO_SMALL", f"{f} has degree < 2")
    if not is_indecomposable(f):
        raise DomainError("DECOMPOSABLE_INPUT", f"{f} is decomposable")


def ritty_presentations(f):
    _require_indecomposable(f)
    mono = monomial_relation(f)
    if mono is not None:
        return [mono]
    out = []
    rel = chebyshev_relation(f)
    if rel is not None:
        out.append(_chebyshev_form(f, rel))
    out.extend(sform_presentations(f))
    return out


def is_type_j(f):
    """At least two distinct K-rational centers carry an S-form."""
    return len(sform_presentations(f)) >= 2


def _coj_candidates(form, field):
    """Every other split of l * n keeping x^k coprime to both parts."""
    total = form.l * form.n
    for n2 in range(1, total + 1):
        if total % n2 or n2 == form.n:
            continue
        l2 = total // n2
        if gcd(form.k, n2) != 1 or gcd(form.k, l2) != 1:
            continue
        yield l2, n2, sform_poly(field, form.k, l2, n2, form.u)


def classify(f):
    """Taxonomy verdict with evidence."""
    _require_indecomposable(f)
    field = f.field
    mono = monomial_relation(f)
    if mono is not None:
        return SwapClass(TYPE_MONOMIAL, [mono], {"degree": f.degree})

    flags = []
    n = f.degree
    rel = chebyshev_relation(f)
    forms = sform_presentations(f)
    if rel is not None and n % 2 == 1 and sp.isprime(n):
        if rel.L is None:
            flags.append(UNRESOLVED_WITNESS)
            log("WARNING", f"Chebyshev witnesses for {f} need {rel.witness_field.to_text('y')} = 0")
        return SwapClass(TYPE_C, [_chebyshev_form(f, rel)] + forms,
                         {"n": n, "s": str(rel.s)}, flags)

    if len(forms) >= 2:
        centers = [str(-r.M.b) for r in forms]
        return SwapClass(TYPE_J, forms, {"centers": centers})

    tried = []
    for form in forms:
        for l2, n2, candidate in _coj_candidates(form, field):
            if is_indecomposable(candidate) and is_type_j(candidate):
                return SwapClass(TYPE_COJ, forms,
                                 {"reached": str(candidate), "l": l2, "n": n2})
            tried.append(str(candidate))

    if forms:
        return SwapClass(TYPE_B, forms, {"tried": tried})
    return SwapClass(UNSWAPPABLE, [], {"centers_tried": [str(m) for m in candidate_centers(f)]})


def in_out_degree(form):
    if form.variant != SFORM:
        raise DomainError("NOT_SFORM", f"{form.variant} has no in/out degree")
    return form.l, form.n


# --- translation-relation solvers ---

def _monic_kernel_vector(matrix, s, label):
    if matrix.rank() != s:
        raise InternalError(f"{label}: operator rank {matrix.rank()} != {s}")
    kernel = matrix.nullspace()
    if len(kernel) != 1 or kernel[0][s] == 0:
        raise InternalError(f"{label}: solution space is not a monic line")
    vec = kernel[0] / kernel[0][s]
    return [sp.Rational(vec[i]) for i in range(s + 1)]


def type_w_operator(s):
    """Matrix of (2s^2+2s)Y + (3-4z)Y' + 2(z-z^2)Y'' on the basis 1, z, ..., z^s."""
    mat = sp.zeros(s + 1, s + 1)
    for i in range(s + 1):
        mat[i, i] = (2 * s * s + 2 * s) - (2 * i * i + 2 * i)
        if i >= 1:
            mat[i - 1, i] = i * (2 * i + 1)
    return mat


def type_w_polynomial(s):
    """(u, B, u2) with (+B) o (x u(x)^2) o (+1) = x u2(x)^2."""
    if s < 1:
        raise DomainError("BAD_INDEX", "s must be positive")
    field = FieldConfig()
    u = Poly(field, _monic_kernel_vector(type_w_operator(s), s, "type W"))
    shift = Poly(field, [1, 1])
    u2 = (u.compose(shift) + (shift * u.derivative().compose(shift)).scale(2)).scale(
        Fraction(1, 2 * s + 1))
    B = -(u(1) ** 2)
    x = Poly.x(field)
    lhs = (x * u * u).compose(shift) + B
    if lhs != x * u2 * u2:
        raise InternalError(f"type W identity fails at s = {s}")
    return u, B, u2


def type_c_hat_operator(s):
    """Matrix of u(z) + 2z u'(z) - (2s+1)(-1)^s u(2-z) on the basis 1, z, ..., z^s."""
    sign = -1 if s % 2 else 1
    mat = sp.zeros(s + 1, s + 1)
    for i in range(s + 1):
        for j in range(i + 1):
            entry = -(2 * s + 1) * sign * comb(i, j) * 2 ** (i - j) * (-1) ** j
            if i == j:
                entry += 1 + 2 * i
            mat[j, i] = entry
    return mat


def type_c_hat_polynomial(s):
    """(u, B, u2) with (+B) o (x u(x)^2) o (+1) = x u2(x^2)."""
    if s < 1:
        raise DomainError("BAD_INDEX", "s must be positive")
    field = FieldConfig()
    u = Poly(field, _monic_kernel_vector(type_c_hat_operator(s), s, "type C hat"))
    shift = Poly(field, [1, 1])
    B = -(u(1) ** 2)
    x = Poly.x(field)
    lhs = (x * u * u).compose(shift) + B
    if not lhs.constant_term.is_zero:
        raise InternalError(f"type C hat: x does not divide the shifted form at s = {s}")
    quotient = lhs.shift_down(1)
    if any(not quotient.coeff(i).is_zero for i in range(1, quotient.degree + 1, 2)):
        raise InternalError(f"type C hat: odd part survives at s = {s}")
    u2 = Poly(field, [quotient.coeff(2 * i) for i in range(quotient.degree // 2 + 1)])
    if lhs != x * u2.compose(x * x):
        raise InternalError(f"type C hat identity fails at s = {s}")
    return u, B, u2


def chebyshev_u(s, field=None):
    """U with x * U(x^2) = C_{2s+1}."""
    field = field or FieldConfig()
    c = chebyshev(2 * s + 1, field).shift_down(1)
    return Poly(field, [c.coeff(2 * i) for i in range(s + 1)])


def hat_identity_holds(s):
    """x u2(x^2) from the C-hat solver is 2 * C_{2s+1}."""
    field = FieldConfig()
    _, _, u2 = type_c_hat_polynomial(s)
    x = Poly.x(field)
    return x * u2.compose(x * x) == rescale(2, chebyshev(2 * s + 1, field))
