"""Exact arithmetic over K = Q or Q(sqrt d) with an optional involution.

Everything here is immutable. Polynomials are dense tuples of FieldElem,
lowest degree first. Factorization, resultants and squarefree parts are
delegated to sympy over ``QQ`` or ``QQ.algebraic_field(sqrt(d))``.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy as sp
from sympy import QQ

from errors import DomainError, InternalError

IDENTITY = "id"
CONJUGATION = "conj"

X = sp.Symbol("x")
T = sp.Symbol("t")


def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot read {value!r} as a rational")


@lru_cache(maxsize=None)
def _sympy_domain(d):
    if d == 1:
        return QQ
    return QQ.algebraic_field(sp.sqrt(d))


@dataclass(frozen=True)
class FieldConfig:
    """K = Q (d = 1) or Q(sqrt d), with sigma the identity or conjugation."""

    d: int = 1
    sigma: str = IDENTITY

    def __post_init__(self):
        if self.d == 0:
            raise DomainError("BAD_FIELD", "d must be nonzero")
        if abs(self.d) > 1 and any(e > 1 for e in sp.factorint(abs(self.d)).values()):
            raise DomainError("BAD_FIELD", f"d = {self.d} is not squarefree")
        if self.sigma not in (IDENTITY, CONJUGATION):
            raise DomainError("BAD_FIELD", f"unknown sigma {self.sigma!r}")
        if self.sigma == CONJUGATION and self.d == 1:
            raise DomainError("BAD_FIELD", "conjugation needs d != 1")

    @property
    def is_rational(self):
        return self.d == 1

    @property
    def domain(self):
        return _sympy_domain(self.d)

    def elem(self, a, b=0):
        return FieldElem(to_fraction(a), to_fraction(b), self.d)

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    @property
    def root_d(self):
        if self.d == 1:
            raise DomainError("UNSUPPORTED_FIELD", "s denotes sqrt(d); d = 1 has no s")
        return self.elem(0, 1)

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.d != self.d and not value.is_rational:
                raise DomainError("FIELD_MISMATCH", f"{value} is not in Q(sqrt {self.d})")
            return FieldElem(value.a, value.b, self.d)
        return self.elem(value)

    def apply_sigma(self, value, power=1):
        if self.sigma == IDENTITY or power % 2 == 0:
            return value
        return value.conj()

    # --- sympy bridge ---
    def to_domain(self, value):
        value = self.coerce(value)
        K = self.domain
        if self.d == 1:
            return QQ(value.a.numerator, value.a.denominator)
        return K([QQ(value.b.numerator, value.b.denominator),
                  QQ(value.a.numerator, value.a.denominator)])

    def from_domain(self, element):
        if self.d == 1:
            return self.elem(to_fraction(element))
        parts = [to_fraction(c) for c in element.to_list()]
        parts = [Fraction(0)] * (2 - len(parts)) + parts
        return self.elem(parts[1], parts[0])

    def from_sympy(self, expr):
        return self.from_domain(self.domain.from_sympy(sp.sympify(expr)))

    def roots(self, poly):
        """All roots of `poly` lying in K, with multiplicity dropped, sorted."""
        if poly.degree < 1:
            return []
        found = set()
        for factor, _ in poly.to_sympy_poly().factor_list()[1]:
            if factor.degree() == 1:
                c1, c0 = factor.rep.to_list()
                found.add(self.from_domain(self.domain.quo(-c0, c1)))
        return sorted(found, key=FieldElem.sort_key)

    def nth_roots(self, value, n):
        value = self.coerce(value)
        if value.is_zero:
            return [self.zero]
        return self.roots(Poly.monomial(self, n) - Poly.const(self, value))

    def sqrt(self, value):
        """A square root in K, preferring the one with positive leading part."""
        found = self.nth_roots(value, 2)
        if not found:
            return None
        return max(found, key=FieldElem.sort_key)


@dataclass(frozen=True, eq=False)
class FieldElem:
    a: Fraction
    b: Fraction
    d: int = 1

    def _lift(self, other):
        if isinstance(other, FieldElem):
            if other.d != self.d:
                if other.is_rational:
                    return FieldElem(other.a, other.b, self.d)
                if self.is_rational:
                    return other
                raise DomainError("FIELD_MISMATCH", f"{self} and {other}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _promote(self, other):
        if self.d != other.d and self.is_rational:
            return FieldElem(self.a, self.b, other.d)
        return self

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        me = self._promote(other)
        return FieldElem(me.a + other.a, me.b + other.b, me.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        me = self._promote(other)
        d = me.d
        return FieldElem(me.a * other.a + d * me.b * other.b,
                         me.a * other.b + me.b * other.a, d)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise DomainError("ZERO_SCALAR", "division by zero in K")
        return FieldElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElem(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    @property
    def is_zero(self):
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self):
        return self.b == 0

    def conj(self):
        return FieldElem(self.a, -self.b, self.d)

    def sort_key(self):
        return (self.a, self.b)

    def to_sympy(self):
        value = sp.Rational(self.a.numerator, self.a.denominator)
        if self.b:
            value += sp.Rational(self.b.numerator, self.b.denominator) * sp.sqrt(self.d)
        return value

    def bit_size(self):
        return max(abs(self.a.numerator).bit_length() + self.a.denominator.bit_length(),
                   abs(self.b.numerator).bit_length() + self.b.denominator.bit_length())

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"FieldElem({self})"


def _rational_text(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c):
    if c.is_rational:
        return _rational_text(c.a)
    if c.a == 0:
        if c.b == 1:
            return "s"
        if c.b == -1:
            return "-s"
        return f"{_rational_text(c.b)}*s"
    sign = "+" if c.b > 0 else "-"
    b = abs(c.b)
    tail = "s" if b == 1 else f"{_rational_text(b)}*s"
    return f"({_rational_text(c.a)} {sign} {tail})"


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Dense univariate polynomial over K, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = _strip(field.coerce(c) for c in coeffs)

    # --- constructors ---
    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, n, c=1):
        return cls(field, [0] * n + [c])

    @classmethod
    def from_ints(cls, field, coeffs):
        return cls(field, coeffs)

    # --- basic properties ---
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    @property
    def constant_term(self):
        return self.coeff(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, FieldElem)):
            return self.coeffs == Poly.const(self.field, other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # --- ring operations ---
    def _wrap(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, other)

    def __add__(self, other):
        other = self._wrap(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def scale(self, c):
        c = self.field.coerce(c)
        return Poly(self.field, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return Poly(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, divisor):
        if divisor.is_zero:
            raise DomainError("ZERO_SCALAR", "polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        inv = divisor.lc.inverse()
        quot = [self.field.zero] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * inv
            if c.is_zero:
                continue
            quot[i - dd] = c
            for j, b in enumerate(divisor.coeffs):
                rem[i - dd + j] = rem[i - dd + j] - c * b
        return Poly(self.field, quot), Poly(self.field, rem[:dd] if dd > 0 else [])

    def __call__(self, value):
        if isinstance(value, Poly):
            return self.compose(value)
        value = self.field.coerce(value)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, inner):
        """Return self(inner(x))."""
        acc = Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self):
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        return self.scale(self.lc.inverse())

    def apply_sigma(self, power=1):
        if self.field.sigma == IDENTITY or power % 2 == 0:
            return self
        return Poly(self.field, [c.conj() for c in self.coeffs])

    def order_at_zero(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                return i
        return -1

    def shift_down(self, k):
        """Divide by x^k; the low coefficients must vanish."""
        return Poly(self.field, self.coeffs[k:])

    def max_bit_size(self):
        return max((c.bit_size() for c in self.coeffs), default=0)

    # --- sympy bridge ---
    def to_sympy(self, gen=X):
        return sp.Add(*[c.to_sympy() * gen ** i for i, c in enumerate(self.coeffs)])

    def to_sympy_poly(self, gen=X):
        rep = [self.field.to_domain(c) for c in reversed(self.coeffs)] or [self.field.to_domain(0)]
        return sp.Poly.from_list(rep, gen, domain=self.field.domain)

    @classmethod
    def from_sympy_poly(cls, field, poly):
        return cls(field, [field.from_domain(c) for c in reversed(poly.rep.to_list())])

    def to_text(self, var="x"):
        return format_poly(self, var)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self})"


def format_poly(f, var="x"):
    if f.is_zero:
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeffs[i]
        if c.is_zero:
            continue
        negative = (c.is_rational and c.a < 0) or (c.a == 0 and c.b < 0)
        mag = -c if negative else c
        if i == 0:
            body = format_scalar(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{format_scalar(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class LinearMap:
    """x -> a*x + b over K."""

    field: FieldConfig
    a: FieldElem
    b: FieldElem

    def __post_init__(self):
        object.__setattr__(self, "a", self.field.coerce(self.a))
        object.__setattr__(self, "b", self.field.coerce(self.b))
        if self.a.is_zero:
            raise DomainError("ZERO_SCALAR", "linear map with a = 0")

    @classmethod
    def identity(cls, field):
        return cls(field, 1, 0)

    @classmethod
    def translation(cls, field, c):
        return cls(field, 1, c)

    @classmethod
    def scaling(cls, field, c):
        return cls(field, c, 0)

    @classmethod
    def from_poly(cls, p):
        if p.degree != 1:
            raise DomainError("DEGREE_TOO_SMALL", f"{p} is not linear")
        return cls(p.field, p.coeff(1), p.coeff(0))

    @property
    def is_identity(self):
        return self.a == 1 and self.b.is_zero

    @property
    def is_scaling(self):
        return self.b.is_zero

    @property
    def is_translation(self):
        return self.a == 1

    def as_poly(self):
        return Poly(self.field, [self.b, self.a])

    def __call__(self, value):
        if isinstance(value, Poly):
            return value.scale(self.a) + self.b
        return self.a * value + self.b

    def compose(self, other):
        """self after other."""
        return LinearMap(self.field, self.a * other.a, self.a * other.b + self.b)

    def inverse(self):
        inv = self.a.inverse()
        return LinearMap(self.field, inv, -self.b * inv)

    def apply_sigma(self, power=1):
        return LinearMap(self.field, self.field.apply_sigma(self.a, power),
                         self.field.apply_sigma(self.b, power))

    def __str__(self):
        return format_poly(self.as_poly())


# --- core operations ---

def compose(outer, inner):
    return outer.compose(inner)


def compose_all(factors):
    """Compose an outermost-first sequence of factors."""
    factors = list(factors)
    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = f.compose(result)
    return result


def rescale(c, f):
    """c * f := f(c x) / c^deg f."""
    c = f.field.coerce(c)
    if c.is_zero:
        raise DomainError("ZERO_SCALAR", "rescale by zero")
    if f.degree < 1:
        raise DomainError("DEGREE_TOO_SMALL", "rescale needs a nonconstant polynomial")
    return f.compose(Poly(f.field, [0, c])).scale((c ** f.degree).inverse())


def base_expansion(f, h):
    """Digits c_i with f = sum c_i h^i and deg c_i < deg h."""
    if h.degree < 1:
        raise DomainError("DEGREE_TOO_SMALL", "base polynomial must be nonconstant")
    digits = []
    rest = f
    while not rest.is_zero:
        rest, digit = rest.divmod(h)
        digits.append(digit)
    return digits or [Poly(f.field, [])]


def expansion_outer(f, h):
    """The g with f = g(h) when every digit is constant, else None."""
    digits = base_expansion(f, h)
    if any(not d.is_constant for d in digits):
        return None
    return Poly(f.field, [d.constant_term for d in digits])


def approximate_root(f, r):
    """Monic zero-constant h with deg h = deg f / r and (f/lc) - h^r of low degree."""
    n = f.degree
    if r < 1 or n % r:
        raise DomainError("BAD_INDEX", f"{r} does not divide deg {n}")
    e = n // r
    target = f.monic()
    h = Poly.monomial(f.field, e)
    for j in range(1, e):
        residual = target - h ** r
        c = residual.coeff(n - j) / r
        h = h + Poly.monomial(f.field, e - j, c)
    return h


def left_divisors(outer, target):
    """Every r with outer(r) = target, largest leading coefficient first."""
    m, big = outer.degree, target.degree
    if m < 1 or big % m:
        return
    n = big // m
    field = target.field
    leads = field.nth_roots(target.lc / outer.lc, m)
    for lead in sorted(leads, key=FieldElem.sort_key, reverse=True):
        r = Poly.monomial(field, n, lead)
        slope = outer.lc * m * lead ** (m - 1)
        for j in range(1, n + 1):
            residual = target - outer.compose(r)
            r = r + Poly.monomial(field, n - j, residual.coeff(big - j) / slope)
        if outer.compose(r) == target:
            yield r


def left_divide(outer, target):
    """The r with outer(r) = target, or None."""
    return next(left_divisors(outer, target), None)


def skew_iterate(f, n):
    """f^{<>n} = f^{sigma^{n-1}} o ... o f^sigma o f."""
    result = Poly.x(f.field)
    for i in range(n):
        result = f.apply_sigma(i).compose(result)
    return result


def squarefree_multiplicities(f):
    if f.is_zero:
        raise DomainError("ZERO_SCALAR", "zero polynomial has no squarefree decomposition")
    _, parts = f.to_sympy_poly().sqf_list()
    out = [(Poly.from_sympy_poly(f.field, p).monic(), m) for p, m in parts]
    return sorted(out, key=lambda pm: (pm[1], pm[0].degree, str(pm[0])))


def critical_values(f):
    """Irreducible factors over K of D(t) = Res_x(t - f(x), f'(x)), with multiplicity."""
    if f.degree < 2:
        raise DomainError("DEGREE_TOO_SMALL", "critical values need deg >= 2")
    K = f.field.domain
    fx = f.to_sympy(X)
    a = sp.Poly(T - fx, X, T, domain=K)
    b = sp.Poly(sp.diff(fx, X), X, T, domain=K)
    res = a.resultant(b)
    res = sp.Poly(res.as_expr(), T, domain=K)
    if res.degree() < 1:
        raise InternalError(f"degenerate discriminant for {f}")
    out = []
    for factor, mult in res.factor_list()[1]:
        out.append((Poly.from_sympy_poly(f.field, factor).monic(), mult))
    return sorted(out, key=lambda pm: (pm[0].degree, str(pm[0])))


def rational_critical_values(f):
    return [-p.constant_term for p, _ in critical_values(f) if p.degree == 1]


def chebyshev(n, field=None):
    """Monic C_n from C_0 = 2, C_1 = x, C_{m+1} = x C_m - C_{m-1}."""
    field = field or FieldConfig()
    if n < 1:
        raise DomainError("BAD_INDEX", "Chebyshev index must be positive")
    x = Poly.x(field)
    prev, cur = Poly.const(field, 2), x
    for _ in range(n - 1):
        prev, cur = cur, x * cur - prev
    return cur


def chebyshev_hat(p, field=None):
    """(+2) o C_p o (x - 2)."""
    field = field or FieldConfig()
    return chebyshev(p, field).compose(Poly(field, [-2, 1])) + 2


def divisors(n):
    return [e for e in range(1, n + 1) if n % e == 0]
