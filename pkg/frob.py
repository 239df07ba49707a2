"""Fixed-precision unramified p-adic rings (Z/p^m)[t]/(T) and sharp-point lifting.

Elements are coordinate tuples in the basis 1, t, ..., t^(e-1). The
Frobenius sigma is the automorphism with sigma(t) the root of T that reduces
to t^p; lifting finds, above every residue, the unique x with
f(x) = sigma^j(x) for f congruent to x^(p^j) mod p.
"""
import asyncio
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import product

import sympy as sp

from algebra import FieldElem, Poly
from config import CONCURRENCY_LIMIT, log
from errors import DomainError, InternalError

_t = sp.Symbol("t")


def default_modulus(p, e):
    """Lexicographically first monic irreducible of degree e over F_p, lowest first."""
    if not sp.isprime(p):
        raise DomainError("BAD_FIELD", f"{p} is not prime")
    if e < 1:
        raise DomainError("BAD_INDEX", "extension degree must be positive")
    for tail in product(range(p), repeat=e):
        coeffs = (1,) + tail
        if sp.Poly.from_list(list(coeffs), _t, modulus=p).is_irreducible:
            return tuple(reversed(coeffs))
    raise InternalError(f"no irreducible of degree {e} mod {p}")


@dataclass(frozen=True)
class ZqContext:
    p: int
    e: int
    m: int
    T: tuple = None

    def __post_init__(self):
        if not sp.isprime(self.p):
            raise DomainError("BAD_FIELD", f"{self.p} is not prime")
        if self.e < 1 or self.m < 1:
            raise DomainError("BAD_INDEX", "extension degree and precision must be positive")
        if self.T is None:
            object.__setattr__(self, "T", default_modulus(self.p, self.e))
        T = tuple(int(c) for c in self.T)
        object.__setattr__(self, "T", T)
        if len(T) != self.e + 1 or T[-1] != 1:
            raise DomainError("BAD_FIELD", f"T must be monic of degree {self.e}")
        if not sp.Poly.from_list(list(reversed(T)), _t, modulus=self.p).is_irreducible:
            raise DomainError("BAD_FIELD", f"T = {T} is reducible mod {self.p}")

    @property
    def modulus(self):
        return self.p ** self.m

    @property
    def q(self):
        return self.p ** self.e

    def elem(self, coords):
        if isinstance(coords, int):
            coords = [coords]
        coords = [int(c) % self.modulus for c in coords]
        if len(coords) > self.e:
            raise DomainError("BAD_INDEX", f"{len(coords)} coordinates for degree {self.e}")
        return ZqElem(self, tuple(coords + [0] * (self.e - len(coords))))

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    @property
    def t(self):
        if self.e == 1:
            return self.elem(-self.T[0])
        return self.elem([0, 1])

    def from_rational(self, value):
        if isinstance(value, FieldElem):
            if not value.is_rational:
                raise DomainError("UNSUPPORTED_FIELD", f"{value} is not a p-adic rational")
            value = value.a
        value = Fraction(value)
        if value.denominator % self.p == 0:
            raise DomainError("DENOMINATOR_COLLISION",
                              f"{self.p} divides the denominator of {value}")
        return self.elem(value.numerator * pow(value.denominator, -1, self.modulus))

    def residues(self):
        """Representatives of F_q, in coordinate order."""
        return [self.elem(list(c)) for c in product(range(self.p), repeat=self.e)]

    def _mul(self, a, b):
        e = self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for i in range(e):
                    prod[k - e + i] -= c * self.T[i]
        return tuple(c % self.modulus for c in prod[:e])

    @cached_property
    def sigma_t(self):
        """Hensel lift of t^p to an exact root of T."""
        tau = self.t ** self.p
        dT = [i * c for i, c in enumerate(self.T)][1:]
        for _ in range(self.m + 2):
            value = _horner(self, self.T, tau)
            if value.is_zero:
                return tau
            tau = tau - value * _horner(self, dT, tau).inverse()
        raise InternalError(f"Hensel iteration for sigma(t) did not settle mod {self.p}^{self.m}")

    def to_json(self):
        return {"p": self.p, "e": self.e, "m": self.m, "T": list(self.T)}


@dataclass(frozen=True)
class ZqElem:
    ctx: ZqContext = dc_field(repr=False, compare=False)
    coords: tuple = ()

    def _lift(self, other):
        if isinstance(other, ZqElem):
            return other
        if isinstance(other, int):
            return self.ctx.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.ctx.elem([a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return self.ctx.elem([-a for a in self.coords])

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
        return ZqElem(self.ctx, self.ctx._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def is_zero(self):
        return not any(self.coords)

    def reduce(self):
        """Image in F_q, as an element of the same ring."""
        return self.ctx.elem([c % self.ctx.p for c in self.coords])

    @property
    def is_unit(self):
        return not self.reduce().is_zero

    def inverse(self):
        if not self.is_unit:
            raise DomainError("ZERO_SCALAR", f"{self} is not a unit")
        # x^(q-2) inverts the residue; Newton doubles the precision
        y = self ** (self.ctx.q - 2)
        for _ in range(self.ctx.m + 1):
            if (self * y - 1).is_zero:
                return y
            y = y * (2 - self * y)
        raise InternalError(f"inverse of {self} did not converge")

    def valuation(self):
        """Largest v <= m with p^v dividing every coordinate."""
        p, m = self.ctx.p, self.ctx.m
        v = m
        for c in self.coords:
            if c:
                k = 0
                while c % p == 0:
                    c //= p
                    k += 1
                v = min(v, k)
        return v

    def to_json(self):
        return list(self.coords)

    def __str__(self):
        if self.ctx.e == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _horner(ctx, coeffs, x):
    acc = ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def frobenius(ctx, x):
    """sigma(x); sigma fixes the integer coordinates and sends t to sigma_t."""
    if ctx.e == 1:
        return x
    return _horner(ctx, list(x.coords), ctx.sigma_t)


def frobenius_power(ctx, x, j):
    for _ in range(j % ctx.e):
        x = frobenius(ctx, x)
    return x


# --- lifting ---

def _ring_coeffs(ctx, f):
    if isinstance(f, Poly):
        return [ctx.from_rational(c) for c in f.coeffs]
    return [c if isinstance(c, ZqElem) else ctx.from_rational(c) for c in f]


def frobenius_exponent(ctx, coeffs):
    """j with coeffs = x^(p^j) mod p and 1 <= j <= e."""
    live = [i for i, c in enumerate(coeffs) if not c.reduce().is_zero]
    if len(live) != 1 or coeffs[live[0]].reduce() != ctx.one:
        raise DomainError("NOT_FROBENIUS_LIFT", "f is not a monomial x^(p^j) mod p")
    N = live[0]
    for j in range(1, ctx.e + 1):
        if N == ctx.p ** j:
            return j
    raise DomainError("NOT_FROBENIUS_LIFT", f"f = x^{N} mod p and {N} is not p^j, 1 <= j <= {ctx.e}")


def _lift_one(ctx, coeffs, j, a):
    p = ctx.p
    back = p ** ((ctx.e - j) % ctx.e)
    x = a
    for v in range(1, ctx.m):
        delta = _horner(ctx, coeffs, x) - frobenius_power(ctx, x, j)
        pv = p ** v
        if any(c % pv for c in delta.coords):
            raise InternalError(f"lift above {a} lost p-divisibility at step {v}")
        dprime = ctx.elem([(c // pv) % p for c in delta.coords])
        # sigma^-j on the residue field is y -> y^(p^(e-j))
        c = (dprime ** back).reduce()
        x = x + c * pv
    if not (_horner(ctx, coeffs, x) - frobenius_power(ctx, x, j)).is_zero:
        raise InternalError(f"lift above {a} fails f(x) = sigma^{j}(x)")
    return x


async def _lift_all(ctx, coeffs, j):
    sem = asyncio.Semaphore(CONCURRENCY_LIMIT)

    async def one(a):
        async with sem:
            return await asyncio.to_thread(_lift_one, ctx, coeffs, j, a)

    return await asyncio.gather(*[one(a) for a in ctx.residues()])


def lift_sharp_points(ctx, f, j=None):
    """The q solutions of f(x) = sigma^j(x), one above each residue."""
    coeffs = _ring_coeffs(ctx, f)
    found = frobenius_exponent(ctx, coeffs)
    if j is not None and j != found:
        raise DomainError("NOT_FROBENIUS_LIFT", f"f is x^(p^{found}) mod p, not x^(p^{j})")
    points = asyncio.run(_lift_all(ctx, coeffs, found))
    log("DEBUG", f"lifted {len(points)} points mod {ctx.p}^{ctx.m}")
    return sorted(points, key=lambda x: x.coords)


def lift_sharp_points_product(ctx, fs):
    """Sharp points of (f_1, ..., f_n) acting coordinatewise."""
    per_coordinate = [lift_sharp_points(ctx, f) for f in fs]
    return list(product(*per_coordinate))


@dataclass
class CaptureReport:
    context: ZqContext
    period: int
    points: list
    periodic: int
    violations: list

    def to_json(self):
        return {
            "context": self.context.to_json(),
            "period": self.period,
            "points": [x.to_json() for x in self.points],
            "periodic": self.periodic,
            "violations": [x.to_json() for x in self.violations],
        }


def periodic_capture_check(p, f, M, m):
    """Lift over the degree-M extension and confirm f^M(x) = x for each point."""
    if M < 1:
        raise DomainError("BAD_INDEX", "period must be positive")
    ctx = ZqContext(p, M, m)
    coeffs = _ring_coeffs(ctx, f)
    points = lift_sharp_points(ctx, coeffs, j=1)
    violations = []
    for x in points:
        y = x
        for _ in range(M):
            y = _horner(ctx, coeffs, y)
        if y != x:
            violations.append(x)
    if violations:
        log("WARNING", f"{len(violations)} lifted points are not {M}-periodic")
    return CaptureReport(ctx, M, points, len(points) - len(violations), violations)
