"""Skew-twists of decompositions and certified (skew-)invariant plane curves.

A Correspondence (h, pi, rho) between f and g is the curve
{(pi(c), rho(c))}; it is certified by f o pi = pi^sigma o h and
g o rho = rho^sigma o h.
"""
import asyncio
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import sympy as sp

from algebra import (IDENTITY, LinearMap, Poly, X, chebyshev, left_divide, left_divisors,
                     skew_iterate)
from config import CONCURRENCY_LIMIT, log
from decomp import Decomposition, complete_decomposition, enumerate_D_f, linear_equivalent
from errors import DomainError
from swaps import DEFINED, SwapResult, try_ritt_swap
from words import BETA, PHI, bword_normal_form, expand_gword

Y = sp.Symbol("y")
T = sp.Symbol("t")

MONOMIAL_KIND = "monomial"
CHEBYSHEV_KIND = "chebyshev"


@dataclass(frozen=True)
class Correspondence:
    f: Poly
    g: Poly
    h: Poly
    pi: Poly
    rho: Poly

    @classmethod
    def diagonal(cls, f):
        x = Poly.x(f.field)
        return cls(f, f, f, x, x)

    def to_json(self, implicit=True):
        out = {"f": str(self.f), "g": str(self.g), "h": str(self.h),
               "pi": str(self.pi), "rho": str(self.rho)}
        if implicit:
            equation, degree = implicit_equation(self)
            out["implicit"] = format_curve(equation)
            out["parametrization_degree"] = degree
        return out


def verify_correspondence(c):
    """Exact check of both commuting squares."""
    left = c.f.compose(c.pi) == c.pi.apply_sigma().compose(c.h)
    right = c.g.compose(c.rho) == c.rho.apply_sigma().compose(c.h)
    return left and right


def implicit_equation(c):
    """(F, delta): F(x, y) = 0 cuts out the curve, delta the degree of t -> curve."""
    K = c.f.field.domain
    a = sp.Poly(X - c.pi.to_sympy(T), T, X, Y, domain=K)
    b = sp.Poly(Y - c.rho.to_sympy(T), T, X, Y, domain=K)
    res = sp.Poly(a.resultant(b).as_expr(), X, Y, domain=K)
    curve = res.sqf_part().monic()
    return curve, res.total_degree() // curve.total_degree()


def format_curve(curve):
    return sp.sstr(curve.as_expr()).replace("**", "^") + " = 0"


# --- skew-twists ---

def apply_phi(d):
    """(f_k, ..., f_1) -> (f_1^sigma, f_k, ..., f_2), as a literal rotation."""
    inner = d.factors[-1]
    return Decomposition((inner.apply_sigma(),) + d.factors[:-1])


def apply_beta(d):
    """(f_k, ..., f_1) -> (f_{k-1}, ..., f_1, f_k^{sigma^-1}); inverse of apply_phi."""
    outer = d.factors[0]
    return Decomposition(d.factors[1:] + (outer.apply_sigma(-1),))


def skew_linear_equivalent(d1, d2):
    """L with d2 linearly equivalent to (L^sigma o f_k, ..., f_1 o L^-1) of d1, or None."""
    if d1.k != d2.k:
        return None
    g1, g2 = d1.composite(), d2.composite()
    n = g1.degree
    if g2.degree != n:
        return None
    field = g1.field
    for a in twisted_scales(field, g2.lc / g1.lc, n):
        a_sigma = field.apply_sigma(a)
        b = (a_sigma * g1.coeff(n - 1) - g2.coeff(n - 1) * a ** (n - 1)) / (g2.lc * n * a ** (n - 1))
        L = LinearMap(field, a, b)
        back = L.inverse().as_poly()
        if d1.k == 1:
            moved = (L.apply_sigma()(g1).compose(back),)
        else:
            moved = ((L.apply_sigma()(d1.factors[0]),) + d1.factors[1:-1]
                     + (d1.factors[-1].compose(back),))
        if linear_equivalent(moved, d2.factors)[0]:
            return L
    return None


@dataclass
class SkewTwistTrace:
    word: object
    result: SwapResult
    steps: list = dc_field(default_factory=list)
    correspondence: Correspondence = None
    normal_form: object = None

    def to_json(self):
        out = {"word": str(self.word), "result": self.result.to_json(),
               "steps": [d.to_json() for d in self.steps]}
        if self.normal_form is not None:
            out["normal_form"] = str(self.normal_form)
        if self.correspondence is not None:
            out["correspondence"] = self.correspondence.to_json()
        return out


class _CurveChain:
    """The curve {(pi(t), rho(t))} carried along a literal run, f fixed."""

    def __init__(self, f):
        self.f = f
        self.pi = Poly.x(f.field)
        self.rho = Poly.x(f.field)
        self.h = f
        self.broken = None

    def forward(self, a):
        """phi step: the graph of the current inner factor a."""
        self.rho = a.compose(self.rho)

    def converse(self, b, g):
        """beta step onto composite g: the converse graph of b, the factor moved inside."""
        for r in left_divisors(b, self.rho):
            if g.compose(r) == r.apply_sigma().compose(self.h):
                self.rho = r
                return
        for r in left_divisors(self.rho, b):
            pi = self.pi.compose(r)
            if self.f.compose(pi) == pi.apply_sigma().compose(g):
                self.pi, self.rho, self.h = pi, Poly.x(self.f.field), g
                return
        self.broken = f"no converse graph of {b} through rho = {self.rho}"

    def close(self, g):
        if self.broken is not None:
            return None
        c = Correspondence(self.f, g, self.h, self.pi, self.rho)
        if not verify_correspondence(c):
            self.broken = "commuting squares fail"
            return None
        return c


def _run_letters(d, letters):
    """Literal right-to-left run; returns (result, steps, curve chain)."""
    steps = [d]
    chain = _CurveChain(d.composite())
    current = d
    for letter in reversed(letters):
        if letter == PHI:
            chain.forward(current.factors[-1])
            current = apply_phi(current)
        elif letter == BETA:
            current = apply_beta(current)
            chain.converse(current.factors[-1], current.composite())
        else:
            result = try_ritt_swap(current, letter)
            if not result.defined:
                return result, steps, chain
            current = result.decomposition
        steps.append(current)
    return SwapResult(DEFINED, current), steps, chain


def apply_bword(d, word):
    """Act by a B_k (or G_k) word and encode the resulting correspondence."""
    if word.k != d.k:
        raise DomainError("BAD_INDEX", f"word over B_{word.k} on a length {d.k} decomposition")
    literal = expand_gword(word).letters
    result, steps, chain = _run_letters(d, literal)
    if not result.defined:
        return SkewTwistTrace(word, result, steps)
    nf = bword_normal_form(word) if BETA in literal else None
    c = chain.close(result.decomposition.composite())
    if c is None:
        log("WARNING", f"no certified correspondence for {word} on {d}: {chain.broken}")
    return SkewTwistTrace(word, result, steps, c, nf)


# --- skew-conjugacy and triviality ---

def twisted_scales(field, c, e):
    """Scalars a != 0 in K with a^sigma = c * a^e, positive first."""
    found = set(field.nth_roots(c.inverse(), e - 1)) | set(field.nth_roots(-c.inverse(), e - 1))
    good = [a for a in found if not a.is_zero and field.apply_sigma(a) == c * a ** e]
    return sorted(good, key=lambda a: (a != 1, -a.a, -a.b))


def skew_conjugator(f, n, kind=MONOMIAL_KIND):
    """L with L^sigma o P o L^-1 = f, P = x^n or C_n, or None."""
    field = f.field
    if f.degree != n or n < 2:
        return None
    core = Poly.monomial(field, n) if kind == MONOMIAL_KIND else chebyshev(n, field)
    b = -f.coeff(n - 1) / (f.lc * n)
    for a in twisted_scales(field, f.lc, n):
        L = LinearMap(field, a, b)
        if L.apply_sigma()(core).compose(L.inverse().as_poly()) == f:
            return L
    return None


def _conjugate_over_closure(f, kind):
    """sigma = id: is f conjugate to x^n or C_n over the algebraic closure."""
    field = f.field
    n = f.degree
    b = -f.coeff(n - 1) / (f.lc * n)
    g = f.compose(Poly(field, [b, 1])) - b
    if kind == MONOMIAL_KIND:
        return g == Poly.monomial(field, n, f.lc)
    if n < 3:
        return _quadratic_is_chebyshev(g)
    A = -g.coeff(n - 2) / (n * g.lc)
    if A.is_zero:
        return False
    cheb = chebyshev(n, field)
    if n % 2:
        if A ** ((n - 1) // 2) != g.lc.inverse():
            return False
        scaled = [cheb.coeff(i) * A ** ((1 - i) // 2) if i % 2 else 0 for i in range(n + 1)]
    else:
        a = g.lc * A ** (n // 2)
        if a * a != A:
            return False
        scaled = [cheb.coeff(i) * a * A ** (-i // 2) if i % 2 == 0 else 0 for i in range(n + 1)]
    return g == Poly(field, scaled)


def _quadratic_is_chebyshev(g):
    """g(x) = lc x^2 + c is conjugate to x^2 - 2 iff lc * c = -2."""
    return g.coeff(1).is_zero and g.lc * g.constant_term == -2


def is_trivial(f):
    """(True, {}) unless f is skew-conjugate to a monomial or a Chebyshev polynomial."""
    if f.degree < 2:
        raise DomainError("DEGREE_TOO_SMALL", f"{f} is not of degree >= 2")
    for kind in (MONOMIAL_KIND, CHEBYSHEV_KIND):
        L = skew_conjugator(f, f.degree, kind)
        if L is not None:
            return False, {"kind": kind, "n": f.degree, "L": str(L)}
        if f.field.sigma == IDENTITY and _conjugate_over_closure(f, kind):
            return False, {"kind": kind, "n": f.degree, "L": None}
    return True, {}


# --- solving for monomial correspondences ---

def _sigma_fixed_points(g):
    """K-points with g(b) = b^sigma."""
    field = g.field
    candidates = field.roots(g.apply_sigma().compose(g) - Poly.x(field))
    return [b for b in candidates if g(b) == field.apply_sigma(b)]


def _skew_conjugate_to(g, target):
    """M with g o M = M^sigma o target, or None."""
    field = g.field
    for b in _sigma_fixed_points(g):
        for a in twisted_scales(field, g.lc / target.lc, g.degree):
            M = LinearMap(field, a, b)
            if g.compose(M.as_poly()) == M.apply_sigma()(target):
                return M
    return None


def solve_notskewtwist(f, g, max_monomial_degree):
    """All (L, M, n) with L^sigma f L^-1 = x^k u(x^n) and g skew-conjugate to x^k u(x)^n."""
    field = f.field
    out = []
    if f == g:
        out.append((LinearMap.identity(field), LinearMap.identity(field), 1))
    m = -f.coeff(f.degree - 1) / (f.lc * f.degree)
    if f(m) != field.apply_sigma(m):
        return out
    L = LinearMap.translation(field, -m)
    S = L.apply_sigma()(f.compose(L.inverse().as_poly()))
    k = S.order_at_zero()
    rest = S.shift_down(k)
    for n in range(2, max_monomial_degree + 1):
        if k < 1 or rest.is_constant:
            break
        if any(not rest.coeff(i).is_zero for i in range(rest.degree + 1) if i % n):
            continue
        v = Poly(field, [rest.coeff(i * n) for i in range(rest.degree // n + 1)])
        target = Poly.monomial(field, k) * v ** n
        M = _skew_conjugate_to(g, target)
        if M is None:
            continue
        rho = M(Poly.monomial(field, n).compose(L.as_poly()))
        if g.compose(rho) == rho.apply_sigma().compose(f):
            out.append((L, M, n))
        else:
            log("WARNING", f"discarding n = {n}: commuting square fails")
    return out


# --- enumeration ---

def _right_segments(f):
    """Inner compositions f_j o ... o f_1 over every class of D_f."""
    return _segments_over(f.field, tuple(f.coeffs))


@lru_cache(maxsize=256)
def _segments_over(field, coeffs):
    f = Poly(field, list(coeffs))
    if f.degree < 2:
        return frozenset()
    segments = set()
    for d in enumerate_D_f(complete_decomposition(f)).classes:
        acc = Poly.x(field)
        for factor in reversed(d.factors):
            acc = factor.compose(acc)
            segments.add(acc)
    return frozenset(segments)


def _pool(f, other, bound):
    """Graph pieces: x, right segments, their sigma twists and iterate chains."""
    pool = {Poly.x(f.field)}
    base = _right_segments(f) | _right_segments(other)
    for seg in base:
        for twisted in (seg, seg.apply_sigma()):
            n = 0
            chain = twisted
            while chain.degree <= bound:
                pool.add(chain)
                n += 1
                chain = twisted.compose(skew_iterate(f, n))
    return {p for p in pool if p.degree <= bound}


def _middle_pieces(field, bound):
    pieces = []
    for N in range(1, bound + 1):
        for M in range(1, bound + 1):
            if gcd(N, M) != 1:
                continue
            pieces.append((Poly.monomial(field, N), Poly.monomial(field, M)))
            if N >= 3 or M >= 3:
                pieces.append((chebyshev(N, field), chebyshev(M, field)))
    return pieces


def _certify(f, g, pi, rho):
    h = left_divide(pi.apply_sigma(), f.compose(pi))
    if h is None:
        return None
    c = Correspondence(f, g, h, pi, rho)
    return c if verify_correspondence(c) else None


async def _certify_all(f, g, candidates):
    sem = asyncio.Semaphore(CONCURRENCY_LIMIT)

    async def one(pi, rho):
        async with sem:
            return await asyncio.to_thread(_certify, f, g, pi, rho)

    return await asyncio.gather(*[one(pi, rho) for pi, rho in candidates])


def _require_trivial(f, label):
    if f.degree < 2:
        raise DomainError("DEGREE_TOO_SMALL", f"{label} = {f} has degree < 2")
    trivial, evidence = is_trivial(f)
    if not trivial:
        raise DomainError("NON_TRIVIAL_INPUT", f"{label} = {f} is skew-conjugate to a "
                                               f"{evidence['kind']} of degree {evidence['n']}")


def enumerate_invariant_curves(f, g, degree_bound):
    """Certified correspondences between f and g with deg pi, deg rho <= degree_bound."""
    _require_trivial(f, "f")
    _require_trivial(g, "g")
    field = f.field
    pis = _pool(g, f, degree_bound)
    rhos = _pool(f, g, degree_bound)
    candidates = set()
    for b in pis:
        for a in rhos:
            for P, Q in _middle_pieces(field, degree_bound):
                pi, rho = b.compose(P), a.compose(Q)
                if pi.degree <= degree_bound and rho.degree <= degree_bound:
                    candidates.add((pi, rho))
    log("INFO", f"checking {len(candidates)} candidate curves for ({f}, {g})")
    found = [c for c in asyncio.run(_certify_all(f, g, sorted(candidates, key=str)))
             if c is not None]
    if f == g:
        found.append(Correspondence.diagonal(f))
    for L, M, n in solve_notskewtwist(f, g, degree_bound):
        rho = M(Poly.monomial(field, n).compose(L.as_poly()))
        found.append(Correspondence(f, g, f, Poly.x(field), rho))

    unique = {}
    for c in found:
        if not verify_correspondence(c):
            continue
        curve, degree = implicit_equation(c)
        if degree != 1:
            continue
        unique.setdefault(format_curve(curve), c)
    return [unique[key] for key in sorted(unique)]
