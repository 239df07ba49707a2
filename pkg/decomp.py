"""Complete decompositions, their canonical linear-equivalence form, and D_f."""
import asyncio
from dataclasses import dataclass, field as dc_field

from algebra import (LinearMap, Poly, approximate_root, compose_all, divisors,
                     expansion_outer)
from config import CONCURRENCY_LIMIT, log
from errors import DomainError


@dataclass(frozen=True)
class Decomposition:
    """Factors outermost first: (f_k, ..., f_1), composite f_k o ... o f_1."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def k(self):
        return len(self.factors)

    @property
    def field(self):
        return self.factors[0].field

    def factor(self, i):
        """f_i, counting from the innermost factor f_1."""
        if not 1 <= i <= self.k:
            raise DomainError("BAD_INDEX", f"factor index {i} outside 1..{self.k}")
        return self.factors[self.k - i]

    def replace_pair(self, i, outer, inner):
        """Return a copy with (f_{i+1}, f_i) replaced by (outer, inner)."""
        pos = self.k - i - 1
        return Decomposition(self.factors[:pos] + (outer, inner) + self.factors[pos + 2:])

    @property
    def degrees(self):
        return tuple(f.degree for f in self.factors)

    def composite(self):
        return compose_all(self.factors)

    def key(self):
        return tuple(str(f) for f in self.factors)

    def to_json(self):
        return [str(f) for f in self.factors]

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.factors) + ")"


@dataclass
class DecompositionSet:
    classes: list
    edges: list = dc_field(default_factory=list)
    depths: list = dc_field(default_factory=list)

    def distances(self):
        return list(self.depths)

    @property
    def diameter_bound(self):
        k = self.classes[0].k if self.classes else 0
        return k * (k - 1) // 2

    def to_json(self):
        return {
            "classes": [d.to_json() for d in self.classes],
            "edges": [list(e) for e in self.edges],
            "depths": list(self.depths),
        }


def right_factor(f, e):
    """Monic zero-constant right factor h of degree e with f in K[h], or None."""
    n = f.degree
    if e < 1 or n % e:
        return None
    h = approximate_root(f, n // e)
    outer = expansion_outer(f, h)
    if outer is None:
        return None
    return outer, h


def _split(f):
    for e in divisors(f.degree)[1:-1]:
        found = right_factor(f, e)
        if found is not None:
            return found
    return None


def is_indecomposable(f):
    return f.degree >= 2 and _split(f) is None


def complete_decomposition(f):
    """Split off the smallest right factor repeatedly; canonical result."""
    if f.degree < 2:
        raise DomainError("DEGREE_TOO_SMALL", f"cannot decompose {f}")
    factors = []
    rest = f
    while True:
        found = _split(rest)
        if found is None:
            break
        rest, h = found
        factors.append(h)
    factors.append(rest)
    return normalize(list(reversed(factors)))


def _normalize_with_chain(factors):
    factors = list(factors)
    if not factors:
        raise DomainError("DEGREE_TOO_SMALL", "empty decomposition")
    for f in factors:
        if f.degree < 2:
            raise DomainError("LINEAR_FACTOR", f"factor {f} is not of degree >= 2")
    chain = []
    out = []
    carry = None
    # innermost factor first
    for f in reversed(factors[1:]):
        if carry is not None:
            f = f.compose(carry.as_poly())
        lin = LinearMap(f.field, f.lc, f.constant_term)
        out.append(lin.inverse()(f))
        chain.append(lin)
        carry = lin
    outer = factors[0]
    if carry is not None:
        outer = outer.compose(carry.as_poly())
    out.append(outer)
    return Decomposition(reversed(out)), chain


def normalize(factors):
    """Canonical representative: f_1..f_{k-1} monic with zero constant term."""
    if isinstance(factors, Decomposition):
        factors = factors.factors
    return _normalize_with_chain(factors)[0]


def linear_equivalent(d1, d2):
    """Return (equivalent, chain, reason); chain is (L_{k-1}, ..., L_1)."""
    f1 = d1.factors if isinstance(d1, Decomposition) else tuple(d1)
    f2 = d2.factors if isinstance(d2, Decomposition) else tuple(d2)
    if len(f1) != len(f2):
        return False, None, f"length mismatch {len(f1)} != {len(f2)}"
    c1, a = _normalize_with_chain(f1)
    c2, b = _normalize_with_chain(f2)
    if c1.key() != c2.key():
        return False, None, "canonical forms differ"
    chain = [ai.compose(bi.inverse()) for ai, bi in zip(a, b)]
    return True, tuple(reversed(chain)), ""


def apply_chain(factors, chain):
    """Insert L_i^{-1}, L_i between factors: the inverse of linear_equivalent."""
    factors = list(factors)
    k = len(factors)
    inner_to_outer = list(reversed(chain))
    out = []
    for idx in range(k):
        i = k - idx
        f = factors[idx]
        if i <= k - 1:
            f = inner_to_outer[i - 1].inverse()(f)
        if i >= 2:
            f = f.compose(inner_to_outer[i - 2].as_poly())
        out.append(f)
    return Decomposition(out)


def _neighbours(d):
    from swaps import try_ritt_swap

    found = []
    for i in range(1, d.k):
        result = try_ritt_swap(d, i)
        if result.defined:
            found.append((i, result.decomposition))
    return found


async def _expand(d, sem):
    async with sem:
        return await asyncio.to_thread(_neighbours, d)


async def _enumerate(start):
    sem = asyncio.Semaphore(CONCURRENCY_LIMIT)
    index = {start.key(): 0}
    classes, depths, edges = [start], [0], set()
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        results = await asyncio.gather(*[_expand(d, sem) for d in frontier])
        nxt = []
        for d, neighbours in zip(frontier, results):
            src = index[d.key()]
            for i, other in sorted(neighbours, key=lambda t: (t[0], t[1].key())):
                key = other.key()
                if key not in index:
                    index[key] = len(classes)
                    classes.append(other)
                    depths.append(depth)
                    nxt.append(other)
                dst = index[key]
                edges.add((min(src, dst), i, max(src, dst)))
        frontier = sorted(nxt, key=Decomposition.key)
        if frontier:
            log("DEBUG", f"D_f level {depth}: {len(frontier)} new classes")
    log("INFO", f"D_f closed with {len(classes)} classes")
    return DecompositionSet(classes, sorted(edges), depths)


def enumerate_D_f(f):
    """Breadth-first closure of a complete decomposition under Ritt swaps."""
    if isinstance(f, Decomposition):
        start = normalize(f)
    else:
        start = complete_decomposition(f)
    return asyncio.run(_enumerate(start))
