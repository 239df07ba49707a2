"""Forward orbits of coordinatewise maps and the monomial-rank density test."""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import comb, floor

import sympy as sp
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from algebra import FieldElem
from config import MODULAR_PRIME_BITS, ORBIT_BIT_BUDGET, log, seeded_random
from errors import DomainError, InternalError
from product_invariants import linear_block_skeleton

EXACT = "exact"
EXACT_ORBIT_MAX = 12
MODULAR = "modular"

DENSE_UP_TO = "DenseUpTo"
CONTAINED_IN = "ContainedIn"


@dataclass
class OrbitSample:
    points: list
    maps: list
    start: tuple
    length: int
    mode: str = EXACT
    prime: int = None
    step: int = 1
    offset: int = 0

    @property
    def dimension(self):
        return len(self.maps)

    def to_json(self):
        return {
            "mode": self.mode,
            "prime": self.prime,
            "step": self.step,
            "offset": self.offset,
            "points": [[str(c) for c in pt] for pt in self.points],
        }


def random_prime(bits=None):
    bits = bits or MODULAR_PRIME_BITS
    rng = seeded_random()
    return int(sp.nextprime(rng.randrange(2 ** (bits - 1), 2 ** bits)))


def _residue(value, p):
    if isinstance(value, FieldElem):
        if not value.is_rational:
            raise DomainError("UNSUPPORTED_FIELD", f"{value} has no residue mod {p}")
        value = value.a
    value = Fraction(value)
    if value.denominator % p == 0:
        raise DomainError("DENOMINATOR_COLLISION", f"{p} divides the denominator of {value}")
    return value.numerator * pow(value.denominator, -1, p) % p


def _modular_coeffs(f, p):
    return [_residue(c, p) for c in f.coeffs]


def _eval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def default_mode(maps):
    """Modular for any map of degree >= 2, exact for linear maps."""
    return MODULAR if any(f.degree >= 2 for f in maps) else EXACT


def orbit(maps, start, N, mode=None, prime=None):
    """start, Phi(start), ..., Phi^N(start) for Phi = (f_1, ..., f_n)."""
    maps = list(maps)
    start = tuple(start)
    if len(maps) != len(start):
        raise DomainError("BAD_INDEX", f"{len(maps)} maps but a point with {len(start)} coordinates")
    if N < 0:
        raise DomainError("BAD_INDEX", "orbit length must be nonnegative")
    if mode is None:
        mode = MODULAR if prime else default_mode(maps)
    elif mode == EXACT and any(f.degree >= 2 for f in maps) and (len(maps) > 2 or N > EXACT_ORBIT_MAX):
        log("WARNING", f"exact orbit of {len(maps)} nonlinear maps and length {N}; "
                       f"heights grow doubly exponentially")
    if mode == MODULAR:
        p = prime or random_prime()
        tables = [_modular_coeffs(f, p) for f in maps]
        point = tuple(_residue(a, p) for a in start)
        points = [point]
        for _ in range(N):
            point = tuple(_eval_mod(c, x, p) for c, x in zip(tables, point))
            points.append(point)
        log("DEBUG", f"modular orbit of length {N} mod {p}")
        return OrbitSample(points, maps, start, N, MODULAR, p)

    point = tuple(f.field.coerce(a) for f, a in zip(maps, start))
    points = [point]
    warned = False
    for step in range(N):
        point = tuple(f(x) for f, x in zip(maps, point))
        points.append(point)
        if not warned and max(x.bit_size() for x in point) > ORBIT_BIT_BUDGET:
            log("WARNING", f"exact orbit exceeds {ORBIT_BIT_BUDGET} bits at step {step + 1}; "
                           f"consider modular mode")
            warned = True
    return OrbitSample(points, maps, start, N, EXACT)


def subsample(sample, step, offset=0):
    """Every step-th point from offset: an orbit of Phi^step."""
    if step < 1 or offset < 0:
        raise DomainError("BAD_INDEX", f"bad progression step={step} offset={offset}")
    return OrbitSample(sample.points[offset::step], sample.maps, sample.start, sample.length,
                       sample.mode, sample.prime, sample.step * step,
                       sample.offset + offset * sample.step)


# --- density ---

@dataclass
class DensityVerdict:
    kind: str
    degree: int
    mode: str
    certified: bool = True
    equation: str = None
    coefficients: dict = dc_field(default_factory=dict)
    kernel_dimension: int = 0
    prime: int = None

    def to_json(self):
        out = {"verdict": self.kind, "degree": self.degree, "mode": self.mode,
               "certified": self.certified}
        if self.kind == CONTAINED_IN:
            out.update(equation=self.equation, kernel_dimension=self.kernel_dimension,
                       coefficients={",".join(map(str, m)): c
                                     for m, c in self.coefficients.items()})
        if self.prime is not None:
            out["prime"] = self.prime
        return out


def monomials(n, d):
    """Exponent tuples of total degree <= d, by degree then x1 before x2."""
    out = [e for e in product(range(d + 1), repeat=n) if sum(e) <= d]
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def _power_product(values, exps):
    acc = 1
    for v, e in zip(values, exps):
        acc = acc * v ** e
    return acc


def density_test(sample, d):
    """Full monomial rank means no hypersurface of degree <= d holds the sample."""
    n = sample.dimension
    cols = monomials(n, d)
    if len(sample.points) < comb(n + d, d):
        raise DomainError("INSUFFICIENT_POINTS",
                          f"{len(sample.points)} points, need {comb(n + d, d)} for degree {d}")
    if sample.mode == MODULAR:
        K = GF(sample.prime)
        rows = [[K(_power_product(pt, e) % sample.prime) for e in cols] for pt in sample.points]
    else:
        field = sample.maps[0].field
        K = field.domain
        rows = [[field.to_domain(_power_product(pt, e) if any(e) else field.one) for e in cols]
                for pt in sample.points]
    matrix = DomainMatrix(rows, (len(rows), len(cols)), K)
    rank = matrix.rank()
    if rank == len(cols):
        log("DEBUG", f"monomial matrix of rank {rank} for degree {d}")
        return DensityVerdict(DENSE_UP_TO, d, sample.mode, sample.mode == EXACT,
                              prime=sample.prime)

    kernel = matrix.nullspace().to_list()
    vector = kernel[0]
    last = max(j for j, c in enumerate(vector) if c)
    vector = [K.quo(c, vector[last]) for c in vector]
    for row in rows:
        total = K.zero
        for a, c in zip(row, vector):
            total = K.add(total, K.mul(a, c))
        if total:
            raise InternalError("kernel vector does not vanish on the sample")

    if sample.mode == MODULAR:
        values = [int(K.to_int(c)) for c in vector]
        scalars = values
    else:
        field = sample.maps[0].field
        values = [field.from_domain(c) for c in vector]
        scalars = [v.to_sympy() for v in values]
    syms = sp.symbols(f"x1:{n + 1}")
    expr = sp.Add(*[c * _power_product(syms, e) for c, e in zip(scalars, cols) if c])
    equation = sp.sstr(expr).replace("**", "^") + " = 0"
    coefficients = {e: str(v) for e, v in zip(cols, values) if v}
    if sample.mode == MODULAR:
        log("INFO", f"sample lies on {equation} mod {sample.prime} (probabilistic)")
    return DensityVerdict(CONTAINED_IN, d, sample.mode, sample.mode == EXACT, equation,
                          coefficients, len(kernel), sample.prime)


# --- dense points ---

@dataclass
class DensePoint:
    point: tuple
    audit: dict

    def to_json(self):
        return {"point": [str(c) for c in self.point], "audit": dict(self.audit)}


def _abs_bound(c):
    """Rational upper bound for |c|, c in Q(sqrt d)."""
    if c.is_rational:
        return abs(c.a)
    return abs(c.a) + abs(c.b) * (sp.integer_nthroot(abs(c.d), 2)[0] + 1)


def _primes_of(values):
    found = set()
    for v in values:
        for part in (v.a, v.b):
            found.update(sp.primefactors(part.numerator))
            found.update(sp.primefactors(part.denominator))
    return found


def _height_bound(f):
    """Above this every orbit of f strictly grows in absolute value."""
    lc = _abs_bound(f.lc)
    lower = sum(_abs_bound(c) for c in f.coeffs[:-1])
    total = lower + lc
    if f.degree == 1:
        return floor(1 + total) + 1
    return floor(max(1 + total, (1 + lower) / lc)) + 1


def _check_linear_independence(maps):
    linear = [f for f in maps if f.degree == 1]
    if not linear:
        return
    skeleton = linear_block_skeleton(linear)
    if skeleton.identities:
        raise DomainError("INDEPENDENCE_FAILED", "an identity coordinate has no dense orbit")
    if len(skeleton.translations) > 1:
        raise DomainError("INDEPENDENCE_FAILED",
                          "translations " + "; ".join(skeleton.translation_relations))
    if skeleton.relations is not None and not skeleton.relations.independent:
        raise DomainError("INDEPENDENCE_FAILED",
                          "scalings satisfy " + "; ".join(skeleton.characters))


def construct_dense_point(maps):
    """a_1 of large height, then a_i = 1/q_i for primes q_i new to everything seen."""
    maps = list(maps)
    if not maps:
        raise DomainError("BAD_INDEX", "empty system")
    for f in maps:
        if f.degree < 1:
            raise DomainError("DEGREE_TOO_SMALL", f"coordinate map {f} is constant")
    _check_linear_independence(maps)
    field = maps[0].field
    seen = set(sp.primefactors(abs(field.d)))
    for f in maps:
        seen |= _primes_of(f.coeffs)
        if f.degree == 1:
            seen |= _primes_of([1 - f.lc])

    f1 = maps[0]
    a1 = _height_bound(f1)
    if f1.degree == 1 and f1.lc != 1:
        fixed = f1.constant_term / (1 - f1.lc)
        while fixed == a1:
            a1 += 1
    seen |= set(sp.primefactors(a1))
    point = [field.elem(a1)]
    fresh = []
    for _ in maps[1:]:
        q = int(sp.nextprime(max(seen | {2})))
        seen.add(q)
        fresh.append(q)
        point.append(field.elem(Fraction(1, q)))
    log("INFO", f"dense point {tuple(str(c) for c in point)} with fresh primes {fresh}")
    return DensePoint(tuple(point), {"height_bound": a1, "fresh_primes": fresh,
                                     "seen_primes": sorted(seen - set(fresh))})
