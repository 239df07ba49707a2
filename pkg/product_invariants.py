"""Coordinatewise systems (f_1, ..., f_n): coordinate classes and invariant skeletons.

Each coordinate is linear, skew-conjugate to x^n or C_n (the group block), or
trivial. Invariant subvarieties of the whole system are intersections of
pieces coming from the three blocks; this module reports those pieces and
checks each one by substitution.
"""
import asyncio
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import sympy as sp

from algebra import FieldConfig, FieldElem, LinearMap, Poly, chebyshev, format_poly, to_fraction
from config import CONCURRENCY_LIMIT, DEFAULT_CURVE_BOUND, log
from errors import DomainError, InternalError
from skew import (CHEBYSHEV_KIND, MONOMIAL_KIND, Correspondence,
                  enumerate_invariant_curves, is_trivial, skew_conjugator,
                  verify_correspondence)

LINEAR = "Linear"
MONOMIAL_CONJUGATE = "MonomialConjugate"
CHEBYSHEV_CONJUGATE = "ChebyshevConjugate"
TRIVIAL = "Trivial"

UNRESOLVED_WITNESS = "UNRESOLVED_WITNESS"


@dataclass(frozen=True)
class CoordinateClass:
    verdict: str
    n: int = 1
    L: LinearMap = None
    flags: tuple = ()

    @property
    def kind(self):
        if self.verdict == MONOMIAL_CONJUGATE:
            return MONOMIAL_KIND
        if self.verdict == CHEBYSHEV_CONJUGATE:
            return CHEBYSHEV_KIND
        return None

    def to_json(self):
        out = {"verdict": self.verdict, "n": self.n}
        if self.L is not None:
            out["L"] = str(self.L)
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def classify_coordinate(f):
    if f.degree < 1:
        raise DomainError("DEGREE_TOO_SMALL", f"coordinate map {f} is constant")
    n = f.degree
    if n == 1:
        return CoordinateClass(LINEAR, 1, LinearMap.from_poly(f))
    L = skew_conjugator(f, n, MONOMIAL_KIND)
    if L is not None:
        return CoordinateClass(MONOMIAL_CONJUGATE, n, L)
    L = skew_conjugator(f, n, CHEBYSHEV_KIND)
    if L is not None:
        return CoordinateClass(CHEBYSHEV_CONJUGATE, n, L)
    trivial, evidence = is_trivial(f)
    if trivial:
        return CoordinateClass(TRIVIAL, n)
    # conjugate only after extending K
    verdict = MONOMIAL_CONJUGATE if evidence["kind"] == MONOMIAL_KIND else CHEBYSHEV_CONJUGATE
    log("WARNING", f"{f} is {verdict} only over an extension of K")
    return CoordinateClass(verdict, n, None, (UNRESOLVED_WITNESS,))


def conjugation_holds(f, cls):
    """L^sigma o P o L^-1 == f for the certificate stored in cls."""
    if cls.L is None or cls.kind is None:
        return False
    field = f.field
    core = Poly.monomial(field, cls.n) if cls.kind == MONOMIAL_KIND else chebyshev(cls.n, field)
    return cls.L.apply_sigma()(core).compose(cls.L.inverse().as_poly()) == f


# --- multiplicative relations ---

@dataclass
class MultiplicativeRelations:
    generators: tuple
    relations: list
    rank: int

    @property
    def independent(self):
        return not self.relations

    def to_json(self):
        return {
            "generators": [str(g) for g in self.generators],
            "relations": [list(e) for e in self.relations],
            "rank": self.rank,
        }


def _rational_scalar(value):
    if isinstance(value, FieldElem):
        if not value.is_rational:
            raise DomainError("UNSUPPORTED_FIELD",
                              f"multiplicative relations need rational scalars, got {value}")
        value = value.a
    value = to_fraction(value)
    if value == 0:
        raise DomainError("ZERO_SCALAR", "zero has no multiplicative relations")
    return value


def _integer_kernel(vectors):
    """Basis of {e in Z^r : sum e_i v_i = 0} by unimodular row reduction of [V | I]."""
    r = len(vectors)
    width = len(vectors[0]) if vectors else 0
    rows = [list(v) + [int(i == j) for j in range(r)] for i, v in enumerate(vectors)]
    pivot = 0
    for col in range(width):
        while pivot < r:
            live = [i for i in range(pivot, r) if rows[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: abs(rows[i][col]))
            rows[pivot], rows[best] = rows[best], rows[pivot]
            cleared = True
            for i in range(pivot + 1, r):
                q = rows[i][col] // rows[pivot][col]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[pivot])]
                if rows[i][col] != 0:
                    cleared = False
            if cleared:
                pivot += 1
                break
    return [row[width:] for row in rows[pivot:]]


def _drop_sign_character(basis, signs):
    """Sublattice where the number of negative generators used is even."""
    odd = [e for e in basis if sum(x * s for x, s in zip(e, signs)) % 2]
    if not odd:
        return basis
    anchor = odd[0]
    out = []
    for e in basis:
        if e is anchor:
            out.append([2 * x for x in e])
        elif sum(x * s for x, s in zip(e, signs)) % 2:
            out.append([x - y for x, y in zip(e, anchor)])
        else:
            out.append(e)
    return out


def _canonical_sign(e):
    for x in e:
        if x:
            return tuple(e) if x > 0 else tuple(-y for y in e)
    return tuple(e)


def multiplicative_relations(values):
    """Integer relations prod lambda_i^{e_i} = 1 among nonzero rationals."""
    gens = tuple(_rational_scalar(v) for v in values)
    factored = []
    primes = set()
    for g in gens:
        exps = dict(sp.factorint(abs(g.numerator)))
        for p, k in sp.factorint(g.denominator).items():
            exps[p] = exps.get(p, 0) - k
        exps.pop(1, None)
        factored.append(exps)
        primes.update(exps)
    primes = sorted(primes)
    vectors = [[exps.get(p, 0) for p in primes] for exps in factored]
    basis = _integer_kernel(vectors)
    signs = [1 if g < 0 else 0 for g in gens]
    relations = sorted((_canonical_sign(e) for e in _drop_sign_character(basis, signs)),
                       key=lambda e: (sum(abs(x) for x in e), e))
    for e in relations:
        value = Fraction(1)
        for g, k in zip(gens, e):
            value *= g ** k
        if value != 1:
            raise InternalError(f"relation {e} on {gens} evaluates to {value}")
    return MultiplicativeRelations(gens, relations, len(gens) - len(relations))


# --- linear block ---

@dataclass
class LinearSkeleton:
    rank: int
    shifts: dict = dc_field(default_factory=dict)
    scalings: list = dc_field(default_factory=list)
    translations: list = dc_field(default_factory=list)
    identities: list = dc_field(default_factory=list)
    relations: MultiplicativeRelations = None
    hyperplanes: list = dc_field(default_factory=list)
    characters: list = dc_field(default_factory=list)
    translation_relations: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "rank": self.rank,
            "hyperplanes": list(self.hyperplanes),
            "characters": list(self.characters),
            "translation_relations": list(self.translation_relations),
            "identity_coordinates": [f"x{i}" for i in self.identities],
            "relations": self.relations.to_json() if self.relations else None,
        }


def _as_linear(m):
    if isinstance(m, LinearMap):
        return m
    return LinearMap.from_poly(m)


def _shifted_var(i, c):
    if c == 0:
        return f"x{i}"
    return "(" + format_poly(Poly(FieldConfig(c.d), [-c, 1]), f"x{i}") + ")"


def _character_text(coords, exponents):
    parts = []
    for (i, c), e in zip(coords, exponents):
        if e == 0:
            continue
        var = _shifted_var(i, c)
        parts.append(var if e == 1 else f"{var}^{e}")
    return "*".join(parts) + " = c"


def linear_block_skeleton(maps, labels=None):
    """Rank of the generated group's closure and the invariant pieces it forces."""
    maps = [_as_linear(m) for m in maps]
    labels = list(labels) if labels is not None else list(range(1, len(maps) + 1))
    for L in maps:
        if not (L.a.is_rational and L.b.is_rational):
            raise DomainError("UNSUPPORTED_FIELD", f"linear block needs rational maps, got {L}")
    out = LinearSkeleton(rank=0)
    for i, L in zip(labels, maps):
        if L.a != 1:
            # conjugate to the scaling a*z with z = x - c
            c = L.b / (1 - L.a)
            out.shifts[i] = c
            out.scalings.append((i, L.a))
            out.hyperplanes.append(f"x{i} = {c}")
        elif not L.b.is_zero:
            out.translations.append((i, L.b))
        else:
            out.identities.append(i)
    if out.scalings:
        out.relations = multiplicative_relations([a for _, a in out.scalings])
        coords = [(i, out.shifts[i]) for i, _ in out.scalings]
        for e in out.relations.relations:
            out.characters.append(_character_text(coords, e))
        out.rank += out.relations.rank
    if out.translations:
        out.rank += 1
        (i0, b0), rest = out.translations[0], out.translations[1:]
        for j, bj in rest:
            xi, xj = sp.Symbol(f"x{i0}"), sp.Symbol(f"x{j}")
            expr = b0.to_sympy() * xj - bj.to_sympy() * xi
            out.translation_relations.append(sp.sstr(expr).replace("**", "^") + " = c")
    log("DEBUG", f"linear block rank {out.rank} over {len(maps)} coordinates")
    return out


# --- group block ---

def is_invariant_subtorus(degrees, exponents, value, field=None):
    """Is {prod z_i^{e_i} = value} mapped into its sigma-twist by z_i -> z_i^{N_i}."""
    field = field or FieldConfig()
    used = {N for N, e in zip(degrees, exponents) if e}
    if len(used) != 1:
        return False
    lam = used.pop()
    value = field.coerce(value)
    if value.is_zero:
        return False
    return value ** lam == field.apply_sigma(value)


def _torsion_values(cls):
    if cls.kind == MONOMIAL_KIND:
        base = [0, 1] + ([-1] if cls.n % 2 else [])
    else:
        base = [2] + ([-2] if cls.n % 2 else [])
    return base


def _group_points(i, f, cls):
    field = f.field
    points = []
    for c in _torsion_values(cls):
        x = cls.L(field.coerce(c))
        if f(x) != field.apply_sigma(x):
            log("WARNING", f"x{i} = {x} is not skew-fixed by {f}")
            continue
        points.append({"coordinate": i, "equation": f"x{i} = {x}", "torsion": str(c)})
    return points


def _group_pair_curves(i, fi, ci, j, fj, cj, bound):
    if ci.kind != cj.kind or ci.n != cj.n or ci.L is None or cj.L is None:
        return []
    field = fi.field
    N = ci.n
    if ci.kind == MONOMIAL_KIND:
        piece = lambda m: Poly.monomial(field, m)
    else:
        piece = lambda m: chebyshev(m, field)
    found = []
    for a in range(1, bound + 1):
        for b in range(1, bound + 1):
            if gcd(a, b) != 1:
                continue
            if ci.kind == MONOMIAL_KIND and not is_invariant_subtorus([N, N], [a, -b], 1, field):
                continue
            c = Correspondence(fi, fj, piece(N),
                               ci.L(piece(b)), cj.L(piece(a)))
            if verify_correspondence(c):
                found.append({"pair": [i, j], "correspondence": c})
            else:
                log("WARNING", f"pair ({i}, {j}) curve with exponents ({a}, {b}) fails")
    return found


# --- trivial block ---

async def _pair_catalog(maps, pairs, bound):
    sem = asyncio.Semaphore(CONCURRENCY_LIMIT)

    async def one(i, j):
        async with sem:
            return await asyncio.to_thread(enumerate_invariant_curves,
                                           maps[i - 1], maps[j - 1], bound)

    return await asyncio.gather(*[one(i, j) for i, j in pairs])


@dataclass
class InvariantSkeleton:
    classes: list
    blocks: dict
    linear: LinearSkeleton = None
    group_points: list = dc_field(default_factory=list)
    group_curves: list = dc_field(default_factory=list)
    trivial_curves: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {
            "classes": [c.to_json() for c in self.classes],
            "blocks": {name: list(idx) for name, idx in self.blocks.items()},
            "linear": self.linear.to_json() if self.linear else None,
            "group": {
                "points": list(self.group_points),
                "curves": [{"pair": g["pair"], **g["correspondence"].to_json()}
                           for g in self.group_curves],
            },
            "trivial": {f"{i},{j}": [c.to_json() for c in cs]
                        for (i, j), cs in sorted(self.trivial_curves.items())},
        }


def invariant_skeleton(maps, bound=None):
    """Split the coordinates into blocks and collect each block's invariant pieces."""
    bound = bound or DEFAULT_CURVE_BOUND
    maps = list(maps)
    classes = [classify_coordinate(f) for f in maps]
    blocks = {"linear": [], "group": [], "trivial": []}
    for i, cls in enumerate(classes, start=1):
        if cls.verdict == LINEAR:
            blocks["linear"].append(i)
        elif cls.verdict == TRIVIAL:
            blocks["trivial"].append(i)
        else:
            blocks["group"].append(i)
    skeleton = InvariantSkeleton(classes, blocks)

    if blocks["linear"]:
        skeleton.linear = linear_block_skeleton(
            [classes[i - 1].L for i in blocks["linear"]], blocks["linear"])

    group = [i for i in blocks["group"] if classes[i - 1].L is not None]
    for i in group:
        skeleton.group_points.extend(_group_points(i, maps[i - 1], classes[i - 1]))
    for a, i in enumerate(group):
        for j in group[a + 1:]:
            skeleton.group_curves.extend(_group_pair_curves(
                i, maps[i - 1], classes[i - 1], j, maps[j - 1], classes[j - 1], bound))

    trivial = blocks["trivial"]
    pairs = [(i, j) for a, i in enumerate(trivial) for j in trivial[a:]]
    if pairs:
        log("INFO", f"cataloguing curves for {len(pairs)} trivial pairs up to degree {bound}")
        results = asyncio.run(_pair_catalog(maps, pairs, bound))
        skeleton.trivial_curves = dict(zip(pairs, results))
    log("INFO", f"skeleton: {len(blocks['linear'])} linear, {len(blocks['group'])} group, "
                f"{len(trivial)} trivial coordinates")
    return skeleton
