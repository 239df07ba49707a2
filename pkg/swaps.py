"""Ritt swaps on decompositions, the near-action of M_k, and chebyclumps."""
from dataclasses import dataclass

from algebra import compose_all
from config import log
from decomp import Decomposition, normalize, right_factor
from errors import DomainError
from ritty import chebyshev_relation, monomial_relation

DEFINED = "Defined"
UNDEFINED = "Undefined"
NEEDS_EXTENSION = "NeedsExtension"


@dataclass(frozen=True)
class SwapResult:
    outcome: str
    decomposition: Decomposition = None
    shape: str = ""
    reason: str = ""
    witness_field: object = None

    @property
    def defined(self):
        return self.outcome == DEFINED

    def to_json(self):
        out = {"outcome": self.outcome}
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.to_json()
        if self.shape:
            out["shape"] = self.shape
        if self.reason:
            out["reason"] = self.reason
        if self.witness_field is not None:
            out["witness_field"] = self.witness_field.to_text("y")
        return out


def undefined(reason):
    return SwapResult(UNDEFINED, reason=reason)


def swap_shape(outer, inner):
    """Name the basic identity a swapped pair comes from."""
    outer_mono = monomial_relation(outer) is not None
    inner_mono = monomial_relation(inner) is not None
    if outer_mono and inner_mono:
        return "monomial/monomial"
    if chebyshev_relation(outer) is not None and chebyshev_relation(inner) is not None:
        return "chebyshev/chebyshev"
    if outer_mono:
        return "monomial-past-sform"
    return "sform-past-monomial"


def try_ritt_swap(d, i):
    """Swap f_{i+1} o f_i; positions count from the innermost factor."""
    if not 1 <= i < d.k:
        raise DomainError("BAD_INDEX", f"swap position {i} outside 1..{d.k - 1}")
    outer, inner = d.factor(i + 1), d.factor(i)
    if outer.degree == inner.degree:
        return undefined("tautological: equal degrees")
    composite = outer.compose(inner)
    # the swapped inner factor has the degree of the old outer one
    found = right_factor(composite, outer.degree)
    if found is None:
        log("DEBUG", f"no Ritt swap at {i} for {d}")
        return undefined(f"no right factor of degree {outer.degree}")
    new_outer, new_inner = found
    swapped = normalize(d.replace_pair(i, new_outer, new_inner))
    return SwapResult(DEFINED, swapped, shape=swap_shape(outer, inner))


def apply_word(d, word):
    """Apply letters right to left; an undefined step absorbs the rest."""
    letters = list(word)
    for letter in letters:
        if not isinstance(letter, int) or not 1 <= letter < d.k:
            raise DomainError("BAD_INDEX", f"generator t{letter} outside M_{d.k}")
    current = d
    for letter in reversed(letters):
        result = try_ritt_swap(current, letter)
        if not result.defined:
            return result
        current = result.decomposition
    return SwapResult(DEFINED, current)


@dataclass(frozen=True)
class ChebyclumpInterval:
    """L o f_j o ... o f_i o M = C_n, or the quadratic field L and M need."""

    j: int
    i: int
    n: int
    L: object = None
    M: object = None
    witness_field: object = None

    def to_json(self):
        out = {"j": self.j, "i": self.i, "n": self.n}
        if self.L is not None:
            out.update(L=str(self.L), M=str(self.M))
        if self.witness_field is not None:
            out["witness_field"] = self.witness_field.to_text("y")
        return out


@dataclass
class ChebyclumpReport:
    intervals: list

    def to_json(self):
        return {"intervals": [c.to_json() for c in self.intervals]}


def _is_power_of_two(n):
    return n & (n - 1) == 0


def chebyclumps(d):
    """All maximal intervals whose composite is linearly related to some C_n."""
    found = []
    for i in range(1, d.k + 1):
        for j in range(i, d.k + 1):
            factors = d.factors[d.k - j:d.k - i + 1]
            composite = compose_all(factors)
            n = composite.degree
            if n < 3 or _is_power_of_two(n):
                continue
            rel = chebyshev_relation(composite)
            if rel is None:
                continue
            if rel.L is None:
                found.append(ChebyclumpInterval(j, i, n, witness_field=rel.witness_field))
            else:
                found.append(ChebyclumpInterval(j, i, n, rel.L.inverse(), rel.M.inverse()))
    maximal = [c for c in found
               if not any(o is not c and o.i <= c.i and c.j <= o.j for o in found)]
    return ChebyclumpReport(sorted(maximal, key=lambda c: (c.i, c.j)))
