"""Ideals of the polynomial coefficient ring, with certified membership.

Membership is decided two ways:

* **monomial ideals** (every generator a single term): exact, unbounded —
  a polynomial belongs iff each of its terms is divisible by some generator
  monomial.  Division builds the cofactors, so a "yes" carries a certificate
  and a "no" is definitive.

* **general ideals**: a degree-bounded linear solve over the rationals.  With
  cofactor degree capped at D, "sum_i f_i*g_i = p" is a finite linear system
  in the monomial coefficients of the f_i.  A solution is an exact membership
  certificate; failure only means "no witness of degree <= D", never
  nonmembership.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from . import linsolve
from .poly import Poly

MEMBER = "member"
NOT_MEMBER = "not-member"
NO_WITNESS = "no-witness"


def monomials_up_to(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= max_degree, stable order."""
    out: list[tuple[int, ...]] = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            out.append(tuple(exps))
    return out


@dataclass
class Membership:
    """Outcome of an ideal-membership query.

    status is one of "member", "not-member" (exact paths only) or
    "no-witness" (bounded search exhausted at max_degree).  For "member" the
    cofactors satisfy sum_i cofactors[i]*gens[i] == p exactly.
    """

    status: str
    cofactors: list[Poly] | None = None
    max_degree: int | None = None

    @property
    def is_member(self) -> bool:
        return self.status == MEMBER


class CoeffIdeal:
    """A finitely generated ideal of the coefficient ring."""

    def __init__(self, nvars: int, gens: list[Poly]):
        self.nvars = nvars
        self.gens = [g for g in gens if not g.is_zero()]
        for g in self.gens:
            if g.nvars != nvars:
                raise ValueError("generator has the wrong number of variables")

    def is_monomial(self) -> bool:
        return all(len(g.terms) == 1 for g in self.gens)

    def member(self, p: Poly, max_degree: int = 4) -> Membership:
        if p.is_zero():
            return Membership(MEMBER, [Poly.zero(self.nvars) for _ in self.gens])
        if not self.gens:
            return Membership(NOT_MEMBER)
        if self.is_monomial():
            return self._member_monomial(p)
        return self._member_bounded(p, max_degree)

    # ---- exact path ----

    def _member_monomial(self, p: Poly) -> Membership:
        gen_data = []
        for g in self.gens:
            (exps, coeff), = g.terms.items()
            gen_data.append((exps, coeff))
        cofactors = [Poly.zero(self.nvars) for _ in self.gens]
        for exps, coeff in p.terms.items():
            hit = None
            for gi, (gexps, gcoeff) in enumerate(gen_data):
                if all(a >= b for a, b in zip(exps, gexps)):
                    hit = (gi, gexps, gcoeff)
                    break
            if hit is None:
                return Membership(NOT_MEMBER)
            gi, gexps, gcoeff = hit
            quotient = tuple(a - b for a, b in zip(exps, gexps))
            cofactors[gi] = cofactors[gi] + Poly.monomial(
                self.nvars, quotient, coeff / gcoeff
            )
        return Membership(MEMBER, cofactors)

    # ---- bounded path ----

    def _member_bounded(self, p: Poly, max_degree: int) -> Membership:
        monos = monomials_up_to(self.nvars, max_degree)
        # Unknowns: one coefficient per (generator, cofactor monomial).
        columns: list[dict[tuple[int, ...], Fraction]] = []
        for g in self.gens:
            for mu in monos:
                prod = g * Poly.monomial(self.nvars, mu)
                columns.append(dict(prod.terms))
        rows_index: dict[tuple[int, ...], int] = {}
        for col in columns:
            for exps in col:
                rows_index.setdefault(exps, len(rows_index))
        for exps in p.terms:
            rows_index.setdefault(exps, len(rows_index))
        nrows, ncols = len(rows_index), len(columns)
        a = [[Fraction(0)] * ncols for _ in range(nrows)]
        for j, col in enumerate(columns):
            for exps, coeff in col.items():
                a[rows_index[exps]][j] = coeff
        b = [Fraction(0)] * nrows
        for exps, coeff in p.terms.items():
            b[rows_index[exps]] = coeff
        x = linsolve.solve(a, b)
        if x is None:
            return Membership(NO_WITNESS, max_degree=max_degree)
        cofactors = []
        k = 0
        for _ in self.gens:
            terms: dict[tuple[int, ...], Fraction] = {}
            for mu in monos:
                if x[k]:
                    terms[mu] = x[k]
                k += 1
            cofactors.append(Poly(self.nvars, terms))
        return Membership(MEMBER, cofactors, max_degree=max_degree)
