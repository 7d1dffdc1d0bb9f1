"""Exterior forms on an algebroid's dual generator basis.

A k-form stores polynomial components on strictly increasing k-tuples of
generator indices.  The differential follows the alternating Cartan sum, so
when the bracket fails the Jacobi identity the square of d is not zero; its
failure on dual generators spans an exterior ideal, and the interesting
closedness questions are posed modulo that ideal.

Membership in the ideal is decided two ways.  When every ideal generator is a
single monomial on a single index tuple — as happens for the rank-4 flagship
example — membership decouples tuple by tuple into monomial-ideal division,
which is exact at every degree.  Otherwise a degree-bounded linear solve
provides witnesses, and a failed search is reported as such rather than as a
refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linsolve
from .algebroid import Algebroid, AlgebroidError, Section
from .ideals import monomials_up_to
from .poly import Poly


def _merge_sign(s: tuple[int, ...], t: tuple[int, ...]):
    """Sign and result of sorting the concatenation of two sorted tuples.

    Returns (0, None) when the tuples share an index.
    """
    out = []
    i = j = 0
    sign = 1
    while i < len(s) and j < len(t):
        if s[i] == t[j]:
            return 0, None
        if s[i] < t[j]:
            out.append(s[i])
            i += 1
        else:
            out.append(t[j])
            j += 1
            if (len(s) - i) % 2:
                sign = -sign
    out.extend(s[i:])
    out.extend(t[j:])
    return sign, tuple(out)


def _poly_det(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    nvars = rows[0][0].nvars if n else 0
    if n == 0:
        return Poly.const(nvars, 1)
    if n == 1:
        return rows[0][0]
    out = Poly.zero(nvars)
    for col in range(n):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [r[:col] + r[col + 1 :] for r in rows[1:]]
        term = entry * _poly_det(minor)
        out = out + term if col % 2 == 0 else out - term
    return out


class Form:
    """Alternating polynomial form of fixed degree on the generator basis."""

    __slots__ = ("algebroid", "degree", "comps")

    def __init__(self, algebroid: Algebroid, degree: int, comps: dict[tuple[int, ...], Poly]):
        if degree < 0:
            raise AlgebroidError("form degree must be nonnegative")
        self.algebroid = algebroid
        self.degree = degree
        clean: dict[tuple[int, ...], Poly] = {}
        for key, value in comps.items():
            key = tuple(key)
            if len(key) != degree:
                raise AlgebroidError("component key has the wrong length")
            if any(not 0 <= i < algebroid.rank for i in key):
                raise AlgebroidError("component index out of range")
            if list(key) != sorted(set(key)):
                raise AlgebroidError("component keys must be strictly increasing")
            if not value.is_zero():
                clean[key] = value
        self.comps = clean

    # ---- constructors ----

    @staticmethod
    def zero(algebroid: Algebroid, degree: int) -> Form:
        return Form(algebroid, degree, {})

    @staticmethod
    def function(algebroid: Algebroid, f: Poly | int | Fraction) -> Form:
        if not isinstance(f, Poly):
            f = Poly.const(algebroid.nvars, f)
        return Form(algebroid, 0, {(): f})

    @staticmethod
    def dual(algebroid: Algebroid, index: int) -> Form:
        """The dual basis 1-form of a generator."""
        return Form(algebroid, 1, {(index,): Poly.const(algebroid.nvars, 1)})

    # ---- structure ----

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, key: tuple[int, ...]) -> Poly:
        return self.comps.get(tuple(key), Poly.zero(self.algebroid.nvars))

    def sorted_comps(self):
        return sorted(self.comps.items())

    def __add__(self, other: Form) -> Form:
        self._check_compatible(other)
        comps = dict(self.comps)
        for key, value in other.comps.items():
            comps[key] = comps.get(key, Poly.zero(self.algebroid.nvars)) + value
        return Form(self.algebroid, self.degree, comps)

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __neg__(self) -> Form:
        return Form(self.algebroid, self.degree, {k: -v for k, v in self.comps.items()})

    def scale(self, f: Poly | int | Fraction) -> Form:
        return Form(self.algebroid, self.degree, {k: v * f for k, v in self.comps.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Form)
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def _check_compatible(self, other: Form) -> None:
        if self.algebroid is not other.algebroid and self.algebroid.gen_names != other.algebroid.gen_names:
            raise AlgebroidError("forms live on different algebroids")
        if self.degree != other.degree:
            raise AlgebroidError("forms have different degrees")

    # ---- evaluation ----

    def eval_sections(self, *sections: Section) -> Poly:
        """Full alternating evaluation on polynomial sections."""
        if len(sections) != self.degree:
            raise AlgebroidError("wrong number of arguments for this degree")
        if self.degree == 0:
            return self.component(())
        out = Poly.zero(self.algebroid.nvars)
        for key, coeff in self.comps.items():
            rows = [[s.coeffs[i] for i in key] for s in sections]
            out = out + coeff * _poly_det(rows)
        return out

    def eval_section_then_gens(self, s: Section, rest: tuple[int, ...]) -> Poly:
        """Evaluate with one polynomial section followed by unit generators."""
        out = Poly.zero(self.algebroid.nvars)
        for t, coeff in enumerate(s.coeffs):
            if coeff.is_zero() or t in rest:
                continue
            pos = sum(1 for r in rest if r < t)
            merged = tuple(sorted(rest + (t,)))
            value = self.comps.get(merged)
            if value is None:
                continue
            signed = value if pos % 2 == 0 else -value
            out = out + coeff * signed
        return out

    # ---- wedge ----

    def wedge(self, other: Form) -> Form:
        if self.algebroid is not other.algebroid and self.algebroid.gen_names != other.algebroid.gen_names:
            raise AlgebroidError("forms live on different algebroids")
        comps: dict[tuple[int, ...], Poly] = {}
        zero = Poly.zero(self.algebroid.nvars)
        for s, a in self.comps.items():
            for t, b in other.comps.items():
                sign, merged = _merge_sign(s, t)
                if sign == 0:
                    continue
                term = a * b
                if sign < 0:
                    term = -term
                comps[merged] = comps.get(merged, zero) + term
        return Form(self.algebroid, self.degree + other.degree, comps)

    # ---- text ----

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        names = self.algebroid.gen_names
        vnames = self.algebroid.base.var_names
        pieces = []
        for key, coeff in self.sorted_comps():
            basis = "^".join(f"w({names[i]})" for i in key)
            text = coeff.to_text(vnames)
            if not key:
                pieces.append(text)
            elif text == "1":
                pieces.append(basis)
            elif text == "-1":
                pieces.append(f"-{basis}")
            else:
                body = f"({text})" if (" " in text or text.startswith("-")) else text
                pieces.append(f"{body} * {basis}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"Form({self.to_text()})"


# ---------------------------------------------------------------------------
# the differential
# ---------------------------------------------------------------------------


def differential(omega: Form) -> Form:
    """Alternating sum of anchored derivatives and bracket insertions.

    d ω(X_0,…,X_k) = Σ_i (−1)^i ρ(X_i) ω(…X̂_i…)
                     + Σ_{i<j} (−1)^{i+j} ω([X_i,X_j], …X̂_iX̂_j…)
    evaluated on generator tuples.
    """
    a = omega.algebroid
    k = omega.degree
    m = a.rank
    if k >= m:
        return Form.zero(a, k + 1)
    comps: dict[tuple[int, ...], Poly] = {}
    for u in combinations(range(m), k + 1):
        total = Poly.zero(a.nvars)
        for i in range(k + 1):
            reduced = u[:i] + u[i + 1 :]
            value = omega.comps.get(reduced)
            if value is not None:
                term = a.anchor[u[i]].apply(value)
                total = total + term if i % 2 == 0 else total - term
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                reduced = tuple(x for t, x in enumerate(u) if t != i and t != j)
                term = omega.eval_section_then_gens(a.bracket_gen(u[i], u[j]), reduced)
                if (i + j) % 2 == 0:
                    total = total + term
                else:
                    total = total - term
        if not total.is_zero():
            comps[u] = total
    return Form(a, k + 1, comps)


def d_squared(omega: Form) -> Form:
    return differential(differential(omega))


def pullback(algebroid: Algebroid, base_form: Form) -> Form:
    """Precompose a coordinate-frame form with the anchor.

    The input is a form over a rank-n algebroid whose generators stand for
    the n coordinate fields of the base (the tangent builtin fits); the
    output evaluates it on anchor images.
    """
    n = algebroid.nvars
    if base_form.algebroid.rank != n:
        raise AlgebroidError("base form rank must equal the number of base variables")
    k = base_form.degree
    if k == 0:
        return Form.function(algebroid, base_form.component(()))
    comps: dict[tuple[int, ...], Poly] = {}
    for u in combinations(range(algebroid.rank), k):
        total = Poly.zero(n)
        for key, coeff in base_form.comps.items():
            rows = [[algebroid.anchor[g].comps[j] for j in key] for g in u]
            total = total + coeff * _poly_det(rows)
        if not total.is_zero():
            comps[u] = total
    return Form(algebroid, k, comps)


# ---------------------------------------------------------------------------
# the exterior ideal measuring d²
# ---------------------------------------------------------------------------


MEMBER = "member"
NOT_MEMBER = "not-member"
NO_WITNESS = "no-witness"


@dataclass
class IdealDecision:
    status: str
    cofactors: dict[int, Form] = field(default_factory=dict)
    note: str = ""

    @property
    def is_member(self) -> bool:
        return self.status == MEMBER


class Lambda2Ideal:
    """Exterior ideal generated by d² of the dual generator basis."""

    def __init__(self, algebroid: Algebroid):
        self.algebroid = algebroid
        self.gens3 = [d_squared(Form.dual(algebroid, i)) for i in range(algebroid.rank)]

    def nonzero_gens(self) -> list[tuple[int, Form]]:
        return [(a, g) for a, g in enumerate(self.gens3) if not g.is_zero()]

    @property
    def is_trivial(self) -> bool:
        return not self.nonzero_gens()

    @property
    def fast_path(self) -> bool:
        """True when every generator is one monomial on one index tuple."""
        for _, g in self.nonzero_gens():
            if len(g.comps) != 1:
                return False
            (coeff,) = g.comps.values()
            if len(coeff.terms) != 1:
                return False
        return True

    # ---- membership ----

    def membership(self, omega: Form, max_degree: int = 4) -> IdealDecision:
        if omega.is_zero():
            return IdealDecision(MEMBER, {})
        if omega.degree <= 2:
            return IdealDecision(NOT_MEMBER, note="degrees 0..2 contain only the zero form")
        if self.is_trivial:
            return IdealDecision(NOT_MEMBER, note="ideal is zero")
        if self.fast_path:
            return self._membership_fast(omega)
        return self._membership_bounded(omega, max_degree)

    def _membership_fast(self, omega: Form) -> IdealDecision:
        a = self.algebroid
        k = omega.degree
        cof_comps: dict[int, dict[tuple[int, ...], Poly]] = {}
        for u, coeff in omega.comps.items():
            slots = []  # (gen index, complement tuple, sign, monomial Poly)
            for g_idx, g in self.nonzero_gens():
                ((t_a, mono),) = g.comps.items()
                if not set(t_a) <= set(u):
                    continue
                s = tuple(sorted(set(u) - set(t_a)))
                sign, merged = _merge_sign(s, t_a)
                if sign == 0 or merged != u:
                    continue
                slots.append((g_idx, s, sign, mono))
            remainder, quotients = _monomial_divide(coeff, [mono for _, _, _, mono in slots])
            if not remainder.is_zero():
                return IdealDecision(
                    NOT_MEMBER,
                    note=(
                        "component on "
                        + "^".join(f"w({a.gen_names[i]})" for i in u)
                        + " has terms outside the generator monomials"
                    ),
                )
            for (g_idx, s, sign, _), q in zip(slots, quotients):
                if q.is_zero():
                    continue
                bucket = cof_comps.setdefault(g_idx, {})
                signed = q if sign > 0 else -q
                bucket[s] = bucket.get(s, Poly.zero(a.nvars)) + signed
        cofactors = {
            g_idx: Form(a, k - 3, comps) for g_idx, comps in cof_comps.items()
        }
        return IdealDecision(MEMBER, cofactors)

    def _membership_bounded(self, omega: Form, max_degree: int) -> IdealDecision:
        a = self.algebroid
        k = omega.degree
        if k < 3:
            return IdealDecision(NOT_MEMBER, note="ideal starts in degree 3")
        columns = []
        tags = []  # (gen index, tuple, exps)
        monos = monomials_up_to(a.nvars, max_degree)
        for g_idx, g in self.nonzero_gens():
            for s in combinations(range(a.rank), k - 3):
                eta = Form(a, k - 3, {s: Poly.const(a.nvars, 1)})
                base = eta.wedge(g)
                if base.is_zero():
                    continue
                for mu in monos:
                    columns.append(base.scale(Poly.monomial(a.nvars, mu)))
                    tags.append((g_idx, s, mu))
        x = _solve_forms(columns, omega)
        if x is None:
            return IdealDecision(NO_WITNESS, note=f"no witness with coefficient degree <= {max_degree}")
        cof_comps: dict[int, dict[tuple[int, ...], Poly]] = {}
        for val, (g_idx, s, mu) in zip(x, tags):
            if not val:
                continue
            bucket = cof_comps.setdefault(g_idx, {})
            bucket[s] = bucket.get(s, Poly.zero(a.nvars)) + Poly.monomial(a.nvars, mu, val)
        cofactors = {g: Form(a, k - 3, c) for g, c in cof_comps.items()}
        return IdealDecision(MEMBER, cofactors)

    def check_cofactors(self, omega: Form, decision: IdealDecision) -> bool:
        """Recombine cofactors against the generators; must reproduce omega."""
        if not decision.is_member:
            return False
        total = Form.zero(self.algebroid, omega.degree)
        for g_idx, eta in decision.cofactors.items():
            total = total + eta.wedge(self.gens3[g_idx])
        return total == omega

    # ---- normal form ----

    def normal_form(self, omega: Form, max_degree: int = 4) -> Form:
        """Canonical representative of omega modulo the ideal."""
        if omega.degree <= 2 or self.is_trivial or omega.is_zero():
            return omega
        if self.fast_path:
            comps = {}
            for u, coeff in omega.comps.items():
                gen_monos = []
                for _, g in self.nonzero_gens():
                    ((t_a, mono),) = g.comps.items()
                    if set(t_a) <= set(u):
                        gen_monos.append(mono)
                remainder, _ = _monomial_divide(coeff, gen_monos)
                if not remainder.is_zero():
                    comps[u] = remainder
            return Form(self.algebroid, omega.degree, comps)
        return self._normal_form_bounded(omega, max_degree)

    def _normal_form_bounded(self, omega: Form, max_degree: int) -> Form:
        a = self.algebroid
        k = omega.degree
        columns = []
        monos = monomials_up_to(a.nvars, max_degree)
        for _, g in self.nonzero_gens():
            for s in combinations(range(a.rank), k - 3):
                eta = Form(a, k - 3, {s: Poly.const(a.nvars, 1)})
                base = eta.wedge(g)
                if base.is_zero():
                    continue
                for mu in monos:
                    columns.append(base.scale(Poly.monomial(a.nvars, mu)))
        coords = _coordinate_order([omega, *columns])
        index = {c: i for i, c in enumerate(coords)}
        rows = [_form_vector(col, index) for col in columns]
        reduced, pivots = linsolve.rref(rows) if rows else ([], [])
        vec = _form_vector(omega, index)
        for row, piv in zip(reduced, pivots):
            if vec[piv]:
                factor = vec[piv]
                for i in range(len(vec)):
                    vec[i] -= factor * row[i]
        comps: dict[tuple[int, ...], Poly] = {}
        for (u, exps), i in index.items():
            if vec[i]:
                comps.setdefault(u, Poly.zero(a.nvars))
                comps[u] = comps[u] + Poly.monomial(a.nvars, exps, vec[i])
        return Form(a, k, comps)


def _monomial_divide(p: Poly, gen_monos: list[Poly]):
    """Divide by scalar-monomial generators: remainder plus one quotient each.

    Terms divisible by several generators go to the first dividing one, so the
    remainder — the part divisible by none — is canonical.
    """
    nvars = p.nvars
    quotients = [Poly.zero(nvars) for _ in gen_monos]
    remainder = Poly.zero(nvars)
    gens = []
    for g in gen_monos:
        ((exps, scalar),) = g.terms.items()
        gens.append((exps, scalar))
    for exps, coeff in p.terms.items():
        for idx, (g_exps, g_scalar) in enumerate(gens):
            if all(e >= ge for e, ge in zip(exps, g_exps)):
                q_exps = tuple(e - ge for e, ge in zip(exps, g_exps))
                quotients[idx] = quotients[idx] + Poly.monomial(nvars, q_exps, coeff / g_scalar)
                break
        else:
            remainder = remainder + Poly.monomial(nvars, exps, coeff)
    return remainder, quotients


def _coordinate_order(forms: list[Form]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    coords = set()
    for f in forms:
        for u, coeff in f.comps.items():
            for exps in coeff.terms:
                coords.add((u, exps))
    return sorted(coords, key=lambda c: (c[0], (-sum(c[1]), tuple(-e for e in c[1]))))


def _form_vector(f: Form, index) -> list[Fraction]:
    vec = [Fraction(0)] * len(index)
    for u, coeff in f.comps.items():
        for exps, val in coeff.terms.items():
            vec[index[(u, exps)]] = val
    return vec


def _solve_forms(columns: list[Form], target: Form):
    """Exact rational solve of sum_i x_i * columns_i = target, None if unsolvable."""
    coords = _coordinate_order([target, *columns])
    index = {c: i for i, c in enumerate(coords)}
    if not coords:
        return [Fraction(0)] * len(columns)
    mat = [[Fraction(0)] * len(columns) for _ in coords]
    for cidx, col in enumerate(columns):
        for u, coeff in col.comps.items():
            for exps, val in coeff.terms.items():
                mat[index[(u, exps)]][cidx] = val
    rhs = _form_vector(target, index)
    return linsolve.solve(mat, rhs)


# ---------------------------------------------------------------------------
# closedness and exactness decisions
# ---------------------------------------------------------------------------


YES = "yes"


@dataclass
class ClosednessDecision:
    status: str  # "yes" | "not-member"/"no" | "no-witness"
    witness: Form | None = None
    ideal_cofactors: dict[int, Form] | None = None
    note: str = ""

    @property
    def is_yes(self) -> bool:
        return self.status == YES


def _theta_columns(a: Algebroid, degree: int, max_degree: int, operator):
    """Images under ``operator`` of all monomial basis forms of the degree."""
    columns = []
    tags = []
    if degree < 0:
        return columns, tags
    monos = monomials_up_to(a.nvars, max_degree)
    for s in combinations(range(a.rank), degree):
        base = Form(a, degree, {s: Poly.const(a.nvars, 1)})
        for mu in monos:
            candidate = base.scale(Poly.monomial(a.nvars, mu))
            image = operator(candidate)
            if image.is_zero():
                continue
            columns.append(image)
            tags.append((s, mu))
    return columns, tags


def _assemble(a: Algebroid, degree: int, coeffs, tags) -> Form:
    comps: dict[tuple[int, ...], Poly] = {}
    for val, (s, mu) in zip(coeffs, tags):
        if not val:
            continue
        comps.setdefault(s, Poly.zero(a.nvars))
        comps[s] = comps[s] + Poly.monomial(a.nvars, mu, val)
    return Form(a, degree, comps)


def strong_closed(omega: Form, max_degree: int = 4) -> ClosednessDecision:
    """Is d omega the d-square of some lower form?  Bounded witness search."""
    a = omega.algebroid
    d_omega = differential(omega)
    if d_omega.is_zero():
        return ClosednessDecision(YES, Form.zero(a, max(omega.degree - 1, 0)), note="d omega = 0")
    columns, tags = _theta_columns(a, omega.degree - 1, max_degree, d_squared)
    x = _solve_forms(columns, d_omega)
    if x is None:
        return ClosednessDecision(
            NO_WITNESS, note=f"no theta with coefficient degree <= {max_degree}"
        )
    theta = _assemble(a, omega.degree - 1, x, tags)
    return ClosednessDecision(YES, theta)


def weak_closed(omega: Form, ideal: Lambda2Ideal, max_degree: int = 4) -> ClosednessDecision:
    """Is d omega in the ideal?"""
    decision = ideal.membership(differential(omega), max_degree)
    if decision.is_member:
        return ClosednessDecision(YES, ideal_cofactors=decision.cofactors)
    return ClosednessDecision(decision.status, note=decision.note)


def weak_exact(omega: Form, ideal: Lambda2Ideal, max_degree: int = 4) -> ClosednessDecision:
    """Does omega split as d theta' plus an ideal element?  Joint solve."""
    a = omega.algebroid
    if omega.is_zero():
        return ClosednessDecision(YES, Form.zero(a, max(omega.degree - 1, 0)), {})
    d_columns, d_tags = _theta_columns(a, omega.degree - 1, max_degree, differential)
    ideal_columns = []
    ideal_tags = []
    if omega.degree >= 3:
        monos = monomials_up_to(a.nvars, max_degree)
        for g_idx, g in ideal.nonzero_gens():
            for s in combinations(range(a.rank), omega.degree - 3):
                eta = Form(a, omega.degree - 3, {s: Poly.const(a.nvars, 1)})
                base = eta.wedge(g)
                if base.is_zero():
                    continue
                for mu in monos:
                    ideal_columns.append(base.scale(Poly.monomial(a.nvars, mu)))
                    ideal_tags.append((g_idx, s, mu))
    x = _solve_forms(d_columns + ideal_columns, omega)
    if x is None:
        return ClosednessDecision(
            NO_WITNESS, note=f"no split with coefficient degree <= {max_degree}"
        )
    theta = _assemble(a, omega.degree - 1, x[: len(d_columns)], d_tags)
    cof_comps: dict[int, dict[tuple[int, ...], Poly]] = {}
    for val, (g_idx, s, mu) in zip(x[len(d_columns) :], ideal_tags):
        if not val:
            continue
        bucket = cof_comps.setdefault(g_idx, {})
        bucket[s] = bucket.get(s, Poly.zero(a.nvars)) + Poly.monomial(a.nvars, mu, val)
    cofactors = {g: Form(a, omega.degree - 3, c) for g, c in cof_comps.items()}
    return ClosednessDecision(YES, theta, cofactors)
