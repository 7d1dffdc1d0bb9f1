"""Differential forms, the obstruction ideal, and closedness certificates."""

from fractions import Fraction

import pytest

from algforge.catalog import make_e0, make_tangent
from algforge.forms import (
    Form,
    Lambda2Ideal,
    d_squared,
    differential,
    pullback,
    strong_closed,
    weak_closed,
    weak_exact,
)
from algforge.poly import Poly

E0 = make_e0()
X1 = Poly.variable(2, 0)
X2 = Poly.variable(2, 1)
UNITS = [E0.unit_section(i) for i in range(4)]
IDEAL = Lambda2Ideal(E0)


def w(*idx):
    out = Form.dual(E0, idx[0])
    for i in idx[1:]:
        out = out.wedge(Form.dual(E0, i))
    return out


def test_wedge_is_graded_antisymmetric():
    a, b = Form.dual(E0, 0), Form.dual(E0, 1)
    assert a.wedge(b) == -(b.wedge(a))
    assert a.wedge(a).is_zero()
    two = a.wedge(b)
    assert two.wedge(two).is_zero()  # even degree squares to zero only when repeated


def test_differential_of_a_function():
    f = Form.function(E0, X1 * X2)
    df = differential(f)
    # d f (e) = anchor(e) f
    for i in range(4):
        assert df.eval_sections(UNITS[i]) == E0.anchor_of(UNITS[i]).apply(X1 * X2)


def test_differential_of_dual_generator():
    # frozen hand value: d w(X21) = -2 x1 w(X11)^w(X21) - 2 x2 w(X21)^w(X22)
    d = differential(Form.dual(E0, 1))
    want = w(0, 1).scale(-2 * X1) + w(1, 3).scale(-2 * X2)
    assert d == want


def test_d_squared_ideal_generators():
    # frozen hand values for the generators of the obstruction ideal
    gens = {i: d_squared(Form.dual(E0, i)) for i in range(4)}
    assert gens[0] == w(1, 2, 3).scale(-2 * X2 * X2)
    assert gens[1] == w(0, 1, 2).scale(-2 * X2 * X2)
    assert gens[2] == w(1, 2, 3).scale(2 * X1 * X1)
    assert gens[3] == w(0, 1, 2).scale(2 * X1 * X1)


def test_d_squared_pairs_with_minus_jacobiator():
    omega = Form.dual(E0, 0).scale(X2) + Form.dual(E0, 3).scale(X1 * X1)
    dd = d_squared(omega)
    jac = E0.jacobiator(UNITS[0], UNITS[1], UNITS[2])
    assert dd.eval_sections(UNITS[0], UNITS[1], UNITS[2]) == omega.eval_sections(-jac)


def test_d_squared_vanishes_above_degree_two():
    omega = w(0, 1, 2).scale(X1)
    assert d_squared(omega).is_zero()


def test_ideal_membership_fast_path_with_cofactors():
    assert IDEAL.fast_path
    member = w(1, 2, 3).scale(4 * X2 * X2 * X1)
    decision = IDEAL.membership(member)
    assert decision.is_member
    assert IDEAL.check_cofactors(member, decision)


def test_ideal_membership_refuses_outsiders():
    outsider = w(1, 2, 3).scale(X1)  # coefficient not in <x1^2, x2^2>
    decision = IDEAL.membership(outsider)
    assert decision.status == "not-member"
    # degree-2 forms can only be members when zero
    assert IDEAL.membership(w(0, 1)).status == "not-member"
    assert IDEAL.membership(Form.zero(E0, 2)).is_member


def test_normal_form_reduces_members_to_zero():
    member = w(0, 1, 2).scale(X1 * X1 * X2)
    assert IDEAL.normal_form(member).is_zero()
    mixed = member + w(0, 1, 3).scale(X1)
    assert IDEAL.normal_form(mixed) == w(0, 1, 3).scale(X1)


def test_strong_closed_with_checked_witness():
    # d(omega) = 0 makes any form strongly closed with the zero witness
    top = w(0, 1, 2, 3)
    decision = strong_closed(top)
    assert decision.is_yes
    assert d_squared(decision.witness) == differential(top)


def test_weak_closed_distinguishes():
    member_d = w(1, 2, 3).scale(-2 * X2 * X2)  # this IS d^2 w(X11) = d(d w(X11))
    # a 2-form whose differential is exactly an ideal generator
    omega = differential(Form.dual(E0, 0))
    assert differential(omega) == member_d
    assert weak_closed(omega, IDEAL).is_yes
    assert weak_closed(Form.dual(E0, 1), IDEAL).status == "not-member"


def test_weak_exact_finds_joint_split():
    theta = w(0, 1).scale(X1)  # 2-form, so the target and the ideal part are 3-forms
    target = differential(theta) + w(0, 1, 2).scale(X2 * X2 * 3)
    decision = weak_exact(target, IDEAL)
    assert decision.is_yes
    residual = target - differential(decision.witness)
    assert IDEAL.membership(residual).is_member


def test_weak_exact_gives_up_honestly():
    # w(X21) itself is not exact at low degree bounds
    assert weak_exact(Form.dual(E0, 1), IDEAL, max_degree=1).status == "no-witness"


def test_pullback_of_base_forms():
    t2 = make_tangent(2)
    base_form = Form(t2, 1, {(0,): X1 * X2})  # (x1 x2) dx1 on the tangent plane
    lifted = pullback(E0, base_form)
    # pairing with a generator applies the anchor: <pullback, X11> = x1^2 * x1 x2
    assert lifted.eval_sections(UNITS[0]) == X1 * X1 * (X1 * X2)
    assert lifted.eval_sections(UNITS[1]).is_zero()
    assert lifted.eval_sections(UNITS[2]) == X2 * X2 * (X1 * X2)


def test_pullback_commutes_with_d_on_the_plane():
    t2 = make_tangent(2)
    f = Form.function(t2, X1 * X1 * X2)
    lhs = pullback(E0, differential(f))
    rhs = differential(Form.function(E0, X1 * X1 * X2))
    assert lhs == rhs


def test_form_text_and_component_access():
    omega = w(0, 2).scale(Fraction(1, 2))
    assert omega.component((0, 2)) == Fraction(1, 2) * Poly.const(2, 1)
    assert "w(X11)^w(X12)" in omega.to_text()


def test_eval_rejects_wrong_arity():
    with pytest.raises(Exception):
        w(0, 1).eval_sections(UNITS[0])
