"""Curvature matrices, trace forms, transgression, and base pullback."""

from itertools import combinations

from algforge.catalog import make_e0, torsionfree_gamma
from algforge.charclass import (
    FormMatrix,
    cartan_residual,
    char_form,
    connection_forms,
    curvature_matrix,
    dR_identity_residual,
    d_trace_power_residual,
    pullback_consistency,
    trace_commutator_residual,
    transgression_check,
)
from algforge.connection import EConnection, flat_connection
from algforge.forms import Form, Lambda2Ideal, d_squared, differential, strong_closed, weak_closed
from algforge.poly import Poly
from algforge.sampling import Sampler

E0 = make_e0()
X1 = Poly.variable(2, 0)
X2 = Poly.variable(2, 1)
TF = EConnection(E0, torsionfree_gamma(E0), name="torsionfree")
FLAT = flat_connection(E0)
IDEAL = Lambda2Ideal(E0)


def w(*idx):
    out = Form.dual(E0, idx[0])
    for i in idx[1:]:
        out = out.wedge(Form.dual(E0, i))
    return out


def test_form_matrix_algebra():
    ident = FormMatrix.identity(E0, 4)
    theta = connection_forms(TF)
    assert (theta - theta).is_zero()
    assert theta.wedge_mul(ident).degree == theta.degree + 0
    assert theta.wedge_power(0).entries[0][0] == Form.function(E0, 1)
    assert theta.wedge_power(2).degree == 2


def test_connection_form_entries():
    theta = connection_forms(TF)
    # theta[a][b] collects the gamma coefficients: nabla_{e_beta} e_b = sum_a theta[a][b](e_beta) e_a
    assert theta.entries[0][0] == Form.dual(E0, 0).scale(2 * X1)
    assert theta.entries[0][2] == Form.dual(E0, 1).scale(2 * X2)
    assert theta.entries[1][0].is_zero()


def test_structure_equation_both_fixed_connections():
    assert cartan_residual(TF).is_zero()
    assert cartan_residual(FLAT).is_zero()
    assert dR_identity_residual(TF).is_zero()
    assert dR_identity_residual(FLAT).is_zero()


def test_curvature_matrix_against_pointwise_curvature():
    r = curvature_matrix(TF)
    units = [E0.unit_section(i) for i in range(4)]
    for i, j in combinations(range(4), 2):
        for b in range(4):
            value = TF.curvature(units[i], units[j], units[b])
            for a in range(4):
                assert r.entries[a][b].component((i, j)) == value.coeffs[a]


def test_first_trace_form_frozen_value():
    tr = char_form(TF, 1)
    assert tr == w(0, 2).scale(-4 * X2 * X2) + w(1, 3).scale(4 * X1 * X1)


def test_second_trace_form_frozen_value():
    tr2 = char_form(TF, 2)
    assert tr2 == w(0, 1, 2, 3).scale(16 * X1 * X1 * X2 * X2)


def test_trace_forms_of_flat_connection_vanish():
    for k in (1, 2, 3):
        assert char_form(FLAT, k).is_zero()


def test_trace_of_connection_forms_witnesses_closedness():
    tr = char_form(TF, 1)
    theta_trace = connection_forms(TF).trace()
    assert theta_trace == Form.dual(E0, 0).scale(4 * X1) + Form.dual(E0, 3).scale(4 * X2)
    assert d_squared(theta_trace) == differential(tr)
    decision = strong_closed(tr)
    assert decision.is_yes


def test_second_trace_form_weak_closed():
    assert weak_closed(char_form(TF, 2), IDEAL).is_yes


def test_derivative_of_trace_powers_identity():
    sampler = Sampler(3)
    conns = [TF, FLAT] + [sampler.connection(E0, max_degree=1) for _ in range(3)]
    for conn in conns:
        for k in (1, 2):
            assert d_trace_power_residual(conn, k).is_zero()
        assert trace_commutator_residual(conn, 1).is_zero()
        assert trace_commutator_residual(conn, 2).is_zero()


def test_transgression_flat_to_torsionfree():
    for k in (1, 2):
        rep = transgression_check(FLAT, TF, k, ideal=IDEAL)
        assert rep.identity_ok
        assert rep.restriction_ok
        assert rep.ideal_membership.is_member
        assert rep.ok
        assert rep.difference == char_form(TF, k) - char_form(FLAT, k)
    # order 1: the primary witness is exactly the trace of the connection forms
    rep1 = transgression_check(FLAT, TF, 1, ideal=IDEAL)
    assert rep1.primary_witness == connection_forms(TF).trace()


def test_transgression_between_seeded_connections():
    sampler = Sampler(11)
    first = sampler.connection(E0, max_degree=1)
    second = sampler.connection(E0, max_degree=1)
    rep = transgression_check(first, second, 1, ideal=IDEAL)
    assert rep.ok


def test_pullback_consistency_flat_base():
    z = Poly.zero(2)
    christoffels = [[[z, z], [z, z]], [[z, z], [z, z]]]
    rep = pullback_consistency(E0, christoffels, 1, ideal=IDEAL)
    assert rep.ok
    assert rep.algebroid_side.is_zero()
    assert rep.base_side.is_zero()


def test_pullback_consistency_curved_base_frozen_value():
    z = Poly.zero(2)
    christoffels = [[[z, z], [z, z]], [[X1 * X1, z], [z, z]]]
    rep = pullback_consistency(E0, christoffels, 1, ideal=IDEAL)
    assert rep.ok
    want = (
        w(0, 1).scale(2 * X1**5)
        + w(0, 3).scale(2 * X1**3 * X2**2)
        - w(1, 2).scale(2 * X1**3 * X2**2)
        + w(2, 3).scale(2 * X1 * X2**4)
    )
    assert rep.base_side == want
    assert rep.algebroid_side == want
    assert rep.residual_normal_form.is_zero()
