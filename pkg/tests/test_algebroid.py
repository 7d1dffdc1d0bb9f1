"""The anchored-bundle engine on the rank-4 example and its relatives."""

import pytest

from algforge.algebroid import (
    AlgebroidError,
    BracketModifier,
    Section,
    check_morphism,
    courant_defect,
    courant_solution_space,
    lie_infeasibility_certificate,
    nijenhuis,
    subalgebroid_restrict,
)
from algforge.catalog import (
    builtin,
    builtin_names,
    e0_complex_structure,
    e0_kernel_sections,
    e0prime_to_e0_matrix,
    make_e0,
    make_tangent,
)
from algforge.poly import Poly

E0 = make_e0()
X1 = Poly.variable(2, 0)
X2 = Poly.variable(2, 1)
UNITS = [E0.unit_section(i) for i in range(4)]


def test_anchor_table():
    assert E0.anchor[0].to_text() == "x1^2*d1"
    assert E0.anchor[1].to_text() == "x1^2*d2"
    assert E0.anchor[2].to_text() == "x2^2*d1"
    assert E0.anchor[3].to_text() == "x2^2*d2"


def test_bracket_table_against_hand_values():
    expect = {
        (0, 1): UNITS[1].scale(2 * X1),
        (0, 2): UNITS[2].scale(-2 * X1),
        (0, 3): E0.zero_section(),
        (1, 2): UNITS[0].scale(2 * X2) - UNITS[3].scale(2 * X1),
        (1, 3): UNITS[1].scale(2 * X2),
        (2, 3): UNITS[2].scale(-2 * X2),
    }
    for (i, j), want in expect.items():
        assert E0.bracket_gen(i, j) == want
        # skew-symmetry through the public bracket
        assert E0.bracket(UNITS[j], UNITS[i]) == -want


def test_bracket_leibniz_rule():
    f = X1 * X2 + 3
    lhs = E0.bracket(UNITS[0], UNITS[1].scale(f))
    rhs = E0.bracket(UNITS[0], UNITS[1]).scale(f) + UNITS[1].scale(E0.anchor_of(UNITS[0]).apply(f))
    assert lhs == rhs


def test_axioms_pass_and_itemized_variant_fails():
    assert E0.check_axioms().ok
    bad = builtin("E0_itemized").check_axioms()
    assert not bad.ok
    i, j, defect = bad.failures[0]
    assert (i, j) == (0, 1)
    assert defect.to_text() == "(-2*x1^3 + 2*x1^2*x2)*d2"


def test_jacobiator_values():
    kern = e0_kernel_sections()
    assert E0.jacobiator(UNITS[0], UNITS[1], UNITS[2]) == kern["Xs2"].scale(2)
    assert E0.jacobiator(UNITS[1], UNITS[2], UNITS[3]) == kern["Xs1"].scale(2)
    assert E0.jacobiator(UNITS[0], UNITS[1], UNITS[3]).is_zero()
    assert E0.jacobiator(UNITS[0], UNITS[2], UNITS[3]).is_zero()


def test_check_lie_reports_the_two_bad_triples():
    rep = E0.check_lie()
    assert not rep.is_lie
    assert sorted(t for t, _ in rep.failures) == [(0, 1, 2), (1, 2, 3)]


def test_kernel_sections_are_anchor_killed_but_not_central():
    kern = e0_kernel_sections()
    for s in kern.values():
        assert E0.anchor_of(s).is_zero()
    # the two kernel sections do not commute with each other
    value = E0.bracket(kern["Xs1"], kern["Xs2"])
    want = kern["Xs1"].scale(2 * X1 * X1 * X2) + kern["Xs2"].scale(2 * X1 * X2 * X2)
    assert value == want


def test_restriction_produces_lie_subbundles():
    for idxs in ((0, 1, 3), (0, 2, 3)):
        sub = subalgebroid_restrict(E0, [UNITS[i] for i in idxs], [E0.gen_names[i] for i in idxs])
        assert hasattr(sub, "check_lie"), "restriction should close"
        assert sub.check_lie().is_lie


def test_restriction_failure_is_reported():
    # X21 alone does not span a subalgebra containing [X21, X21] = 0; use a
    # genuinely non-closing pair instead: X11 and X21 close, X21 and X12 do not
    sub = subalgebroid_restrict(E0, [UNITS[1], UNITS[2]], ["a", "b"], max_degree=4)
    assert not hasattr(sub, "check_lie")
    assert sub.pair == (0, 1)


def test_restriction_rejects_dependent_generators():
    with pytest.raises(AlgebroidError):
        subalgebroid_restrict(E0, [UNITS[0], UNITS[0].scale(2)], ["a", "b"])


def test_morphism_into_e0():
    rep = check_morphism(builtin("E0prime"), E0, e0prime_to_e0_matrix())
    assert rep.ok
    # the same matrix is NOT a morphism for the primed (Lie) bracket
    rep2 = check_morphism(builtin("E0prime_lie"), E0, e0prime_to_e0_matrix())
    assert not rep2.ok


def test_modify_bracket_changes_jacobiator():
    kern = e0_kernel_sections()
    modifier = BracketModifier({(0, 1): kern["Xs1"]})
    modifier.validate(E0)
    modified = E0.modify_bracket(modifier, name="tweaked")
    assert modified.bracket_gen(0, 1) == E0.bracket_gen(0, 1) + kern["Xs1"]
    assert modified.bracket_gen(0, 2) == E0.bracket_gen(0, 2)
    assert not modified.check_lie().is_lie


def test_modifier_rejects_non_kernel_values():
    with pytest.raises(AlgebroidError):
        BracketModifier({(0, 1): UNITS[0]}).validate(E0)


def test_nijenhuis_of_the_catalog_complex_structure():
    j = e0_complex_structure()
    assert j.is_almost_complex()
    for i in range(4):
        for k in range(i + 1, 4):
            assert nijenhuis(E0, j, UNITS[i], UNITS[k]).is_zero()


def test_courant_defect_of_identity():
    identity = [[Poly.const(2, 1 if i == j else 0) for j in range(4)] for i in range(4)]
    defect = courant_defect(E0, identity)
    quartic = X1**4 + X2**4
    assert defect[0][0] == quartic
    assert defect[1][1] == quartic
    assert defect[0][1].is_zero()
    assert defect[1][0].is_zero()


def test_courant_paired_space_vanishes_at_origin():
    space = courant_solution_space(E0, max_degree=4, paired_blocks=2)
    assert space.dim == 36
    assert space.all_zero_at_point()
    assert courant_solution_space(E0, max_degree=0, paired_blocks=2).dim == 0


def test_courant_full_space_has_an_invertible_constant_solution():
    space = courant_solution_space(E0, max_degree=0)
    assert space.dim == 1
    assert space.invertible_at_point()
    # built-in anti-diagonal solution: check it really solves the equation
    g = space.basis[0]
    defect = courant_defect(E0, g)
    assert all(p.is_zero() for row in defect for p in row)


def test_courant_block_size_must_divide_rank():
    with pytest.raises(AlgebroidError):
        courant_solution_space(E0, paired_blocks=3)


def test_infeasibility_certificate():
    kern = list(e0_kernel_sections().values())
    for bound in (2, 3):
        cert = lie_infeasibility_certificate(E0, (0, 1, 2), kern, max_degree=bound)
        assert cert.status == "infeasible"
        assert cert.jacobiator_min_degree == 2
        assert cert.modifier_min_degree == 3
    # a triple with vanishing Jacobiator needs no modification at all
    cert0 = lie_infeasibility_certificate(E0, (0, 1, 3), kern, max_degree=2)
    assert cert0.status == "trivially-feasible"


def test_tangent_bundle_is_lie():
    t3 = make_tangent(3)
    assert t3.check_axioms().ok
    assert t3.check_lie().is_lie
    assert t3.anchor_rank_at((1, 1, 1)) == 3


def test_anchor_rank_drops_at_origin():
    assert E0.anchor_rank_at((0, 0)) == 0
    assert E0.anchor_rank_at((1, 1)) == 2


def test_builtin_names_cover_the_catalog():
    names = builtin_names()
    for expected in ("E0", "E0_itemized", "E0prime", "E0prime_lie", "E0doubleprime", "E00"):
        assert expected in names
    with pytest.raises(AlgebroidError):
        builtin("definitely_not_registered")
