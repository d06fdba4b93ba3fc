import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gistheory.contextual import (
    affine_system,
    contextual_group,
    contextual_subgroup,
    exhaustive_affine_commutation,
    morphism_from_affine,
    op_J,
    op_K,
    op_Q,
    op_Qbar,
    op_W,
    schritt_wechsel_label,
    side_transform,
    ti_group_perms,
    ti_orbit,
    tritone_condition,
    verify_affine_commutation,
)
from gistheory.errors import (
    DegenerateInputError,
    DomainError,
    MembershipError,
    PreconditionError,
)
from gistheory.gis import action_morphism_to_gis, classify_morphism
from gistheory.groupcore import (
    FiniteGroup,
    Perm,
    close_generators,
    commute_elementwise,
    dual_group,
    is_dihedral_of_order,
    is_simply_transitive,
    is_transitive,
    restrict,
)
from gistheory.pcmath import AffineMap, PcSegment, all_affine_maps, parse_segment

SEEDS = ("0,4,7", "0,4,1", "0,4,10")


def seg(text, m=12):
    return parse_segment(text, m)


def orbit_of(text):
    return ti_orbit(seg(text))


def trichord_classes():
    """Distinct-entry trichords with x1 = 0, one per T/I-orbit, tritone condition holding."""
    seen = set()
    out = []
    for b, c in itertools.permutations(range(1, 12), 2):
        x = PcSegment((0, b, c), 12)
        if not tritone_condition(x) or x in seen:
            continue
        orbit = ti_orbit(x)
        seen |= set(orbit.carrier)
        out.append(x)
    return out


# tritone condition and orbits


def test_tritone_condition():
    assert tritone_condition(seg("0,4,7"))
    assert tritone_condition(seg("0,4,10"))
    assert not tritone_condition(seg("0,6"))
    # odd modulus: any two distinct entries
    assert tritone_condition(parse_segment("0,3", 7))


def test_tritone_failure_rejected():
    with pytest.raises(DegenerateInputError):
        orbit_of("0,6")


def test_triad_orbit_forms():
    o = orbit_of("0,4,7")
    assert len(o.carrier) == 24
    assert seg("3,7,10") in o.t_forms and seg("7,3,0") in o.i_forms
    assert o.t_forms | o.i_forms == set(o.carrier)
    assert not o.t_forms & o.i_forms


def test_orbit_of_152_contains_image():
    o = orbit_of("1,5,2")
    assert len(o.carrier) == 24 and seg("7,11,8") in o.carrier


# operations


def test_named_examples():
    o = orbit_of("0,4,7")
    x = seg("0,4,7")
    assert op_Q(o, 3, x) == seg("3,7,10")
    assert op_J(o, 1, 3, x) == o.P(x) == seg("7,3,0")
    assert op_J(o, 2, 3, x) == o.L(x) == seg("11,7,4")
    assert op_J(o, 1, 2, x) == o.R(x) == op_K(o, x) == seg("4,0,9")


def test_Q_direction_on_i_forms():
    o = orbit_of("0,4,7")
    minor = seg("7,3,0")
    assert op_Q(o, 1, minor) == seg("6,2,11")


def test_P_formula_brute():
    # P(y1,y2,y3) = (y3, y1-y2+y3, y1)
    o = orbit_of("0,4,7")
    for y in o.carrier:
        y1, y2, y3 = y.entries
        assert o.P(y).entries == (y3, (y1 - y2 + y3) % 12, y1)


def test_membership_and_pair_errors():
    o = orbit_of("0,4,7")
    with pytest.raises(MembershipError):
        op_K(o, seg("0,1,2"))
    with pytest.raises(DomainError):
        op_J(o, 2, 2, seg("0,4,7"))
    with pytest.raises(DomainError):
        op_J(o, 1, 4, seg("0,4,7"))


def test_Q0_identity():
    o = orbit_of("0,4,10")
    assert all(op_Q(o, 0, y) == y for y in o.carrier)


# contextual group


@pytest.mark.parametrize("text", SEEDS)
def test_contextual_group_dual_to_ti(text):
    o = orbit_of(text)
    H = contextual_group(o)
    G = ti_group_perms(o)
    assert H.order == 24 and is_dihedral_of_order(H, 24)
    assert is_simply_transitive(H) and is_simply_transitive(G)
    assert commute_elementwise(G, H)
    assert dual_group(G).same_elements(H)


def test_trichord_sweep():
    classes = trichord_classes()
    assert len(classes) > 5
    for x in classes:
        o = ti_orbit(x)
        H = contextual_group(o)
        G = ti_group_perms(o)
        assert len(o.carrier) == 24
        assert is_dihedral_of_order(H, 24) and is_simply_transitive(H)
        assert commute_elementwise(G, H) and dual_group(G).same_elements(H)


def test_triad_group_is_plr():
    o = orbit_of("0,4,7")
    plr = close_generators(o.carrier, [o.perm_named(n) for n in "PLR"])
    assert plr.same_elements(contextual_group(o))


@pytest.mark.parametrize("text", SEEDS)
@pytest.mark.parametrize("pair", [(1, 2), (1, 3), (2, 3)])
def test_J_and_Q1_generate(text, pair):
    o = orbit_of(text)
    g = close_generators(o.carrier, [o.perm_J(*pair), o.perm_Q(1)])
    assert g.same_elements(contextual_group(o))


def test_every_element_is_schritt_or_wechsel():
    o = orbit_of("0,4,7")
    labels = sorted(g.label for g in contextual_group(o))
    expected = sorted([f"Q{i}" for i in range(12)] + [f"Q{i}K" for i in range(12)])
    assert labels == expected


@pytest.mark.parametrize("text, label", [("0,4,7", "Q9"), ("0,4,1", "Q3"), ("0,4,10", "Q6")])
def test_PR_products(text, label):
    o = orbit_of(text)
    assert schritt_wechsel_label(o, o.perm_named("P") * o.perm_named("R")) == label


@pytest.mark.parametrize("text, label", [("0,4,7", "Q5"), ("0,4,1", "Q11")])
def test_LR_products(text, label):
    o = orbit_of(text)
    assert schritt_wechsel_label(o, o.perm_named("L") * o.perm_named("R")) == label


def test_stride_plr_not_transitive():
    o = orbit_of("0,4,10")
    plr = close_generators(o.carrier, [o.perm_named(n) for n in "PLR"])
    assert plr.order < 24
    assert not is_transitive(plr)
    reach = {o.carrier[i] for i in plr.orbit(o.carrier.index(seg("0,4,10")))}
    assert seg("1,5,11") not in reach


# side transformation and generalized Schritte


def test_W_examples():
    system = affine_system(seg("0,4,7"))
    x = seg("0,4,7")
    assert op_W(system, 11, x) == seg("0,8,5")
    assert op_W(system, 5, x) == seg("0,8,11")
    assert all(op_W(system, 1, y) == y for y in system.carrier)
    with pytest.raises(DomainError):
        op_W(system, 10, x)


def test_W_fixes_first_coordinate():
    system = affine_system(seg("0,4,7"))
    for y in system.carrier:
        for a in system.units:
            assert side_transform(a, y)[0] == y[0]


def test_Qbar_examples():
    system = affine_system(seg("0,4,7"))
    x = seg("0,4,7")
    o_jet = orbit_of("0,4,1")
    for j in range(12):
        assert op_Qbar(system, j, x) == seg(f"{j},{4 + j},{7 + j}")
    # on a jet form Qbar_i acts as Q_{7i}
    for y in o_jet.t_forms:
        for i in range(12):
            assert op_Qbar(system, i, y) == o_jet.Q(7 * i, y)
    assert all(op_Qbar(system, 0, y) == y for y in system.carrier)


def test_Qbar_additive_on_a_classes():
    system = affine_system(seg("0,4,7"))
    for y in system.carrier:
        for j, k in itertools.product(range(12), repeat=2):
            assert system.Qbar(j, system.Qbar(k, y)) == system.Qbar(j + k, y)


def test_affine_system_48():
    system = affine_system(seg("0,4,7"), units=(1, 5, 7, 11))
    assert len(system.carrier) == 48
    A, D = system.affine_group, system.dual
    assert A.order == D.order == 48
    assert is_simply_transitive(D) and commute_elementwise(A, D)
    assert dual_group(A).same_elements(D)


def test_affine_system_contains_ti_and_plr():
    system = affine_system(seg("0,4,7"))
    o = orbit_of("0,4,7")
    sub = set(o.carrier)
    ti = [g for g in system.affine_group if {g.apply_point(system.carrier, y) for y in sub} == sub]
    ctx = [g for g in system.dual if {g.apply_point(system.carrier, y) for y in sub} == sub]
    ti_r = restrict(FiniteGroup(system.carrier, ti), sub)
    ctx_r = restrict(FiniteGroup(system.carrier, ctx), sub)
    assert ti_r.order == ctx_r.order == 24
    assert ti_r.image_set() == restrict(ti_group_perms(o), sub).image_set()
    assert ctx_r.image_set() == restrict(contextual_group(o), sub).image_set()


def test_units_1_11_reconstructs_ti_duality():
    system = affine_system(seg("0,4,7"), units=(1, 11))
    o = orbit_of("0,4,7")
    assert set(system.carrier) == set(o.carrier)
    assert restrict(system.dual, o.carrier).image_set() == restrict(contextual_group(o), o.carrier).image_set()


def test_affine_system_not_simply_transitive():
    # M_5 fixes (0,6,3)
    with pytest.raises(PreconditionError, match="aff"):
        affine_system(seg("0,6,3"))


def test_M7_Qbar5_commute():
    system = affine_system(seg("0,4,7"), units=(1, 5, 7, 11))
    m7 = AffineMap.M(7, 12)
    for y in system.carrier:
        assert m7(system.Qbar(5, y)) == system.Qbar(5, m7(y))


def test_M7_Q5_vs_Q11():
    # on the triad orbit f Q5 = Q11 f, read through the jet orbit
    o, jet = orbit_of("0,4,7"), orbit_of("0,4,1")
    m7 = AffineMap.M(7, 12)
    for y in o.carrier:
        assert m7(o.Q(5, y)) == jet.Q(11, m7(y))


# affine commutation


@pytest.mark.parametrize("text", SEEDS)
def test_affine_commutation_exhaustive(text):
    assert exhaustive_affine_commutation(orbit_of(text)) == []


def test_affine_commutation_with_system_exhaustive():
    o = orbit_of("0,4,7")
    system = affine_system(seg("0,4,7"))
    assert exhaustive_affine_commutation(o, system) == []


def test_commutation_brute_independent():
    # recompute J from its formula rather than through TiOrbit
    o = orbit_of("0,4,7")
    for f in all_affine_maps(12):
        for y in o.carrier:
            fy = f(y)
            for q, r in ((0, 1), (0, 2), (1, 2)):
                jy = tuple((y[q] + y[r] - v) % 12 for v in y.entries)
                jfy = tuple((fy[q] + fy[r] - v) % 12 for v in fy.entries)
                assert tuple(f(v) for v in jy) == jfy


def test_commutation_report_counts():
    o = orbit_of("0,4,7")
    rep = verify_affine_commutation(o, AffineMap(7, 7, 12))
    assert rep and rep.checked == 24 * 3 and rep.counterexample is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 11), st.integers(0, 11), st.sampled_from(SEEDS))
def test_commutation_property(a, b, text):
    assert verify_affine_commutation(orbit_of(text), AffineMap(a, b, 12)).passed


# morphisms


def classify(mor):
    return classify_morphism(action_morphism_to_gis(mor))


def test_M7_morphism_iso():
    mor = morphism_from_affine(orbit_of("0,4,7"), AffineMap.M(7, 12))
    assert len(mor.source.carrier) == len(mor.target.carrier) == 24
    assert classify(mor).iso


def test_M10_morphism_neither():
    mor = morphism_from_affine(orbit_of("0,4,7"), AffineMap.M(10, 12))
    c = classify(mor)
    assert not c.monic and not c.epic
    # image coordinates are all even
    assert all(v % 2 == 0 for i in set(mor.point_map) for v in mor.target.carrier[i].entries)


def test_T0_morphism_identity():
    mor = morphism_from_affine(orbit_of("0,4,7"), AffineMap.identity(12))
    assert mor.point_map == tuple(range(24))
    assert all(mor.phi(g).images == g.images for g in mor.source)


def test_morphism_maps_J_to_J():
    o = orbit_of("0,4,7")
    f = AffineMap(7, 7, 12)
    mor = morphism_from_affine(o, f)
    target = ti_orbit(f(seg("0,4,7")))
    for name in "LR":
        src = mor.source.find(Perm.from_function(mor.source.carrier, getattr(o, name)))
        assert mor.phi(src).images == target.perm_named(name).images


def test_morphism_degenerate_target():
    # M_6 collapses (0,4,7) to (0,0,6)
    with pytest.raises(DegenerateInputError):
        morphism_from_affine(orbit_of("0,4,7"), AffineMap.M(6, 12))


def test_sub_generated_morphism_restricts():
    o = orbit_of("0,4,7")
    mor = morphism_from_affine(o, AffineMap.M(7, 12), pairs=((1, 3), (1, 2)))
    assert len(mor.source.carrier) == 8
    assert classify(mor).monic and not classify(mor).epic
    assert contextual_subgroup(o, [(1, 3), (1, 2)]).order == 8
