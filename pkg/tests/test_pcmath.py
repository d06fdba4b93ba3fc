import pytest
from hypothesis import given, strategies as st

from gistheory.errors import DomainError
from gistheory.pcmath import (
    AffineMap,
    PcSegment,
    VoicePerm,
    all_affine_maps,
    parse_affine,
    parse_cycles,
    parse_segment,
    parse_voice_perm,
    ti_group,
    units,
)

moduli = st.integers(min_value=2, max_value=24)


def S(*e, m=12):
    return PcSegment(e, m)


@st.composite
def affine_maps(draw, m=12):
    return AffineMap(draw(st.integers(0, m - 1)), draw(st.integers(0, m - 1)), m)


@st.composite
def voice_perms(draw, n=3):
    return VoicePerm(tuple(draw(st.permutations(range(n)))))


def test_segment_reduces_entries():
    assert S(12, 16, -5).entries == (0, 4, 7)


def test_segment_text_forms():
    assert str(S(0, 4, 7)) == "(0,4,7)"
    assert S(0, 4, 7).text() == "0,4,7"
    assert parse_segment(" (1, 6,10) ") == S(1, 6, 10)


def test_segment_rejects_empty_and_garbage():
    with pytest.raises(DomainError):
        PcSegment(())
    with pytest.raises(DomainError):
        parse_segment("0,x,7")


def test_modulus_mismatch_raises():
    with pytest.raises(DomainError):
        AffineMap.T(1, 12)(S(0, 1, 2, m=7))
    with pytest.raises(DomainError):
        AffineMap.T(1, 12) * AffineMap.T(1, 7)


def test_named_affine_maps():
    x = S(0, 4, 7)
    assert AffineMap.T(3)(x) == S(3, 7, 10)
    assert AffineMap.I(7)(x) == S(7, 3, 0)
    assert AffineMap.M(7)(x) == S(0, 4, 1)
    assert AffineMap.M(10)(x) == S(0, 4, 10)
    # aff(7,7) sends (1,6,10) to (2,1,5)
    assert AffineMap(7, 7)(S(1, 6, 10)) == S(2, 1, 5)


def test_labels_and_parse_round_trip():
    for text in ("T3", "I7", "M10", "aff(7,7)", "aff(5,9)"):
        assert parse_affine(text).label == text
    assert parse_affine(" aff( 10 , 0 ) ") == AffineMap.M(10)
    with pytest.raises(DomainError):
        parse_affine("X3")


def test_units_of_12():
    assert units(12) == (1, 5, 7, 11)
    assert units(7) == (1, 2, 3, 4, 5, 6)


def test_ti_group_has_2m_distinct_maps():
    assert len(set(ti_group(12))) == 24
    assert len(all_affine_maps(12)) == 144


def test_non_invertible_inverse_raises():
    with pytest.raises(DomainError):
        AffineMap.M(10).inverse()


@given(affine_maps(), affine_maps(), st.integers(0, 11))
def test_compose_matches_pointwise(f, g, x):
    assert (f * g)(x) == f(g(x))


@given(affine_maps(), affine_maps(), affine_maps())
def test_compose_associative(f, g, h):
    assert (f * g) * h == f * (g * h)


@given(st.sampled_from(units(12)), st.integers(0, 11))
def test_inverse_is_two_sided(a, b):
    f = AffineMap(a, b)
    assert f * f.inverse() == AffineMap.identity() == f.inverse() * f


@given(moduli.flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m - 1), st.integers(0, m - 1))))
def test_invertible_iff_bijective(args):
    m, a, b = args
    f = AffineMap(a, b, m)
    assert f.is_invertible == (len({f(x) for x in range(m)}) == m)


# voice permutations


def test_voice_perm_convention():
    x = S(0, 4, 7)
    assert parse_voice_perm("(123)", 3)(x) == S(7, 0, 4)
    assert parse_voice_perm("(12)", 3)(x) == S(4, 0, 7)
    assert parse_voice_perm("(13)", 3)(x) == S(7, 4, 0)


def test_cycle_parsing():
    assert parse_cycles("(13)") == [(1, 3)]
    assert parse_cycles("(123)(45)") == [(1, 2, 3), (4, 5)]
    assert parse_cycles("(1,10)") == [(1, 10)]
    assert parse_voice_perm("(321)", 3) == parse_voice_perm("(123)", 3).inverse()
    with pytest.raises(DomainError):
        parse_cycles("13")
    with pytest.raises(DomainError):
        parse_voice_perm("(14)", 3)
    with pytest.raises(DomainError):
        parse_voice_perm("(121)", 3)


def test_voice_perm_arity_mismatch():
    with pytest.raises(DomainError):
        parse_voice_perm("(12)", 4)(S(0, 4, 7))


def test_cycle_string_round_trip():
    for text in ("(123)", "(12)", "(13)", "()"):
        sigma = parse_voice_perm(text if text != "()" else "()", 3)
        assert str(sigma) == text


@given(voice_perms(), voice_perms(), st.lists(st.integers(0, 11), min_size=3, max_size=3))
def test_voice_perm_left_action(sigma, tau, entries):
    y = PcSegment(tuple(entries))
    # composition is right to left: (sigma tau)(y) = sigma(tau(y))
    assert (sigma * tau)(y) == sigma(tau(y))


@given(voice_perms(), st.lists(st.integers(0, 11), min_size=3, max_size=3))
def test_voice_perm_definition(sigma, entries):
    y = PcSegment(tuple(entries))
    inv = sigma.inverse()
    assert sigma(y).entries == tuple(y[inv.images[k]] for k in range(3))


@given(voice_perms(), affine_maps(), st.lists(st.integers(0, 11), min_size=3, max_size=3))
def test_affine_maps_commute_with_voice_perms(sigma, f, entries):
    y = PcSegment(tuple(entries))
    assert f(sigma(y)) == sigma(f(y))
