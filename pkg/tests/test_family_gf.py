import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chablab import perms
from chablab.exactnum import Ball, vp
from chablab.plgroup import (
    FamilyError,
    FamilySpec,
    GFElement,
    GFError,
    adding_machine,
    from_plmap,
    germ_trivial_at,
    gf_compose,
    gf_invert,
    gf_membership,
    make_alt_family,
    neighborhood_depth,
    neighborhood_member,
    split_at,
    sub_balls,
    tail_element,
    translation_on,
    truncate_to_ball,
    verify_certificate,
)
from chablab.plgroup.gf import identity, truncation_range
from chablab.sampling import random_gf_element, random_rational, random_unit
from chablab.tails import Tail

FAM2 = make_alt_family(2, [2])
FAM3 = make_alt_family(3, [1])


def odd(k):
    return perms.from_cycles([[0, 1]], k)


def three_cycle(k):
    return perms.from_cycles([[0, 1, 2]], k)


# families


def test_alt_family_sizes():
    assert FAM2.size(0) == 4 and FAM2.order(0) == 12
    assert FAM2.size(7) == 4 and FAM2.order(7) == 12
    assert FAM3.size(0) == 6 and FAM3.order(0) == 360
    assert len(sub_balls(2, 3, 2)) == 4
    assert all(vp(b.center, 2) == -4 for b in sub_balls(2, 3, 2))


def test_family_validation():
    with pytest.raises(FamilyError):
        make_alt_family(2, [0])  # a single ball
    with pytest.raises(FamilyError):
        FamilySpec.from_json({"p": 2, "annuli": [{"depth": 2, "generators": ["(0 1)"]}]})


@pytest.mark.parametrize("fam", [FAM2, FAM3, make_alt_family(5, [1, 0], period=2)])
def test_certificates_evaluate_to_generators(fam):
    for n in fam.classes():
        for i in range(len(fam.generators(n))):
            assert verify_certificate(fam, n, i)


def test_periodic_rule_and_json():
    fam = make_alt_family(5, [1, 0], period=2)
    assert [fam.size(n) for n in range(5)] == [20, 4, 20, 4, 20]
    assert fam.order(3) == 12
    back = FamilySpec.from_json(fam.to_json())
    assert back == fam and hash(back) == hash(fam)


# membership


def test_membership_examples():
    assert gf_membership(adding_machine(2), FAM2)
    g = from_plmap(FAM2, adding_machine(2))
    assert gf_membership(g) and g.tail_is_trivial()
    t = tail_element(FAM2, {3: three_cycle(4)})
    assert gf_membership(t)
    bad = tail_element(FAM2, pattern=[odd(4)], start=2)
    assert not gf_membership(bad)
    # a single foreign annulus is absorbed into the head
    assert gf_membership(tail_element(FAM2, {3: odd(4)}))


def test_gf_compose_invert_examples():
    rng = random.Random(1)
    g = random_gf_element(FAM2, rng)
    assert gf_compose(g, gf_invert(g)) == identity(FAM2)
    a = tail_element(FAM2, {1: three_cycle(4)}, [three_cycle(4)], 5)
    b = tail_element(FAM2, {2: three_cycle(4)})
    prod = gf_compose(a, b)
    for n in range(0, 9):
        assert prod.tail_at(n) == perms.compose(a.tail_at(n), b.tail_at(n))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_gf_compose_is_pointwise(seed):
    rng = random.Random(seed)
    g = random_gf_element(FAM2, rng, max_level=2, word_len=4)
    h = random_gf_element(FAM2, rng, max_level=2, word_len=4)
    gh = g * h
    for _ in range(15):
        x = random_rational(rng, 2, max_shift=8)
        assert gh(x) == g(h(x))
        assert (~g)(g(x)) == x


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_gf_associativity_and_json(seed):
    rng = random.Random(seed)
    f, g, h = (random_gf_element(FAM3, rng, max_level=1, word_len=3, horizon=3) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert GFElement.from_json(FAM3, f.to_json()) == f


def test_head_and_tail_parts():
    head = from_plmap(FAM2, adding_machine(2))
    tail = tail_element(FAM2, {0: three_cycle(4)})
    g = head * tail
    assert not g.head.is_identity() and not g.tail_is_trivial()
    for x in [Fraction(1, 2), Fraction(3, 4), Fraction(5), Fraction(1, 8), Fraction(3, 2)]:
        assert g(x) == head(tail(x))
    a, b = split_at(g, 2)
    assert a * b == g and neighborhood_member(b, 2)


# neighborhoods


def test_neighborhood_examples():
    e = identity(FAM2)
    assert all(neighborhood_member(e, N) for N in range(6))
    assert neighborhood_depth(e) == math.inf
    assert not neighborhood_member(from_plmap(FAM2, adding_machine(2)), 0)
    t = tail_element(FAM2, {3: three_cycle(4)})
    assert neighborhood_member(t, 3) and not neighborhood_member(t, 4)
    assert neighborhood_depth(t) == 3


def test_random_units_are_neighbourhood_members():
    rng = random.Random(5)
    for n in range(6):
        for _ in range(10):
            u = random_unit(FAM2, n, rng)
            assert neighborhood_member(u, n)


def test_odd_tail_is_not_in_neighbourhood():
    g = GFElement(FAM2, None, 0, Tail.build({2: odd(4)}))
    assert not neighborhood_member(g, 2)
    assert neighborhood_member(g, 0) is False


# truncation


def test_truncate_identity():
    tr = truncate_to_ball(identity(FAM2), -3)
    assert tr.truncated == identity(FAM2) and tr.depth == math.inf


def test_truncate_compactly_supported():
    g = from_plmap(FAM2, adding_machine(2))
    tr = truncate_to_ball(g, -1)
    assert tr.truncated == g and tr.defect == identity(FAM2)


def test_truncation_depths_are_monotone_and_meet_the_guarantee():
    rng = random.Random(11)
    for _ in range(10):
        g = random_gf_element(FAM2, rng, max_level=0, word_len=4)
        depths = [truncate_to_ball(g, k).depth for k in range(truncation_range(g), -9, -1)]
        assert depths == sorted(depths)
        for k, d in zip(range(truncation_range(g), -9, -1), depths):
            assert d >= -k - 1


def test_truncation_depth_at_minus_eight_is_seven_for_a_full_tail():
    # every annulus carries a nontrivial entry, so the defect starts exactly at X_7
    g = tail_element(FAM2, pattern=[three_cycle(4)], start=0)
    assert [truncate_to_ball(g, k).depth for k in (-1, -2, -4, -8)] == [0, 1, 3, 7]


def test_truncation_needs_an_invariant_ball():
    wide = translation_on(Ball.zp(2, -2), Fraction(1, 4))
    with pytest.raises(GFError):
        truncate_to_ball(GFElement(FAM2, wide, 2), 0)


def test_germ_triviality_on_tails():
    g = tail_element(FAM2, {1: three_cycle(4)})
    balls = FAM2.balls(1)
    moved = balls[0].center
    fixed = balls[3].center
    assert not germ_trivial_at(g, moved)
    assert germ_trivial_at(g, fixed)
    assert germ_trivial_at(g, Fraction(1, 3))
