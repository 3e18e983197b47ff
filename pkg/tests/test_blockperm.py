import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chablab import perms
from chablab.tails import Tail
from chablab.blockperm import (
    BlockError,
    BlockFamily,
    BlockPermElement,
    bp_compose,
    bp_from_quotient,
    bp_in_G,
    bp_in_Gn,
    bp_invert,
    bp_neighborhood_member,
    bp_quotient,
    finitary,
    identity,
    parity_correction_search,
    tail_only,
    uniform_family,
)

ALT3 = uniform_family(3, [(1, 2, 0)])
C3_IN_4 = uniform_family(4, [(1, 2, 0, 3)])  # D_n = <(0 1 2)> inside Alt(4)
ROT = (1, 2, 0)


@st.composite
def elements(draw, fam=ALT3):
    """Random element of G: an even finitary window times a random tail."""
    top = draw(st.integers(0, 4))
    bound = fam.k(top)
    pts = list(range(bound))
    img = draw(st.permutations(pts)) if pts else []
    window = dict(zip(pts, img))
    if perms.fin_parity(window):
        if bound >= 2:
            window[pts[0]], window[pts[1]] = window[pts[1]], window[pts[0]]
    exc = {n: draw(st.sampled_from(fam.elements(n))) for n in range(top, top + draw(st.integers(0, 3)))}
    pattern = [draw(st.sampled_from(fam.elements(0)))]
    return BlockPermElement(fam, window, top, Tail.build(exc, pattern, top + 3))


def test_family_basics():
    assert [ALT3.k(n) for n in range(4)] == [0, 3, 6, 9]
    assert ALT3.block_of(7) == 2
    assert len(ALT3.elements(5)) == 3
    assert BlockFamily.from_json(ALT3.to_json()) == ALT3
    with pytest.raises(BlockError):
        BlockFamily([0, 2], 2, [[(1, 0)]])  # odd block generator


def test_compose_examples():
    g = finitary(ALT3, "(0 1 2)")
    assert bp_compose(g, bp_invert(g)) == identity(ALT3)
    a = tail_only(ALT3, {1: ROT})
    b = tail_only(ALT3, {1: ROT, 2: ROT})
    ab = a * b
    assert ab.block_action(1) == perms.compose(ROT, ROT)
    assert ab.block_action(2) == ROT


@settings(max_examples=80, deadline=None)
@given(elements(), elements(), st.integers(0, 60))
def test_composition_is_pointwise(g, h, x):
    assert (g * h)(x) == g(h(x))
    assert (~g)(g(x)) == x


@settings(max_examples=50, deadline=None)
@given(elements(), elements(), elements())
def test_group_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * ~f == identity(ALT3)
    assert BlockPermElement.from_json(ALT3, f.to_json()) == f


def test_membership_in_G():
    assert bp_in_G(finitary(ALT3, "(4 9 13)"))
    assert bp_in_G(tail_only(ALT3, {2: ROT}))
    t = finitary(ALT3, "(0 1)")
    assert not bp_in_G(t)
    assert parity_correction_search(t, extra_blocks=2) is None


def test_membership_in_Gn():
    g = finitary(ALT3, "(0 1 2)")
    assert bp_in_Gn(g, 1)
    assert all(bp_in_Gn(tail_only(ALT3, {3: ROT}), n) for n in range(6))
    # (0 1)(2 3) on block 3 is even but outside <(0 1 2)>
    h = BlockPermElement(C3_IN_4, perms.fin_from_cycles([[12, 13], [14, 15]]), 4)
    assert bp_in_G(h)
    assert [bp_in_Gn(h, n) for n in range(6)] == [False, False, False, False, True, True]


def test_quotient_examples():
    assert bp_quotient(tail_only(ALT3, {0: ROT, 4: ROT}), 1) == {0: 1, 1: 2, 2: 0}
    assert bp_quotient(tail_only(ALT3, {4: ROT}), 3) == {}
    assert bp_quotient(finitary(ALT3, "(0 1 2)"), 1) == {0: 1, 1: 2, 2: 0}
    with pytest.raises(BlockError):
        bp_quotient(finitary(ALT3, "(0 3 4)"), 1)


def test_neighbourhood_examples():
    assert bp_neighborhood_member(identity(ALT3), 3)
    assert not bp_neighborhood_member(tail_only(ALT3, {0: ROT}), 1)
    assert not bp_neighborhood_member(finitary(ALT3, "(0 3 4)"), 1)
    u = tail_only(ALT3, {2: ROT}, [ROT], 5)
    assert bp_neighborhood_member(u, 2) and not bp_neighborhood_member(u, 3)


def _gens_of_Gn(n):
    out = [finitary(ALT3, [c]) for c in itertools.combinations(range(ALT3.k(n)), 3)][:6]
    out += [tail_only(ALT3, {i: ROT}) for i in range(n, n + 3)]
    out.append(tail_only(ALT3, pattern=[ROT], start=n))
    return out


@pytest.mark.parametrize("n", [1, 2])
def test_quotient_is_homomorphism_with_kernel_U(n):
    gens = _gens_of_Gn(n)
    for g, h in itertools.product(gens, repeat=2):
        gh = g * h
        assert bp_quotient(gh, n) == perms.fin_compose(bp_quotient(g, n), bp_quotient(h, n))
        assert (bp_quotient(gh, n) == {}) == bp_neighborhood_member(gh, n)


def test_section_centralises_U():
    rng = random.Random(4)
    for n in (1, 2, 3):
        for _ in range(20):
            pts = list(range(ALT3.k(n)))
            img = pts[:]
            rng.shuffle(img)
            q = perms.fin_normalize(dict(zip(pts, img)))
            if perms.fin_parity(q):
                q = perms.fin_compose(q, {0: 1, 1: 0})
            s = bp_from_quotient(ALT3, q, n)
            u = tail_only(ALT3, {n + rng.randrange(3): ROT}, [ROT], n + 3)
            assert s * u == u * s
            assert bp_quotient(s * u, n) == perms.fin_normalize(q)
