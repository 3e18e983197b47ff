import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chablab.exactnum import Ball, PScalar
from chablab.plgroup import (
    AffinePiece,
    NotBijective,
    PieceLimitExceeded,
    PLMap,
    adding_machine,
    ball_swap,
    canonicalize,
    commutator,
    compose,
    evaluate_word,
    fixed_points,
    from_laws,
    germ_trivial_at,
    in_gamma_p,
    in_lambda_p,
    in_Vp,
    invert,
    lambda_table,
    preserves,
    restrict_to,
    support,
    supported_in,
    translation_on,
    vp_shift,
    vp_swap,
)
from chablab.sampling import random_rational, random_zp_rational
from oracles import eval_word_at, shift, shift_inverse

Z2 = Ball.zp(2)
E2 = Ball(0, 1, 2)  # 2Z_2
O2 = Ball(1, 1, 2)  # 1+2Z_2


def three_piece():
    return from_laws(2, [(Ball(0, 1, 2), 1, 0), (Ball(1, 2, 2), 0, 1), (Ball(3, 2, 2), -1, Fraction(-1, 2))])


def swap2():
    return ball_swap(E2, O2)


def samples(p, k=50, seed=0):
    rng = random.Random(seed)
    return [random_rational(rng, p) for _ in range(k)]


words = st.lists(st.tuples(st.sampled_from("sta"), st.sampled_from([1, -1])), max_size=8).map(tuple)


# compose / invert


def test_translations_add():
    a = adding_machine(2)
    assert compose(a, a) == translation_on(Z2, 2)
    assert (compose(a, a))(Fraction(3, 5)) == Fraction(13, 5)


def test_swap_squared_is_identity():
    f = compose(swap2(), swap2())
    assert f.is_identity()
    for x in samples(2):
        assert swap2()(swap2()(x)) == x


def test_invert_examples():
    assert invert(PLMap.identity(2)).is_identity()
    assert invert(adding_machine(2)) == translation_on(Z2, -1)
    f = three_piece()
    assert compose(invert(f), f).is_identity()
    assert compose(f, invert(f)).is_identity()
    for x in samples(2):
        assert invert(f)(f(x)) == x


def test_compose_order_applies_right_first():
    a, s = adding_machine(2), swap2()
    x = Fraction(0)
    assert compose(a, s)(x) == a(s(x)) == 2
    assert compose(s, a)(x) == s(a(x)) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=60, deadline=None)
@given(w=words, seed=st.integers(0, 10**6))
def test_word_evaluation_matches_pointwise_oracle(p, w, seed):
    f = evaluate_word(w, lambda_table(p))
    rng = random.Random(seed)
    for _ in range(10):
        x = random_rational(rng, p)
        assert f(x) == eval_word_at(w, p, x)
    assert compose(f, invert(f)).is_identity()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_shift_oracle_inverse(p):
    rng = random.Random(p)
    for _ in range(200):
        x = random_zp_rational(rng, p)
        assert shift_inverse(shift(x, p), p) == x
        assert vp_shift(p)(x) == shift(x, p)


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=40, deadline=None)
@given(u=words, v=words, w=words)
def test_composition_is_associative(p, u, v, w):
    tab = lambda_table(p)
    f, g, h = (evaluate_word(x, tab) for x in (u, v, w))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


# canonical form


def test_canonicalize_merges_and_deletes():
    ident = canonicalize([AffinePiece(E2, 0, PScalar.zero(2)), AffinePiece(O2, 0, PScalar.zero(2))], 2)
    assert ident.is_identity()
    two = PScalar(2, 0, 2)
    merged = canonicalize([AffinePiece(E2, 0, two), AffinePiece(O2, 0, two)], 2)
    assert merged.pieces == (AffinePiece(Z2, 0, two),)


def test_canonicalize_keeps_unmergeable_siblings():
    f = canonicalize([AffinePiece(E2, 0, PScalar(1, 0, 2)), AffinePiece(O2, 0, PScalar(-1, 0, 2))], 2)
    assert len(f.pieces) == 2
    # no single affine law x -> 2^m x + b agrees with both siblings: it would need
    # b = 1 from x = 0 and 2^m + b = 0 from x = 1
    assert f == swap2()


def test_canonical_form_does_not_depend_on_subdivision():
    one = PScalar(1, 0, 2)
    coarse = [AffinePiece(b, 0, one) for b in E2.children() + [O2]]
    assert canonicalize(coarse, 2) == adding_machine(2)
    fine = [AffinePiece(g, 0, one) for c in Z2.children() for g in c.children()]
    assert canonicalize(fine, 2) == adding_machine(2)


def test_non_bijection_rejected():
    with pytest.raises(NotBijective):
        from_laws(2, [(E2, 0, 1)])  # 2Z_2 -> 1+2Z_2 alone
    with pytest.raises(NotBijective):
        from_laws(2, [(E2, 0, 0), (Ball(0, 2, 2), 1, 0)])  # overlapping domains


@settings(max_examples=60, deadline=None)
@given(w=words)
def test_canonical_form_idempotent(w):
    f = evaluate_word(w, lambda_table(3))
    assert canonicalize(f.pieces, 3) == f
    assert PLMap.from_json(f.to_json()) == f


def test_piece_limit(monkeypatch):
    monkeypatch.setenv("CHABLAB_MAX_PIECES", "4")
    t = vp_shift(3)
    with pytest.raises(PieceLimitExceeded):
        compose(t, compose(t, t))


# fixed points, support, germs


def test_fixed_points_examples():
    fp = fixed_points(PLMap.identity(2))
    assert fp.everything_fixed and fp.isolated == ()
    fp = fixed_points(swap2())
    assert list(fp.moved_region) == [Z2] and fp.isolated == ()
    fp = fixed_points(three_piece())
    assert set(fp.isolated) == {0, -1}
    f = three_piece()
    assert f(0) == 0 and f(-1) == -1


def test_support_examples():
    assert support(PLMap.identity(2)).empty
    s = support(adding_machine(2))
    assert s.region == (Z2,) and s.compact and s.excluded == ()
    s = support(three_piece())
    assert s.closure() == (Z2,) and set(s.excluded) == {0, -1}
    assert not s.contains(0) and not s.contains(-1) and s.contains(1)


def test_germ_trivial_examples():
    assert germ_trivial_at(PLMap.identity(2), Fraction(1, 3))
    assert not germ_trivial_at(adding_machine(2), 0)
    assert not germ_trivial_at(three_piece(), 0)
    assert germ_trivial_at(three_piece(), Fraction(1, 2))


# membership predicates


def test_gamma_lambda_membership():
    a = adding_machine(2)
    assert in_gamma_p(a) and in_lambda_p(a)
    wide = translation_on(Ball.zp(2, -1), 1)
    assert in_gamma_p(wide) and not in_lambda_p(wide)
    ident = PLMap.identity(2)
    assert in_gamma_p(ident) and in_lambda_p(ident)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_vp_membership(p):
    assert in_Vp(vp_swap(p)) and in_Vp(vp_shift(p))
    assert in_Vp(PLMap.identity(p))
    assert not in_Vp(adding_machine(p))
    assert in_Vp(compose(vp_swap(p), vp_shift(p)))


def test_vp_swap_matches_ball_swap():
    assert vp_swap(2) == swap2()


def test_restrict_and_preserve():
    f = compose(vp_shift(2), translation_on(Ball.zp(2, -1), Fraction(1, 2)))
    big = Ball.zp(2, -1)
    assert preserves(f, big) and supported_in(f, big)
    assert not preserves(f, Z2) and not supported_in(f, Z2)
    g = restrict_to(adding_machine(2), Z2)
    assert g == adding_machine(2)
    half = restrict_to(compose(swap2(), swap2()), E2)
    assert half.is_identity()


def test_commutator_of_disjoint_supports_is_trivial():
    a = ball_swap(Ball(0, 2, 2), Ball(2, 2, 2))
    b = ball_swap(Ball(1, 2, 2), Ball(3, 2, 2))
    assert commutator(a, b).is_identity()
    assert not commutator(vp_swap(2), adding_machine(2)).is_identity()
