import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chablab.chabfin import (
    FiniteGroup,
    GroupError,
    InvariantMeasure,
    SubgroupLattice,
    Tower,
    irs_vertices,
    is_saturated,
    lattice_dot,
    lift_from_quotient,
    orbit_partition,
    partition_fixer,
    quotient_group,
    saturated_push,
    saturation_formula,
    saturation_orbit,
    saturation_table,
    trunc_saturation,
    urs_list,
)
from chablab.chabfin.corpus import by_name, corpus, cyclic, dihedral
from chablab.chabfin.saturation import set_partitions
from oracles import (
    brute_classes,
    brute_subgroups,
    naive_saturation,
    polytope_vertices,
    raw_a4,
    raw_cyclic,
    raw_q8,
    raw_s4,
)


def s3():
    return FiniteGroup.from_cycle_strings(["(0 1)", "(0 1 2)"], 3, "S3")


def elem(G, perm):
    return G.labels.index(tuple(perm))


SMALL = [G for G in corpus() if G.n <= 12]


# lattices against brute force


@pytest.mark.parametrize(
    "raw, G, subs, classes",
    [
        (raw_s4, lambda: by_name("S4"), 30, 11),
        (raw_a4, lambda: by_name("A4"), 10, 5),
        (raw_q8, lambda: by_name("Q8"), 6, 6),
        (lambda: raw_cyclic(4), lambda: cyclic(4), 3, 3),
    ],
)
def test_lattice_counts_match_brute_force(raw, G, subs, classes):
    elems, mul, e = raw()
    bs = brute_subgroups(elems, mul, e)
    bc = brute_classes(bs, elems, mul, e)
    assert (len(bs), len(bc)) == (subs, classes)
    lat = SubgroupLattice(G())
    assert (len(lat), len(lat.classes)) == (subs, classes)
    assert Counter(H.order for H in lat) == Counter(len(H) for H in bs)
    assert sorted(len(c) for c in lat.classes) == sorted(len(c) for c in bc)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_lattice_matches_brute_force_on_small_corpus(G):
    mul = G.mul
    bs = brute_subgroups(range(G.n), mul, 0)
    lat = SubgroupLattice(G)
    assert {frozenset(H.elements()) for H in lat} == bs


def test_q8_all_normal():
    lat = SubgroupLattice(by_name("Q8"))
    assert len(lat.normal_subgroups()) == 6


def test_corpus_shape():
    groups = corpus()
    assert len(groups) == 74
    counts = Counter(G.n for G in groups)
    assert counts[16] == 14 and counts[24] == 15 and counts[8] == 5 and counts[12] == 5


# saturation


def test_saturation_examples_s3():
    G = s3()
    t = G.generate(elem(G, (1, 0, 2)))
    A3 = G.generate(elem(G, (1, 2, 0)))
    for sat in (saturation_orbit, saturation_formula):
        assert sat(G, t, A3) == G.whole
        assert sat(G, A3, G.trivial) == A3
        assert sat(G, G.trivial, t) == t
    assert is_saturated(G, G.trivial, G.trivial)
    assert not is_saturated(G, t, A3)
    assert is_saturated(G, t, G.whole)


@pytest.mark.parametrize("G", [s3(), by_name("Q8"), dihedral(4), by_name("A4")], ids=lambda G: G.name)
def test_saturation_against_naive_orbit_oracle(G):
    lat = SubgroupLattice(G)
    for U, H in itertools.product(lat, repeat=2):
        want = naive_saturation(G.n, G.mul, set(U.elements()), set(H.elements()))
        assert set(saturation_orbit(G, U, H).elements()) == want
        assert set(saturation_formula(G, U, H).elements()) == want


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_saturation_properties(G):
    lat = SubgroupLattice(G)
    for U, H in itertools.product(lat, repeat=2):
        S = saturation_formula(G, U, H)
        assert H <= S
        assert saturation_formula(G, U, S) == S
        if G.is_normal(U):
            assert S == G.product_set(H, U)
        for g in range(G.n):
            assert saturation_formula(G, U, G.conjugate(H, g)) == G.conjugate(S, g)


def test_saturation_is_largest_fixer_of_the_orbit_partition():
    G = by_name("S4")
    lat = SubgroupLattice(G)
    for U in lat.subgroups[::5]:
        for H in lat.subgroups[::3]:
            blocks = orbit_partition(G, U, H)
            assert partition_fixer(G, U, blocks) == saturation_formula(G, U, H)


def test_set_partitions_are_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(k))) for k in range(6)] == [1, 1, 2, 5, 15, 52]


def test_saturated_subgroups_are_partition_fixers():
    G = s3()
    U = G.generate(elem(G, (1, 0, 2)))
    fixers = {partition_fixer(G, U, p) for p in set_partitions(range(3))}
    lat = SubgroupLattice(G)
    assert fixers == {H for H in lat if is_saturated(G, U, H)}


def test_saturation_table_thread_independent():
    G = by_name("S4")
    subs = SubgroupLattice(G).subgroups
    assert saturation_table(G, subs, subs, threads=1) == saturation_table(G, subs, subs, threads=3)


def test_saturation_with_ambient():
    G = by_name("S4")
    lat = SubgroupLattice(G)
    D4 = next(H for H in lat if H.order == 8)
    sub_lat = [H for H in lat if H <= D4]
    for U, H in itertools.product(sub_lat, repeat=2):
        want = naive_saturation(G.n, G.mul, set(U.elements()), set(H.elements()), set(D4.elements()))
        assert set(saturation_formula(G, U, H, D4).elements()) == want
        assert saturation_orbit(G, U, H, D4) == saturation_formula(G, U, H, D4)
    with pytest.raises(GroupError):
        saturation_formula(G, G.whole, G.trivial, D4)


# towers


def _s4_tower():
    G = by_name("S4")
    lat = SubgroupLattice(G)
    D4 = next(H for H in lat if H.order == 8)
    Z = next(H for H in lat if H.order == 2 and H <= D4 and G.is_normal(H, D4))
    return Tower(G, (D4, G.whole), (Z, G.trivial)), D4, Z


def test_tower_endpoints():
    T, D4, Z = _s4_tower()
    G = T.group
    for H in SubgroupLattice(G):
        assert trunc_saturation(T, 2, H) == H
    assert trunc_saturation(T, 1, G.whole) == D4
    assert trunc_saturation(T, 1, G.trivial) == Z
    assert Tower.from_json(G, T.to_json()) == T


def test_tower_validation():
    G = s3()
    t = G.generate(elem(G, (1, 0, 2)))
    with pytest.raises(GroupError):
        Tower(G, (t, G.whole), (G.whole, G.trivial))  # U_1 not inside G_1
    with pytest.raises(GroupError):
        Tower(G, (t,), (G.trivial,))  # top is not G


def test_trunc_saturated_images_match_quotient_lattice():
    # finite-tower shadow: saturated subgroups of G_1 <-> subgroups of G_1/U_1
    T, D4, Z = _s4_tower()
    G = T.group
    images = {trunc_saturation(T, 1, H) for H in SubgroupLattice(G)}
    Q, which = quotient_group(G, Z, D4)
    assert Q.n == 4
    assert len({H for H in SubgroupLattice(G) if Z <= H <= D4}) == len(SubgroupLattice(Q))
    assert images <= {H for H in SubgroupLattice(G) if Z <= H <= D4}


# URS and IRS


def test_urs_counts():
    assert len(urs_list(by_name("S4"))) == 11
    assert len(urs_list(cyclic(4))) == 3
    A5 = FiniteGroup.from_cycle_strings(["(0 1 2)", "(0 1 2 3 4)"], 5, "A5")
    urs = urs_list(A5)
    assert sum(u.trivial for u in urs) == 2 and len(urs) == 9


@pytest.mark.parametrize("G", [s3(), by_name("Q8"), cyclic(5), cyclic(4), dihedral(4)], ids=lambda G: G.name)
def test_irs_vertices_match_polytope_oracle(G):
    lat = SubgroupLattice(G)
    orbits = [c for c in lat.classes]
    oracle = polytope_vertices(len(lat), orbits)
    mine = []
    for mu in irs_vertices(G, lat):
        vec = [Fraction(0)] * len(lat)
        for H, x in mu.weights:
            vec[lat.index[H]] = x
        mine.append(tuple(vec))
        assert mu.is_invariant(G)
    assert sorted(mine) == oracle


def test_irs_vertex_counts():
    assert len(irs_vertices(by_name("Q8"))) == 6
    assert all(len(mu.support()) == 1 for mu in irs_vertices(by_name("Q8")))
    assert len(irs_vertices(cyclic(7))) == 2
    assert len(irs_vertices(s3())) == 4


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=4, max_size=4))
def test_convex_combinations_of_vertices_are_invariant(ws):
    G = s3()
    verts = irs_vertices(G)
    total = sum(ws)
    mix = {}
    for w, mu in zip(ws, verts):
        for H, x in mu.weights:
            mix[H] = mix.get(H, Fraction(0)) + Fraction(w, total) * x
    assert InvariantMeasure.build(G.n, mix).is_invariant(G)


def test_measure_validation():
    G = s3()
    with pytest.raises(ValueError):
        InvariantMeasure.build(G.n, {G.trivial: Fraction(1, 2)})
    with pytest.raises(ValueError):
        InvariantMeasure.build(G.n, {G.trivial: Fraction(3, 2), G.whole: Fraction(-1, 2)})


def test_saturated_push_examples():
    T, D4, Z = _s4_tower()
    G = T.group
    res = saturated_push(T, 1, InvariantMeasure.dirac(Z))
    assert res.verified and res.quotient.support() == [res.quotient_group.trivial]
    res = saturated_push(T, 1, InvariantMeasure.dirac(D4))
    assert res.quotient.support() == [res.quotient_group.whole]
    lat = SubgroupLattice(G)
    for cls in lat.classes:
        members = [lat.subgroups[i] for i in cls if lat.subgroups[i] <= D4]
        if not members:
            continue
        # conjugation inside D4 only
        sub = {G.conjugate(members[0], g) for g in D4.elements()}
        mu = InvariantMeasure.uniform(sorted(sub, key=lambda H: H.sort_key()))
        res = saturated_push(T, 1, mu)
        assert res.verified
        back = lift_from_quotient(T, 1, res.quotient)
        assert back == res.saturated


def test_saturated_push_needs_normal_U():
    G = by_name("S4")
    lat = SubgroupLattice(G)
    U = next(H for H in lat if H.order == 2 and not G.is_normal(H))
    T = Tower(G, (G.whole, G.whole), (U, G.trivial))
    with pytest.raises(GroupError):
        saturated_push(T, 1, InvariantMeasure.dirac(G.whole))


# misc


def test_quotient_group_is_homomorphic_image():
    G = by_name("S4")
    V4 = next(H for H in SubgroupLattice(G) if H.order == 4 and G.is_normal(H))
    Q, which = quotient_group(G, V4)
    assert Q.n == 6 and len(SubgroupLattice(Q)) == 6
    for a in range(G.n):
        for b in range(G.n):
            assert which[G.mul(a, b)] == Q.mul(which[a], which[b])


def test_group_json_round_trip():
    G = by_name("S4")
    back = FiniteGroup.from_json(G.to_json())
    assert back.n == 24 and len(SubgroupLattice(back)) == 30
    T = FiniteGroup.from_table([[0, 1], [1, 0]])
    assert FiniteGroup.from_json(T.to_json()).table == T.table


def test_table_validation():
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_lattice_dot():
    G = s3()
    lat = SubgroupLattice(G)
    U = G.generate(elem(G, (1, 0, 2)))
    dot = lattice_dot(lat, U)
    assert dot.startswith("digraph") and "dashed" in dot
    assert dot.count("->") >= len(lat.covers())
