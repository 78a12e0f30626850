import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netclique.autgroup import (
    BruteForceCapExceeded,
    GroupElement,
    GroupError,
    PermGroup,
    act_on_clique,
    brute_force_automorphisms,
    classify_orbits,
    is_automorphism,
    net_linear_group,
    orbit_of_clique,
    orbit_stabilizer_consistent,
    paley_group,
    peisert_group,
    stabilizer_order,
    taylor_paley_group,
)
from netclique.cliques import enumerate_maximal_cliques, maximal_cliques
from netclique.gf import field_of_order
from netclique.netgraph import Graph, NetSpec, build_net_graph, build_paley, build_peisert, build_taylor
from netclique.structure import goryainov_set, line

from oracles import count_automorphisms


def test_paley_group_orders():
    assert paley_group(field_of_order(9)).order == 72
    assert paley_group(field_of_order(25)).order == 600
    with pytest.raises(GroupError):
        paley_group(field_of_order(27))


@pytest.mark.parametrize("q", [5, 9, 13, 25, 49, 81, 121, 169, 2209])
def test_generators_preserve_paley(q):
    F = field_of_order(q)
    g, _ = build_paley(F)
    assert paley_group(F).check_preserves(g)


@pytest.mark.parametrize("q", [9, 49, 81, 121, 361, 529])
def test_peisert_group(q):
    F = field_of_order(q)
    grp = peisert_group(F)
    assert grp.order == F.e * q * (q - 1) // 4
    assert grp.check_preserves(build_peisert(F))
    assert grp.certified_full == (q not in (9, 49, 81))


def test_peisert_twisted_frobenius_moves_classes():
    F = field_of_order(49)
    tw = GroupElement(F.beta, 0, 1)
    for z in range(1, 49):
        if F.power_class(z, 4) == 1:
            assert F.power_class(tw.apply(F, z), 4) == 0


@pytest.mark.parametrize("q,expected", [(5, 10), (9, 72), (13, 78), (25, 600), (49, 2352), (81, 12960)])
def test_brute_force_matches_carlitz(q, expected):
    g, _ = build_paley(field_of_order(q))
    grp = brute_force_automorphisms(g)
    assert grp.order == expected
    assert grp.check_preserves(g)


def test_brute_force_exceptional_peisert():
    assert brute_force_automorphisms(build_peisert(field_of_order(9))).order == 72
    assert brute_force_automorphisms(build_peisert(field_of_order(49))).order == 3528


def test_brute_force_against_permutation_oracle():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(1, 7)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
        grp = brute_force_automorphisms(Graph.from_edges(n, edges))
        assert grp.order == count_automorphisms(n, {frozenset(e) for e in edges})


def test_brute_force_cap():
    g, _ = build_paley(field_of_order(121))
    with pytest.raises(BruteForceCapExceeded):
        brute_force_automorphisms(g)


def test_net_linear_group():
    F = field_of_order(49)
    g, net = build_paley(F)
    assert net_linear_group(F, net).order == paley_group(F).order
    full = net_linear_group(F, NetSpec.canonical(7, 8))
    assert full.order == 49 * 48 * F.e
    grp = net_linear_group(F, NetSpec.canonical(7, 3))
    assert grp.check_preserves(build_net_graph(F, NetSpec.canonical(7, 3)))
    r_mults = F.subfield(1)[1:]
    assert all(grp.contains_linear(a, 0) for a in r_mults)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 80), st.integers(0, 80), st.integers(0, 3),
       st.integers(1, 80), st.integers(0, 80), st.integers(0, 3))
def test_composition_rule(a1, b1, i1, a2, b2, i2):
    F = field_of_order(81)
    g = GroupElement(a1, b1, i1)
    h = GroupElement(a2, b2, i2)
    gh = g.compose(F, h)
    for z in range(81):
        assert gh.apply(F, z) == g.apply(F, h.apply(F, z))
    inv = g.inverse(F)
    assert all(inv.apply(F, g.apply(F, z)) == z for z in range(81))


def test_act_on_clique():
    F = field_of_order(25)
    g, net = build_paley(F)
    L = line(F, net, 0, 0)
    ident = GroupElement.identity().perm(F)
    assert act_on_clique(ident, L) == L
    t = GroupElement(1, F.beta, 0).perm(F)
    assert act_on_clique(t, L) == line(F, net, 0, F.beta)
    for c in maximal_cliques(g):
        for perm in paley_group(F).generator_perms():
            assert is_automorphism(g, perm)
            img = act_on_clique(perm, c)
            assert len(img) == len(c)


@pytest.mark.parametrize("r,expected", [(3, {3: 1}), (5, {3: 1, 5: 1}), (7, {5: 1, 7: 1}), (9, {5: 3, 9: 1})])
def test_orbit_tables_two_ways(r, expected):
    """Canonical forms over an edge-seeded stream agree with union-find over everything."""
    F = field_of_order(r * r)
    g, _ = build_paley(F)
    grp = paley_group(F)
    everything = maximal_cliques(g)
    perm = PermGroup(F.q, grp.generator_perms(), grp.order)
    assert classify_orbits(everything, perm).histogram() == expected
    seeded = [c for rho in grp.orbit_reps(g.neighbors(0)) for c in enumerate_maximal_cliques(g, seed=(0, rho))]
    assert classify_orbits(seeded, grp).histogram() == expected


def test_stream_must_be_closed_for_permutation_groups():
    F = field_of_order(25)
    g, _ = build_paley(F)
    grp = paley_group(F)
    perm = PermGroup(F.q, grp.generator_perms(), grp.order)
    with pytest.raises(GroupError):
        classify_orbits(maximal_cliques(g)[:3], perm)


def test_classification_ignores_stream_order():
    F = field_of_order(81)
    g, _ = build_paley(F)
    grp = paley_group(F)
    cl = maximal_cliques(g)
    rng = random.Random(1)
    shuffled = cl[:]
    rng.shuffle(shuffled)
    a = classify_orbits(cl, grp)
    b = classify_orbits(shuffled, grp)
    assert [o.representative for o in a.orbits] == [o.representative for o in b.orbits]


@pytest.mark.parametrize("q", [25, 49, 81])
def test_orbit_stabilizer_on_random_cliques(q):
    F = field_of_order(q)
    g, _ = build_paley(F)
    grp = paley_group(F)
    cl = maximal_cliques(g)
    rng = random.Random(q)
    for c in rng.sample(cl, min(100, len(cl))):
        _, direct = grp.canonical_form(c)
        assert stabilizer_order(c, grp) == direct == grp.stabilizer_order_direct(c)
        assert orbit_stabilizer_consistent(grp, c)


def test_stabilizer_examples():
    # In P(49) the 5-cliques form one orbit, so the Baker-type clique {x, x^7} cup A
    # shares the conic clique's stabilizer e(r+1) = 8; the 4e law needs r >= 9.
    F = field_of_order(49)
    g, _ = build_paley(F)
    grp = paley_group(F)
    five = [c for c in maximal_cliques(g) if len(c) == 5]
    assert {stabilizer_order(c, grp) for c in five} == {8}
    conic, kind = goryainov_set(F)
    assert kind == "clique" and conic in five
    # conic coclique in P(25): e(r+1) = 6
    F = field_of_order(25)
    conic, kind = goryainov_set(F)
    assert kind == "coclique"
    assert stabilizer_order(conic, paley_group(F)) == 6


def test_neighbourhood_of_zero_admits_inversion():
    for q in (9, 25, 49, 81, 121):
        F = field_of_order(q)
        g, _ = build_paley(F)
        pi = g.neighbors(0)
        idx = {v: i for i, v in enumerate(pi)}
        sub, _ = g.induced(pi)
        perm = [idx[F.inv(v)] for v in pi]
        assert is_automorphism(sub, perm)


@pytest.mark.parametrize("r", [3, 5])
def test_taylor_group(r):
    F = field_of_order(r * r)
    T = build_taylor(build_paley(F)[0])
    grp = taylor_paley_group(F)
    assert grp.check_preserves(T)
    assert brute_force_automorphisms(T).order == grp.order == F.e * F.q * (F.q**2 - 1)
    assert len(grp.vertex_orbits()) == 1


def test_orbit_of_clique_sizes():
    F = field_of_order(25)
    g, net = build_paley(F)
    grp = paley_group(F)
    L = line(F, net, 0, 0)
    orb = orbit_of_clique(grp, L)
    assert len(orb) == 3 * 5  # three directions, five parallel lines each
    assert len(orb) * stabilizer_order(L, grp) == grp.order
