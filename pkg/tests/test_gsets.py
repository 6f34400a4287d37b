from profmack import groups as gr
from profmack import gsets as gs


def test_transitive_gset_sizes():
    G = gr.symmetric(3)
    for H in gr.all_subgroups(G):
        X = gs.transitive_gset(G, H)
        assert X.size == G.order // H.order
        assert len(X.orbits()) == 1


def test_point_and_empty():
    G = gr.cyclic(3)
    assert gs.point_gset(G).size == 1
    assert gs.empty_gset(G).size == 0


def test_fixed_points_regular_orbit():
    G = gr.symmetric(3)
    X = gs.transitive_gset(G, gr.trivial_subgroup(G))
    assert len(X.fixed_points(gr.trivial_subgroup(G))) == 6
    for H in gr.all_subgroups(G):
        if H.order > 1:
            assert X.fixed_points(H) == []


def test_product_decomposition_c2():
    # C2/e x C2/e = 2 copies of C2/e
    G = gr.cyclic(2)
    X = gs.transitive_gset(G, gr.trivial_subgroup(G))
    P = gs.product_gset(X, X)
    assert P.size == 4
    parts = list(gs.orbit_decompose(P))
    assert len(parts) == 2
    for stab, orbit in parts:
        assert stab.order == 1
        assert len(orbit) == 2


def test_disjoint_union():
    G = gr.cyclic(2)
    X = gs.transitive_gset(G, gr.trivial_subgroup(G))
    Y = gs.point_gset(G)
    U = gs.disjoint_union(X, Y)
    assert U.size == 3
    assert len(U.orbits()) == 2


def test_inflate_gset():
    G4 = gr.cyclic(4)
    G2 = gr.cyclic(2)
    q = gr.GroupHom(G4, G2, tuple(x % 2 for x in range(4)))
    X = gs.transitive_gset(G2, gr.trivial_subgroup(G2))
    Y = gs.inflate_gset(X, q)
    assert Y.group is G4
    assert Y.size == 2
    # kernel acts trivially after inflation
    for n in q.kernel().elements:
        assert all(Y.act[n][x] == x for x in range(Y.size))
