import random

import pytest

from profmack import groups as gr
from profmack import gsets as gs
from profmack import linalg as la
from profmack import mackey as mk

SEED = 20260823


def class_reps(G):
    return [rep for rep, _ in gr.subgroup_conjugacy_classes(G)]


def s3_objects():
    G = gr.symmetric(3)
    objs = [mk.representable(G, gs.transitive_gset(G, H),
                             name=f"rep{G.order // H.order}")
            for H in class_reps(G)]
    objs += [mk.fixed_point_functor(V) for V in mk.rational_irreducibles(G)]
    return G, objs


# ---------------------------------------------------------------------------
# axioms and frozen dimensions


def test_burnside_mackey_c2_dims_and_axioms():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    assert [A.dim(H) for H in A.subs] == [1, 2]
    assert mk.check_axioms(A, collect=True) == []


def test_representable_dims_s3():
    G = gr.symmetric(3)
    dims = {}
    for H in class_reps(G):
        M = mk.representable(G, gs.transitive_gset(G, H))
        dims[G.order // H.order] = [M.dim(K) for K in M.subs]
    # subgroup order sequence: e, C2 x3, C3, S3
    assert dims[1] == [1, 2, 2, 2, 2, 4]
    assert dims[2] == [2, 1, 1, 1, 4, 2]
    assert dims[3] == [3, 3, 3, 3, 1, 2]
    assert dims[6] == [6, 3, 3, 3, 2, 1]


def test_fixed_point_dims_s3():
    G = gr.symmetric(3)
    irrs = {V.name: V for V in mk.rational_irreducibles(G)}
    assert set(irrs) == {"triv", "sign", "std"}
    fp = {n: mk.fixed_point_functor(V) for n, V in irrs.items()}
    assert [fp["triv"].dim(H) for H in fp["triv"].subs] == [1, 1, 1, 1, 1, 1]
    assert [fp["sign"].dim(H) for H in fp["sign"].subs] == [1, 0, 0, 0, 1, 0]
    assert [fp["std"].dim(H) for H in fp["std"].subs] == [2, 1, 1, 1, 0, 0]


def test_axioms_battery_s3():
    _, objs = s3_objects()
    for M in objs:
        assert mk.check_axioms(M, collect=True) == [], M.name


def test_axiom_violation_detected():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    e, C2 = A.subs
    bad_res = dict(A.res)
    bad_res[(C2, e)] = [[la.Q0] * 2]  # break unit-compatibility
    B = mk.MackeyFunctorQ(G, dict(A.dims), bad_res, dict(A.ind),
                          dict(A.conj), name="corrupt")
    assert mk.check_axioms(B, collect=True) != []


# ---------------------------------------------------------------------------
# hom spaces and Yoneda


def test_yoneda_dimension_c2():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    for H in class_reps(G):
        R = mk.representable(G, gs.transitive_gset(G, H))
        assert len(mk.hom_space(R, A)) == A.dim(H)


def test_hom_morphisms_are_natural():
    G = gr.symmetric(3)
    A = mk.burnside_mackey(G)
    R = mk.representable(G, gs.transitive_gset(G, gr.trivial_subgroup(G)))
    for f in mk.hom_space(R, A):
        assert f.check()


def test_hom_basis_count_matches_yoneda_pairing():
    from profmack import burnside as bs

    G = gr.symmetric(3)
    reps = class_reps(G)
    for H in reps:
        for K in reps:
            A = gs.transitive_gset(G, H)
            B = gs.transitive_gset(G, K)
            RA = mk.representable(G, A)
            RB = mk.representable(G, B)
            assert len(mk.hom_space(RA, RB)) == len(bs.hom_basis(A, B))


# ---------------------------------------------------------------------------
# Ext


def test_ext_degree_zero_is_hom():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    irr = mk.rational_irreducibles(G)
    for V in irr:
        N = mk.fixed_point_functor(V)
        assert mk.ext_mackey(A, N, 0) == len(mk.hom_space(A, N))


def test_ext_one_vanishes_c2():
    G = gr.cyclic(2)
    pool = [mk.burnside_mackey(G)] + [
        mk.fixed_point_functor(V) for V in mk.rational_irreducibles(G)
    ]
    tools = mk._RepTools(G)
    for M in pool:
        res = mk.projective_resolution(M, 2, tools)
        for N in pool:
            assert mk.ext_mackey(M, N, 1, res=res, tools=tools) == 0


def test_ext_resolution_too_short():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    tools = mk._RepTools(G)
    res = mk.projective_resolution(A, 1, tools)
    if res.exact_at is None:
        with pytest.raises(mk.ResolutionTooShort):
            mk.ext_mackey(A, A, 5, res=res, tools=tools)


def test_free_cover_surjective():
    G = gr.symmetric(3)
    A = mk.burnside_mackey(G)
    tools = mk._RepTools(G)
    cov = mk.free_cover(A, tools, {})
    for H in A.subs:
        mat = cov.cover.mats[H]
        if A.dim(H):
            assert la.rank(mat) == A.dim(H)


def test_kernel_functor_is_kernel():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    tools = mk._RepTools(G)
    cov = mk.free_cover(A, tools, {})
    K, inc = mk.kernel_functor(cov.cover)
    assert mk.check_axioms(K, collect=True) == []
    assert cov.cover.compose(inc).is_zero()
    for H in A.subs:
        assert K.dim(H) == cov.functor.dim(H) - la.rank(cov.cover.mats[H])


# ---------------------------------------------------------------------------
# span-functor view and serialization


def test_span_functor_round_trip():
    for G in (gr.cyclic(2), gr.symmetric(3)):
        A = mk.burnside_mackey(G)
        F = mk.to_span_functor(A)
        B = mk.from_span_functor(F)
        reps = class_reps(G)
        for H in reps:
            assert B.dim(H) == A.dim(H)
            for K in reps:
                if set(K.elements) <= set(H.elements):
                    assert la.eq(B.res[(H, K)], A.res[(H, K)])
                    assert la.eq(B.ind[(H, K)], A.ind[(H, K)])


def test_mackey_json_round_trip():
    G = gr.symmetric(3)
    A = mk.burnside_mackey(G)
    data = mk.mackey_to_json(A)
    B = mk.mackey_from_json(G, data)
    assert B.dims == A.dims
    for key in A.res:
        assert la.eq(B.res[key], A.res[key])
    for key in A.conj:
        assert la.eq(B.conj[key], A.conj[key])
    assert mk.check_axioms(B, collect=True) == []


def test_direct_sum_and_zero():
    G = gr.cyclic(2)
    A = mk.burnside_mackey(G)
    Z = mk.zero_mackey(G)
    S = mk.direct_sum_mackey([A, A])
    assert all(S.dim(H) == 2 * A.dim(H) for H in A.subs)
    assert mk.check_axioms(S, collect=True) == []
    assert Z.is_zero()
    assert mk.check_axioms(Z, collect=True) == []
