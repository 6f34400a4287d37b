import pytest

from profmack import cbrank as cb
from profmack import tower as tw


def pro_p_tree(p, depth):
    return tw.subgroup_space_tower(tw.builtin_tower(f"pro_p:{p}", depth))


def test_empty_tree_rank_zero():
    cert = cb.cb_rank(cb.empty_tree())
    assert cert.verdict == "Exact" and cert.rank == 0


def test_discrete_tree_rank_one():
    cert = cb.cb_rank(cb.discrete_tree(["a", "b", "c"]))
    assert cert.verdict == "Exact" and cert.rank == 1


def test_pro_p_rank_two():
    for p in (2, 3):
        cert = cb.cb_rank(pro_p_tree(p, 5))
        assert cert.verdict == "Exact" and cert.rank == 2
        assert cert.as_dict()["schema"] == 1
        assert "convention" in cert.as_dict()


def test_prod_rank_three():
    # two maximal-index coordinates give a thread surviving two derivatives
    X = tw.subgroup_space_tower(tw.builtin_tower("prod:pro_p:2,pro_p:3", 4))
    cert = cb.cb_rank(X)
    assert cert.verdict == "Exact" and cert.rank == 3


def test_unknown_certs_give_interval():
    X = cb.binary_tree(3, certified=False)
    cert = cb.cb_rank(X)
    assert cert.verdict == "Interval"
    assert cert.lo >= 1 and cert.hi is None


def test_perfect_hull_detected():
    X = cb.binary_tree(3, certified=True)
    cert = cb.cb_rank(X)
    assert cert.verdict == "PerfectHullDetected"


def test_thread_cert_validation():
    with pytest.raises(ValueError):
        cb.ThreadCert("scattered")  # missing m
    with pytest.raises(ValueError):
        cb.ThreadCert("perfect", 1)  # spurious m
    with pytest.raises(ValueError):
        cb.ThreadCert("solid")


def test_derivative_removes_stage_zero():
    X = pro_p_tree(2, 4)
    Y = cb.derivative(X)
    # only the zero-subgroup thread survives the first derivative
    assert Y.top_size == 1
    assert Y.certs[0].m == 0


def test_isolated_and_split():
    X = pro_p_tree(2, 4)
    rep = cb.isolated_points(X)
    assert len(rep.certified) == 4 and not rep.undecided
    split = cb.scattered_split(X)
    assert not split.hull_nonempty
    assert len(split.scattered) == 5


def test_heights_pro_p():
    X = pro_p_tree(2, 5)
    rep = cb.heights(X)
    assert rep.heights["ord1"] == 1  # the zero subgroup accumulates
    assert all(h == 0 for lbl, h in rep.heights.items() if lbl != "ord1")
    assert not rep.hull and not rep.lower_bounds


def test_tree_union_rank_max():
    a = cb.discrete_tree(["a", "b"])
    b = cb.discrete_tree(["c"])
    cert = cb.cb_rank(cb.tree_union(a, b))
    assert cert.verdict == "Exact" and cert.rank == 1


def test_depth_exhausted():
    X = cb.SpaceTree(
        levels=[["*"], ["x"]],
        bonds=[[0]],
        certs=[cb.ThreadCert("scattered", 5, "far too high")],
    )
    with pytest.raises(cb.DepthExhausted):
        cb.cb_rank(X)


def test_equivariant_heights_pro_p():
    X = pro_p_tree(2, 4)
    assert cb.check_equivariant_heights(X)


def test_equivariant_heights_corrupted_action():
    X = tw.subgroup_space_tower(tw.builtin_tower("prod:pro_p:2,pro_p:3", 2))
    assert cb.check_equivariant_heights(X)
    # corrupt: make the certificates non-constant on a (forced) orbit by
    # installing a bogus permutation that merges threads of unequal height
    hts = [c.m for c in X.certs]
    lo = hts.index(min(hts))
    hi = hts.index(max(hts))
    swap = list(range(X.top_size))
    swap[lo], swap[hi] = swap[hi], swap[lo]
    bad = cb.SpaceTree(
        X.levels, X.bonds, X.certs,
        actions=[[] for _ in range(X.depth)] + [[tuple(swap)]],
        chain=X.chain,
    )
    assert not cb.check_equivariant_heights(bad)
