import random
from fractions import Fraction

import pytest

from profmack import linalg as la
from profmack import sheaf as sh
from profmack.groups import CyclicGroup, cyclic, symmetric, trivial_subgroup
from profmack.gsets import transitive_gset

F = Fraction
SEED = 20260823


# ---------------------------------------------------------------------------
# periodic tails


def test_tail_arithmetic():
    a = sh.Tail(2, ((F(1),), (F(0),)))
    b = sh.Tail(1, ((F(1),),))
    s = a.add(b)
    assert s.period == 2
    assert s.values == ((F(2),), (F(1),))
    assert a.scale(F(3)).values == ((F(3),), (F(0),))
    assert not a.is_zero()
    assert sh.zero_tail([1]).is_zero()


def test_tail_equality_across_periods():
    a = sh.Tail(2, ((F(1),), (F(1),)))
    b = sh.Tail(1, ((F(1),),))
    assert a.eq(b)
    c = sh.Tail(2, ((F(1),), (F(0),)))
    assert not c.eq(b)


def test_tail_coords():
    t = sh.Tail(2, ((F(1),), (F(2),)))
    assert sh.tail_coords(t, 4) == [F(1), F(2), F(1), F(2)]


# ---------------------------------------------------------------------------
# the three canonical resolutions


def test_resolution_constQ_spzp():
    E = sh.constant_sheaf(sh.spzp_base(2), 1)
    res = sh.godement_resolution(E)
    assert res.length == 1
    s0 = res.stage_stalk_dims(0)
    assert s0["omega_fin"] == 1 and s0["omega_tail_mult"] == 1
    s1 = res.stage_stalk_dims(1)
    assert s1["exc"] == [] and s1["pattern"] == [0]
    assert s1["omega_fin"] == 0 and s1["omega_tail_mult"] == 1
    assert sh.stalk_vanishing_check(res, {"isolated": 0, "omega": 1}) == []


def test_resolution_skyscraper_length_zero():
    sky = sh.skyscraper_omega(sh.spzp_base(2), 3)
    res = sh.godement_resolution(sky)
    assert res.length == 0


def test_resolution_finite_discrete_iso():
    # pattern-zero bases behave like finite discrete spaces: I0 = E
    base = sh.ConvergingBase(r=3, m=1)
    E = sh.ConvSheaf(base, [1, 2, 1], [0], 2, [sh.zero_tail([0])] * 2)
    res = sh.godement_resolution(E)
    assert res.length == 0
    I0 = res.stages[0]
    assert I0.exc_dims == E.exc_dims and I0.fin_dim == E.fin_dim
    assert sh.delta_injective(E)


# ---------------------------------------------------------------------------
# hom spaces


def test_hom_sky_omega_is_kernel_of_lambda():
    B = sh.spzp_base(2)
    cQ = sh.constant_sheaf(B, 1)
    sky = sh.skyscraper_omega(B, 1)
    assert sh.hom_conv_dim(sky, cQ) == 0  # lambda injective on constQ
    assert sh.hom_conv_dim(sky, sky) == 1
    assert sh.hom_conv_dim(cQ, cQ) == 1


def test_hom_sky_isolated_adjunction():
    # hom(sky(x, Q), E) = E_x^{stab(x)}
    base = sh.ConvergingBase(r=1, m=1)
    skyx = sh.skyscraper_isolated(base, 1, 1)
    E = sh.ConvSheaf(base, [3], [1], 1, [sh.constant_tail([1], [F(1)])])
    assert sh.hom_conv_dim(skyx, E) == 3


def test_hom_with_group_action():
    # W = C2 acting by sign on an exceptional stalk: fixed part is 0
    W = cyclic(2)
    base = sh.ConvergingBase(r=1, m=1, group=W)
    skyx = sh.skyscraper_isolated(base, 1, 1)
    E = sh.ConvSheaf(
        base, [1], [0], 0, [],
        act_exc={(0, 0): la.identity(1), (1, 0): [[F(-1)]]},
    )
    assert sh.hom_conv_dim(skyx, E) == 0


def test_skyscraper_in_tail_rejected():
    base = sh.ConvergingBase(r=1, m=1)
    with pytest.raises(sh.NonPeriodicTail):
        sh.skyscraper_isolated(base, 5, 1)


def test_restrict_extend():
    B = sh.spzp_base(2)
    cQ = sh.constant_sheaf(B, 2)
    Eo = sh.restrict_extend(cQ, "omega")
    assert Eo.pattern_dims == [0] and Eo.fin_dim == 2
    assert sh.restrict_extend(cQ, "all") is cQ
    base = sh.ConvergingBase(r=2, m=1)
    E = sh.ConvSheaf(base, [1, 2], [1], 1, [sh.constant_tail([1], [F(1)])])
    E1 = sh.restrict_extend(E, ("exc", 1))
    assert E1.exc_dims == [0, 2] and E1.fin_dim == 0
    with pytest.raises(sh.NonPeriodicTail):
        sh.restrict_extend(E, ("tail", 0))


# ---------------------------------------------------------------------------
# Weyl condition


def test_weyl_check_and_corruption():
    W = cyclic(2)
    base = sh.ConvergingBase(r=1, m=1, group=W)
    K = sh.Subgroup(W, (0, 1))
    E = sh.ConvSheaf(
        base, [1], [1], 1, [sh.constant_tail([1], [F(1)])],
        weyl_exc=[K], weyl_pattern=[K], weyl_omega=K,
    )
    assert sh.weyl_check(E).ok
    bad = sh.ConvSheaf(
        base, [1], [1], 1, [sh.constant_tail([1], [F(1)])],
        act_exc={(0, 0): la.identity(1), (1, 0): [[F(-1)]]},
        weyl_exc=[K], weyl_pattern=[K], weyl_omega=K,
    )
    flag = sh.weyl_check(bad)
    assert not flag.ok and flag.exc == [False]


# ---------------------------------------------------------------------------
# randomized stalk-vanishing battery


def random_conv_sheaf(rng):
    r = rng.randint(0, 2)
    m = rng.randint(1, 2)
    base = sh.ConvergingBase(r=r, m=m)
    pattern = [rng.randint(0, 2) for _ in range(m)]
    fin = rng.randint(0, 2)
    lam = []
    for _ in range(fin):
        period = m * rng.choice([1, 2])
        vals = tuple(
            tuple(F(rng.randint(-2, 2)) for _ in range(pattern[j % m]))
            for j in range(period)
        )
        lam.append(sh.Tail(period, vals))
    exc = [rng.randint(0, 2) for _ in range(r)]
    return sh.ConvSheaf(base, exc, pattern, fin, lam,
                        name=f"rand(r={r},m={m})")


def test_random_battery_stalk_vanishing():
    rng = random.Random(SEED)
    heights = {"isolated": 0, "omega": 1}
    for _ in range(25):
        E = random_conv_sheaf(rng)
        res = sh.godement_resolution(E)
        assert res.length <= 1
        assert sh.stalk_vanishing_check(res, heights) == []


# ---------------------------------------------------------------------------
# finite discrete bases


def test_hom_fin_regular_orbit():
    G = symmetric(3)
    X = transitive_gset(G, trivial_subgroup(G))
    E = sh.constant_sheaf_finite(X, 1)
    assert E.check_equivariance()
    # equivariant endomorphisms of the constant sheaf on a transitive set
    assert len(sh.hom_fin(E, E)) == 1


def test_hom_fin_zero():
    G = cyclic(2)
    X = transitive_gset(G, trivial_subgroup(G))
    E = sh.constant_sheaf_finite(X, 1)
    Z = sh.EqSheafFinite(X, [0, 0], {(g, x): [] for g in G.elements()
                                     for x in range(2)})
    assert sh.hom_fin(E, Z) == []
