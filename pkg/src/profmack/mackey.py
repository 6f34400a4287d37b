"""Rational Mackey functors for a finite level group.

A Mackey functor is stored as value spaces M(H) for *every* subgroup H
(not just conjugacy class representatives), together with restriction,
induction and conjugation matrices; this keeps span actions and the Weyl
sheaf construction index-free.  The span-functor view (additive functor on
the Burnside category) is derived, and the two round-trip on class
representatives.

All arithmetic is exact over Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .linalg import Fraction as _F  # noqa: F401
from .burnside import (
    Component,
    Span,
    component_span,
    decompose_span,
    hom_basis,
    span_compose,
)
from .groups import (
    CyclicGroup,
    FiniteGroup,
    ProductGroup,
    Subgroup,
    TableGroup,
    UnknownFamily,
    all_subgroups,
    conjugate_subgroup,
    subgroup_conjugacy_classes,
    trivial_subgroup,
)
from .gsets import FiniteGSet, transitive_gset

Q0, Q1 = la.Q0, la.Q1


class AxiomViolation(Exception):
    pass


class ResolutionTooShort(Exception):
    pass


def _contains(H: Subgroup, K: Subgroup) -> bool:
    return set(K.elements) <= set(H.elements)


def _meq(a: la.Matrix, b: la.Matrix) -> bool:
    """Matrix equality tolerant of lost column counts on 0-row matrices.

    Maps into or out of a zero space are stored with degenerate shapes; two
    all-zero matrices between the same spaces are the same map.
    """
    if la.is_zero(a) and la.is_zero(b):
        return True
    return la.eq(a, b)


def _madd(a: la.Matrix, b: la.Matrix) -> la.Matrix:
    """Sum tolerant of degenerate (all-zero, shape-lost) summands."""
    ca = len(a[0]) if a else 0
    cb = len(b[0]) if b else 0
    if len(b) < len(a) or cb < ca:
        return a
    if len(a) < len(b) or ca < cb:
        return b
    return la.add(a, b)


def _double_coset_reps(G: FiniteGroup, K: Subgroup, H: Subgroup, L: Subgroup):
    """Representatives (minimal elements) of K\\H/L inside H."""
    seen = set()
    reps = []
    for h in sorted(H.elements):
        if h in seen:
            continue
        coset = {G.mul(G.mul(k, h), l) for k in K.elements for l in L.elements}
        reps.append(min(coset))
        seen |= coset
    return reps


@dataclass
class MackeyFunctorQ:
    group: FiniteGroup
    dims: dict[Subgroup, int]
    res: dict[tuple[Subgroup, Subgroup], la.Matrix]  # (H, K ⊆ H): M(H) -> M(K)
    ind: dict[tuple[Subgroup, Subgroup], la.Matrix]  # (H, K ⊆ H): M(K) -> M(H)
    conj: dict[tuple[int, Subgroup], la.Matrix]  # (g, H): M(H) -> M(gHg^-1)
    name: str = "M"

    @property
    def subs(self) -> list[Subgroup]:
        return all_subgroups(self.group)

    def dim(self, H: Subgroup) -> int:
        return self.dims[H]

    def res_mat(self, H: Subgroup, K: Subgroup) -> la.Matrix:
        return self.res[(H, K)]

    def ind_mat(self, H: Subgroup, K: Subgroup) -> la.Matrix:
        return self.ind[(H, K)]

    def conj_mat(self, g: int, H: Subgroup) -> la.Matrix:
        return self.conj[(g, H)]

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims.values())


def _nested_pairs(subs):
    return [
        (H, K) for H in subs for K in subs if K is not H and _contains(H, K)
    ] + [(H, H) for H in subs]


def check_axioms(M: MackeyFunctorQ, collect: bool = False):
    """Verify all Mackey axioms exactly; returns [] (or raises) when clean."""
    G = M.group
    subs = M.subs
    bad: list[str] = []

    def report(msg):
        if collect:
            bad.append(msg)
        else:
            raise AxiomViolation(msg)

    for H in subs:
        if not _meq(M.res_mat(H, H), la.identity(M.dim(H))):
            report(f"res({H.order},{H.order}) not identity")
        if not _meq(M.ind_mat(H, H), la.identity(M.dim(H))):
            report(f"ind({H.order},{H.order}) not identity")
        if not _meq(M.conj_mat(G.identity, H), la.identity(M.dim(H))):
            report(f"conj(e,{H.order}) not identity")
    for H in subs:
        for K in subs:
            if not (_contains(H, K)):
                continue
            for J in subs:
                if not _contains(K, J):
                    continue
                if not _meq(
                    la.matmul(M.res_mat(K, J), M.res_mat(H, K)), M.res_mat(H, J)
                ):
                    report("res not transitive")
                if not _meq(
                    la.matmul(M.ind_mat(H, K), M.ind_mat(K, J)), M.ind_mat(H, J)
                ):
                    report("ind not transitive")
    for H in subs:
        for g in G.elements():
            Hg = conjugate_subgroup(H, g)
            for h in G.elements():
                lhs = la.matmul(M.conj_mat(h, Hg), M.conj_mat(g, H))
                rhs = M.conj_mat(G.mul(h, g), H)
                if not _meq(lhs, rhs):
                    report("conjugation not functorial")
            for K in subs:
                if not _contains(H, K):
                    continue
                Kg = conjugate_subgroup(K, g)
                if not _meq(
                    la.matmul(M.conj_mat(g, K), M.res_mat(H, K)),
                    la.matmul(M.res_mat(Hg, Kg), M.conj_mat(g, H)),
                ):
                    report("conjugation does not intertwine res")
                if not _meq(
                    la.matmul(M.conj_mat(g, H), M.ind_mat(H, K)),
                    la.matmul(M.ind_mat(Hg, Kg), M.conj_mat(g, K)),
                ):
                    report("conjugation does not intertwine ind")
    # double coset formula
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            for L in subs:
                if not _contains(H, L):
                    continue
                lhs = la.matmul(M.res_mat(H, K), M.ind_mat(H, L))
                total = la.zeros(M.dim(K), M.dim(L))
                for g in _double_coset_reps(G, K, H, L):
                    Lg = conjugate_subgroup(L, g)
                    A = Subgroup(
                        G, tuple(sorted(set(K.elements) & set(Lg.elements)))
                    )  # K ∩ gLg^-1
                    Ag = conjugate_subgroup(A, G.inv(g))  # L ∩ g^-1 K g
                    term = la.matmul(
                        M.ind_mat(K, A),
                        la.matmul(M.conj_mat(g, Ag), M.res_mat(L, Ag)),
                    )
                    total = _madd(total, term)
                if not _meq(lhs, total):
                    report(
                        f"Mackey formula fails at |H|={H.order},|K|={K.order},|L|={L.order}"
                    )
    return bad


# ---------------------------------------------------------------------------
# values on G-sets and span actions


@dataclass
class GSetValue:
    """M evaluated on a G-set: one summand M(stab basepoint) per orbit."""

    gset: FiniteGSet
    orbit_of: list[int]
    basepoints: list[int]
    stabs: list[Subgroup]
    transporter: list[int]  # g with point = g . basepoint(orbit)
    offsets: list[int]
    dim: int


def value_on_gset(M: MackeyFunctorQ, A: FiniteGSet) -> GSetValue:
    G = M.group
    orbits = A.orbits()
    orbit_of = [0] * A.size
    transporter = [G.identity] * A.size
    basepoints, stabs, offsets = [], [], []
    off = 0
    for i, orbit in enumerate(orbits):
        b = min(orbit)
        basepoints.append(b)
        stab = A.stabilizer(b)
        stabs.append(stab)
        offsets.append(off)
        off += M.dim(stab)
        for x in orbit:
            orbit_of[x] = i
            transporter[x] = next(g for g in G.elements() if A.act[g][b] == x)
    return GSetValue(A, orbit_of, basepoints, stabs, transporter, offsets, off)


def span_action_matrix(M: MackeyFunctorQ, s: Span) -> la.Matrix:
    """The linear map M(left foot) -> M(right foot) induced by the span."""
    G = M.group
    VA = value_on_gset(M, s.left_foot)
    VB = value_on_gset(M, s.right_foot)
    out = la.zeros(VB.dim, VA.dim)
    for orbit in s.apex.orbits():
        w = min(orbit)
        L = s.apex.stabilizer(w)
        a, b = s.left[w], s.right[w]
        ia, ib = VA.orbit_of[a], VB.orbit_of[b]
        Sa, Sb = VA.stabs[ia], VB.stabs[ib]
        g, h = VA.transporter[a], VB.transporter[b]
        Sag = conjugate_subgroup(Sa, g)  # = Stab(a) ⊇ L
        Lh = conjugate_subgroup(L, G.inv(h))  # ⊆ Sb
        block = la.matmul(
            M.ind_mat(Sb, Lh),
            la.matmul(
                M.conj_mat(G.inv(h), L),
                la.matmul(M.res_mat(Sag, L), M.conj_mat(g, Sa)),
            ),
        )
        oa, ob = VA.offsets[ia], VB.offsets[ib]
        for r in range(len(block)):
            row = out[ob + r]
            for c in range(len(block[0])):
                row[oa + c] += block[r][c]
    return out


# ---------------------------------------------------------------------------
# representables


class _OrbitCache:
    def __init__(self, G: FiniteGroup):
        self.G = G
        self._orbits: dict[Subgroup, FiniteGSet] = {}
        self._reps: dict[Subgroup, list[int]] = {}
        self._rep_of: dict[Subgroup, dict[int, int]] = {}

    def orbit(self, H: Subgroup) -> FiniteGSet:
        if H not in self._orbits:
            self._orbits[H] = transitive_gset(self.G, H)
            hset = set(H.elements)
            rep_of = {}
            reps = []
            for g in self.G.elements():
                if g in rep_of:
                    continue
                coset = sorted(self.G.mul(g, h) for h in hset)
                reps.append(coset[0])
                for x in coset:
                    rep_of[x] = coset[0]
            reps.sort()
            self._reps[H] = reps
            self._rep_of[H] = rep_of
        return self._orbits[H]

    def coset_map(self, K: Subgroup, H: Subgroup, g: int) -> tuple[int, ...]:
        """Table of the G-map O_K -> O_H, rK |-> rgH (needs g^-1 K g ⊆ H)."""
        self.orbit(K), self.orbit(H)
        idx = {r: i for i, r in enumerate(self._reps[H])}
        return tuple(
            idx[self._rep_of[H][self.G.mul(r, g)]] for r in self._reps[K]
        )


def _one_leg_span(cache: _OrbitCache, K: Subgroup, H: Subgroup, g: int) -> Span:
    """The span O_K <-id- O_K -> O_H with right leg rK |-> rgH."""
    OK, OH = cache.orbit(K), cache.orbit(H)
    return Span(OK, OH, OK, tuple(range(OK.size)), cache.coset_map(K, H, g))


def representable(G: FiniteGroup, A: FiniteGSet, name: str | None = None) -> MackeyFunctorQ:
    """The Mackey functor Span(-, A) ⊗ Q."""
    cache = _OrbitCache(G)
    subs = all_subgroups(G)
    basis = {H: hom_basis(cache.orbit(H), A) for H in subs}
    spans = {
        H: [component_span(G, cache.orbit(H), A, c) for c in basis[H]] for H in subs
    }
    dims = {H: len(basis[H]) for H in subs}

    def precompose(u: Span, H_from: Subgroup, K_to: Subgroup) -> la.Matrix:
        """Matrix of c |-> c ∘ u from Q basis[H_from] to Q basis[K_to]."""
        index = {c: i for i, c in enumerate(basis[K_to])}
        m = la.zeros(dims[K_to], dims[H_from])
        for j, s_c in enumerate(spans[H_from]):
            for comp, mult in decompose_span(span_compose(u, s_c)).items():
                m[index[comp]][j] += Fraction(mult)
        return m

    res, ind, conj = {}, {}, {}
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            pi = _one_leg_span(cache, K, H, G.identity)  # O_K -> O_H
            res[(H, K)] = precompose(pi, H, K)
            ind[(H, K)] = precompose(pi.dual(), K, H)
        for g in G.elements():
            Hg = conjugate_subgroup(H, g)
            iota = _one_leg_span(cache, Hg, H, g)  # O_Hg -> O_H, xHg |-> xgH
            conj[(g, H)] = precompose(iota, H, Hg)
    return MackeyFunctorQ(G, dims, res, ind, conj, name or f"rep({A.label})")


def burnside_mackey(G: FiniteGroup) -> MackeyFunctorQ:
    from .gsets import point_gset

    return representable(G, point_gset(G), name="A_Q")


# ---------------------------------------------------------------------------
# fixed-point functors of rational representations


@dataclass
class GroupRep:
    group: FiniteGroup
    dim: int
    mats: list[la.Matrix]  # one per element
    name: str = "V"

    def __post_init__(self):
        G = self.group
        for a in range(G.order):
            for b in range(G.order):
                if not _meq(
                    la.matmul(self.mats[a], self.mats[b]), self.mats[G.mul(a, b)]
                ):
                    raise ValueError("not a representation")


def _fixed_basis(rep: GroupRep, H: Subgroup) -> list[la.Vector]:
    rows = []
    for h in H.elements:
        m = rep.mats[h]
        for i in range(rep.dim):
            rows.append([m[i][j] - (Q1 if i == j else Q0) for j in range(rep.dim)])
    if not rows:
        return [list(e) for e in la.identity(rep.dim)]
    return la.nullspace(rows)


def _in_basis(basis: list[la.Vector], vecs: list[la.Vector]) -> la.Matrix:
    """Coordinates of each vector of `vecs` in the given basis (columns).

    One augmented row reduction [B | v_1 ... v_k] instead of a solve per
    vector; a pivot landing in the vector block means some v is outside the
    span, which is an axiom violation for the callers.
    """
    if not basis:
        if any(any(v) for v in vecs):
            raise AxiomViolation("vector not in claimed subspace")
        return la.zeros(0, len(vecs))
    if not vecs:
        return la.zeros(len(basis), 0)
    nb, dim = len(basis), len(basis[0])
    aug = [[basis[c][r] for c in range(nb)] + [v[r] for v in vecs]
           for r in range(dim)]
    red, pivots = la.rref(aug)
    if any(p >= nb for p in pivots):
        raise AxiomViolation("vector not in claimed subspace")
    out = la.zeros(nb, len(vecs))
    for r, p in enumerate(pivots):
        for j in range(len(vecs)):
            out[p][j] = red[r][nb + j]
    return out


def fixed_point_functor(rep: GroupRep, name: str | None = None) -> MackeyFunctorQ:
    """H |-> V^H with inclusion restrictions and transfer inductions."""
    G = rep.group
    subs = all_subgroups(G)
    basis = {H: _fixed_basis(rep, H) for H in subs}
    dims = {H: len(basis[H]) for H in subs}
    res, ind, conj = {}, {}, {}
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            res[(H, K)] = _in_basis(basis[K], basis[H])
            # transfer: sum over coset reps of K in H
            kset = set(K.elements)
            reps, seen = [], set()
            for h in sorted(H.elements):
                if h in seen:
                    continue
                reps.append(h)
                seen |= {G.mul(h, k) for k in kset}
            imgs = []
            for v in basis[K]:
                w = [Q0] * rep.dim
                for h in reps:
                    w = [a + b for a, b in zip(w, la.matvec(rep.mats[h], v))]
                imgs.append(w)
            ind[(H, K)] = _in_basis(basis[H], imgs)
        for g in G.elements():
            Hg = conjugate_subgroup(H, g)
            imgs = [la.matvec(rep.mats[g], v) for v in basis[H]]
            conj[(g, H)] = _in_basis(basis[Hg], imgs)
    return MackeyFunctorQ(G, dims, res, ind, conj, name or f"FP({rep.name})")


def _poly_div(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert all(x == 0 for x in num)
    return out


def cyclotomic(d: int) -> list[int]:
    """Coefficients of the d-th cyclotomic polynomial, ascending."""
    poly = [-1] + [0] * (d - 1) + [1]  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            poly = _poly_div(poly, cyclotomic(e))
    return poly


def _companion(poly: list[int]) -> la.Matrix:
    n = len(poly) - 1
    m = la.zeros(n, n)
    for i in range(n - 1):
        m[i + 1][i] = Q1
    for i in range(n):
        m[i][n - 1] = Fraction(-poly[i], poly[n])
    return m


def _cyclic_irreducibles(G: CyclicGroup) -> list[GroupRep]:
    reps = []
    for d in sorted(k for k in range(1, G.order + 1) if G.order % k == 0):
        C = _companion(cyclotomic(d))
        mats = [la.identity(len(C))]
        for _ in range(G.order - 1):
            mats.append(la.matmul(C, mats[-1]))
        reps.append(GroupRep(G, len(C), mats, name=f"Q(zeta_{d})"))
    return reps


def _kron(a: la.Matrix, b: la.Matrix) -> la.Matrix:
    ra, ca = la.shape(a)
    rb, cb = la.shape(b)
    out = la.zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def _s3_irreducibles(G: TableGroup) -> list[GroupRep]:
    perms = sorted(itertools.permutations(range(3)))
    # sanity: the element indexing must match symmetric(3)
    idx = {p: i for i, p in enumerate(perms)}
    for a in range(6):
        for b in range(6):
            comp = tuple(perms[a][perms[b][x]] for x in range(3))
            if G.mul(a, b) != idx[comp]:
                raise UnknownFamily("group is not symmetric(3)")

    def sign(p):
        s = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    s = -s
        return s

    triv = GroupRep(G, 1, [[[Q1]] for _ in perms], name="triv")
    sgn = GroupRep(G, 1, [[[Fraction(sign(p))]] for p in perms], name="sign")
    # standard rep on basis f1 = e_p(0)... use action on coordinates mod diagonal
    std_mats = []
    for p in perms:
        # permutation matrix P: e_i -> e_{p(i)}; express on f1=e0-e1, f2=e1-e2
        cols = []
        for f in ([1, -1, 0], [0, 1, -1]):
            img = [Q0] * 3
            for i, c in enumerate(f):
                img[p[i]] += Fraction(c)
            # write img (sum zero) as x*f1 + y*f2: x = img[0], y = -img[2]
            cols.append([Fraction(img[0]), -Fraction(img[2])])
        std_mats.append(la.transpose(cols))
    std = GroupRep(G, 2, std_mats, name="std")
    return [triv, sgn, std]


def rational_irreducibles(G: FiniteGroup) -> list[GroupRep]:
    if isinstance(G, CyclicGroup):
        return _cyclic_irreducibles(G)
    if isinstance(G, ProductGroup) and all(
        isinstance(f, CyclicGroup) for f in G.factors
    ):
        out = []
        factor_irrs = [_cyclic_irreducibles(f) for f in G.factors]
        for combo in itertools.product(*factor_irrs):
            mats = []
            for g in range(G.order):
                coords = G.decode(g)
                m = combo[0].mats[coords[0]]
                for r, c in zip(combo[1:], coords[1:]):
                    m = _kron(m, r.mats[c])
                mats.append(m)
            out.append(
                GroupRep(G, la.shape(mats[0])[0], mats,
                         name="x".join(r.name for r in combo))
            )
        return out
    if isinstance(G, TableGroup) and G.order == 6 and G.label.startswith("S"):
        return _s3_irreducibles(G)
    raise UnknownFamily(f"no irreducible list for {G.label}")


# ---------------------------------------------------------------------------
# morphisms, homs, Yoneda


@dataclass
class MackeyMorphism:
    src: MackeyFunctorQ
    dst: MackeyFunctorQ
    mats: dict[Subgroup, la.Matrix]

    def __call__(self, H: Subgroup) -> la.Matrix:
        return self.mats[H]

    def compose(self, inner: "MackeyMorphism") -> "MackeyMorphism":
        return MackeyMorphism(
            inner.src,
            self.dst,
            {H: la.matmul(self.mats[H], inner.mats[H]) for H in self.mats},
        )

    def is_zero(self) -> bool:
        return all(la.is_zero(m) for m in self.mats.values())

    def check(self) -> bool:
        M, N = self.src, self.dst
        G = M.group
        for H in M.subs:
            for K in M.subs:
                if not _contains(H, K):
                    continue
                if not _meq(
                    la.matmul(self.mats[K], M.res_mat(H, K)),
                    la.matmul(N.res_mat(H, K), self.mats[H]),
                ):
                    return False
                if not _meq(
                    la.matmul(self.mats[H], M.ind_mat(H, K)),
                    la.matmul(N.ind_mat(H, K), self.mats[K]),
                ):
                    return False
            for g in G.elements():
                Hg = conjugate_subgroup(H, g)
                if not _meq(
                    la.matmul(self.mats[Hg], M.conj_mat(g, H)),
                    la.matmul(N.conj_mat(g, H), self.mats[H]),
                ):
                    return False
        return True


def zero_morphism(M: MackeyFunctorQ, N: MackeyFunctorQ) -> MackeyMorphism:
    return MackeyMorphism(
        M, N, {H: la.zeros(N.dim(H), M.dim(H)) for H in M.subs}
    )


def identity_morphism(M: MackeyFunctorQ) -> MackeyMorphism:
    return MackeyMorphism(M, M, {H: la.identity(M.dim(H)) for H in M.subs})


def hom_space(M: MackeyFunctorQ, N: MackeyFunctorQ) -> list[MackeyMorphism]:
    """Basis of natural transformations M -> N (exact naturality solve)."""
    G = M.group
    subs = M.subs
    offsets, total = {}, 0
    for H in subs:
        offsets[H] = total
        total += N.dim(H) * M.dim(H)
    if total == 0:
        return []

    rows: la.Matrix = []

    def var(H, i, j):  # entry (i,j) of f_H, which is N.dim x M.dim
        return offsets[H] + i * M.dim(H) + j

    for H in subs:
        for K in subs:
            if not _contains(H, K) or K is H:
                continue
            rM, rN = M.res_mat(H, K), N.res_mat(H, K)
            # f_K @ rM - rN @ f_H = 0   (N.dim(K) x M.dim(H) equations)
            for i in range(N.dim(K)):
                for j in range(M.dim(H)):
                    row = [Q0] * total
                    for t in range(M.dim(K)):
                        row[var(K, i, t)] += rM[t][j]
                    for t in range(N.dim(H)):
                        row[var(H, t, j)] -= rN[i][t]
                    rows.append(row)
            iM, iN = M.ind_mat(H, K), N.ind_mat(H, K)
            # f_H @ iM - iN @ f_K = 0   (N.dim(H) x M.dim(K))
            for i in range(N.dim(H)):
                for j in range(M.dim(K)):
                    row = [Q0] * total
                    for t in range(M.dim(H)):
                        row[var(H, i, t)] += iM[t][j]
                    for t in range(N.dim(K)):
                        row[var(K, t, j)] -= iN[i][t]
                    rows.append(row)
        for g in G.elements():
            if g == G.identity:
                continue
            Hg = conjugate_subgroup(H, g)
            cM, cN = M.conj_mat(g, H), N.conj_mat(g, H)
            # f_Hg @ cM - cN @ f_H = 0
            for i in range(N.dim(Hg)):
                for j in range(M.dim(H)):
                    row = [Q0] * total
                    for t in range(M.dim(Hg)):
                        row[var(Hg, i, t)] += cM[t][j]
                    for t in range(N.dim(H)):
                        row[var(H, t, j)] -= cN[i][t]
                    rows.append(row)
    null = la.nullspace(rows) if rows else [list(e) for e in la.identity(total)]
    out = []
    for v in null:
        mats = {}
        for H in subs:
            m = la.zeros(N.dim(H), M.dim(H))
            for i in range(N.dim(H)):
                for j in range(M.dim(H)):
                    m[i][j] = v[var(H, i, j)]
            mats[H] = m
        out.append(MackeyMorphism(M, N, mats))
    return out


def direct_sum_mackey(Ms: list[MackeyFunctorQ], name: str | None = None) -> MackeyFunctorQ:
    G = Ms[0].group
    subs = all_subgroups(G)
    dims = {H: sum(M.dim(H) for M in Ms) for H in subs}

    def assemble(parts, rdims, cdims):
        m = la.zeros(sum(rdims), sum(cdims))
        ro = 0
        co = 0
        for p, rd, cd in zip(parts, rdims, cdims):
            for i in range(rd):
                for j in range(cd):
                    m[ro + i][co + j] = p[i][j]
            ro += rd
            co += cd
        return m

    res, ind, conj = {}, {}, {}
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            res[(H, K)] = assemble(
                [M.res_mat(H, K) for M in Ms],
                [M.dim(K) for M in Ms],
                [M.dim(H) for M in Ms],
            )
            ind[(H, K)] = assemble(
                [M.ind_mat(H, K) for M in Ms],
                [M.dim(H) for M in Ms],
                [M.dim(K) for M in Ms],
            )
        for g in G.elements():
            Hg = conjugate_subgroup(H, g)
            conj[(g, H)] = assemble(
                [M.conj_mat(g, H) for M in Ms],
                [M.dim(Hg) for M in Ms],
                [M.dim(H) for M in Ms],
            )
    return MackeyFunctorQ(
        G, dims, res, ind, conj, name or "(" + "+".join(M.name for M in Ms) + ")"
    )


def zero_mackey(G: FiniteGroup) -> MackeyFunctorQ:
    subs = all_subgroups(G)
    dims = {H: 0 for H in subs}
    res = {(H, K): [] for H in subs for K in subs if _contains(H, K)}
    ind = dict(res)
    conj = {(g, H): [] for g in G.elements() for H in subs}
    return MackeyFunctorQ(G, dims, res, ind, conj, "0")


# ---------------------------------------------------------------------------
# free covers (sums of representables) and resolutions


@dataclass
class FreeCover:
    """P = ⊕_i rep(O_{H_i}) --cover--> T, with Yoneda bookkeeping."""

    target: MackeyFunctorQ
    gen_subgroups: list[Subgroup]  # class representatives
    gen_vectors: list[la.Vector]  # x_i in T(H_i)
    functor: MackeyFunctorQ  # P
    cover: MackeyMorphism  # P -> T
    bases: dict  # per subgroup K, list of (summand index, component)
    id_index: dict  # per summand i, index of identity class in its block at H_i


class _RepTools:
    """Cached span data for representable summands over one group."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.cache = _OrbitCache(G)
        self.subs = all_subgroups(G)
        self.class_reps = [rep for rep, _ in subgroup_conjugacy_classes(G)]
        self._basis: dict = {}
        self._dual_action: dict = {}

    def basis(self, K: Subgroup, H: Subgroup) -> list[Component]:
        key = (K, H)
        if key not in self._basis:
            self._basis[key] = hom_basis(self.cache.orbit(K), self.cache.orbit(H))
        return self._basis[key]

    def dual_action(self, T: MackeyFunctorQ, K: Subgroup, H: Subgroup,
                    c: Component) -> la.Matrix:
        """Matrix of T on the dual span of c: T(H) -> T(K)."""
        store = T.__dict__.setdefault("_dual_action_cache", {})
        key = (K, H, c)
        if key not in store:
            s = component_span(self.G, self.cache.orbit(K), self.cache.orbit(H), c)
            store[key] = span_action_matrix(T, s.dual())
        return store[key]


def _identity_component(H: Subgroup) -> Component:
    return (tuple(H.elements), 0, 0)


def _rep_cached(tools: _RepTools, H: Subgroup, store: dict) -> MackeyFunctorQ:
    if H not in store:
        store[H] = representable(tools.G, tools.cache.orbit(H))
    return store[H]


def free_cover(T: MackeyFunctorQ, tools: _RepTools, rep_store: dict) -> FreeCover:
    """Greedy Yoneda cover of T by a sum of representables.

    Generators are chosen smallest-orbit-first (largest subgroup first) and
    only when they enlarge the image; the result is surjective because at
    each subgroup's own turn any missing value vector is adopted.
    """
    G = tools.G
    order = sorted(tools.class_reps, key=lambda H: (G.order // H.order, H.key()))
    gens: list[tuple[Subgroup, la.Vector]] = []
    image: dict[Subgroup, list[la.Vector]] = {K: [] for K in tools.subs}

    def add_generator(H, x):
        gens.append((H, x))
        for K in tools.subs:
            for c in tools.basis(K, H):
                v = la.matvec(tools.dual_action(T, K, H, c), x)
                if any(v) and not la.in_span(image[K], v):
                    image[K].append(v)

    for H in order:
        n = T.dim(H)
        for j in range(n):
            e = [Q1 if t == j else Q0 for t in range(n)]
            if not la.in_span(image[H], e):
                add_generator(H, e)
    gen_subgroups = [H for H, _ in gens]
    gen_vectors = [x for _, x in gens]
    summands = [_rep_cached(tools, H, rep_store) for H in gen_subgroups]
    P = (
        direct_sum_mackey(summands)
        if summands
        else zero_mackey(G)
    )
    # bookkeeping: P(K) basis = concat over summands of hom_basis(O_K, O_Hi)
    bases = {
        K: [
            (i, c)
            for i, H in enumerate(gen_subgroups)
            for c in tools.basis(K, H)
        ]
        for K in tools.subs
    }
    id_index = {}
    for i, H in enumerate(gen_subgroups):
        block = bases[H]
        id_index[i] = block.index((i, _identity_component(H)))
    cover = _yoneda_morphism(P, T, gen_subgroups, gen_vectors, bases, tools)
    return FreeCover(T, gen_subgroups, gen_vectors, P, cover, bases, id_index)


def _yoneda_morphism(P, N, gen_subgroups, gen_vectors, bases, tools) -> MackeyMorphism:
    """Morphism ⊕ rep(O_Hi) -> N from elements x_i ∈ N(H_i)."""
    mats = {}
    for K in tools.subs:
        cols = []
        for (i, c) in bases[K]:
            H = gen_subgroups[i]
            cols.append(la.matvec(tools.dual_action(N, K, H, c), gen_vectors[i]))
        mats[K] = la.transpose(cols) if cols else la.zeros(N.dim(K), 0)
    return MackeyMorphism(P, N, mats)


def kernel_functor(phi: MackeyMorphism) -> tuple[MackeyFunctorQ, MackeyMorphism]:
    """The kernel of phi with its inclusion into the source."""
    M = phi.src
    G = M.group
    subs = M.subs
    basis = {H: la.nullspace(phi.mats[H]) if la.shape(phi.mats[H])[0] else
             [list(e) for e in la.identity(M.dim(H))] for H in subs}
    dims = {H: len(basis[H]) for H in subs}

    def restrict(T: la.Matrix, Hs: Subgroup, Ht: Subgroup) -> la.Matrix:
        imgs = [la.matvec(T, v) for v in basis[Hs]]
        return _in_basis(basis[Ht], imgs)

    res, ind, conj = {}, {}, {}
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            res[(H, K)] = restrict(M.res_mat(H, K), H, K)
            ind[(H, K)] = restrict(M.ind_mat(H, K), K, H)
        for g in G.elements():
            conj[(g, H)] = restrict(M.conj_mat(g, H), H, conjugate_subgroup(H, g))
    Kf = MackeyFunctorQ(G, dims, res, ind, conj, f"ker({M.name})")
    incl = MackeyMorphism(
        Kf, M, {H: la.transpose(basis[H]) if basis[H] else la.zeros(M.dim(H), 0)
                for H in subs}
    )
    return Kf, incl


@dataclass
class Resolution:
    target: MackeyFunctorQ
    covers: list[FreeCover]  # covers[j].functor = P_j
    differentials: list[MackeyMorphism]  # d_j: P_j -> P_{j-1}, j >= 1
    exact_at: int | None  # stage at which the kernel vanished, if reached


def projective_resolution(M: MackeyFunctorQ, length: int,
                          tools: _RepTools | None = None) -> Resolution:
    tools = tools or _RepTools(M.group)
    rep_store: dict = {}
    covers: list[FreeCover] = []
    diffs: list[MackeyMorphism] = []
    T = M
    incl: MackeyMorphism | None = None
    exact_at = None
    for j in range(length + 1):
        if T.is_zero():
            exact_at = j - 1
            break
        cov = free_cover(T, tools, rep_store)
        covers.append(cov)
        if incl is not None:
            diffs.append(incl.compose(cov.cover))
        if j == length:  # the last kernel is never consumed
            break
        T, incl = kernel_functor(cov.cover)
    else:
        if T.is_zero():
            exact_at = length
    return Resolution(M, covers, diffs, exact_at)


def _hom_complex_diff(res: Resolution, N: MackeyFunctorQ, j: int,
                      tools: _RepTools) -> la.Matrix:
    """Matrix of Hom(P_j, N) -> Hom(P_{j+1}, N) in Yoneda coordinates."""
    cov_j = res.covers[j]
    cov_j1 = res.covers[j + 1]
    d = res.differentials[j]  # P_{j+1} -> P_j
    src_dims = [N.dim(H) for H in cov_j.gen_subgroups]
    dst_dims = [N.dim(H) for H in cov_j1.gen_subgroups]
    out = la.zeros(sum(dst_dims), sum(src_dims))
    col = 0
    for i, H in enumerate(cov_j.gen_subgroups):
        for t in range(N.dim(H)):
            xs = [
                [Q0] * N.dim(Hg) for Hg in cov_j.gen_subgroups
            ]
            xs[i][t] = Q1
            phi = _yoneda_morphism(cov_j.functor, N, cov_j.gen_subgroups, xs,
                                   cov_j.bases, tools)
            psi = phi.compose(d)  # P_{j+1} -> N
            row0 = 0
            for i2, H2 in enumerate(cov_j1.gen_subgroups):
                # Yoneda coordinate: psi at H2 on the identity-class basis vector
                # of summand i2 inside P_{j+1}(H2)
                idx = cov_j1.bases[H2].index((i2, _identity_component(H2)))
                vec = [psi.mats[H2][r][idx] for r in range(N.dim(H2))]
                for r, v in enumerate(vec):
                    out[row0 + r][col] = v
                row0 += N.dim(H2)
            col += 1
    return out


def ext_mackey(M: MackeyFunctorQ, N: MackeyFunctorQ, i: int,
               res: Resolution | None = None,
               tools: _RepTools | None = None) -> int:
    """dim_Q Ext^i(M, N), via a projective resolution by representables."""
    tools = tools or _RepTools(M.group)
    if res is None:
        res = projective_resolution(M, i + 1, tools)
    n_stages = len(res.covers)
    if i >= n_stages:
        if res.exact_at is not None:
            return 0
        raise ResolutionTooShort(f"resolution has {n_stages} stages, need {i + 1}")
    dims = [sum(N.dim(H) for H in cov.gen_subgroups) for cov in res.covers]
    # delta_j: Hom(P_j, N) -> Hom(P_{j+1}, N)
    if i + 1 < n_stages:
        delta_i = _hom_complex_diff(res, N, i, tools)
        ker_dim = dims[i] - la.rank(delta_i)
    else:
        ker_dim = dims[i]
    if i == 0:
        return ker_dim
    delta_prev = _hom_complex_diff(res, N, i - 1, tools)
    return ker_dim - la.rank(delta_prev)


# ---------------------------------------------------------------------------
# span-functor view and serialization


@dataclass
class SpanFunctorQ:
    group: FiniteGroup
    dims: dict[Subgroup, int]  # on class representatives
    mats: dict[tuple[Subgroup, Subgroup, Component], la.Matrix]

    def mat(self, H, K, c):
        return self.mats[(H, K, c)]


def to_span_functor(M: MackeyFunctorQ, tools: _RepTools | None = None) -> SpanFunctorQ:
    """Values of M on all transitive span classes between class reps."""
    if check_axioms(M, collect=True):
        raise AxiomViolation(f"{M.name} violates the Mackey axioms")
    tools = tools or _RepTools(M.group)
    reps = tools.class_reps
    mats = {}
    for H in reps:
        for K in reps:
            for c in tools.basis(H, K):
                s = component_span(
                    M.group, tools.cache.orbit(H), tools.cache.orbit(K), c
                )
                mats[(H, K, c)] = span_action_matrix(M, s)
    return SpanFunctorQ(M.group, {H: M.dim(H) for H in reps}, mats)


def from_span_functor(F: SpanFunctorQ, tools: _RepTools | None = None) -> MackeyFunctorQ:
    """Rebuild a Mackey functor (on all subgroups) from span-class matrices."""
    G = F.group
    tools = tools or _RepTools(G)
    subs = all_subgroups(G)
    classes = subgroup_conjugacy_classes(G)
    rep_for = {}
    for rep, members in classes:
        for m in members:
            rep_for[m] = rep
    transporter = {}
    for H in subs:
        H0 = rep_for[H]
        transporter[H] = min(
            g for g in G.elements() if conjugate_subgroup(H0, g) == H
        )
    dims = {H: F.dims[rep_for[H]] for H in subs}

    def span_between(Ha: Subgroup, Hb: Subgroup, g_mid: int) -> la.Matrix:
        """Matrix of F on the one-legged span O_Ha -> O_Hb, x Ha |-> x g Hb,
        conjugated into class-representative coordinates."""
        A0, B0 = rep_for[Ha], rep_for[Hb]
        ga, gb = transporter[Ha], transporter[Hb]
        # iso O_A0 -> O_Ha (x A0 |-> x ga^-1 Ha ... as spans), then the map,
        # then iso O_Hb -> O_B0; compose as actual spans and decompose.
        s1 = _one_leg_span(tools.cache, A0, Ha, G.inv(ga))
        s2 = _one_leg_span(tools.cache, Ha, Hb, g_mid)
        s3 = _one_leg_span(tools.cache, Hb, B0, gb)
        s = span_compose(span_compose(s1, s2), s3)
        total = la.zeros(F.dims[B0], F.dims[A0])
        for comp, mult in decompose_span(s).items():
            total = _madd(total, la.scale(F.mat(A0, B0, comp), Fraction(mult)))
        return total

    res, ind, conj = {}, {}, {}
    for H in subs:
        for K in subs:
            if not _contains(H, K):
                continue
            # the projection span O_K -> O_H acts as induction; its dual
            # (apex O_K, left leg projection) as restriction
            ind[(H, K)] = span_between(K, H, G.identity)
            A0, B0 = rep_for[H], rep_for[K]
            ga, gb = transporter[H], transporter[K]
            s1 = _one_leg_span(tools.cache, A0, H, G.inv(ga))
            s2 = _one_leg_span(tools.cache, K, H, G.identity).dual()
            s3 = _one_leg_span(tools.cache, K, B0, gb)
            s = span_compose(span_compose(s1, s2), s3)
            total = la.zeros(F.dims[B0], F.dims[A0])
            for comp, mult in decompose_span(s).items():
                total = _madd(total, la.scale(F.mat(A0, B0, comp), Fraction(mult)))
            res[(H, K)] = total
        for g in G.elements():
            Hg = conjugate_subgroup(H, g)
            # apex O_H, right leg the iso xH |-> x g^-1 (gHg^-1): acts as c_g
            conj[(g, H)] = span_between(H, Hg, G.inv(g))
    return MackeyFunctorQ(G, dims, res, ind, conj, "from_span")


def mackey_to_json(M: MackeyFunctorQ) -> dict:
    subs = M.subs
    idx = {H: i for i, H in enumerate(subs)}

    def mat(m):
        return [[str(x) for x in row] for row in m]

    return {
        "schema": 1,
        "group": M.group.label,
        "name": M.name,
        "subgroups": [list(H.elements) for H in subs],
        "dims": [M.dim(H) for H in subs],
        "res": {f"{idx[H]},{idx[K]}": mat(m) for (H, K), m in M.res.items()},
        "ind": {f"{idx[H]},{idx[K]}": mat(m) for (H, K), m in M.ind.items()},
        "conj": {f"{g},{idx[H]}": mat(m) for (g, H), m in M.conj.items()},
    }


def mackey_from_json(G: FiniteGroup, data: dict) -> MackeyFunctorQ:
    subs = all_subgroups(G)
    assert [list(H.elements) for H in subs] == [list(map(int, s)) for s in data["subgroups"]]

    def mat(m):
        return [[Fraction(x) for x in row] for row in m]

    dims = {H: d for H, d in zip(subs, data["dims"])}
    res = {}
    for key, m in data["res"].items():
        i, j = map(int, key.split(","))
        res[(subs[i], subs[j])] = mat(m)
    ind = {}
    for key, m in data["ind"].items():
        i, j = map(int, key.split(","))
        ind[(subs[i], subs[j])] = mat(m)
    conj = {}
    for key, m in data["conj"].items():
        g, i = map(int, key.split(","))
        conj[(g, subs[i])] = mat(m)
    return MackeyFunctorQ(G, dims, res, ind, conj, data.get("name", "M"))
