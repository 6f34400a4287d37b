"""Spans of finite G-sets, the Burnside category and ring, tables of marks.

Span equivalence classes are decided by a complete invariant: decompose the
apex into orbits and record, per orbit, the minimum over its points x of
(stabilizer elements, left image, right image).  Two spans over the same
feet are equivalent iff these component multisets agree, because an
equivariant isomorphism over the feet exists exactly when components can be
matched with equal basepoint data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groups import (
    CapacityError,
    FiniteGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    subgroup_conjugacy_classes,
)
from .gsets import (
    FiniteGSet,
    disjoint_union,
    empty_gset,
    inflate_gset,
    orbit_decompose,
    point_gset,
    product_gset,
    transitive_gset,
)

# a component invariant: (stabilizer element tuple, left image, right image)
Component = tuple[tuple[int, ...], int, int]
# canonical form of a span over fixed feet: sorted tuple of components
CanonicalSpan = tuple[Component, ...]


class MiddleMismatch(Exception):
    """Span composition with non-matching middle objects."""


@dataclass
class Span:
    """A span left_foot <- apex -> right_foot of equivariant maps."""

    left_foot: FiniteGSet
    right_foot: FiniteGSet
    apex: FiniteGSet
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        self.left = tuple(self.left)
        self.right = tuple(self.right)
        G = self.apex.group
        for table, foot in ((self.left, self.left_foot), (self.right, self.right_foot)):
            if len(table) != self.apex.size:
                raise ValueError("leg table has wrong length")
            for g in G.elements():
                for x in range(self.apex.size):
                    if table[self.apex.act[g][x]] != foot.act[g][table[x]]:
                        raise ValueError("span leg is not equivariant")

    def canonical(self) -> CanonicalSpan:
        G = self.apex.group
        comps = []
        for orbit in self.apex.orbits():
            best = None
            for x in orbit:
                stab = tuple(
                    sorted(g for g in G.elements() if self.apex.act[g][x] == x)
                )
                cand = (stab, self.left[x], self.right[x])
                if best is None or cand < best:
                    best = cand
            comps.append(best)
        return tuple(sorted(comps))

    def dual(self) -> "Span":
        return Span(self.right_foot, self.left_foot, self.apex, self.right, self.left)


def span_equivalent(s: Span, t: Span) -> bool:
    return (
        s.left_foot is t.left_foot
        and s.right_foot is t.right_foot
        and s.canonical() == t.canonical()
    )


def empty_span(A: FiniteGSet, B: FiniteGSet) -> Span:
    return Span(A, B, empty_gset(A.group), (), ())


def identity_span(A: FiniteGSet) -> Span:
    ident = tuple(range(A.size))
    return Span(A, A, A, ident, ident)


def span_add(s: Span, t: Span) -> Span:
    """Sum of parallel spans: disjoint-union apex."""
    assert s.left_foot is t.left_foot and s.right_foot is t.right_foot
    apex = disjoint_union(s.apex, t.apex)
    left = s.left + t.left
    right = s.right + t.right
    return Span(s.left_foot, s.right_foot, apex, left, right)


def span_compose(s1: Span, s2: Span) -> Span:
    """Composite s2 o s1 (s1: A -> B, s2: B -> C) via the pullback apex."""
    if s1.right_foot is not s2.left_foot:
        raise MiddleMismatch("middle objects differ")
    G = s1.apex.group
    pairs = [
        (m1, m2)
        for m1 in range(s1.apex.size)
        for m2 in range(s2.apex.size)
        if s1.right[m1] == s2.left[m2]
    ]
    index = {p: i for i, p in enumerate(pairs)}
    act = tuple(
        tuple(index[(s1.apex.act[g][m1], s2.apex.act[g][m2])] for m1, m2 in pairs)
        for g in G.elements()
    )
    apex = FiniteGSet(G, act, label="pullback")
    left = tuple(s1.left[m1] for m1, _ in pairs)
    right = tuple(s2.right[m2] for _, m2 in pairs)
    return Span(s1.left_foot, s2.right_foot, apex, left, right)


def decompose_span(s: Span) -> dict[Component, int]:
    """Multiset of transitive components of a span."""
    out: dict[Component, int] = {}
    G = s.apex.group
    for orbit in s.apex.orbits():
        best = None
        for x in orbit:
            stab = tuple(sorted(g for g in G.elements() if s.apex.act[g][x] == x))
            cand = (stab, s.left[x], s.right[x])
            if best is None or cand < best:
                best = cand
        out[best] = out.get(best, 0) + 1
    return out


def component_span(G: FiniteGroup, A: FiniteGSet, B: FiniteGSet, comp: Component) -> Span:
    """Representative transitive span for one component invariant."""
    stab, a, b = comp
    L = Subgroup(G, stab)
    apex = transitive_gset(G, L)
    # point i of apex is the coset with canonical representative r_i
    reps = _coset_reps(G, L)
    left = tuple(A.act[r][a] for r in reps)
    right = tuple(B.act[r][b] for r in reps)
    return Span(A, B, apex, left, right)


def _coset_reps(G: FiniteGroup, L: Subgroup) -> list[int]:
    hset = set(L.elements)
    rep_of = {}
    reps = []
    for g in G.elements():
        if g in rep_of:
            continue
        coset = sorted(G.mul(g, h) for h in hset)
        reps.append(coset[0])
        for x in coset:
            rep_of[x] = coset[0]
    return sorted(reps)


def build_span(G: FiniteGroup, A: FiniteGSet, B: FiniteGSet, canon: CanonicalSpan) -> Span:
    """Representative span for a canonical class (possibly several components)."""
    if not canon:
        return empty_span(A, B)
    parts = [component_span(G, A, B, c) for c in canon]
    s = parts[0]
    for p in parts[1:]:
        s = span_add(s, p)
    return s


def hom_basis(A: FiniteGSet, B: FiniteGSet) -> list[Component]:
    """All transitive span classes A -> B, sorted canonically.

    Complete by the orbit decomposition argument: any span splits into
    transitive spans G/L with basepoint images fixed by L, and every such
    datum occurs below.
    """
    G = A.group
    seen = set()
    for L in all_subgroups(G):
        fa = A.fixed_points(L)
        fb = B.fixed_points(L)
        if not fa or not fb:
            continue
        reps = _coset_reps(G, L)
        for a in fa:
            for b in fb:
                best = None
                for g in reps:
                    stab = tuple(sorted(G.conj(g, x) for x in L.elements))
                    cand = (stab, A.act[g][a], B.act[g][b])
                    if best is None or cand < best:
                        best = cand
                seen.add(best)
    return sorted(seen)


@dataclass
class BurnsideHom:
    """Formal rational combination of canonical span classes A -> B."""

    source: FiniteGSet
    target: FiniteGSet
    terms: dict[CanonicalSpan, Fraction]

    def __post_init__(self):
        self.terms = {k: Fraction(v) for k, v in self.terms.items() if v != 0}

    def __add__(self, other: "BurnsideHom") -> "BurnsideHom":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return BurnsideHom(self.source, self.target, terms)

    def scaled(self, c) -> "BurnsideHom":
        return BurnsideHom(
            self.source, self.target, {k: Fraction(c) * v for k, v in self.terms.items()}
        )


def span_class_hom(s: Span) -> BurnsideHom:
    """The class of a span, split into transitive classes with multiplicity."""
    terms = {
        (comp,): Fraction(mult) for comp, mult in decompose_span(s).items()
    }
    return BurnsideHom(s.left_foot, s.right_foot, terms)


class BurnsideContext:
    """Caches the span combinatorics of one finite group.

    Interns the transitive G-sets O(H) = G/H for every subgroup H and caches
    hom bases and composition structure constants between them.
    """

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.subgroups = all_subgroups(G)
        self.classes = subgroup_conjugacy_classes(G)
        self.class_reps = [rep for rep, _ in self.classes]
        self._rep_for = {}
        for rep, members in self.classes:
            for m in members:
                self._rep_for[m] = rep
        self._orbits: dict[Subgroup, FiniteGSet] = {}
        self._hom_bases: dict[tuple[Subgroup, Subgroup], list[Component]] = {}
        self._compose_cache: dict = {}

    def class_rep(self, H: Subgroup) -> Subgroup:
        return self._rep_for[H]

    def orbit(self, H: Subgroup) -> FiniteGSet:
        if H not in self._orbits:
            self._orbits[H] = transitive_gset(self.group, H)
        return self._orbits[H]

    def basis(self, H: Subgroup, K: Subgroup) -> list[Component]:
        key = (H, K)
        if key not in self._hom_bases:
            self._hom_bases[key] = hom_basis(self.orbit(H), self.orbit(K))
        return self._hom_bases[key]

    def span_of(self, H: Subgroup, K: Subgroup, comp: Component) -> Span:
        return component_span(self.group, self.orbit(H), self.orbit(K), comp)

    def compose(self, H: Subgroup, K: Subgroup, L: Subgroup,
                c1: Component, c2: Component) -> dict[Component, int]:
        """Structure constants of (c2 o c1) for c1: O(H)->O(K), c2: O(K)->O(L)."""
        key = (H, K, L, c1, c2)
        if key not in self._compose_cache:
            s = span_compose(self.span_of(H, K, c1), self.span_of(K, L, c2))
            self._compose_cache[key] = decompose_span(s)
        return self._compose_cache[key]

    def dual(self, comp: Component) -> Component:
        stab, a, b = comp
        return (stab, b, a)


# ---------------------------------------------------------------------------
# Burnside ring and table of marks


@dataclass
class BurnsideRing:
    group: FiniteGroup
    basis: list[Subgroup]  # class representatives, ascending canonical order
    structure: list[list[list[int]]]  # structure[i][j][k]: coeff of basis k in i*j
    marks: list[list[int]]  # marks[i][j] = |(G/H_i)^{H_j}|
    unit_index: int


def burnside_ring(G: FiniteGroup) -> BurnsideRing:
    classes = subgroup_conjugacy_classes(G)
    reps = [rep for rep, _ in classes]
    rep_for = {}
    for rep, members in classes:
        for m in members:
            rep_for[m] = rep
    orbits = [transitive_gset(G, H) for H in reps]
    idx = {H: i for i, H in enumerate(reps)}
    n = len(reps)
    structure = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = product_gset(orbits[i], orbits[j])
            for stab_rep, _orbit in orbit_decompose(prod):
                structure[i][j][idx[stab_rep]] += 1
    marks = [[len(orbits[i].fixed_points(reps[j])) for j in range(n)] for i in range(n)]
    unit_index = idx[rep_for[reps[-1]]]  # [G/G]: the full subgroup's class
    return BurnsideRing(G, reps, structure, marks, unit_index)


# ---------------------------------------------------------------------------
# inflation across a tower and the colimit witness


def inflate_span(s: Span, q: GroupHom) -> Span:
    return Span(
        inflate_gset(s.left_foot, q),
        inflate_gset(s.right_foot, q),
        inflate_gset(s.apex, q),
        s.left,
        s.right,
    )


def inflate(A: FiniteGSet, tower, level: int, to_level: int) -> FiniteGSet:
    """Inflate a level-`level` set along the composite bond to `to_level`."""
    if to_level < level:
        raise ValueError("can only inflate upward in the tower")
    return inflate_gset(A, tower.bond_to(to_level, level))


def _acts_trivially(N: Subgroup, X: FiniteGSet) -> bool:
    return all(
        X.act[n][x] == x for n in N.elements for x in range(X.size)
    )


def deflate_gset(X: FiniteGSet, q: GroupHom) -> FiniteGSet:
    """View a G_m-set on which ker(q) acts trivially as a G_k-set."""
    if not _acts_trivially(q.kernel(), X):
        raise ValueError("kernel does not act trivially; cannot deflate")
    Gk = q.codomain
    # one preimage per element of the quotient
    pre = {}
    for g in q.domain.elements():
        pre.setdefault(q(g), g)
    act = tuple(tuple(X.act[pre[gk]][x] for x in range(X.size)) for gk in Gk.elements())
    return FiniteGSet(Gk, act, label=X.label)


def deflate_span(s: Span, q: GroupHom) -> Span:
    return Span(
        deflate_gset(s.left_foot, q),
        deflate_gset(s.right_foot, q),
        deflate_gset(s.apex, q),
        s.left,
        s.right,
    )


def colimit_witness(s: Span, tower, level: int) -> int:
    """Minimal tower level k <= `level` at which the span is realizable.

    The span lives over tower.levels[level]; level k realizes it when the
    kernel of the composite bond acts trivially on apex and feet, and then
    inflating the deflated span reproduces the original class.
    """
    for k in range(level + 1):
        q = tower.bond_to(level, k)
        N = q.kernel()
        if all(
            _acts_trivially(N, X) for X in (s.apex, s.left_foot, s.right_foot)
        ):
            down = deflate_span(s, q)
            back = inflate_span(down, q)
            if back.canonical() != s.canonical():
                raise AssertionError("inflation round-trip failed")
            return k
    raise AssertionError("span not realizable at any level (bond chain broken)")
