"""Finite discrete G-sets, equivariant maps and orbit decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernels
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    subgroup_conjugacy_classes,
)


@dataclass
class FiniteGSet:
    """A finite G-set: act[g][x] is the image of point x under g."""

    group: FiniteGroup
    act: tuple[tuple[int, ...], ...]
    label: str = ""

    def __post_init__(self):
        self.act = tuple(tuple(row) for row in self.act)
        G = self.group
        if len(self.act) != G.order:
            raise ValueError("action table must have one row per group element")
        n = self.size
        e = self.act[G.identity]
        if e != tuple(range(n)):
            raise ValueError("identity must act trivially")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                for x in range(n):
                    if self.act[gh][x] != self.act[g][self.act[h][x]]:
                        raise ValueError("action table is not a group action")

    @property
    def size(self) -> int:
        return len(self.act[0]) if self.act else 0

    def apply(self, g: int, x: int) -> int:
        return self.act[g][x]

    def stabilizer(self, x: int) -> Subgroup:
        G = self.group
        return Subgroup(
            G, tuple(sorted(g for g in G.elements() if self.act[g][x] == x))
        )

    def fixed_points(self, H: Subgroup) -> list[int]:
        return [
            x
            for x in range(self.size)
            if all(self.act[g][x] == x for g in H.elements)
        ]

    def orbits(self) -> list[list[int]]:
        labels = _kernels.orbit_labels([list(r) for r in self.act], self.size)
        out: dict[int, list[int]] = {}
        for x, l in enumerate(labels):
            out.setdefault(int(l), []).append(x)
        return [out[k] for k in sorted(out, key=lambda k: out[k][0])]


def empty_gset(G: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(G, tuple(() for _ in range(G.order)), label="empty")


def point_gset(G: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(G, tuple((0,) for _ in range(G.order)), label="*")


def transitive_gset(G: FiniteGroup, H: Subgroup) -> FiniteGSet:
    """G/H with points the cosets gH, indexed by canonical (minimal) reps."""
    hset = set(H.elements)
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for g in G.elements():
        if g in rep_of:
            continue
        coset = sorted(G.mul(g, h) for h in hset)
        r = coset[0]
        reps.append(r)
        for x in coset:
            rep_of[x] = r
    reps.sort()
    index = {r: i for i, r in enumerate(reps)}
    act = tuple(
        tuple(index[rep_of[G.mul(g, r)]] for r in reps) for g in G.elements()
    )
    return FiniteGSet(G, act, label=f"{G.label}/{H.order}")


def disjoint_union(*sets: FiniteGSet) -> FiniteGSet:
    G = sets[0].group
    assert all(s.group is G for s in sets)
    act = []
    for g in G.elements():
        row: list[int] = []
        offset = 0
        for s in sets:
            row.extend(s.act[g][x] + offset for x in range(s.size))
            offset += s.size
        act.append(tuple(row))
    return FiniteGSet(G, tuple(act), label="+".join(s.label for s in sets))


def product_gset(a: FiniteGSet, b: FiniteGSet) -> FiniteGSet:
    G = a.group
    assert b.group is G
    nb = b.size

    def enc(x, y):
        return x * nb + y

    act = tuple(
        tuple(
            enc(a.act[g][x], b.act[g][y])
            for x in range(a.size)
            for y in range(b.size)
        )
        for g in G.elements()
    )
    return FiniteGSet(G, act, label=f"({a.label})x({b.label})")


@dataclass
class GMap:
    """Equivariant map of G-sets, as a point-index table."""

    src: FiniteGSet
    dst: FiniteGSet
    table: tuple[int, ...]

    def __post_init__(self):
        self.table = tuple(self.table)
        if len(self.table) != self.src.size:
            raise ValueError("map table has wrong length")
        G = self.src.group
        for g in G.elements():
            for x in range(self.src.size):
                if self.table[self.src.act[g][x]] != self.dst.act[g][self.table[x]]:
                    raise ValueError("map is not equivariant")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def compose(self, inner: "GMap") -> "GMap":
        return GMap(inner.src, self.dst, tuple(self.table[inner.table[x]] for x in range(inner.src.size)))


def orbit_decompose(X: FiniteGSet):
    """X as a disjoint union of G/H with canonical class representatives.

    Returns a list of (class representative Subgroup, orbit point list),
    one entry per orbit, together with the conjugacy classes used.
    """
    classes = subgroup_conjugacy_classes(X.group)
    rep_for = {}
    for rep, members in classes:
        for m in members:
            rep_for[m] = rep
    out = []
    for orbit in X.orbits():
        stab = X.stabilizer(orbit[0])
        out.append((rep_for[stab], orbit))
    return out


def inflate_gset(A: FiniteGSet, q: GroupHom) -> FiniteGSet:
    """A G_k-set pulled back to a G_m-set along the surjection q: G_m -> G_k."""
    assert q.codomain is A.group
    Gm = q.domain
    act = tuple(tuple(A.act[q(g)][x] for x in range(A.size)) for g in Gm.elements())
    return FiniteGSet(Gm, act, label=A.label)
