"""Profinite groups as towers of finite quotients; the subgroup-space tower.

Built-in families:

  * ``trivial``                        — all levels trivial.
  * ``pro_p:<p>``                      — levels Z/p^k, bonds reduction mod p^k.
  * ``prod:pro_p:<p1>,pro_p:<p2>,...`` — products of cyclic pro-p towers for
    pairwise distinct primes.
  * ``finite:<group selector>``        — a constant finite group above the
    trivial level (the tower of a finite group).

Stability certificates for threads of the subgroup-space tower are only
emitted where a family lemma applies; see stability_oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cbrank import SpaceTree, ThreadCert
from .groups import (
    CyclicGroup,
    FiniteGroup,
    GroupHom,
    ProductGroup,
    Subgroup,
    UnknownFamily,
    all_subgroups,
    conjugate_subgroup,
    group_from_json,
    group_to_json,
    identity_hom,
    parse_group,
    subgroup,
    trivial_subgroup,
)

STABLE = "StableSingleton"
UNSTABLE = "Unstable"
UNKNOWN = "Unknown"


@dataclass
class GroupTower:
    levels: list[FiniteGroup]
    bonds: list[GroupHom]  # bonds[k]: levels[k+1] -> levels[k]
    family: str | None = None

    def __post_init__(self):
        if self.levels[0].order != 1:
            raise ValueError("level 0 must be the trivial group")
        if len(self.bonds) != len(self.levels) - 1:
            raise ValueError("need one bond per consecutive level pair")
        for k, q in enumerate(self.bonds):
            if q.domain is not self.levels[k + 1] or q.codomain is not self.levels[k]:
                raise ValueError(f"bond {k} connects the wrong levels")
            if not q.is_surjective():
                raise ValueError(f"bond {k} is not surjective")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def bond_to(self, m: int, k: int) -> GroupHom:
        """Composite bond levels[m] -> levels[k] for k <= m."""
        assert 0 <= k <= m <= self.depth
        q = identity_hom(self.levels[m])
        for j in range(m - 1, k - 1, -1):
            q = self.bonds[j].compose(q)
        return q


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _prime_of(tag: str) -> int:
    if not tag.startswith("pro_p:"):
        raise UnknownFamily(f"expected pro_p:<prime>, got {tag!r}")
    p = int(tag.split(":", 1)[1])
    if not _is_prime(p):
        raise UnknownFamily(f"{p} is not prime")
    return p


def builtin_tower(family: str, depth: int) -> GroupTower:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if family == "trivial":
        levels = [CyclicGroup(1) for _ in range(depth + 1)]
        bonds = [
            GroupHom(levels[k + 1], levels[k], (0,)) for k in range(depth)
        ]
        return GroupTower(levels, bonds, family)
    if family.startswith("pro_p:"):
        p = _prime_of(family)
        levels = [CyclicGroup(p**k) for k in range(depth + 1)]
        bonds = [
            GroupHom(
                levels[k + 1], levels[k], tuple(x % p**k for x in range(p ** (k + 1)))
            )
            for k in range(depth)
        ]
        return GroupTower(levels, bonds, family)
    if family.startswith("prod:"):
        primes = [_prime_of(t.strip()) for t in family[5:].split(",")]
        if len(set(primes)) != len(primes):
            raise UnknownFamily("product families need pairwise distinct primes")
        levels = [
            ProductGroup([CyclicGroup(p**k) for p in primes])
            for k in range(depth + 1)
        ]
        bonds = []
        for k in range(depth):
            Gm, Gk = levels[k + 1], levels[k]
            table = tuple(
                Gk.encode([x % p**k for x, p in zip(Gm.decode(g), primes)])
                for g in range(Gm.order)
            )
            bonds.append(GroupHom(Gm, Gk, table))
        return GroupTower(levels, bonds, family)
    if family.startswith("finite:"):
        G = parse_group(family[7:])
        triv = CyclicGroup(1)
        levels = [triv] + [G] * depth
        bonds = []
        if depth >= 1:
            bonds.append(GroupHom(G, triv, (0,) * G.order))
            for k in range(1, depth):
                bonds.append(identity_hom(G))
        return GroupTower(levels, bonds, family)
    raise UnknownFamily(f"unknown tower family {family!r}")


def tower_to_json(T: GroupTower) -> dict:
    return {
        "schema": 1,
        "levels": [group_to_json(G) for G in T.levels],
        "bonds": [list(q.mapping) for q in T.bonds],
        "family": T.family,
    }


def tower_from_json(data: dict) -> GroupTower:
    levels = [group_from_json(g) for g in data["levels"]]
    bonds = [
        GroupHom(levels[k + 1], levels[k], tuple(t))
        for k, t in enumerate(data["bonds"])
    ]
    return GroupTower(levels, bonds, data.get("family"))


@dataclass(frozen=True)
class SubgroupPoint:
    level: int
    subgroup: Subgroup


# ---------------------------------------------------------------------------
# the subgroup space S(G) through the tower


def _generators(G: FiniteGroup) -> list[int]:
    if isinstance(G, CyclicGroup):
        return [1] if G.order > 1 else []
    if isinstance(G, ProductGroup) and all(
        isinstance(f, CyclicGroup) for f in G.factors
    ):
        gens = []
        for i, f in enumerate(G.factors):
            if f.order > 1:
                coords = [0] * len(G.factors)
                coords[i] = 1
                gens.append(G.encode(coords))
        return gens
    return [g for g in G.elements() if g != G.identity]


def level_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return all_subgroups(G)


def _thread_cert(T: GroupTower, H: Subgroup) -> ThreadCert:
    """Certificate for the thread of subgroup H at the top level."""
    D = T.depth
    fam = T.family
    if fam == "trivial" or (fam is not None and fam.startswith("finite:")):
        return ThreadCert("scattered", 0, "finite limit space is discrete")
    if fam is not None and fam.startswith("pro_p:") and D >= 1:
        p = _prime_of(fam)
        index = T.levels[D].order // H.order
        if index < p**D:
            return ThreadCert("scattered", 0, f"proper thread p^i, i<{D}: unique preimages")
        return ThreadCert(
            "scattered", 1, "zero thread: accumulation point of the p^i"
        )
    if fam is not None and fam.startswith("prod:") and D >= 1:
        primes = [_prime_of(t.strip()) for t in fam[5:].split(",")]
        index = T.levels[D].order // H.order
        maxed = 0
        for p in primes:
            e = 0
            while index % p == 0:
                index //= p
                e += 1
            if e == D:
                maxed += 1
        return ThreadCert(
            "scattered", maxed, f"{maxed} coordinate(s) at maximal index"
        )
    return ThreadCert("unknown", reason="no family lemma")


def subgroup_space_tower(T: GroupTower) -> SpaceTree:
    levels: list[list[str]] = []
    subs_per_level: list[list[Subgroup]] = []
    index_per_level: list[dict] = []
    for k, G in enumerate(T.levels):
        subs = level_subgroups(G)
        subs_per_level.append(subs)
        index_per_level.append({H: i for i, H in enumerate(subs)})
        levels.append([f"ord{H.order}" + (f"#{i}" if _dup(subs, H) else "")
                       for i, H in enumerate(subs)])
    bonds = []
    for k in range(T.depth):
        q = T.bonds[k]
        Gk = T.levels[k]
        row = []
        for H in subs_per_level[k + 1]:
            img = subgroup(Gk, sorted({q(h) for h in H.elements}))
            row.append(index_per_level[k][img])
        bonds.append(row)
    actions = []
    for k, G in enumerate(T.levels):
        subs = subs_per_level[k]
        perms = []
        for g in _generators(G):
            perms.append(
                tuple(index_per_level[k][conjugate_subgroup(H, g)] for H in subs)
            )
        actions.append(perms)
    certs = [_thread_cert(T, H) for H in subs_per_level[-1]]
    chain = f"{T.family or 'user'}@depth{T.depth}"
    return SpaceTree(levels, bonds, certs, actions, chain=chain)


def _dup(subs: list[Subgroup], H: Subgroup) -> bool:
    return sum(1 for K in subs if K.order == H.order) > 1


def stability_oracle(T: GroupTower, x: SubgroupPoint) -> str:
    """Sound isolation verdict for a subgroup point observed at its level."""
    k, H = x.level, x.subgroup
    if not (0 <= k <= T.depth):
        raise ValueError("point beyond tower depth")
    fam = T.family
    if fam == "trivial":
        return STABLE
    if fam is not None and fam.startswith("finite:"):
        return STABLE if k >= 1 else UNKNOWN
    if fam is not None and (fam.startswith("pro_p:") or fam.startswith("prod:")):
        if k == 0:
            return UNKNOWN
        if fam.startswith("pro_p:"):
            primes = [_prime_of(fam)]
        else:
            primes = [_prime_of(t.strip()) for t in fam[5:].split(",")]
        index = T.levels[k].order // H.order
        for p in primes:
            e = 0
            while index % p == 0:
                index //= p
                e += 1
            if e == k:
                return UNSTABLE
        return STABLE
    return UNKNOWN
