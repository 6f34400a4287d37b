"""Finite groups, subgroups, quotients, cores and Weyl groups.

Groups are element-indexed: elements are 0..order-1 and all structure is
given by tables or closed-form arithmetic.  TableGroup carries an explicit
multiplication table; CyclicGroup and ProductGroup compute products on the
fly so that deep cyclic tower levels (order up to ~10^5) stay cheap.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels

TABLE_LIMIT = 1024  # largest order for which a dense table may be built
FULL_CHECK_LIMIT = 256  # spec: assert axioms on all triples up to here
DEFAULT_SUBGROUP_LIMIT = 10_000


class CapacityError(Exception):
    """A configured enumeration bound was exceeded."""


class NotNormal(Exception):
    """Quotient requested by a non-normal subgroup."""


class UnknownFamily(Exception):
    """Unrecognised group or tower family selector."""


class FiniteGroup:
    """Base class: a finite group on element indices 0..order-1."""

    order: int
    label: str
    identity: int

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def elements(self) -> range:
        return range(self.order)

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def table(self) -> np.ndarray:
        """Dense multiplication table; guarded by TABLE_LIMIT."""
        if self.order > TABLE_LIMIT:
            raise CapacityError(
                f"dense table of order {self.order} exceeds limit {TABLE_LIMIT}"
            )
        return self._dense_table()

    def _dense_table(self) -> np.ndarray:
        n = self.order
        t = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                t[a, b] = self.mul(a, b)
        return t

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.label} order={self.order}>"


class TableGroup(FiniteGroup):
    def __init__(self, mult, label: str = "G", check: bool = True):
        self._mult = np.asarray(mult, dtype=np.int64)
        n = self._mult.shape[0]
        if self._mult.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.order = n
        self.label = label
        self.identity = self._find_identity()
        self._inv = self._build_inv()
        if check:
            self._validate()

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self._mult[e, x] == x and self._mult[x, e] == x for x in range(n)):
                return e
        raise ValueError("table has no two-sided identity")

    def _build_inv(self) -> np.ndarray:
        n, e = self.order, self.identity
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.where(self._mult[a] == e)[0]
            if hits.size != 1 or self._mult[hits[0], a] != e:
                raise ValueError(f"element {a} lacks a two-sided inverse")
            inv[a] = hits[0]
        return inv

    def _validate(self):
        n = self.order
        m = self._mult
        if m.min() < 0 or m.max() >= n:
            raise ValueError("table entries out of range")
        if n <= FULL_CHECK_LIMIT:
            # full associativity via matrix indexing: (ab)c == a(bc)
            left = m[m, :]  # left[a,b,c] = (ab)c
            right = m[:, m]  # right[a,b,c] = a(bc)
            if not np.array_equal(left, right):
                raise ValueError("multiplication table is not associative")
        else:
            rng = np.random.default_rng(0)
            for _ in range(2000):
                a, b, c = rng.integers(0, n, 3)
                if m[m[a, b], c] != m[a, m[b, c]]:
                    raise ValueError("multiplication table is not associative")

    def mul(self, a, b):
        return int(self._mult[a, b])

    def inv(self, a):
        return int(self._inv[a])

    def _dense_table(self):
        return self._mult


class CyclicGroup(FiniteGroup):
    def __init__(self, n: int, label: str | None = None):
        if n < 1:
            raise ValueError("cyclic group order must be >= 1")
        self.order = n
        self.label = label or f"C{n}"
        self.identity = 0

    def mul(self, a, b):
        return (a + b) % self.order

    def inv(self, a):
        return (-a) % self.order


class ProductGroup(FiniteGroup):
    def __init__(self, factors: list[FiniteGroup], label: str | None = None):
        if not factors:
            raise ValueError("product needs at least one factor")
        self.factors = list(factors)
        self.order = 1
        for f in factors:
            self.order *= f.order
        self.label = label or "x".join(f.label for f in factors)
        self.identity = self.encode(tuple(f.identity for f in factors))

    def decode(self, i: int) -> tuple[int, ...]:
        out = []
        for f in reversed(self.factors):
            out.append(i % f.order)
            i //= f.order
        return tuple(reversed(out))

    def encode(self, parts: tuple[int, ...]) -> int:
        i = 0
        for f, p in zip(self.factors, parts):
            i = i * f.order + p
        return i

    def mul(self, a, b):
        pa, pb = self.decode(a), self.decode(b)
        return self.encode(tuple(f.mul(x, y) for f, x, y in zip(self.factors, pa, pb)))

    def inv(self, a):
        return self.encode(tuple(f.inv(x) for f, x in zip(self.factors, self.decode(a))))


@dataclass(frozen=True)
class Subgroup:
    """Canonical form: strictly sorted element-index tuple."""

    parent: FiniteGroup = field(compare=False)
    elements: tuple[int, ...] = ()

    def __post_init__(self):
        if tuple(sorted(set(self.elements))) != self.elements:
            raise ValueError("subgroup elements must be strictly sorted")
        if self.parent.identity not in self.elements:
            raise ValueError("subgroup must contain the identity")

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._elemset()

    @lru_cache(maxsize=None)
    def _elemset(self):
        return frozenset(self.elements)

    def key(self):
        return (len(self.elements), self.elements)


def closure_set(G: FiniteGroup, seed) -> tuple[int, ...]:
    """Subgroup generated by `seed`, as a sorted element tuple."""
    seed = list(seed) or [G.identity]
    if G.order <= TABLE_LIMIT:
        return tuple(int(x) for x in _kernels.closure(G.table(), seed))
    # generic worklist for large groups (used only off the hot paths)
    members = set(seed)
    work = list(members)
    seen = []
    while work:
        a = work.pop()
        seen.append(a)
        for b in list(seen):
            for c in (G.mul(a, b), G.mul(b, a)):
                if c not in members:
                    members.add(c)
                    work.append(c)
    return tuple(sorted(members))


def subgroup(G: FiniteGroup, elements) -> Subgroup:
    """Validated subgroup from an element collection (must be closed)."""
    elems = tuple(sorted(set(elements)))
    sg = Subgroup(G, elems)
    es = set(elems)
    for a in elems:
        if G.inv(a) not in es:
            raise ValueError("not closed under inverse")
        for b in elems:
            if G.mul(a, b) not in es:
                raise ValueError("not closed under multiplication")
    return sg


def generated_subgroup(G: FiniteGroup, gens) -> Subgroup:
    return Subgroup(G, closure_set(G, gens))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _cyclic_subgroup_of_index(n: int, d: int) -> tuple[int, ...]:
    # subgroup of Z/n generated by d (index d, order n//d)
    return tuple(range(0, n, 1) if d == 1 else range(0, n, d))


def _is_coprime_cyclic_product(G: FiniteGroup) -> bool:
    if not isinstance(G, ProductGroup):
        return False
    if not all(isinstance(f, (CyclicGroup, ProductGroup)) for f in G.factors):
        return False
    flat = _flatten_cyclic(G)
    if flat is None:
        return False
    orders = [f.order for f in flat]
    for i in range(len(orders)):
        for j in range(i + 1, len(orders)):
            if np.gcd(orders[i], orders[j]) != 1:
                return False
    return True


def _flatten_cyclic(G: FiniteGroup):
    if isinstance(G, CyclicGroup):
        return [G]
    if isinstance(G, ProductGroup):
        out = []
        for f in G.factors:
            sub = _flatten_cyclic(f)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def all_subgroups(G: FiniteGroup, limit: int = DEFAULT_SUBGROUP_LIMIT) -> list[Subgroup]:
    """Complete duplicate-free sorted list of subgroups of G (cached on G)."""
    cached = getattr(G, "_subgroup_cache", None)
    if cached is not None:
        return cached
    subs = [Subgroup(G, t) for t in _all_subgroup_tuples(G, limit)]
    G._subgroup_cache = subs
    return subs


def _all_subgroup_tuples(G: FiniteGroup, limit: int) -> list[tuple[int, ...]]:
    if isinstance(G, CyclicGroup):
        n = G.order
        return sorted(
            (_cyclic_subgroup_of_index(n, d) for d in _divisors(n)),
            key=lambda t: (len(t), t),
        )
    if _is_coprime_cyclic_product(G):
        # coprime cyclic product: every subgroup is a product of factor
        # subgroups, encoded through the mixed-radix element indexing
        parts = [_all_subgroup_tuples_factor(f) for f in G.factors]
        out = []
        for combo in itertools.product(*parts):
            elems = [
                G.encode(p)
                for p in itertools.product(*combo)
            ]
            if len(out) >= limit:
                raise CapacityError(f"subgroup count exceeds bound {limit}")
            out.append(tuple(sorted(elems)))
        return sorted(out, key=lambda t: (len(t), t))
    # generic cyclic-extension enumeration over the dense table
    if G.order > TABLE_LIMIT:
        raise CapacityError(
            f"generic subgroup enumeration needs order <= {TABLE_LIMIT}"
        )
    found = {(G.identity,)}
    frontier = [(G.identity,)]
    while frontier:
        nxt = []
        for base in frontier:
            bset = set(base)
            for g in range(G.order):
                if g in bset:
                    continue
                t = closure_set(G, base + (g,))
                if t not in found:
                    if len(found) >= limit:
                        raise CapacityError(f"subgroup count exceeds bound {limit}")
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda t: (len(t), t))


def _all_subgroup_tuples_factor(f: FiniteGroup) -> list[tuple[int, ...]]:
    if isinstance(f, CyclicGroup):
        return _all_subgroup_tuples(f, DEFAULT_SUBGROUP_LIMIT)
    return _all_subgroup_tuples(f, DEFAULT_SUBGROUP_LIMIT)


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    G = H.parent
    return Subgroup(G, tuple(sorted(G.conj(g, x) for x in H.elements)))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    return all(conjugate_subgroup(H, g) == H for g in G.elements())


def intersection(H1: Subgroup, H2: Subgroup) -> Subgroup:
    assert H1.parent is H2.parent
    return Subgroup(H1.parent, tuple(sorted(set(H1.elements) & set(H2.elements))))


def core(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """Largest normal subgroup of G contained in H: the intersection of all
    conjugates of H."""
    cur = set(H.elements)
    for g in G.elements():
        cur &= {G.conj(g, x) for x in H.elements}
    return Subgroup(G, tuple(sorted(cur)))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    elems = [g for g in G.elements() if conjugate_subgroup(H, g) == H]
    return Subgroup(G, tuple(sorted(elems)))


def subgroup_conjugacy_classes(G: FiniteGroup, limit: int = DEFAULT_SUBGROUP_LIMIT):
    """Partition of all_subgroups(G) into conjugation orbits.

    Returns a list of (representative, sorted members); the representative is
    the canonically least member.  Classes are sorted by representative key.
    """
    subs = all_subgroups(G, limit)
    remaining = set(subs)
    classes = []
    for H in subs:
        if H not in remaining:
            continue
        orbit = {conjugate_subgroup(H, g) for g in G.elements()}
        members = sorted(orbit, key=Subgroup.key)
        rep = members[0]
        for m in members:
            remaining.discard(m)
        classes.append((rep, members))
    classes.sort(key=lambda c: c[0].key())
    return classes


@dataclass
class GroupHom:
    """Group homomorphism given by an element-index table."""

    domain: FiniteGroup
    codomain: FiniteGroup
    mapping: tuple[int, ...]

    def __post_init__(self):
        self.mapping = tuple(self.mapping)
        if len(self.mapping) != self.domain.order:
            raise ValueError("hom table has wrong length")
        if self.mapping[self.domain.identity] != self.codomain.identity:
            raise ValueError("hom does not preserve the identity")
        n = self.domain.order
        if n <= FULL_CHECK_LIMIT:
            pairs = itertools.product(range(n), range(n))
        else:
            rng = np.random.default_rng(1)
            pairs = (tuple(rng.integers(0, n, 2)) for _ in range(2000))
        for a, b in pairs:
            if self.mapping[self.domain.mul(a, b)] != self.codomain.mul(
                self.mapping[a], self.mapping[b]
            ):
                raise ValueError("hom table is not multiplicative")

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.codomain.order

    def kernel(self) -> Subgroup:
        e = self.codomain.identity
        return Subgroup(
            self.domain,
            tuple(sorted(x for x in self.domain.elements() if self.mapping[x] == e)),
        )

    def image_subgroup(self, H: Subgroup) -> Subgroup:
        return Subgroup(
            self.codomain, tuple(sorted({self.mapping[x] for x in H.elements}))
        )

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self o inner."""
        assert inner.codomain is self.domain
        return GroupHom(
            inner.domain,
            self.codomain,
            tuple(self.mapping[inner.mapping[x]] for x in inner.domain.elements()),
        )


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(range(G.order)))


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Coset group with canonical (minimal-index) representatives and the
    projection hom."""
    if isinstance(G, CyclicGroup) and N.order == 1:
        return G, identity_hom(G)
    if isinstance(G, CyclicGroup) and N.order > 1:
        d = N.elements[1]  # generator of the subgroup: smallest nonzero member
        if G.order % d != 0 or N.order != G.order // d:
            d = G.order // N.order  # fall through for non-standard listing
        Q = CyclicGroup(d, label=f"{G.label}/{N.order}")
        return Q, GroupHom(G, Q, tuple(x % d for x in G.elements()))
    if not is_normal(G, N):
        raise NotNormal(f"{N.elements} is not normal in {G.label}")
    nset = set(N.elements)
    rep_of = {}
    reps = []
    for g in G.elements():
        if g in rep_of:
            continue
        coset = sorted(G.mul(g, n) for n in nset)
        r = coset[0]
        reps.append(r)
        for x in coset:
            rep_of[x] = r
    reps.sort()
    index = {r: i for i, r in enumerate(reps)}
    k = len(reps)
    mult = [[index[rep_of[G.mul(reps[i], reps[j])]] for j in range(k)] for i in range(k)]
    Q = TableGroup(mult, label=f"{G.label}/{N.order}")
    proj = GroupHom(G, Q, tuple(index[rep_of[g]] for g in G.elements()))
    return Q, proj


def subgroup_as_group(H: Subgroup) -> tuple[TableGroup, list[int]]:
    """H as a group in its own right, plus the embedding element list."""
    G = H.parent
    elems = list(H.elements)
    index = {x: i for i, x in enumerate(elems)}
    mult = [[index[G.mul(a, b)] for b in elems] for a in elems]
    return TableGroup(mult, label=f"{G.label}|{len(elems)}"), elems


def weyl_group(G: FiniteGroup, K: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """W_G(K) = N_G(K)/K, with the projection from N_G(K) (as a group)."""
    if isinstance(G, CyclicGroup):
        return quotient(G, K)
    N = normalizer(G, K)
    NG, elems = subgroup_as_group(N)
    index = {x: i for i, x in enumerate(elems)}
    Kin = Subgroup(NG, tuple(sorted(index[x] for x in K.elements)))
    return quotient(NG, Kin)


# ---------------------------------------------------------------------------
# built-in families and selectors


def cyclic(n: int) -> FiniteGroup:
    return CyclicGroup(n)


def dihedral(order: int) -> TableGroup:
    """Dihedral group of the given (even) order 2m: r^i and s r^i."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and >= 2")
    m = order // 2

    def mul(a, b):
        fa, ia = divmod(a, m)
        fb, ib = divmod(b, m)
        # (s^fa r^ia)(s^fb r^ib); s r^i s = r^-i
        f = (fa + fb) % 2
        i = (ib + (ia if fb == 0 else -ia)) % m
        return f * m + i

    table = [[mul(a, b) for b in range(order)] for a in range(order)]
    return TableGroup(table, label=f"D{order}")


def symmetric(n: int) -> TableGroup:
    if n > 5:
        raise CapacityError("symmetric groups supported up to S5")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p*q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return TableGroup(table, label=f"S{n}")


def direct_product(*groups: FiniteGroup) -> ProductGroup:
    return ProductGroup(list(groups))


def parse_group(selector: str) -> FiniteGroup:
    """Selectors: cyclic:4, dihedral:8, sym:3, prod:cyclic:2,cyclic:2,
    or json:<path> for a table file."""
    if selector.startswith("prod:"):
        parts = selector[len("prod:"):].split(",")
        if any(p.startswith("prod:") for p in parts):
            raise UnknownFamily("nested prod selectors are not supported")
        return direct_product(*(parse_group(p) for p in parts))
    if selector.startswith("json:"):
        with open(selector[len("json:"):]) as fh:
            return group_from_json(json.load(fh))
    head, _, arg = selector.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise UnknownFamily(f"bad group selector {selector!r}") from None
    if head == "cyclic":
        return cyclic(n)
    if head == "dihedral":
        return dihedral(n)
    if head == "sym":
        return symmetric(n)
    raise UnknownFamily(f"unknown group family {head!r}")


def group_to_json(G: FiniteGroup) -> dict:
    t = G.table()
    return {"schema": 1, "order": G.order, "mult": t.tolist(), "label": G.label}


def group_from_json(data: dict) -> TableGroup:
    return TableGroup(data["mult"], label=data.get("label", "G"))
