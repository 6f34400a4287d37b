"""Cantor-Bendixson process on tree-presented profinite spaces.

A SpaceTree is a finite tower of point sets with surjective bonds; the
profinite space it presents is the inverse limit.  Each *thread* (point of
the top level, standing for the cylinder of limit points above it) carries a
certificate supplied by whoever built the tree:

  * scattered(m): the cylinder contains exactly one point of height m and
    only points of smaller height below it, so the thread's limit point is
    removed at derivative stage m.
  * perfect: the cylinder lies in the perfect hull.
  * unknown: no family lemma applies; treated pessimistically.

Rank convention (matching the worked examples here): the empty space has
rank 0, a non-empty discrete space rank 1; generally the rank of a
scattered space is (max height) + 1, the minimal stage whose derivative
chain has stabilised at the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

CONVENTION = "rank(empty)=0, rank(non-empty discrete)=1"


class DepthExhausted(Exception):
    """The derivative process needed more stages than the tree can certify."""


@dataclass(frozen=True)
class ThreadCert:
    kind: str  # "scattered" | "perfect" | "unknown"
    m: int | None = None  # residual height, for scattered threads
    reason: str = ""

    def __post_init__(self):
        if self.kind not in ("scattered", "perfect", "unknown"):
            raise ValueError(f"bad certificate kind {self.kind!r}")
        if (self.kind == "scattered") != (self.m is not None):
            raise ValueError("scattered certificates and only they carry m")


@dataclass
class SpaceTree:
    """levels[k] are point labels; bonds[k] maps level-(k+1) indices down."""

    levels: list[list[str]]
    bonds: list[list[int]]
    certs: list[ThreadCert]
    actions: list[list[tuple[int, ...]]] | None = None
    chain: str = ""

    def __post_init__(self):
        if len(self.bonds) != len(self.levels) - 1:
            raise ValueError("need one bond per consecutive level pair")
        for k, bond in enumerate(self.bonds):
            if len(bond) != len(self.levels[k + 1]):
                raise ValueError(f"bond {k} has wrong domain size")
            if set(bond) != set(range(len(self.levels[k]))):
                raise ValueError(f"bond {k} is not surjective")
        if len(self.certs) != self.top_size:
            raise ValueError("need one certificate per thread")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def top_size(self) -> int:
        return len(self.levels[-1])

    def thread_point(self, t: int, k: int) -> int:
        """The level-k point under thread t."""
        x = t
        for j in range(self.depth - 1, k - 1, -1):
            x = self.bonds[j][x]
        return x

    def fiber(self, k: int, x: int) -> list[int]:
        """Preimage in level k+1 of point x in level k."""
        return [y for y, img in enumerate(self.bonds[k]) if img == x]


def discrete_tree(labels: list[str], chain: str = "discrete") -> SpaceTree:
    """A constant tree of bijective bonds: a finite discrete space."""
    n = len(labels)
    return SpaceTree(
        levels=[list(labels), list(labels)],
        bonds=[list(range(n))],
        certs=[ThreadCert("scattered", 0, "constant finite tree")] * n,
        chain=chain,
    )


def empty_tree(chain: str = "empty") -> SpaceTree:
    return SpaceTree(levels=[[]], bonds=[], certs=[], chain=chain)


def binary_tree(depth: int, certified: bool = False) -> SpaceTree:
    """Full binary tree; the limit is a Cantor set (perfect).

    With certified=False every thread is unknown (no lemma supplied); with
    certified=True the threads carry perfect certificates.
    """
    levels = [[format(x, f"0{k}b") if k else "*" for x in range(2**k)] for k in range(depth + 1)]
    bonds = [[x >> 1 for x in range(2 ** (k + 1))] for k in range(depth)]
    cert = ThreadCert("perfect", reason="full binary tree") if certified else ThreadCert("unknown")
    return SpaceTree(levels, bonds, [cert] * 2**depth, chain="binary")


def tree_union(a: SpaceTree, b: SpaceTree) -> SpaceTree:
    """Disjoint union of trees of equal depth."""
    assert a.depth == b.depth
    levels = [la + lb for la, lb in zip(a.levels, b.levels)]
    bonds = [
        ba + [x + len(a.levels[k]) for x in bb]
        for k, (ba, bb) in enumerate(zip(a.bonds, b.bonds))
    ]
    return SpaceTree(levels, bonds, a.certs + b.certs, chain=f"{a.chain}+{b.chain}")


# ---------------------------------------------------------------------------
# the derivative process


@dataclass
class IsolatedReport:
    certified: list[str]  # threads certified isolated in the limit
    undecided: list[str]  # unknown certificates


def isolated_points(X: SpaceTree) -> IsolatedReport:
    certified, undecided = [], []
    for t, c in enumerate(X.certs):
        label = X.levels[-1][t]
        if c.kind == "scattered" and c.m == 0:
            certified.append(label)
        elif c.kind == "unknown":
            undecided.append(label)
    return IsolatedReport(certified, undecided)


def subtree(X: SpaceTree, keep_threads: list[int]) -> SpaceTree:
    """Subtree spanned by the given threads (levelwise images)."""
    keep: list[list[int]] = [None] * (X.depth + 1)
    keep[X.depth] = sorted(keep_threads)
    for k in range(X.depth - 1, -1, -1):
        keep[k] = sorted({X.bonds[k][y] for y in keep[k + 1]})
    index = [{x: i for i, x in enumerate(kp)} for kp in keep]
    levels = [[X.levels[k][x] for x in keep[k]] for k in range(X.depth + 1)]
    bonds = [
        [index[k][X.bonds[k][x]] for x in keep[k + 1]] for k in range(X.depth)
    ]
    certs = [X.certs[t] for t in keep[X.depth]]
    actions = None
    if X.actions is not None:
        actions = []
        for k, perms in enumerate(X.actions):
            rows = []
            for p in perms:
                if any(p[x] not in index[k] for x in keep[k]):
                    raise ValueError("action does not preserve the subtree")
                rows.append(tuple(index[k][p[x]] for x in keep[k]))
            actions.append(rows)
    return SpaceTree(levels, bonds, certs, actions, chain=X.chain)


def derivative(X: SpaceTree) -> SpaceTree:
    """Remove the certified-isolated threads; keep unknowns pessimistically."""
    keep = [
        t
        for t, c in enumerate(X.certs)
        if not (c.kind == "scattered" and c.m == 0)
    ]
    if not keep:
        return SpaceTree([[] for _ in X.levels], [[] for _ in X.bonds], [],
                         None if X.actions is None else [[] for _ in X.actions],
                         chain=X.chain)
    Y = subtree(X, keep)
    Y.certs = [
        replace(c, m=c.m - 1) if c.kind == "scattered" else c for c in Y.certs
    ]
    return Y


@dataclass
class RankCertificate:
    verdict: str  # "Exact" | "Interval" | "PerfectHullDetected"
    rank: int | None = None  # Exact value, or the stage for PerfectHull
    lo: int | None = None  # Interval lower bound
    hi: int | None = None  # Interval upper bound (None = unbounded)
    trace: list[dict] = field(default_factory=list)
    chain: str = ""
    convention: str = CONVENTION

    def as_dict(self) -> dict:
        return {
            "schema": 1,
            "verdict": self.verdict,
            "rank": self.rank,
            "lo": self.lo,
            "hi": self.hi,
            "trace": self.trace,
            "chain": self.chain,
            "convention": self.convention,
        }


def cb_rank(X: SpaceTree) -> RankCertificate:
    """Iterate the derivative, reading removal stages off the certificates."""
    trace: list[dict] = []
    remaining = list(range(X.top_size))
    labels = X.levels[-1]
    unknowns = [t for t in remaining if X.certs[t].kind == "unknown"]
    for stage in range(X.depth + 2):
        if not remaining:
            return RankCertificate("Exact", rank=stage, trace=trace, chain=X.chain)
        kinds = {X.certs[t].kind for t in remaining}
        if kinds == {"perfect"}:
            trace.append({"stage": stage, "removed": [], "note": "stage equals its derivative"})
            return RankCertificate(
                "PerfectHullDetected", rank=stage, trace=trace, chain=X.chain
            )
        removed = [
            t
            for t in remaining
            if X.certs[t].kind == "scattered" and X.certs[t].m == stage
        ]
        if unknowns:
            scattered_m = [c.m for c in X.certs if c.kind == "scattered"]
            lo = max([m + 1 for m in scattered_m], default=0)
            lo = max(lo, 1)  # the space is non-empty
            trace.append(
                {"stage": stage, "removed": [labels[t] for t in removed],
                 "undecided": [labels[t] for t in unknowns]}
            )
            return RankCertificate("Interval", lo=lo, hi=None, trace=trace, chain=X.chain)
        if not removed and "scattered" in kinds:
            raise DepthExhausted(
                f"no thread removable at stage {stage}; certificates exhausted"
            )
        trace.append(
            {"stage": stage,
             "removed": [labels[t] for t in removed],
             "certs": [f"scattered(m={X.certs[t].m})" for t in removed]}
        )
        remaining = [t for t in remaining if t not in set(removed)]
    raise DepthExhausted("derivative process exceeded tree depth")


@dataclass
class HeightReport:
    heights: dict[str, int]  # certified thread -> height
    lower_bounds: dict[str, str]  # undecided thread -> ">= d" marker
    hull: list[str]  # perfect threads carry no height


def heights(X: SpaceTree) -> HeightReport:
    hts: dict[str, int] = {}
    lbs: dict[str, str] = {}
    hull: list[str] = []
    for t, c in enumerate(X.certs):
        label = X.levels[-1][t]
        if c.kind == "scattered":
            hts[label] = c.m
        elif c.kind == "perfect":
            hull.append(label)
        else:
            lbs[label] = ">= 0"
    return HeightReport(hts, lbs, hull)


@dataclass
class ScatteredSplit:
    scattered: list[str]
    hull: list[str]
    undecided: list[str]
    hull_nonempty: bool


def scattered_split(X: SpaceTree) -> ScatteredSplit:
    sc, hull, und = [], [], []
    for t, c in enumerate(X.certs):
        label = X.levels[-1][t]
        {"scattered": sc, "perfect": hull, "unknown": und}[c.kind].append(label)
    return ScatteredSplit(sc, hull, und, bool(hull))


# ---------------------------------------------------------------------------
# equivariance


def _thread_orbits(X: SpaceTree) -> list[list[int]]:
    """Orbits of threads under the top-level permutations."""
    n = X.top_size
    perms = X.actions[-1] if X.actions else []
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for x in range(n):
            a, b = find(x), find(p[x])
            if a != b:
                parent[a] = b
    orbits: dict[int, list[int]] = {}
    for x in range(n):
        orbits.setdefault(find(x), []).append(x)
    return list(orbits.values())


def check_equivariant_heights(X: SpaceTree) -> bool:
    """Heights constant on orbits, actions compatible with bonds, and every
    certified point of positive height has ≥ 2 orbits in each bond fiber."""
    if X.actions is not None:
        if len(X.actions) != X.depth + 1:
            return False
        for k in range(X.depth):
            na, nb = len(X.levels[k + 1]), len(X.levels[k])
            for pa, pb in zip(X.actions[k + 1], X.actions[k]):
                if len(pa) != na or len(pb) != nb:
                    return False
                # bond o (g on level k+1) must equal (g on level k) o bond
                if any(X.bonds[k][pa[x]] != pb[X.bonds[k][x]] for x in range(na)):
                    return False
    for orbit in _thread_orbits(X):
        certs = {(X.certs[t].kind, X.certs[t].m) for t in orbit}
        if len(certs) > 1:
            return False
    # second clause: positive-height points sit on fibers meeting >= 2 orbits
    for t, c in enumerate(X.certs):
        if c.kind != "scattered" or c.m == 0:
            continue
        for k in range(X.depth):
            fiber = X.fiber(k, X.thread_point(t, k))
            if len(fiber) < 2:
                return False
            perms = X.actions[k + 1] if X.actions else []
            reached = {fiber[0]}
            frontier = [fiber[0]]
            while frontier:
                x = frontier.pop()
                for p in perms:
                    if p[x] not in reached:
                        reached.add(p[x])
                        frontier.append(p[x])
            # >= 2 orbits within the fiber
            if set(fiber) <= reached:
                return False
    return True
