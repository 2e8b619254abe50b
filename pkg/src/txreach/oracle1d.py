"""Geometric reachability oracle for 1D transmission graphs.

Pipeline: strongly connected components found without materializing the
graph (ordered-neighbour search for forward edges, interval stabbing for
reverse edges), then the SCC intervals form a laminar family, and left/right
reach extents are propagated along each sibling group with a stack sweep.
Queries are two comparisons against the stored reach interval.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import LaminarityViolation, WrongDimension
from .pointset import PointSet

_NEG_INF = float("-inf")


class _LiveOrder:
    """Sorted-order doubly linked list supporting removal and live-neighbour
    lookup from removed positions (with path compression)."""

    def __init__(self, n: int):
        self.left = list(range(-1, n - 1))
        self.right = list(range(1, n + 1))
        self.alive = bytearray([1]) * n
        self.n = n

    def remove(self, pos: int) -> None:
        self.alive[pos] = 0
        l = self.left[pos]
        r = self.right[pos]
        if l >= 0:
            self.right[l] = r
        if r < self.n:
            self.left[r] = l

    def live_left(self, pos: int) -> int:
        """Nearest live position strictly left of pos, or -1."""
        left = self.left
        alive = self.alive
        p = left[pos]
        while p >= 0 and not alive[p]:
            p = left[p]
        if self.left[pos] != p:
            self.left[pos] = p
        return p

    def live_right(self, pos: int) -> int:
        right = self.right
        alive = self.alive
        p = right[pos]
        n = self.n
        while p < n and not alive[p]:
            p = right[p]
        if self.right[pos] != p:
            self.right[pos] = p
        return p


class IntervalStabber:
    """Static interval set with stab-any queries and tombstone deletion.

    Intervals are sorted by left endpoint; a segment tree over that order
    keeps the maximum right endpoint of the live intervals per subtree, so a
    stab walks one root-leaf path.  O(log n) per operation.
    """

    def __init__(self, intervals):
        """intervals: iterable of (left, right, key)."""
        items = sorted(intervals)
        self.lefts = [it[0] for it in items]
        self.keys = [it[2] for it in items]
        self.slot_of = {it[2]: i for i, it in enumerate(items)}
        n = max(len(items), 1)
        size = 1
        while size < n:
            size <<= 1
        self.size = size
        self.tree = [_NEG_INF] * (2 * size)
        for i, it in enumerate(items):
            self.tree[size + i] = it[1]
        for node in range(size - 1, 0, -1):
            self.tree[node] = max(self.tree[2 * node], self.tree[2 * node + 1])

    def remove(self, key) -> None:
        node = self.size + self.slot_of[key]
        tree = self.tree
        tree[node] = _NEG_INF
        node >>= 1
        while node:
            new = max(tree[2 * node], tree[2 * node + 1])
            if tree[node] == new:
                break
            tree[node] = new
            node >>= 1

    def stab_any(self, x):
        """Some live interval containing x, or None.

        Only intervals in the prefix with left endpoint <= x qualify; the
        descent walks the one root-leaf path that straddles the prefix
        boundary, dropping into a greedy max-guided descent as soon as a
        subtree lies entirely inside the prefix.
        """
        hi = bisect_right(self.lefts, x)
        if hi == 0:
            return None
        tree = self.tree
        node, a, b = 1, 0, self.size
        while b - a > 1:
            mid = (a + b) >> 1
            lc = node << 1
            if b <= hi:
                # fully inside the prefix: a hit exists iff the max allows it
                if tree[node] < x:
                    return None
                while b - a > 1:
                    mid = (a + b) >> 1
                    lc = node << 1
                    if tree[lc] >= x:
                        node, b = lc, mid
                    else:
                        node, a = lc + 1, mid
                break
            if hi <= mid:
                node, b = lc, mid
            elif tree[lc] >= x:
                node, b = lc, mid
            else:
                node, a = lc + 1, mid
        if tree[node] < x:
            return None
        return self.keys[a]


@dataclass(frozen=True)
class SccPartition:
    """SCC labelling with component ids in topological order (an edge between
    components always goes from a smaller id to a larger one)."""

    comp_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.members)


def scc_1d(ps: PointSet) -> SccPartition:
    """Kosaraju-Sharir on the implicit 1D transmission graph.

    Forward edges come from nearest live neighbours in coordinate order;
    reverse edges from stabbing the live intervals [x - r, x + r].  Neither
    pass enumerates the edge set.
    """
    if ps.dim != 1:
        raise WrongDimension(1, ps.dim)
    n = ps.n
    xs = [pt[0] for pt in ps.icoords]
    rs = list(ps.iradii)

    # ties in coordinate are broken by vertex id (coincident points always
    # end up in one SCC, so the choice does not affect the partition)
    order = sorted(range(n), key=lambda v: (xs[v], v))
    rank = [0] * n
    for pos, v in enumerate(order):
        rank[v] = pos

    live = _LiveOrder(n)
    visited = bytearray(n)
    finish: list[int] = []

    def forward_neighbour(p: int):
        pos = rank[p]
        lp = live.live_left(pos)
        if lp >= 0:
            u = order[lp]
            if xs[p] - xs[u] <= rs[p]:
                return u
        rp = live.live_right(pos)
        if rp < n:
            u = order[rp]
            if xs[u] - xs[p] <= rs[p]:
                return u
        return None

    for seed in range(n):
        if visited[seed]:
            continue
        visited[seed] = 1
        live.remove(rank[seed])
        stack = [seed]
        while stack:
            p = stack[-1]
            q = forward_neighbour(p)
            if q is None:
                finish.append(stack.pop())
            else:
                visited[q] = 1
                live.remove(rank[q])
                stack.append(q)

    stabber = IntervalStabber((xs[v] - rs[v], xs[v] + rs[v], v) for v in range(n))
    comp_of = [-1] * n
    members: list[list[int]] = []
    for p in reversed(finish):
        if comp_of[p] != -1:
            continue
        cid = len(members)
        comp_of[p] = cid
        stabber.remove(p)
        group = [p]
        stack = [p]
        while stack:
            u = stack[-1]
            q = stabber.stab_any(xs[u])
            if q is None:
                stack.pop()
            else:
                comp_of[q] = cid
                stabber.remove(q)
                stack.append(q)
                group.append(q)
        group.sort()
        members.append(group)

    return SccPartition(
        comp_of=tuple(comp_of),
        members=tuple(tuple(g) for g in members),
    )


@dataclass
class Scc1D:
    """One SCC with its interval and direct one-hop reach extents.

    All values are scaled integers; lo/hi are the extreme member coordinates,
    direct_lo/direct_hi the extreme points covered by a member disk, and
    reach_lo/reach_hi the extremes covered by anything reachable.
    """

    id: int
    members: tuple[int, ...]
    lo: int
    hi: int
    direct_lo: int
    direct_hi: int
    reach_lo: int = 0
    reach_hi: int = 0


@dataclass
class LaminarTree:
    """Rooted containment forest of SCC intervals.

    `top_level` lists the maximal intervals left to right; a synthetic root
    exists (conceptually) only when there are several, and carries no reach
    values of its own.  `children[c]` are the SCCs directly nested in c,
    sorted left to right.
    """

    sccs: list[Scc1D]
    parent: list[int]  # -1 for top level
    children: list[list[int]]
    top_level: list[int]

    @property
    def has_synthetic_root(self) -> bool:
        return len(self.top_level) > 1

    def sibling_groups(self):
        yield self.top_level
        for ch in self.children:
            if ch:
                yield ch


def landmark_sccs(ps: PointSet, part: SccPartition) -> list[Scc1D]:
    xs = [pt[0] for pt in ps.icoords]
    rs = ps.iradii
    out = []
    for cid, group in enumerate(part.members):
        lo = min(xs[v] for v in group)
        hi = max(xs[v] for v in group)
        dlo = min(xs[v] - rs[v] for v in group)
        dhi = max(xs[v] + rs[v] for v in group)
        out.append(Scc1D(id=cid, members=group, lo=lo, hi=hi,
                         direct_lo=dlo, direct_hi=dhi))
    return out


def build_laminar_tree(sccs: list[Scc1D]) -> LaminarTree:
    """Stack the intervals sorted by (lo asc, hi desc) into a forest.

    Distinct SCCs never share a coordinate, so intervals are strictly nested
    or disjoint; a proper crossing means the SCC computation is broken.
    """
    k = len(sccs)
    parent = [-1] * k
    children: list[list[int]] = [[] for _ in range(k)]
    top_level: list[int] = []
    order = sorted(range(k), key=lambda c: (sccs[c].lo, -sccs[c].hi))
    stack: list[int] = []
    for c in order:
        cur = sccs[c]
        while stack and sccs[stack[-1]].hi < cur.lo:
            stack.pop()
        if stack:
            top = sccs[stack[-1]]
            if cur.hi > top.hi:
                raise LaminarityViolation(
                    f"intervals [{top.lo},{top.hi}] and [{cur.lo},{cur.hi}] cross"
                )
            parent[c] = top.id
            children[top.id].append(c)
        else:
            top_level.append(c)
        stack.append(c)
    return LaminarTree(sccs=sccs, parent=parent, children=children,
                       top_level=top_level)


def compute_reachpoints(tree: LaminarTree) -> list[tuple[int, int]]:
    """Stack sweep per sibling group, left to right for the left extents and
    mirrored for the right extents.  Ties in the pop condition pop."""
    sccs = tree.sccs
    for group in tree.sibling_groups():
        stack: list[int] = []
        for c in group:
            cur = sccs[c].direct_lo
            while stack and cur <= sccs[stack[-1]].hi:
                d = stack.pop()
                folded = sccs[d].reach_lo
                if folded < cur:
                    cur = folded
            sccs[c].reach_lo = cur
            stack.append(c)
        stack = []
        for c in reversed(group):
            cur = sccs[c].direct_hi
            while stack and cur >= sccs[stack[-1]].lo:
                d = stack.pop()
                folded = sccs[d].reach_hi
                if folded > cur:
                    cur = folded
            sccs[c].reach_hi = cur
            stack.append(c)
    return [(s.reach_lo, s.reach_hi) for s in sccs]


@dataclass(frozen=True)
class Oracle1D:
    """Constant-time geometric reachability oracle for a 1D point set."""

    kind = "oned"

    n: int
    r0: int
    comp_of: tuple[int, ...]
    reach_lo: tuple[int, ...]
    reach_hi: tuple[int, ...]
    xs: tuple[int, ...]
    scc_count: int = field(default=0)

    def _check(self, v: int) -> None:
        from .errors import IndexOutOfRange

        if not 0 <= v < self.n:
            raise IndexOutOfRange(v, self.n)

    def query_point(self, s: int, q: float) -> bool:
        """Does s reach the real point q?  Exact for any finite float q."""
        self._check(s)
        c = self.comp_of[s]
        qa, qb = float(q).as_integer_ratio()
        qr = qa * self.r0
        return self.reach_lo[c] * qb <= qr <= self.reach_hi[c] * qb

    def query(self, s: int, t: int) -> bool:
        """Vertex-to-vertex query; equals reachability in the graph."""
        self._check(s)
        self._check(t)
        c = self.comp_of[s]
        return self.reach_lo[c] <= self.xs[t] <= self.reach_hi[c]

    def metrics(self) -> dict:
        return {"scc_count": self.scc_count}

    def space_bytes(self) -> int:
        return 8 * (2 * self.n + 2 * self.scc_count)


def build_oracle_1d(ps: PointSet) -> Oracle1D:
    """Compose SCCs, laminar tree and reachpoint sweeps; O(n log n) total."""
    if ps.dim != 1:
        raise WrongDimension(1, ps.dim)
    part = scc_1d(ps)
    sccs = landmark_sccs(ps, part)
    tree = build_laminar_tree(sccs)
    points = compute_reachpoints(tree)
    return Oracle1D(
        n=ps.n,
        r0=ps.r0,
        comp_of=part.comp_of,
        reach_lo=tuple(p[0] for p in points),
        reach_hi=tuple(p[1] for p in points),
        xs=tuple(pt[0] for pt in ps.icoords),
        scc_count=part.count,
    )


def query_1d(oracle: Oracle1D, s: int, q: float) -> bool:
    return oracle.query_point(s, q)


def query_1d_vertex(oracle: Oracle1D, s: int, t: int) -> bool:
    return oracle.query(s, t)
