"""Explicit transmission graphs, SCC condensation, and brute-force oracles.

The transmission graph of a point set has a directed edge p -> q exactly when
p != q and |pq| <= r_p (closed disks).  Construction goes through grid
bucketing: each vertex scans only the cells of the grid whose diameter bounds
its radius, never the all-pairs loop, but the result equals the definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import DimensionMismatch, IndexOutOfRange
from .grid import build_grid_index, coord_cell_axis
from .pointset import PointSet


@dataclass(frozen=True)
class TransmissionGraph:
    """Directed adjacency of a transmission graph; immutable once built."""

    n: int
    out_adj: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.out_adj)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        rev: list[list[int]] = [[] for _ in range(self.n)]
        for u, targets in enumerate(self.out_adj):
            for v in targets:
                rev[v].append(u)
        return tuple(tuple(a) for a in rev)

    @cached_property
    def out_masks(self) -> list[int]:
        """Out-neighbourhoods as integer bitsets (bit v = edge to v)."""
        masks = []
        for targets in self.out_adj:
            m = 0
            for v in targets:
                m |= 1 << v
            masks.append(m)
        return masks

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexOutOfRange(v, self.n)


def _radius_level(ps: PointSet, v: int) -> int:
    """Smallest level L with 2**L >= normalized radius of v (exact)."""
    ir = ps.iradii[v]
    level = 0
    while (ps.r0 << level) < ir:
        level += 1
    return level


def enumerate_edges(ps: PointSet) -> TransmissionGraph:
    """Build the exact transmission graph via per-level grid scans."""
    levels = sorted({_radius_level(ps, v) for v in range(ps.n)})
    index_by_level = {lv: build_grid_index(ps, lv) for lv in levels}

    out: list[list[int]] = []
    for p in range(ps.n):
        lv = _radius_level(ps, p)
        gi = index_by_level[lv]
        ir = ps.iradii[p]
        pt = ps.icoords[p]
        lo = [coord_cell_axis(ps, c - ir, lv) for c in pt]
        hi = [coord_cell_axis(ps, c + ir, lv) for c in pt]
        targets: list[int] = []
        if ps.dim == 1:
            for kx in range(lo[0], hi[0] + 1):
                for q in gi.bucket((kx,)):
                    if q != p and ps.in_range(p, q):
                        targets.append(q)
        else:
            for kx in range(lo[0], hi[0] + 1):
                for ky in range(lo[1], hi[1] + 1):
                    for q in gi.bucket((kx, ky)):
                        if q != p and ps.in_range(p, q):
                            targets.append(q)
        targets.sort()
        out.append(targets)
    return TransmissionGraph(n=ps.n, out_adj=tuple(tuple(t) for t in out))


@dataclass(frozen=True)
class Condensation:
    """SCC partition plus the condensation DAG in topological order.

    Component ids are already a linear extension: every DAG edge goes from a
    smaller id to a larger id.
    """

    comp_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    dag_adj: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def topo_order(self) -> tuple[int, ...]:
        return tuple(range(self.count))


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan; components are emitted sinks-first."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        call: list[list[int]] = [[root, 0]]
        while call:
            frame = call[-1]
            v, pi = frame
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            descended = False
            neighbours = adj[v]
            i = pi
            while i < len(neighbours):
                w = neighbours[i]
                i += 1
                if index[w] == -1:
                    frame[1] = i
                    call.append([w, 0])
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            call.pop()
            if call and low[v] < low[call[-1][0]]:
                low[call[-1][0]] = low[v]
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    members.append(w)
                    if w == v:
                        break
                members.sort()
                comps.append(members)
    return comps


def condense_adjacency(adj: Sequence[Sequence[int]]) -> Condensation:
    """Condensation of an arbitrary digraph given as adjacency lists."""
    comps = strongly_connected_components(adj)
    k = len(comps)
    n = len(adj)
    # Tarjan finishes a component only after everything it reaches, so
    # reversing the emission order is a topological order (sources first).
    order = list(range(k - 1, -1, -1))
    new_id = [0] * k
    for pos, old in enumerate(order):
        new_id[old] = pos
    comp_of = [0] * n
    members: list[tuple[int, ...]] = [()] * k
    for old, ms in enumerate(comps):
        c = new_id[old]
        members[c] = tuple(ms)
        for v in ms:
            comp_of[v] = c
    dag: list[set[int]] = [set() for _ in range(k)]
    for u in range(n):
        cu = comp_of[u]
        for v in adj[u]:
            cv = comp_of[v]
            if cu != cv:
                dag[cu].add(cv)
    return Condensation(
        comp_of=tuple(comp_of),
        members=tuple(members),
        dag_adj=tuple(tuple(sorted(s)) for s in dag),
    )


def condense(g: TransmissionGraph) -> Condensation:
    """Condensation DAG with components relabelled topologically."""
    return condense_adjacency(g.out_adj)


def component_closure_rows(cond: Condensation) -> list[int]:
    """Per-component bitset of reachable components (including itself)."""
    k = cond.count
    rows = [0] * k
    for c in range(k - 1, -1, -1):
        row = 1 << c
        for d in cond.dag_adj[c]:
            row |= rows[d]
        rows[c] = row
    return rows


def closure_rows_from_condensation(cond: Condensation) -> list[int]:
    """Per-vertex reachability bitsets derived from a condensation."""
    comp_rows = component_closure_rows(cond)
    member_mask = []
    for ms in cond.members:
        m = 0
        for v in ms:
            m |= 1 << v
        member_mask.append(m)
    expanded = [0] * cond.count
    for c in range(cond.count):
        row = comp_rows[c]
        vm = 0
        while row:
            d = (row & -row).bit_length() - 1
            vm |= member_mask[d]
            row &= row - 1
        expanded[c] = vm
    return [expanded[cond.comp_of[v]] for v in range(len(cond.comp_of))]


def vertex_closure_rows(g: TransmissionGraph, cond: Condensation | None = None) -> list[int]:
    """Per-vertex bitset of reachable vertices (reflexive)."""
    if cond is None:
        cond = condense(g)
    return closure_rows_from_condensation(cond)


def brute_reach(g: TransmissionGraph, s: int, t: int) -> bool:
    """BFS reference semantics; a vertex always reaches itself."""
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        return True
    seen = bytearray(g.n)
    seen[s] = 1
    frontier = [s]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in g.out_adj[u]:
                if v == t:
                    return True
                if not seen[v]:
                    seen[v] = 1
                    nxt.append(v)
        frontier = nxt
    return False


def reachable_set(g: TransmissionGraph, s: int) -> bytearray:
    seen = bytearray(g.n)
    seen[s] = 1
    frontier = [s]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in g.out_adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    nxt.append(v)
        frontier = nxt
    return seen


def _point_covers(ps: PointSet, t: int, q: Sequence[float]) -> bool:
    """Exact |t q| <= r_t with q given in normalized coordinates."""
    r0 = ps.r0
    d2 = Fraction(0)
    for c, qc in zip(ps.icoords[t], q):
        qa, qb = float(qc).as_integer_ratio()
        d2 += (Fraction(c, r0) - Fraction(qa, qb)) ** 2
    rt = Fraction(ps.iradii[t], r0)
    return d2 <= rt * rt


def brute_geo_reach(ps: PointSet, g: TransmissionGraph, s: int, q) -> bool:
    """True iff some vertex t reachable from s has q inside D(t)."""
    if isinstance(q, (int, float)):
        q = (q,)
    q = tuple(q)
    if len(q) != ps.dim:
        raise DimensionMismatch(ps.dim, len(q))
    g.check_vertex(s)
    seen = reachable_set(g, s)
    for t in range(ps.n):
        if seen[t] and _point_covers(ps, t, q):
            return True
    return False


class BruteOracle:
    """Reference oracle: explicit graph plus per-query BFS.

    Used for differential verification and as the 2D geometric fallback.
    """

    kind = "brute"

    def __init__(self, ps: PointSet):
        self.ps = ps
        self.graph = enumerate_edges(ps)

    def query(self, s: int, t: int) -> bool:
        return brute_reach(self.graph, s, t)

    def query_point(self, s: int, q) -> bool:
        return brute_geo_reach(self.ps, self.graph, s, q)

    def metrics(self) -> dict:
        return {"edges": self.graph.m}

    def space_bytes(self) -> int:
        return 8 * (self.graph.n + self.graph.m)
