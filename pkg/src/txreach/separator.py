"""Separator-tree reachability oracle for 2D disk systems.

Each tree node splits its disks into (A, B, S) with disjoint unions of A and
B, so any path between the two sides passes a disk of S.  The level-0 cells
touched by S define the node's separator cells; one representative vertex per
cell carries packed reachability rows computed inside the node's subproblem.
A query lifts both endpoints to their cell representatives, walks from the
LCA of their absorbing nodes to the root and looks for a representative that
is reached by the source and reaches the target.

The separator itself is an axis-aligned band sweep: a band of width twice the
maximum radius slides over candidate positions (disk centers and midpoints
between consecutive centers); disks strictly left/right of the band form A/B,
disks meeting the band form S.  The band minimizing the cell-count proxy of S
subject to the balance constraint wins.  Quality is measured, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CannotSeparate, WrongDimension
from .grid import disk_cell_cover, vertex_cell
from .pointset import PointSet
from .tgraph import TransmissionGraph, enumerate_edges


@dataclass(frozen=True)
class SeparatorConfig:
    balance_alpha: float = 0.75
    min_leaf_size: int = 8

    def __post_init__(self):
        if not 0.0 < self.balance_alpha < 1.0:
            raise ValueError("balance_alpha must lie in (0, 1)")
        if self.min_leaf_size < 1:
            raise ValueError("min_leaf_size must be >= 1")


class _UnionCounter:
    """Distinct-cell counter over a multiset of per-disk cell covers."""

    def __init__(self):
        self.counts: dict = {}
        self.distinct = 0

    def add(self, cover) -> None:
        counts = self.counts
        for cell in cover:
            c = counts.get(cell, 0)
            if c == 0:
                self.distinct += 1
            counts[cell] = c + 1

    def remove(self, cover) -> None:
        counts = self.counts
        for cell in cover:
            c = counts[cell]
            if c == 1:
                self.distinct -= 1
            counts[cell] = c - 1


def _covers_for(ps: PointSet, ids, cache: dict):
    for d in ids:
        if d not in cache:
            cache[d] = disk_cell_cover(ps, d)
    return cache


def disk_separator(disk_ids, ps: PointSet, cfg: SeparatorConfig | None = None,
                   cover_cache: dict | None = None):
    """Partition `disk_ids` into (A, B, S) with disjoint A/B unions.

    Raises CannotSeparate when no band on either axis meets the balance
    constraint with at least one non-empty side; the oracle builder then
    falls back to a median split.
    """
    cfg = cfg or SeparatorConfig()
    ids = sorted(disk_ids)
    if len(ids) < 2:
        raise ValueError("separator needs at least 2 disks")
    if ps.dim != 2:
        raise WrongDimension(2, ps.dim)
    cache = _covers_for(ps, ids, {} if cover_cache is None else cover_cache)

    total = _UnionCounter()
    for d in ids:
        total.add(cache[d])
    mu_total = total.distinct
    alpha = cfg.balance_alpha
    rmax = max(ps.iradii[d] for d in ids)

    best = None  # (mu_s, axis, c2)
    for axis in (0, 1):
        xs = {d: ps.icoords[d][axis] for d in ids}
        centers = sorted({xs[d] for d in ids})
        candidates = sorted(
            {2 * c for c in centers}
            | {a + b for a, b in zip(centers, centers[1:])}
        )
        # doubled-frame thresholds: d is left of the band when a2 < c2,
        # right of it when b2 > c2, in S otherwise
        a2 = {d: 2 * (xs[d] + ps.iradii[d] + rmax) for d in ids}
        b2 = {d: 2 * (xs[d] - ps.iradii[d] - rmax) for d in ids}
        by_b2 = sorted(ids, key=lambda d: (b2[d], d))
        by_a2 = sorted(ids, key=lambda d: (a2[d], d))

        mu_a = _UnionCounter()
        mu_s = _UnionCounter()
        mu_b = _UnionCounter()
        for d in ids:
            mu_b.add(cache[d])
        n_a = n_b = 0
        pa = pb = 0
        for c2 in candidates:
            while pb < len(by_b2) and b2[by_b2[pb]] <= c2:
                d = by_b2[pb]
                mu_b.remove(cache[d])
                mu_s.add(cache[d])
                n_b -= 1
                pb += 1
            while pa < len(by_a2) and a2[by_a2[pa]] < c2:
                d = by_a2[pa]
                mu_s.remove(cache[d])
                mu_a.add(cache[d])
                n_a += 1
                pa += 1
            n_b = len(ids) - pb
            n_a = pa
            if n_a == 0 and n_b == 0:
                continue
            if mu_a.distinct <= alpha * mu_total and mu_b.distinct <= alpha * mu_total:
                cand = (mu_s.distinct, axis, c2)
                if best is None or cand < best:
                    best = cand

    if best is None:
        raise CannotSeparate(
            f"no balanced band among {len(ids)} disks (alpha={alpha})"
        )
    _, axis, c2 = best
    return _classify_band(ids, ps, axis, c2, rmax)


def _classify_band(ids, ps: PointSet, axis: int, c2: int, rmax: int):
    a_side, b_side, sep = [], [], []
    for d in ids:
        x = ps.icoords[d][axis]
        r = ps.iradii[d]
        if 2 * (x + r + rmax) < c2:
            a_side.append(d)
        elif 2 * (x - r - rmax) > c2:
            b_side.append(d)
        else:
            sep.append(d)
    return a_side, b_side, sep


def _median_fallback(ids, ps: PointSet):
    """Median split by x with S = disks within the max radius of the line."""
    ids = sorted(ids)
    rmax = max(ps.iradii[d] for d in ids)
    order = sorted(ids, key=lambda d: (ps.icoords[d][0], d))
    m = ps.icoords[order[(len(order) - 1) // 2]][0]
    a_side, b_side, sep = [], [], []
    for d in ids:
        x = ps.icoords[d][0]
        if x < m - rmax:
            a_side.append(d)
        elif x > m + rmax:
            b_side.append(d)
        else:
            sep.append(d)
    return a_side, b_side, sep


@dataclass
class SeparatorNode:
    id: int
    parent: int
    depth: int
    size: int
    mu_total: int
    mu_a: int = 0
    mu_b: int = 0
    mu_s: int = 0
    fallback: bool = False
    is_leaf: bool = False
    cells: tuple = ()          # separator cells Q_v
    reps: tuple = ()           # representative vertex ids with rows
    to_rows: tuple = ()        # per rep: bitset over rep positions reaching it
    from_rows: tuple = ()      # per rep: bitset over rep positions it reaches
    children: list = field(default_factory=list)
    a_side: tuple = ()         # child subproblem vertex ids (tests)
    b_side: tuple = ()
    extent_gap_ok: bool = True  # certificate: max A extent < min B extent


def _bfs_mask(masks, start: int, members: int) -> int:
    reached = 1 << start
    frontier = reached
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= masks[v]
        nxt &= members & ~reached
        reached |= nxt
        frontier = nxt
    return reached


class SeparatorOracle:
    kind = "separator"

    def __init__(self, ps: PointSet, cfg: SeparatorConfig, rep_choice: str,
                 graph: TransmissionGraph | None = None):
        if ps.dim != 2:
            raise WrongDimension(2, ps.dim)
        if rep_choice not in ("smallest", "largest"):
            raise ValueError("rep_choice must be 'smallest' or 'largest'")
        self.ps = ps
        self.cfg = cfg
        self.graph = graph if graph is not None else enumerate_edges(ps)

        # global cell representatives (one per nonempty level-0 cell)
        cell_of = [vertex_cell(ps, v, 0) for v in range(ps.n)]
        rep_by_cell: dict = {}
        pick = min if rep_choice == "smallest" else max
        for v in range(ps.n):
            cell = cell_of[v]
            if cell in rep_by_cell:
                rep_by_cell[cell] = pick(rep_by_cell[cell], v)
            else:
                rep_by_cell[cell] = v
        self._cell_of = cell_of
        self._rep_by_cell = rep_by_cell
        self.cell_rep = tuple(rep_by_cell[cell_of[v]] for v in range(ps.n))
        self.rep_vertices = tuple(sorted(set(rep_by_cell.values())))
        self.rep_pos = {r: j for j, r in enumerate(self.rep_vertices)}

        self._out_masks = self.graph.out_masks
        in_masks = [0] * ps.n
        for u, targets in enumerate(self.graph.out_adj):
            bit = 1 << u
            for v in targets:
                in_masks[v] |= bit
        self._in_masks = in_masks

        self._covers: dict = {}
        self.nodes: list[SeparatorNode] = []
        self.absorbed_at = [-1] * ps.n
        self._build(sorted(range(ps.n)), parent=-1, depth=0)
        self.root = 0 if self.nodes else -1

    # -- construction ------------------------------------------------------

    def _mu(self, ids) -> int:
        seen: set = set()
        for d in ids:
            seen |= self._covers[d]
        return len(seen)

    def _build(self, ids: list[int], parent: int, depth: int) -> int:
        _covers_for(self.ps, ids, self._covers)
        node_id = len(self.nodes)
        node = SeparatorNode(
            id=node_id, parent=parent, depth=depth, size=len(ids),
            mu_total=self._mu(ids),
        )
        self.nodes.append(node)

        if len(ids) <= self.cfg.min_leaf_size:
            node.is_leaf = True
            for v in ids:
                self.absorbed_at[v] = node_id
            node.cells = tuple(sorted({self._cell_of[v] for v in ids}))
            self._attach_rows(node, ids, set(ids))
            return node_id

        try:
            a_side, b_side, sep = disk_separator(
                ids, self.ps, self.cfg, self._covers
            )
        except CannotSeparate:
            node.fallback = True
            a_side, b_side, sep = _median_fallback(ids, self.ps)

        node.mu_a = self._mu(a_side)
        node.mu_b = self._mu(b_side)
        node.mu_s = self._mu(sep)
        node.extent_gap_ok = self._extent_certificate(a_side, b_side)

        sep_cells: set = set()
        for d in sep:
            sep_cells |= self._covers[d]
        node.cells = tuple(sorted(sep_cells))
        member_set = set(ids)
        absorbed = [v for v in ids if self._cell_of[v] in sep_cells]
        for v in absorbed:
            self.absorbed_at[v] = node_id
        self._attach_rows(node, ids, member_set)

        absorbed_set = set(absorbed)
        node.a_side = tuple(v for v in a_side if v not in absorbed_set)
        node.b_side = tuple(v for v in b_side if v not in absorbed_set)
        for part in (node.a_side, node.b_side):
            if part:
                child = self._build(sorted(part), node_id, depth + 1)
                node.children.append(child)
        return node_id

    def _extent_certificate(self, a_side, b_side) -> bool:
        """Sound witness of disjoint A/B unions: on some axis every A disk
        ends strictly before every B disk begins."""
        if not a_side or not b_side:
            return True
        for axis in (0, 1):
            amax = max(self.ps.icoords[d][axis] + self.ps.iradii[d] for d in a_side)
            bmin = min(self.ps.icoords[d][axis] - self.ps.iradii[d] for d in b_side)
            if amax < bmin:
                return True
        return False

    def _attach_rows(self, node: SeparatorNode, ids, member_set) -> None:
        reps = []
        for cell in node.cells:
            rv = self._rep_by_cell.get(cell)
            if rv is not None and rv in member_set:
                reps.append(rv)
        reps = sorted(set(reps))
        members_mask = 0
        for v in ids:
            members_mask |= 1 << v
        rep_vertices = self.rep_vertices
        to_rows = []
        from_rows = []
        for r in reps:
            fwd = _bfs_mask(self._out_masks, r, members_mask)
            bwd = _bfs_mask(self._in_masks, r, members_mask)
            frow = trow = 0
            for j, rv in enumerate(rep_vertices):
                if fwd >> rv & 1:
                    frow |= 1 << j
                if bwd >> rv & 1:
                    trow |= 1 << j
            from_rows.append(frow)
            to_rows.append(trow)
        node.reps = tuple(reps)
        node.from_rows = tuple(from_rows)
        node.to_rows = tuple(to_rows)

    # -- queries -----------------------------------------------------------

    def _lca(self, v: int, w: int) -> int:
        nodes = self.nodes
        while v != w:
            if nodes[v].depth >= nodes[w].depth:
                v = nodes[v].parent
            else:
                w = nodes[w].parent
        return v

    def query(self, s: int, t: int) -> bool:
        self.ps.check_vertex(s)
        self.ps.check_vertex(t)
        if s == t:
            return True
        rs = self.cell_rep[s]
        rt = self.cell_rep[t]
        if rs == rt:
            return True  # same cell: the cell is a clique
        spos = self.rep_pos[rs]
        tpos = self.rep_pos[rt]
        x = self._lca(self.absorbed_at[rs], self.absorbed_at[rt])
        while x != -1:
            node = self.nodes[x]
            for to_row, from_row in zip(node.to_rows, node.from_rows):
                if to_row >> spos & 1 and from_row >> tpos & 1:
                    return True
            x = node.parent
        return False

    # -- bulk evaluation (same semantics as query, vectorized for tests/CLI)

    def answer_matrix(self) -> list[int]:
        """Per-vertex reachability bitsets under the oracle's walk semantics.

        Along any root path, rows recorded below the LCA of a pair cannot set
        the target's bit (the target is absent from those subproblems), so
        accumulating hits from the root down to the source's absorbing node
        yields exactly the walk answer for every target at once.
        """
        rep_count = len(self.rep_vertices)
        cum: list[list[int]] = []
        for node in self.nodes:  # ids are parent-before-child
            base = (cum[node.parent][:] if node.parent != -1
                    else [0] * rep_count)
            for to_row, from_row in zip(node.to_rows, node.from_rows):
                bits = to_row
                while bits:
                    j = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    base[j] |= from_row
            cum.append(base)

        rep_matrix = [0] * rep_count
        for j, rv in enumerate(self.rep_vertices):
            rep_matrix[j] = cum[self.absorbed_at[rv]][j]

        cell_mask = [0] * rep_count
        for v in range(self.ps.n):
            cell_mask[self.rep_pos[self.cell_rep[v]]] |= 1 << v
        expanded: dict[int, int] = {}
        rows = []
        for s in range(self.ps.n):
            j = self.rep_pos[self.cell_rep[s]]
            if j not in expanded:
                vm = 0
                bits = rep_matrix[j]
                while bits:
                    b = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    vm |= cell_mask[b]
                expanded[j] = vm
            rows.append(expanded[j])
        return rows

    # -- reporting ---------------------------------------------------------

    def metrics(self) -> dict:
        psi = self.ps.psi
        beta_hat = 0.0
        for node in self.nodes:
            if not node.is_leaf and node.mu_total > 0:
                beta_hat = max(
                    beta_hat,
                    node.mu_s / (psi * psi * math.sqrt(node.mu_total)),
                )
        return {
            "nodes": len(self.nodes),
            "depth": max((n.depth for n in self.nodes), default=0),
            "fallback_nodes": sum(1 for n in self.nodes if n.fallback),
            "representative_rows": sum(len(n.reps) for n in self.nodes),
            "beta_hat_max": beta_hat,
        }

    def space_bytes(self) -> int:
        bits = 0
        for node in self.nodes:
            for row in node.to_rows:
                bits += max(row.bit_length(), 1)
            for row in node.from_rows:
                bits += max(row.bit_length(), 1)
        return bits // 8 + 8 * self.ps.n

    def tree_json(self) -> dict:
        return {
            "schema": 1,
            "nodes": [
                {
                    "id": n.id,
                    "parent": n.parent,
                    "depth": n.depth,
                    "disks": n.size,
                    "mu": n.mu_total,
                    "mu_a": n.mu_a,
                    "mu_b": n.mu_b,
                    "mu_s": n.mu_s,
                    "representatives": len(n.reps),
                    "fallback": n.fallback,
                    "leaf": n.is_leaf,
                    "children": list(n.children),
                }
                for n in self.nodes
            ],
        }


def build_separator_oracle(
    ps: PointSet,
    cfg: SeparatorConfig | None = None,
    rep_choice: str = "smallest",
) -> SeparatorOracle:
    return SeparatorOracle(ps, cfg or SeparatorConfig(), rep_choice)


def query_separator(oracle: SeparatorOracle, s: int, t: int) -> bool:
    return oracle.query(s, t)
