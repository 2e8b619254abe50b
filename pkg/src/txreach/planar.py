"""Planarization-based reachability oracle for radius ratio below sqrt(3).

The transmission graph is first thinned to a sparse subgraph with the same
reachability (per-cell spanning trees plus one edge per ordered pair of
neighbouring cells), then every proper segment crossing of the straight-line
drawing is resolved by a new vertex, which preserves reachability between the
original vertices when psi < sqrt(3).  Queries run against a packed boolean
transitive closure of the resulting graph's condensation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import IndexOutOfRange, PrecisionOverflow, PsiTooLarge, WrongDimension
from .exactgeom import crossing_point, segments_properly_cross
from .grid import build_grid_index, vertex_cell
from .pointset import PointSet
from .tgraph import (
    closure_rows_from_condensation,
    component_closure_rows,
    condense_adjacency,
    enumerate_edges,
    vertex_closure_rows,
)

_NEIGHBOURHOOD = [(dx, dy) for dx in range(-3, 4) for dy in range(-3, 4)
                  if (dx, dy) != (0, 0)]

_COORD_BITS_BUDGET = 128


@dataclass(frozen=True)
class SparseGraph:
    """Reachability-preserving sparse subgraph of a transmission graph."""

    ps: PointSet
    edges: tuple[tuple[int, int], ...]
    emst_by_cell: dict          # cell -> tuple of undirected (a, b), a < b
    cross_cell_edges: dict      # (cell_from, cell_to) -> (p, q)
    nonempty_cells: int

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.ps.n)]
        for u, v in self.edges:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def edge_budget(self) -> int:
        return 2 * (self.ps.n - 1) + 49 * self.nonempty_cells


def _cell_emst(ps: PointSet, verts: list[int]) -> list[tuple[int, int]]:
    """Prim on the clique of one cell; exact squared-distance weights, ties
    broken by the smaller sorted id pair so builds are deterministic."""
    k = len(verts)
    if k <= 1:
        return []
    coords = [ps.icoords[v] for v in verts]

    def d2(i: int, j: int) -> int:
        (ax, ay), (bx, by) = coords[i], coords[j]
        return (ax - bx) ** 2 + (ay - by) ** 2

    in_tree = [False] * k
    in_tree[0] = True
    best: list[tuple[int, tuple[int, int]] | None] = [None] * k
    for j in range(1, k):
        pair = (min(verts[0], verts[j]), max(verts[0], verts[j]))
        best[j] = (d2(0, j), pair)
    edges: list[tuple[int, int]] = []
    for _ in range(k - 1):
        pick = -1
        for j in range(k):
            if not in_tree[j] and best[j] is not None:
                if pick == -1 or best[j] < best[pick]:
                    pick = j
        in_tree[pick] = True
        edges.append(best[pick][1])
        for j in range(k):
            if not in_tree[j]:
                pair = (min(verts[pick], verts[j]), max(verts[pick], verts[j]))
                cand = (d2(pick, j), pair)
                if best[j] is None or cand < best[j]:
                    best[j] = cand
    return edges


def sparsify(ps: PointSet) -> SparseGraph:
    """Per-cell spanning trees (both directions) plus, for every ordered pair
    of distinct neighbouring cells with at least one graph edge between them,
    the single closest such edge."""
    if ps.dim != 2:
        raise WrongDimension(2, ps.dim)
    gi = build_grid_index(ps, 0)
    cells = sorted(gi.buckets)
    edges: list[tuple[int, int]] = []
    emst_by_cell: dict = {}
    cross: dict = {}

    for cell in cells:
        verts = list(gi.buckets[cell])
        tree_edges = _cell_emst(ps, verts)
        emst_by_cell[cell] = tuple(tree_edges)
        for a, b in tree_edges:
            edges.append((a, b))
            edges.append((b, a))

    for cell in cells:
        kx, ky = cell
        src = gi.buckets[cell]
        for dx, dy in _NEIGHBOURHOOD:
            other = (kx + dx, ky + dy)
            dst = gi.buckets.get(other)
            if not dst:
                continue
            pick = None
            for p in src:
                cp = ps.icoords[p]
                rr = ps.iradii[p] ** 2
                for q in dst:
                    cq = ps.icoords[q]
                    d2 = (cp[0] - cq[0]) ** 2 + (cp[1] - cq[1]) ** 2
                    if d2 <= rr:
                        cand = (d2, p, q)
                        if pick is None or cand < pick:
                            pick = cand
            if pick is not None:
                cross[(cell, other)] = (pick[1], pick[2])
                edges.append((pick[1], pick[2]))

    return SparseGraph(
        ps=ps,
        edges=tuple(edges),
        emst_by_cell=emst_by_cell,
        cross_cell_edges=cross,
        nonempty_cells=len(cells),
    )


def reach_equiv_check(ps: PointSet, h: SparseGraph) -> bool:
    """All-pairs reachability of the sparse graph equals the full graph."""
    g = enumerate_edges(ps)
    h_rows = closure_rows_from_condensation(condense_adjacency(h.out_adj))
    return vertex_closure_rows(g) == h_rows


# ---------------------------------------------------------------------------
# Crossing resolution
# ---------------------------------------------------------------------------


def _segment_cells(ps: PointSet, u: int, v: int):
    """Level-0 cells overlapped by the bounding box of segment uv (exact)."""
    from .exactgeom import grid_cell_2d_axis

    (ax, ay) = ps.icoords[u]
    (bx, by) = ps.icoords[v]
    r0 = ps.r0
    kx0 = grid_cell_2d_axis(min(ax, bx), r0, 0)
    kx1 = grid_cell_2d_axis(max(ax, bx), r0, 0)
    ky0 = grid_cell_2d_axis(min(ay, by), r0, 0)
    ky1 = grid_cell_2d_axis(max(ay, by), r0, 0)
    for kx in range(kx0, kx1 + 1):
        for ky in range(ky0, ky1 + 1):
            yield (kx, ky)


def find_crossings(h: SparseGraph):
    """All proper crossings of the straight-line drawing of the sparse graph.

    Returns (segments, directions, crossings) where `segments` are the
    distinct unordered supports (u, v) with u < v, `directions[i]` flags which
    of u->v / v->u exist, and `crossings` counts proper segment pairs; each
    segment gets the sorted exact crossing parameters along it.
    """
    ps = h.ps
    seg_dirs: dict[tuple[int, int], list[bool]] = {}
    for u, v in h.edges:
        key = (u, v) if u < v else (v, u)
        flags = seg_dirs.setdefault(key, [False, False])
        flags[0 if u < v else 1] = True
    segments = sorted(seg_dirs)

    buckets: dict = {}
    for idx, (u, v) in enumerate(segments):
        for cell in _segment_cells(ps, u, v):
            buckets.setdefault(cell, []).append(idx)

    pts = ps.icoords
    hits: dict[int, list] = {}
    crossing_pairs = 0
    tested: set[tuple[int, int]] = set()
    for cell in sorted(buckets):
        group = buckets[cell]
        for ii in range(len(group)):
            i = group[ii]
            a, b = segments[i]
            pa, pb = pts[a], pts[b]
            for jj in range(ii + 1, len(group)):
                j = group[jj]
                if i < j:
                    pair = (i, j)
                else:
                    pair = (j, i)
                if pair in tested:
                    continue
                tested.add(pair)
                c, d = segments[j]
                if a == c or a == d or b == c or b == d:
                    continue
                pc, pd = pts[c], pts[d]
                if not segments_properly_cross(pa, pb, pc, pd):
                    continue
                crossing_pairs += 1
                x, y, t = crossing_point(pa, pb, pc, pd)
                if max(
                    abs(x.numerator).bit_length(), x.denominator.bit_length(),
                    abs(y.numerator).bit_length(), y.denominator.bit_length(),
                ) > _COORD_BITS_BUDGET:
                    raise PrecisionOverflow(
                        "crossing coordinates exceed the 128-bit rational budget"
                    )
                hits.setdefault(i, []).append((t, (x, y)))
                # parameter along the second segment, for its own subdivision
                _, _, t2 = crossing_point(pc, pd, pa, pb)
                hits.setdefault(j, []).append((t2, (x, y)))
    for lst in hits.values():
        lst.sort()
    return segments, seg_dirs, hits, crossing_pairs


@dataclass(frozen=True)
class PlaneGraph:
    """Plane digraph: original vertices plus one vertex per crossing point.

    Coordinates are exact rationals in the scaled-integer frame.  Every edge
    lies on a supporting sparse-graph edge with the same direction.
    """

    n_original: int
    coords: tuple[tuple[Fraction, Fraction], ...]
    out_adj: tuple[tuple[int, ...], ...]
    support: dict  # (a, b) plane edge -> (u, v) supporting directed edge
    crossing_pairs: int

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def n_crossings(self) -> int:
        return self.n - self.n_original

    def is_crossing_vertex(self, v: int) -> bool:
        return v >= self.n_original

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, adj in enumerate(self.out_adj) for v in adj]


def resolve_crossings(h: SparseGraph, experimental: bool = False) -> PlaneGraph:
    """Subdivide every support segment at its proper crossing points.

    Equivalent to resolving crossings one at a time: straight segments cross
    in at most one point, so sub-edges never develop new proper crossings.
    Touching configurations (endpoint on another edge) are left alone; they
    are not proper crossings and resolving them would not be reachability
    safe.
    """
    ps = h.ps
    _check_psi(ps, experimental)
    segments, seg_dirs, hits, crossing_pairs = find_crossings(h)

    coords: list[tuple[Fraction, Fraction]] = [
        (Fraction(x), Fraction(y)) for x, y in ps.icoords
    ]
    point_id: dict[tuple[Fraction, Fraction], int] = {}
    adj: list[list[int]] = [[] for _ in range(ps.n)]
    support: dict = {}

    def vertex_for(point) -> int:
        vid = point_id.get(point)
        if vid is None:
            vid = len(coords)
            point_id[point] = vid
            coords.append(point)
            adj.append([])
        return vid

    for idx, (u, v) in enumerate(segments):
        chain = [u]
        for _, point in hits.get(idx, ()):
            vid = vertex_for(point)
            if vid != chain[-1]:
                chain.append(vid)
        chain.append(v)
        fwd, rev = seg_dirs[(u, v)]
        if fwd:
            for a, b in zip(chain, chain[1:]):
                adj[a].append(b)
                support[(a, b)] = (u, v)
        if rev:
            for a, b in zip(chain[::-1], chain[::-1][1:]):
                adj[a].append(b)
                support[(a, b)] = (v, u)

    return PlaneGraph(
        n_original=ps.n,
        coords=tuple(coords),
        out_adj=tuple(tuple(sorted(set(a))) for a in adj),
        support=support,
        crossing_pairs=crossing_pairs,
    )


def _check_psi(ps: PointSet, experimental: bool) -> None:
    # strict inequality: psi == sqrt(3) exactly is rejected
    if ps.psi_squared_below(3):
        return
    if experimental and not ps.psi_squared_exceeds(4):
        return
    limit = "psi <= 2, experimental" if experimental else "psi < sqrt(3)"
    raise PsiTooLarge(ps.psi, limit)


def count_proper_crossings(plane: PlaneGraph) -> int:
    """Exact sweep over the embedded plane graph; must report zero.

    Candidate pairs come from conservative float bounding-box buckets; the
    crossing predicate itself is exact rational arithmetic.
    """
    segs: list[tuple[int, int]] = []
    seen = set()
    for u, v in plane.edges:
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            segs.append(key)

    # bucket width of one max edge extent keeps every segment in O(1) buckets
    width = 1.0
    fcoords = [(float(x), float(y)) for x, y in plane.coords]
    for u, v in segs:
        (ax, ay), (bx, by) = fcoords[u], fcoords[v]
        width = max(width, abs(ax - bx), abs(ay - by))

    buckets: dict = {}
    for idx, (u, v) in enumerate(segs):
        (ax, ay), (bx, by) = fcoords[u], fcoords[v]
        fx0, fx1 = sorted((ax, bx))
        fy0, fy1 = sorted((ay, by))
        for cx in range(int(fx0 / width) - 1, int(fx1 / width) + 2):
            for cy in range(int(fy0 / width) - 1, int(fy1 / width) + 2):
                buckets.setdefault((cx, cy), []).append(idx)

    def frac_orient(o, a, b):
        return ((a[0] - o[0]) * (b[1] - o[1])) - ((a[1] - o[1]) * (b[0] - o[0]))

    count = 0
    tested: set = set()
    for group in buckets.values():
        for ii in range(len(group)):
            i = group[ii]
            u, v = segs[i]
            pu, pv = plane.coords[u], plane.coords[v]
            for jj in range(ii + 1, len(group)):
                j = group[jj]
                pair = (i, j) if i < j else (j, i)
                if pair in tested:
                    continue
                tested.add(pair)
                a, b = segs[j]
                if a == u or a == v or b == u or b == v:
                    continue
                pa, pb = plane.coords[a], plane.coords[b]
                o1 = frac_orient(pu, pv, pa)
                o2 = frac_orient(pu, pv, pb)
                if (o1 > 0) == (o2 > 0) or o1 == 0 or o2 == 0:
                    continue
                o3 = frac_orient(pa, pb, pu)
                o4 = frac_orient(pa, pb, pv)
                if (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0:
                    count += 1
    return count


class PlanarOracle:
    """Constant-time standard reachability oracle backed by a packed boolean
    closure of the plane graph's condensation."""

    kind = "planar"

    def __init__(self, ps: PointSet, sparse: SparseGraph, plane: PlaneGraph):
        self.ps = ps
        self.sparse = sparse
        self.plane = plane
        cond = condense_adjacency(plane.out_adj)
        self._comp_of = cond.comp_of
        self._rows = component_closure_rows(cond)
        self._comp_count = cond.count

    def query(self, s: int, t: int) -> bool:
        n = self.plane.n_original
        if not 0 <= s < n:
            raise IndexOutOfRange(s, n)
        if not 0 <= t < n:
            raise IndexOutOfRange(t, n)
        return bool(self._rows[self._comp_of[s]] >> self._comp_of[t] & 1)

    def metrics(self) -> dict:
        return {
            "sparse_edges": len(self.sparse.edges),
            "nonempty_cells": self.sparse.nonempty_cells,
            "plane_vertices": self.plane.n,
            "plane_edges": len(self.plane.support),
            "crossings": self.plane.crossing_pairs,
            "resolutions": self.plane.n_crossings,
            "components": self._comp_count,
        }

    def space_bytes(self) -> int:
        return sum(max(r.bit_length(), 1) for r in self._rows) // 8 + 8 * self.plane.n


def build_planar_oracle(ps: PointSet, experimental: bool = False) -> PlanarOracle:
    if ps.dim != 2:
        raise WrongDimension(2, ps.dim)
    _check_psi(ps, experimental)
    sparse = sparsify(ps)
    plane = resolve_crossings(sparse, experimental=experimental)
    return PlanarOracle(ps, sparse, plane)


def query_planar(oracle: PlanarOracle, s: int, t: int) -> bool:
    return oracle.query(s, t)


def to_dot(plane: PlaneGraph) -> str:
    """Graphviz rendering; crossing vertices drawn as points."""
    lines = ["digraph plane {", "  node [shape=circle];"]
    for vid, (x, y) in enumerate(plane.coords):
        fx = float(x) / 10**6
        fy = float(y) / 10**6
        shape = ' shape=point' if plane.is_crossing_vertex(vid) else ""
        lines.append(f'  v{vid} [pos="{fx:.6f},{fy:.6f}!"{shape}];')
    for u, v in plane.edges:
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
