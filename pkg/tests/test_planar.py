import dataclasses
import math
import random

import pytest

from txreach.errors import PrecisionOverflow, PsiTooLarge, WrongDimension
from txreach.planar import (
    build_planar_oracle,
    count_proper_crossings,
    find_crossings,
    query_planar,
    reach_equiv_check,
    resolve_crossings,
    sparsify,
    to_dot,
)
from txreach.pointset import build_point_set
from txreach.tgraph import enumerate_edges, vertex_closure_rows
from tests.conftest import random_instance_2d


def planar_instance(rng, n, box=10.0, rhi=1.7):
    raw = []
    for _ in range(n):
        x = round(rng.uniform(0, box), 6)
        y = round(rng.uniform(0, box), 6)
        r = round(rng.uniform(1.0, rhi), 6)
        raw.append(((x, y), max(1.0, r)))
    return build_point_set(raw, 2)


def test_sparsify_requires_2d():
    ps = build_point_set([(0.0, 1.0)], 1)
    with pytest.raises(WrongDimension):
        sparsify(ps)


def test_sparsify_collinear_cell():
    # three points 0.1 apart in one cell: path spanning tree, 4 directed edges
    ps = build_point_set(
        [((0.1, 0.1), 1.0), ((0.2, 0.1), 1.0), ((0.3, 0.1), 1.0)], 2
    )
    h = sparsify(ps)
    assert h.nonempty_cells == 1
    assert sorted(h.edges) == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert not h.cross_cell_edges


def test_sparsify_two_neighbouring_cells():
    ps = build_point_set([((0.1, 0.1), 1.0), ((0.9, 0.1), 1.0)], 2)
    h = sparsify(ps)
    assert h.nonempty_cells == 2
    assert sorted(h.edges) == [(0, 1), (1, 0)]
    assert len(h.cross_cell_edges) == 2


def test_sparsify_single_point():
    ps = build_point_set([((5.0, 5.0), 2.0)], 2)
    assert sparsify(ps).edges == ()


def test_sparse_edges_are_graph_edges(rng):
    for _ in range(5):
        ps = planar_instance(rng, 40)
        h = sparsify(ps)
        for u, v in h.edges:
            assert ps.in_range(u, v)


def test_sparse_edge_budget(rng):
    for _ in range(5):
        ps = planar_instance(rng, 60)
        h = sparsify(ps)
        assert len(set(h.edges)) <= h.edge_budget


def test_reach_equivalence(rng):
    for _ in range(8):
        ps = planar_instance(rng, rng.randrange(2, 60))
        h = sparsify(ps)
        assert reach_equiv_check(ps, h)


def test_reach_equivalence_detects_mutation():
    # two one-way-connected cells: dropping the bridge changes reachability
    ps = build_point_set([((0.1, 0.1), 1.2), ((1.2, 0.1), 1.0)], 2)
    h = sparsify(ps)
    assert reach_equiv_check(ps, h)
    bridge = next(e for e in h.edges if e == (0, 1))
    mutated = dataclasses.replace(
        h, edges=tuple(e for e in h.edges if e != bridge)
    )
    assert not reach_equiv_check(ps, mutated)


def test_psi_guard():
    ps = build_point_set([((0.0, 0.0), 1.74), ((0.5, 0.5), 1.0)], 2)
    with pytest.raises(PsiTooLarge):
        build_planar_oracle(ps)
    # experimental window admits sqrt(3) <= psi <= 2
    build_planar_oracle(ps, experimental=True)
    ps2 = build_point_set([((0.0, 0.0), 2.5), ((0.5, 0.5), 1.0)], 2)
    with pytest.raises(PsiTooLarge):
        build_planar_oracle(ps2, experimental=True)
    ps3 = build_point_set([((0.0, 0.0), 1.73), ((0.5, 0.5), 1.0)], 2)
    build_planar_oracle(ps3)  # 1.73 < sqrt(3)


CROSSING_4PT = [
    ((0.0, 0.0), 1.5),    # p: edge p->q crosses u->v
    ((1.2, 1.2), 1.0),    # q
    ((1.0, 0.2), 1.5),    # u
    ((0.2, 1.0), 1.0),    # v
]


def test_resolve_simple_crossing():
    ps = build_point_set(CROSSING_4PT, 2)
    h = sparsify(ps)
    # restrict to exactly the two crossing edges
    h = dataclasses.replace(h, edges=((0, 1), (2, 3)))
    plane = resolve_crossings(h)
    assert plane.n_crossings == 1
    assert len(plane.support) == 4
    assert count_proper_crossings(plane) == 0


def test_resolve_bidirected_crossing():
    ps = build_point_set(CROSSING_4PT, 2)
    h = sparsify(ps)
    h = dataclasses.replace(h, edges=((0, 1), (1, 0), (2, 3), (3, 2)))
    plane = resolve_crossings(h)
    assert plane.n_crossings == 1
    assert len(plane.support) == 8
    assert count_proper_crossings(plane) == 0


def test_resolve_no_crossings_is_identity():
    ps = build_point_set([((0.1, 0.1), 1.0), ((0.9, 0.1), 1.0)], 2)
    h = sparsify(ps)
    plane = resolve_crossings(h)
    assert plane.n_crossings == 0
    assert sorted(plane.edges) == sorted(set(h.edges))


def test_vertex_budget_equals_resolutions(rng):
    for _ in range(5):
        ps = planar_instance(rng, 50)
        h = sparsify(ps)
        plane = resolve_crossings(h)
        assert plane.n - plane.n_original == plane.n_crossings


def test_planarity_after_resolution(rng):
    for _ in range(5):
        ps = planar_instance(rng, 60)
        plane = resolve_crossings(sparsify(ps))
        assert count_proper_crossings(plane) == 0


def test_supports_preserve_direction(rng):
    ps = planar_instance(rng, 40)
    h = sparsify(ps)
    hset = set(h.edges)
    plane = resolve_crossings(h)
    for (a, b), (u, v) in plane.support.items():
        assert (u, v) in hset
        # the sub-edge endpoints lie on the segment uv in its direction
        (ux, uy) = plane.coords[u]
        (vx, vy) = plane.coords[v]
        for w in (a, b):
            wx, wy = plane.coords[w]
            cross = (vx - ux) * (wy - uy) - (vy - uy) * (wx - ux)
            assert cross == 0
        da = (plane.coords[a][0] - ux) ** 2 + (plane.coords[a][1] - uy) ** 2
        db = (plane.coords[b][0] - ux) ** 2 + (plane.coords[b][1] - uy) ** 2
        assert da < db


def test_local_crossing_property(rng):
    # crossing edges pq, uv with psi < sqrt(3): p reaches v, u reaches q in
    # the 4-vertex induced transmission graph (exhaustive version runs in the
    # acceptance suite)
    found = 0
    while found < 200:
        pts = [
            (round(rng.uniform(0, 3), 6), round(rng.uniform(0, 3), 6))
            for _ in range(4)
        ]
        radii = [round(rng.uniform(1.0, 1.72), 6) for _ in range(4)]
        ps = build_point_set(list(zip(pts, radii)), 2)
        if not (ps.in_range(0, 1) and ps.in_range(2, 3)):
            continue
        a, b, c, d = ps.icoords
        from txreach.exactgeom import segments_properly_cross

        if not segments_properly_cross(a, b, c, d):
            continue
        found += 1
        g = enumerate_edges(ps)
        rows = vertex_closure_rows(g)
        assert rows[0] >> 3 & 1, f"p must reach v: {pts} {radii}"
        assert rows[2] >> 1 & 1, f"u must reach q: {pts} {radii}"


def test_oracle_two_mutual_points():
    ps = build_point_set([((0.0, 0.0), 1.0), ((0.5, 0.0), 1.0)], 2)
    oracle = build_planar_oracle(ps)
    for s in range(2):
        for t in range(2):
            assert query_planar(oracle, s, t)


def test_oracle_differential(rng):
    for trial in range(6):
        ps = planar_instance(rng, 80)
        oracle = build_planar_oracle(ps)
        rows = vertex_closure_rows(enumerate_edges(ps))
        for s in range(ps.n):
            for t in range(ps.n):
                assert oracle.query(s, t) == bool(rows[s] >> t & 1)


def test_oracle_directional_chain():
    # chain of cells passing reachability left to right only
    pts = []
    for k in range(6):
        pts.append(((k * 1.05, 0.0), 1.1 if k < 5 else 1.0))
    # shrink backward reach: radii decreasing makes some back edges vanish
    raw = [((x, y), r) for (x, y), r in pts]
    raw[0] = ((0.0, 0.0), 1.1)
    ps = build_point_set(raw, 2)
    oracle = build_planar_oracle(ps)
    rows = vertex_closure_rows(enumerate_edges(ps))
    for s in range(ps.n):
        for t in range(ps.n):
            assert oracle.query(s, t) == bool(rows[s] >> t & 1)


def test_crossing_count_linear(rng):
    worst = 0.0
    for _ in range(5):
        ps = planar_instance(rng, 70)
        h = sparsify(ps)
        _, _, _, crossings = find_crossings(h)
        worst = max(worst, crossings / ps.n)
    assert worst <= 64.0


def test_precision_overflow_raises():
    # bypass the format guard with synthetic huge scaled integers; the
    # crossing coordinates then blow the 128-bit rational budget
    from txreach.pointset import PointSet

    big = 1 << 70
    ps = PointSet(
        dim=2,
        icoords=((0, 0), (big, big + 1), (big, 0), (1, big)),
        iradii=(big, big, big, big),
        r0=big,
    )
    h = sparsify(ps)
    h = dataclasses.replace(h, edges=((0, 1), (2, 3)))
    with pytest.raises(PrecisionOverflow):
        resolve_crossings(h)


def test_to_dot_smoke(rng):
    ps = planar_instance(rng, 20)
    plane = resolve_crossings(sparsify(ps))
    text = to_dot(plane)
    assert text.startswith("digraph")
    if plane.n_crossings:
        assert "shape=point" in text
