import math
import random

import pytest

from txreach.errors import IndexOutOfRange, WrongDimension
from txreach.pointset import build_point_set
from txreach.sampling import (
    build_sample_oracle,
    choose_alpha,
    query_sample,
    sample_hitting_set,
)
from txreach.tgraph import enumerate_edges, vertex_closure_rows
from tests.conftest import random_instance_2d


def test_choose_alpha_ratio_one():
    # log2(psi) == log2(n): the cube-root factor is 1, alpha = 2/3
    assert choose_alpha(1024, 1024.0) == pytest.approx(2.0 / 3.0)


def test_choose_alpha_frozen_example():
    # n=1024, psi=2: alpha = 2/3 + log(1/10) / (3 ln 1024) = 0.5559357...
    want = 2.0 / 3.0 + math.log(0.1) / (3.0 * math.log(1024))
    got = choose_alpha(1024, 2.0)
    assert got == pytest.approx(want)
    assert got == pytest.approx(0.5559357, abs=1e-6)


def test_choose_alpha_clamps():
    a = choose_alpha(4, 1.0)
    assert 0.05 <= a <= 0.95
    assert choose_alpha(2, 2.0 ** 40) == 0.95


def test_sample_all_when_intensity_high():
    # m/n >= 1 -> every vertex sampled
    s = sample_hitting_set(50, 0.9, seed=3)
    assert s == list(range(50))


def test_sample_empty_for_single_vertex():
    # ln 1 = 0 gives zero intensity
    assert sample_hitting_set(1, 0.5, seed=9) == []


def test_sample_deterministic():
    a = sample_hitting_set(100, 0.3, seed=42)
    b = sample_hitting_set(100, 0.3, seed=42)
    c = sample_hitting_set(100, 0.3, seed=43)
    assert a == b
    assert a != c
    assert a == sorted(a)


def test_oracle_requires_2d():
    ps = build_point_set([(0.0, 1.0)], 1)
    with pytest.raises(WrongDimension):
        build_sample_oracle(ps, seed=1)


def test_single_vertex_oracle():
    ps = build_point_set([((2.0, 2.0), 1.0)], 2)
    oracle = build_sample_oracle(ps, seed=5)
    assert oracle.query(0, 0)
    assert oracle.tables.sample == ()


def test_one_edge_pair_covered_by_level_zero():
    # both radii in [1, 2): level-0 representative witnesses the edge even
    # with an empty sample
    ps = build_point_set([((0.0, 0.0), 1.5), ((1.2, 0.0), 1.5)], 2)
    oracle = build_sample_oracle(ps, seed=0, sample_ids=[])
    assert oracle.query(0, 1)
    assert oracle.query(1, 0)
    kind = oracle.explain(0, 1)[0]
    assert kind == "cell"


def test_soundness_witnesses(rng):
    for _ in range(4):
        ps = random_instance_2d(rng, 60, 8.0, 25.0)
        oracle = build_sample_oracle(ps, seed=rng.randrange(2**32), alpha=0.3)
        rows = vertex_closure_rows(enumerate_edges(ps))
        for s in range(ps.n):
            for t in range(ps.n):
                w = oracle.explain(s, t)
                if w is None:
                    continue
                # every YES carries a verifiable witness
                if w[0] == "trivial":
                    assert s == t
                elif w[0] == "sample":
                    x = w[1]
                    assert rows[s] >> x & 1 and rows[x] >> t & 1
                else:
                    _, _, rep = w
                    assert rows[s] >> rep & 1 and rows[rep] >> t & 1


def test_no_false_positives(rng):
    for _ in range(4):
        ps = random_instance_2d(rng, 50, 4.0, 30.0)
        oracle = build_sample_oracle(ps, seed=7)
        rows = vertex_closure_rows(enumerate_edges(ps))
        got = oracle.answer_matrix()
        for s in range(ps.n):
            assert got[s] & ~rows[s] == 0


def test_short_path_completeness_with_empty_sample(rng):
    ps = random_instance_2d(rng, 60, 4.0, 14.0)
    oracle = build_sample_oracle(ps, seed=0, sample_ids=[])
    g = enumerate_edges(ps)
    limit = ps.n ** (1.0 - oracle.alpha)
    got = oracle.answer_matrix()
    for s in range(ps.n):
        # BFS hop counts
        dist = [-1] * ps.n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.out_adj[u]:
                    if dist[v] == -1:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for t in range(ps.n):
            if 0 <= dist[t] < limit:
                assert got[s] >> t & 1, (s, t, dist[t])


def test_long_chain_detected_via_sample():
    # a chain spanning far beyond the level-list neighbourhood: only the
    # sampled landmarks can witness the endpoints pair
    n = 200
    raw = [((round(0.9 * k, 6), 0.0), 1.0) for k in range(n)]
    ps = build_point_set(raw, 2)
    oracle = build_sample_oracle(ps, seed=11, alpha=0.3)
    w = oracle.explain(0, n - 1)
    assert w is not None and w[0] == "sample"
    # with the sample removed the pair is genuinely missed (one-sided error)
    blind = build_sample_oracle(ps, seed=11, alpha=0.3, sample_ids=[])
    assert not blind.query(0, n - 1)


def test_clique_property_of_level_cells(rng):
    ps = random_instance_2d(rng, 80, 16.0, 30.0)
    oracle = build_sample_oracle(ps, seed=3)
    from txreach.grid import vertex_cell

    for level in range(oracle.levels + 1):
        lo = ps.r0 << level
        hi = ps.r0 << (level + 1)
        groups: dict = {}
        for v in range(ps.n):
            if lo <= ps.iradii[v] < hi:
                groups.setdefault(vertex_cell(ps, v, level), []).append(v)
        for cell, vs in groups.items():
            assert cell in oracle.lists.cell_index[level]
            for a in vs:
                for b in vs:
                    if a != b:
                        assert ps.in_range(a, b)


def test_neighbourhood_symmetry():
    # the gap metric is symmetric, so sigma in N(tau) iff tau in N(sigma)
    budget = 8.0 * 50 ** (2.0 - 2.0 * 0.5)
    rng = random.Random(5)
    for _ in range(200):
        c1 = (rng.randrange(-20, 20), rng.randrange(-20, 20))
        c2 = (rng.randrange(-20, 20), rng.randrange(-20, 20))
        gx = max(abs(c1[0] - c2[0]) - 1, 0)
        gy = max(abs(c1[1] - c2[1]) - 1, 0)
        assert (gx * gx + gy * gy <= budget) == (
            max(abs(c2[0] - c1[0]) - 1, 0) ** 2
            + max(abs(c2[1] - c1[1]) - 1, 0) ** 2
            <= budget
        )


def test_query_matches_answer_matrix(rng):
    ps = random_instance_2d(rng, 60, 6.0, 20.0)
    oracle = build_sample_oracle(ps, seed=21, alpha=0.35)
    rows = oracle.answer_matrix()
    for _ in range(500):
        s = rng.randrange(ps.n)
        t = rng.randrange(ps.n)
        assert oracle.query(s, t) == bool(rows[s] >> t & 1)


def test_index_errors():
    ps = build_point_set([((0.0, 0.0), 1.0), ((0.5, 0.5), 1.0)], 2)
    oracle = build_sample_oracle(ps, seed=1)
    with pytest.raises(IndexOutOfRange):
        query_sample(oracle, 9, 0)


def test_determinism_same_seed(rng):
    ps = random_instance_2d(rng, 40, 4.0, 12.0)
    a = build_sample_oracle(ps, seed=123)
    b = build_sample_oracle(ps, seed=123)
    assert a.tables.sample == b.tables.sample
    assert a.answer_matrix() == b.answer_matrix()
