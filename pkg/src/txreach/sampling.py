"""Randomized reachability oracle: sampled landmarks plus level grids.

Long paths are caught by a Bernoulli sample of vertices with stored forward
and backward reachability rows; pairs joined only by short paths are caught
deterministically by per-level grid neighbourhoods, where each cell with a
radius-matched vertex elects a representative whose local reachability is
recorded in sorted per-vertex cell lists.  Answers are one-sided: YES always
carries a witness, NO may (rarely) miss a long path the sample skipped.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass

import numpy as np

from .errors import WrongDimension
from .grid import vertex_cell
from .pointset import PointSet
from .tgraph import TransmissionGraph, enumerate_edges

ALPHA_MIN = 0.05
ALPHA_MAX = 0.95


def choose_alpha(n: int, psi: float) -> float:
    """Exponent balancing the sample-table and level-list query costs.

    Solves n**alpha = n**(2/3) * (max(log2 psi, 1) / log2 n)**(1/3), clamped
    to [0.05, 0.95].
    """
    if n < 2:
        raise ValueError("choose_alpha needs n >= 2")
    ratio = max(math.log2(psi), 1.0) / math.log2(n)
    alpha = 2.0 / 3.0 + math.log(ratio) / (3.0 * math.log(n))
    return min(ALPHA_MAX, max(ALPHA_MIN, alpha))


def sample_intensity(n: int, alpha: float) -> float:
    """Expected sample mass m = 4 * n**alpha * ln n."""
    return 4.0 * n**alpha * math.log(n)


def sample_hitting_set(n: int, alpha: float, seed: int) -> list[int]:
    """Independent Bernoulli(min(1, m/n)) per vertex, in id order, from a
    seeded PCG64 stream; a pure function of (seed, n, alpha)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    m = sample_intensity(n, alpha)
    p = min(1.0, m / n)
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random(n)
    return [v for v in range(n) if draws[v] < p]


def _level_count(ps: PointSet) -> int:
    """ceil(log2 psi), exact on scaled radii; at least one level exists."""
    rmax = max(ps.iradii)
    level = 0
    while (ps.r0 << level) < rmax:
        level += 1
    return level


@dataclass(frozen=True)
class SampleTables:
    sample: tuple[int, ...]
    reaches: tuple[int, ...]      # per sampled vertex: bitset over all vertices
    reached_by: tuple[int, ...]   # per sampled vertex: bitset over all vertices
    seed: int
    alpha: float
    intensity: float


@dataclass(frozen=True)
class LevelLists:
    levels: int                     # L = ceil(log2 psi)
    cell_index: tuple               # per level: dict cell -> dense sigma id
    cell_rep: tuple                 # per level: tuple of rep vertex per sigma
    from_lists: tuple               # per vertex: per level: sorted array of sigma
    to_lists: tuple                 # per vertex: per level: sorted array of sigma


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


class SampleOracle:
    kind = "sample"

    def __init__(self, ps: PointSet, seed: int, alpha: float | None = None,
                 sample_ids: list[int] | None = None,
                 graph: TransmissionGraph | None = None):
        if ps.dim != 2:
            raise WrongDimension(2, ps.dim)
        self.ps = ps
        n = ps.n
        self.graph = graph if graph is not None else enumerate_edges(ps)
        self.alpha = choose_alpha(max(n, 2), ps.psi) if alpha is None else alpha

        out_masks = self.graph.out_masks
        in_masks = [0] * n
        for u, targets in enumerate(self.graph.out_adj):
            bit = 1 << u
            for v in targets:
                in_masks[v] |= bit
        all_mask = (1 << n) - 1

        if sample_ids is None:
            sample_ids = sample_hitting_set(n, self.alpha, seed)
        sample_ids = sorted(sample_ids)
        reaches = []
        reached_by = []
        for s in sample_ids:
            reaches.append(_bfs_mask(out_masks, s, all_mask))
            reached_by.append(_bfs_mask(in_masks, s, all_mask))
        self.tables = SampleTables(
            sample=tuple(sample_ids),
            reaches=tuple(reaches),
            reached_by=tuple(reached_by),
            seed=seed,
            alpha=self.alpha,
            intensity=sample_intensity(n, self.alpha),
        )

        self.levels = _level_count(ps)
        # neighbourhood threshold in whole cells: two level-i cells are
        # neighbours when their box gap g (in cell units) satisfies
        # g^2 * side^2 <= (2^(i+1) n^(1-alpha))^2, i.e. gap2 <= 8 n^(2-2alpha)
        self._gap_budget = 8.0 * n ** (2.0 - 2.0 * self.alpha)

        cell_index_by_level = []
        cell_rep_by_level = []
        from_lists = [[array("l") for _ in range(self.levels + 1)]
                      for _ in range(n)]
        to_lists = [[array("l") for _ in range(self.levels + 1)]
                    for _ in range(n)]

        for level in range(self.levels + 1):
            lo = ps.r0 << level
            hi = ps.r0 << (level + 1)
            cells_of_all = [vertex_cell(ps, v, level) for v in range(n)]
            in_band: dict = {}
            for v in range(n):
                if lo <= ps.iradii[v] < hi:
                    in_band.setdefault(cells_of_all[v], []).append(v)
            sigmas = sorted(in_band)
            cell_index = {cell: j for j, cell in enumerate(sigmas)}
            reps = tuple(min(in_band[cell]) for cell in sigmas)
            cell_index_by_level.append(cell_index)
            cell_rep_by_level.append(reps)

            occupied: dict = {}
            for v in range(n):
                occupied.setdefault(cells_of_all[v], []).append(v)
            occ_cells = sorted(occupied)

            for j, sigma in enumerate(sigmas):
                members = 0
                sx, sy = sigma
                for cell in occ_cells:
                    gx = max(abs(cell[0] - sx) - 1, 0)
                    gy = max(abs(cell[1] - sy) - 1, 0)
                    if gx * gx + gy * gy <= self._gap_budget:
                        for v in occupied[cell]:
                            members |= 1 << v
                rep = reps[j]
                fwd = _bfs_mask(out_masks, rep, members)
                bwd = _bfs_mask(in_masks, rep, members)
                bits = fwd
                while bits:
                    v = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    to_lists[v][level].append(j)
                bits = bwd
                while bits:
                    v = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    from_lists[v][level].append(j)

        self.lists = LevelLists(
            levels=self.levels,
            cell_index=tuple(cell_index_by_level),
            cell_rep=tuple(cell_rep_by_level),
            from_lists=tuple(tuple(per) for per in from_lists),
            to_lists=tuple(tuple(per) for per in to_lists),
        )

    # -- queries -----------------------------------------------------------

    def query(self, s: int, t: int) -> bool:
        return self.explain(s, t) is not None

    def explain(self, s: int, t: int):
        """Witness for a YES answer, or None for NO.

        Witnesses are ('trivial',), ('sample', x) with s -> x -> t, or
        ('cell', level, rep) with s -> rep -> t.
        """
        self.ps.check_vertex(s)
        self.ps.check_vertex(t)
        if s == t:
            return ("trivial",)
        tables = self.tables
        for i, x in enumerate(tables.sample):
            if tables.reached_by[i] >> s & 1 and tables.reaches[i] >> t & 1:
                return ("sample", x)
        for level in range(self.levels + 1):
            a = self.lists.from_lists[s][level]
            b = self.lists.to_lists[t][level]
            j = self._first_common(a, b)
            if j is not None:
                return ("cell", level, self.lists.cell_rep[level][j])
        return None

    @staticmethod
    def _first_common(a, b):
        i = j = 0
        la, lb = len(a), len(b)
        while i < la and j < lb:
            if a[i] == b[j]:
                return a[i]
            if a[i] < b[j]:
                i += 1
            else:
                j += 1
        return None

    def answer_matrix(self) -> list[int]:
        """All answers at once; identical semantics to query()."""
        n = self.ps.n
        rows = [1 << s for s in range(n)]
        tables = self.tables
        for i in range(len(tables.sample)):
            targets = tables.reaches[i]
            bits = tables.reached_by[i]
            while bits:
                s = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                rows[s] |= targets
        for level in range(self.levels + 1):
            sigma_sources: dict[int, list[int]] = {}
            for s in range(n):
                for j in self.lists.from_lists[s][level]:
                    sigma_sources.setdefault(j, []).append(s)
            sigma_targets: dict[int, int] = {}
            for t in range(n):
                for j in self.lists.to_lists[t][level]:
                    sigma_targets[j] = sigma_targets.get(j, 0) | (1 << t)
            for j, sources in sigma_sources.items():
                tmask = sigma_targets.get(j)
                if tmask:
                    for s in sources:
                        rows[s] |= tmask
        return rows

    # -- reporting ---------------------------------------------------------

    def metrics(self) -> dict:
        list_sizes = [
            sum(len(self.lists.from_lists[v][i]) + len(self.lists.to_lists[v][i])
                for v in range(self.ps.n))
            for i in range(self.levels + 1)
        ]
        return {
            "alpha": self.alpha,
            "sample_size": len(self.tables.sample),
            "intensity": self.tables.intensity,
            "levels": self.levels + 1,
            "level_list_entries": list_sizes,
            "seed": self.tables.seed,
        }

    def space_bytes(self) -> int:
        bits = 0
        for row in self.tables.reaches:
            bits += max(row.bit_length(), 1)
        for row in self.tables.reached_by:
            bits += max(row.bit_length(), 1)
        entries = sum(
            len(self.lists.from_lists[v][i]) + len(self.lists.to_lists[v][i])
            for v in range(self.ps.n) for i in range(self.levels + 1)
        )
        return bits // 8 + 8 * entries


def build_sample_oracle(ps: PointSet, seed: int, alpha: float | None = None,
                        sample_ids: list[int] | None = None) -> SampleOracle:
    return SampleOracle(ps, seed, alpha=alpha, sample_ids=sample_ids)


def query_sample(oracle: SampleOracle, s: int, t: int) -> bool:
    return oracle.query(s, t)
