"""Hierarchical grids, cell assignment, and the disk-union area proxy.

The level-i grid partitions space into axis-parallel cells of diameter 2**i
anchored at the origin: intervals of length 2**i in 1D, squares of side
2**i / sqrt(2) in 2D.  Cell ids are floor(coordinate / side) per axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import WrongDimension
from .exactgeom import (
    disk_intersects_cell0,
    floor_sqrt2_ratio,
    grid_cell_1d,
    grid_cell_2d_axis,
)
from .pointset import PointSet

Cell = tuple[int, ...]


def grid_cell(point, level: int):
    """Cell id containing `point` (a float, or a pair of floats) at `level`.

    Pure and total for finite inputs.  The float is taken at its exact binary
    value, so boundary behaviour is deterministic.
    """
    if isinstance(point, (int, float)):
        a, b = float(point).as_integer_ratio()
        return a // (b << level)
    pt = tuple(point)
    if len(pt) == 1:
        a, b = float(pt[0]).as_integer_ratio()
        return a // (b << level)
    if len(pt) != 2:
        raise WrongDimension(2, len(pt))
    out = []
    for c in pt:
        a, b = float(c).as_integer_ratio()
        out.append(floor_sqrt2_ratio(a, b << level))
    return tuple(out)


def vertex_cell(ps: PointSet, v: int, level: int) -> Cell:
    """Exact cell of vertex v at `level` (computed on scaled integers)."""
    pt = ps.icoords[v]
    if ps.dim == 1:
        return (grid_cell_1d(pt[0], ps.r0, level),)
    return (
        grid_cell_2d_axis(pt[0], ps.r0, level),
        grid_cell_2d_axis(pt[1], ps.r0, level),
    )


def coord_cell_axis(ps: PointSet, scaled: int, level: int) -> int:
    """Exact axis cell index for an arbitrary scaled coordinate value."""
    if ps.dim == 1:
        return grid_cell_1d(scaled, ps.r0, level)
    return grid_cell_2d_axis(scaled, ps.r0, level)


@dataclass(frozen=True)
class GridIndex:
    """Bucketing of all vertices of a point set into one grid level."""

    level: int
    dim: int
    buckets: dict  # Cell -> tuple of vertex ids, sorted ascending

    def bucket(self, cell: Cell) -> tuple:
        return self.buckets.get(cell, ())


def build_grid_index(ps: PointSet, level: int) -> GridIndex:
    if level < 0:
        raise ValueError("grid level must be >= 0")
    buckets: dict[Cell, list[int]] = {}
    for v in range(ps.n):
        buckets.setdefault(vertex_cell(ps, v, level), []).append(v)
    return GridIndex(
        level=level,
        dim=ps.dim,
        buckets={c: tuple(ids) for c, ids in buckets.items()},
    )


# ---------------------------------------------------------------------------
# Level-0 disk coverage (2D): which cells does a closed disk intersect?
# ---------------------------------------------------------------------------

_SIDE0 = 2.0**-0.5  # float side length of a level-0 cell, prefilter only


def disk_cell_cover(ps: PointSet, v: int) -> frozenset[Cell]:
    """Exact set of level-0 cells whose closed square meets D(v).

    A vectorized float prefilter classifies cells that are clearly inside or
    clearly outside; only cells near the disk boundary fall back to the exact
    Z[sqrt(2)] test.
    """
    if ps.dim != 2:
        raise WrongDimension(2, ps.dim)
    ix, iy = ps.icoords[v]
    ir = ps.iradii[v]
    r0 = ps.r0

    kx_lo = grid_cell_2d_axis(ix - ir, r0, 0)
    kx_hi = grid_cell_2d_axis(ix + ir, r0, 0)
    ky_lo = grid_cell_2d_axis(iy - ir, r0, 0)
    ky_hi = grid_cell_2d_axis(iy + ir, r0, 0)

    x = ix / r0
    y = iy / r0
    r = ir / r0
    kxs = np.arange(kx_lo, kx_hi + 1)
    kys = np.arange(ky_lo, ky_hi + 1)
    gx = np.maximum(np.maximum(kxs * _SIDE0 - x, x - (kxs + 1) * _SIDE0), 0.0)
    gy = np.maximum(np.maximum(kys * _SIDE0 - y, y - (kys + 1) * _SIDE0), 0.0)
    mind2 = gx[:, None] ** 2 + gy[None, :] ** 2

    m = max(abs(x) + r, abs(y) + r, 1.0)
    margin = 1e-9 * m * m
    inside = mind2 <= r * r - margin
    uncertain = ~inside & (mind2 <= r * r + margin)

    cover = set()
    for i, j in zip(*np.nonzero(inside)):
        cover.add((int(kxs[i]), int(kys[j])))
    for i, j in zip(*np.nonzero(uncertain)):
        kx = int(kxs[i])
        ky = int(kys[j])
        if disk_intersects_cell0(ix, iy, ir, kx, ky, r0):
            cover.add((kx, ky))
    return frozenset(cover)


@dataclass(frozen=True)
class AreaProxy:
    """Number (and ids) of level-0 cells meeting the union of all disks."""

    cell_count: int
    cells: tuple[Cell, ...]  # sorted


def union_cell_count(covers: Sequence[frozenset]) -> int:
    seen: set = set()
    for c in covers:
        seen |= c
    return len(seen)


def area_proxy(ps: PointSet) -> AreaProxy:
    """Area proxy of the full disk system (2D only)."""
    if ps.dim != 2:
        raise WrongDimension(2, ps.dim)
    cells: set[Cell] = set()
    for v in range(ps.n):
        cells |= disk_cell_cover(ps, v)
    ordered = tuple(sorted(cells))
    return AreaProxy(cell_count=len(ordered), cells=ordered)
