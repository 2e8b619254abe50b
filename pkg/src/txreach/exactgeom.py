"""Exact scaled-integer geometry kernel.

Input coordinates and radii are restricted to decimals with at most six
fractional digits and magnitude below 2**20, so everything here works on
integers scaled by 10**6.  Distance predicates, grid-cell assignment and
square/disk intersection are then decided exactly; the only irrational
constant that ever appears is sqrt(2) (2D grid cells have diameter 2**i,
hence side 2**i / sqrt(2)), and numbers of the form a + b*sqrt(2) with
integer a, b admit exact sign tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

SCALE = 10**6
MAX_MAGNITUDE = 1 << 20


def scaled_int(value: float) -> int:
    """Quantize a coordinate/radius to the internal integer scale."""
    return round(value * SCALE)


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sign_sqrt2(a: int, b: int) -> int:
    """Exact sign of a + b*sqrt(2) for integers a, b."""
    if b == 0:
        return sign(a)
    if a == 0:
        return sign(b)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    aa = a * a
    bb = 2 * b * b
    if a > 0:
        # b < 0: a + b*sqrt(2) > 0  iff  a > |b|*sqrt(2)  iff  a^2 > 2 b^2.
        return 1 if aa > bb else -1 if aa < bb else 0
    return -1 if aa > bb else 1 if aa < bb else 0


def floor_sqrt2_ratio(a: int, b: int) -> int:
    """floor(a * sqrt(2) / b) for integers a and b > 0, computed exactly."""
    if a == 0:
        return 0
    if a > 0:
        return isqrt(2 * a * a) // b
    # a*sqrt(2)/b is irrational for a != 0, so the floor of the negative
    # mirror is -(floor of the positive value) - 1.
    return -(isqrt(2 * a * a) // b) - 1


def grid_cell_1d(ix: int, r0: int, level: int) -> int:
    """Cell index of scaled coordinate ix/r0 on the level-`level` 1D grid."""
    return ix // (r0 << level)


def grid_cell_2d_axis(ix: int, r0: int, level: int) -> int:
    """One axis of the 2D cell index: floor((ix/r0) / (2**level / sqrt(2)))."""
    return floor_sqrt2_ratio(ix, r0 << level)


def _axis_gap(x2: int, k: int, r0: int) -> tuple[int, int]:
    """Gap from doubled coordinate x2 to the level-0 cell slab [k, k+1).

    Returns the gap as (a, b) meaning a + b*sqrt(2) in the doubled frame,
    where the slab boundaries sit at k*r0*sqrt(2) and (k+1)*r0*sqrt(2).
    Zero if the coordinate lies inside the closed slab.
    """
    lo = (-x2, k * r0)
    if sign_sqrt2(*lo) > 0:
        return lo
    hi = (x2, -(k + 1) * r0)
    if sign_sqrt2(*hi) > 0:
        return hi
    return (0, 0)


def disk_intersects_cell0(
    ix: int, iy: int, ir: int, kx: int, ky: int, r0: int
) -> bool:
    """Whether the closed disk (center ix,iy radius ir, all scaled by r0
    normalization) intersects the closed level-0 cell (kx, ky).

    Exact: evaluates dist(center, cell)^2 <= ir^2 in Z[sqrt(2)].
    """
    gx = _axis_gap(2 * ix, kx, r0)
    gy = _axis_gap(2 * iy, ky, r0)
    # squared gap: (a + b*sqrt2)^2 = (a^2 + 2 b^2) + 2ab*sqrt2
    da = gx[0] * gx[0] + 2 * gx[1] * gx[1] + gy[0] * gy[0] + 2 * gy[1] * gy[1]
    db = 2 * (gx[0] * gx[1] + gy[0] * gy[1])
    # compare against (2*ir)^2 in the doubled frame
    return sign_sqrt2(4 * ir * ir - da, -db) >= 0


def orient(ox: int, oy: int, ax: int, ay: int, bx: int, by: int) -> int:
    """Sign of the cross product (a - o) x (b - o)."""
    return sign((ax - ox) * (by - oy) - (ay - oy) * (bx - ox))


def segments_properly_cross(p1, p2, p3, p4) -> bool:
    """True iff open segments p1p2 and p3p4 cross transversally in a single
    interior point.  Touching configurations (shared endpoints, endpoint on
    interior, collinear overlap) are not proper crossings."""
    o1 = orient(*p1, *p2, *p3)
    o2 = orient(*p1, *p2, *p4)
    if o1 * o2 >= 0:
        return False
    o3 = orient(*p3, *p4, *p1)
    o4 = orient(*p3, *p4, *p2)
    return o3 * o4 < 0


def crossing_point(p1, p2, p3, p4) -> tuple[Fraction, Fraction, Fraction]:
    """Exact crossing point of two properly crossing segments.

    Returns (x, y, t) where t in (0, 1) is the parameter along p1p2.
    """
    dx1 = p2[0] - p1[0]
    dy1 = p2[1] - p1[1]
    dx2 = p4[0] - p3[0]
    dy2 = p4[1] - p3[1]
    den = dx1 * dy2 - dy1 * dx2
    num = (p3[0] - p1[0]) * dy2 - (p3[1] - p1[1]) * dx2
    t = Fraction(num, den)
    x = p1[0] + t * dx1
    y = p1[1] + t * dy1
    return x, y, t
