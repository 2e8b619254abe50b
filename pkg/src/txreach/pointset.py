"""Point sets with transmission radii, and the text instance format.

A point set is normalized so that the smallest radius equals 1; the radius
ratio psi is max radius / min radius.  Normalization is a uniform rescale of
the whole input, so distance predicates can be (and are) evaluated on the raw
scaled-integer values, which keeps every comparison exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    EmptyInput,
    IndexOutOfRange,
    NonFiniteCoordinate,
    NonPositiveRadius,
    ParseError,
    WrongDimension,
)
from .exactgeom import MAX_MAGNITUDE, SCALE, scaled_int


@dataclass(frozen=True)
class PointSet:
    """Immutable set of points with associated transmission radii.

    `icoords` and `iradii` hold the raw input values scaled by 10**6; the
    normalized view (min radius == 1) divides them by `r0 = min(iradii)`.
    Vertex ids are input-order indices, starting at 0.
    """

    dim: int
    icoords: tuple[tuple[int, ...], ...]
    iradii: tuple[int, ...]
    r0: int

    @property
    def n(self) -> int:
        return len(self.iradii)

    @cached_property
    def coords(self) -> tuple[tuple[float, ...], ...]:
        """Normalized coordinates as floats (presentation only)."""
        r0 = self.r0
        return tuple(tuple(c / r0 for c in pt) for pt in self.icoords)

    @cached_property
    def radii(self) -> tuple[float, ...]:
        """Normalized radii as floats; the minimum is exactly 1.0."""
        r0 = self.r0
        return tuple(r / r0 for r in self.iradii)

    @cached_property
    def psi(self) -> float:
        return float(Fraction(max(self.iradii), self.r0))

    def psi_squared_exceeds(self, num: int, den: int = 1) -> bool:
        """Exact test psi^2 > num/den."""
        rmax = max(self.iradii)
        return rmax * rmax * den > num * self.r0 * self.r0

    def psi_squared_below(self, num: int, den: int = 1) -> bool:
        """Exact test psi^2 < num/den."""
        rmax = max(self.iradii)
        return rmax * rmax * den < num * self.r0 * self.r0

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexOutOfRange(v, self.n)

    def in_range(self, p: int, q: int) -> bool:
        """Exact edge predicate: |pq| <= r_p (closed disks)."""
        cp = self.icoords[p]
        cq = self.icoords[q]
        d2 = 0
        for a, b in zip(cp, cq):
            d = a - b
            d2 += d * d
        r = self.iradii[p]
        return d2 <= r * r


def _validate_value(value: float, index: int) -> None:
    if not math.isfinite(value):
        raise NonFiniteCoordinate(index, value)
    if abs(value) >= MAX_MAGNITUDE:
        raise NonFiniteCoordinate(index, value)


def build_point_set(raw: Sequence[tuple], dim: int) -> PointSet:
    """Build a PointSet from (coords, radius) pairs.

    `coords` may be a scalar (1D) or a sequence of `dim` floats.  Values are
    quantized to six fractional decimal digits; the instance format only
    admits such values, so quantization is exact for conforming input.
    """
    if dim not in (1, 2):
        raise WrongDimension(2, dim)
    raw = list(raw)
    if not raw:
        raise EmptyInput("no points given")

    icoords: list[tuple[int, ...]] = []
    iradii: list[int] = []
    for index, (coords, radius) in enumerate(raw):
        if isinstance(coords, (int, float)):
            coords = (coords,)
        coords = tuple(coords)
        if len(coords) != dim:
            raise DimensionMismatch(dim, len(coords))
        for c in coords:
            _validate_value(c, index)
        if not math.isfinite(radius):
            raise NonPositiveRadius(index, radius)
        if abs(radius) >= MAX_MAGNITUDE:
            raise NonPositiveRadius(index, radius)
        ir = scaled_int(radius)
        if ir <= 0:
            raise NonPositiveRadius(index, radius)
        icoords.append(tuple(scaled_int(c) for c in coords))
        iradii.append(ir)

    return PointSet(
        dim=dim,
        icoords=tuple(icoords),
        iradii=tuple(iradii),
        r0=min(iradii),
    )


_VALUE_RE = re.compile(r"^[+-]?\d+(\.\d{1,6})?$")


def _parse_value(token: str, lineno: int) -> float:
    if not _VALUE_RE.match(token):
        raise ParseError(lineno, f"bad numeric token {token!r} "
                                 "(decimal, at most 6 fractional digits)")
    value = float(token)
    if abs(value) >= MAX_MAGNITUDE:
        raise ParseError(lineno, f"magnitude of {token} exceeds 2**20")
    return value


def parse_instance(text: str) -> PointSet:
    """Parse the text instance format.

    Line 1: ``tg <dim> <n>``; then n data lines (``x r`` in 1D, ``x y r`` in
    2D).  ``#`` starts a comment; blank lines are ignored.  Radii are the raw
    pre-normalization values.
    """
    header = None
    rows: list[tuple[tuple[float, ...], float]] = []
    dim = n = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        if header is None:
            if len(tokens) != 3 or tokens[0] != "tg":
                raise ParseError(lineno, "expected header 'tg <dim> <n>'")
            try:
                dim = int(tokens[1])
                n = int(tokens[2])
            except ValueError:
                raise ParseError(lineno, "non-integer dim or n in header")
            if dim not in (1, 2):
                raise ParseError(lineno, f"dim must be 1 or 2, got {dim}")
            if n <= 0:
                raise ParseError(lineno, f"n must be positive, got {n}")
            header = (dim, n)
            continue
        if len(tokens) != dim + 1:
            raise ParseError(lineno, f"expected {dim + 1} values, got {len(tokens)}")
        values = [_parse_value(t, lineno) for t in tokens]
        rows.append((tuple(values[:dim]), values[dim]))

    if header is None:
        raise ParseError(1, "empty instance (missing header)")
    if len(rows) != n:
        raise ParseError(0, f"header declares {n} points, file has {len(rows)}")
    return build_point_set(rows, dim)


def format_scaled(v: int) -> str:
    """Canonical decimal rendering of a scaled integer (minimal digits)."""
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, frac = divmod(v, SCALE)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:06d}".rstrip("0")


def emit_instance(ps: PointSet) -> str:
    """Canonical text rendering; parse(emit(ps)) reproduces ps exactly."""
    lines = [f"tg {ps.dim} {ps.n}"]
    for pt, ir in zip(ps.icoords, ps.iradii):
        fields = [format_scaled(c) for c in pt] + [format_scaled(ir)]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def load_instance(path) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())
