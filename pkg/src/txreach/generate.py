"""Deterministic random instance generation for the benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .pointset import PointSet, build_point_set, emit_instance

_MAX_COORD = float(1 << 19)


@dataclass(frozen=True)
class RadiusLaw:
    kind: str                  # uniform | two-scale | constant
    params: tuple[float, ...]

    def validate(self) -> None:
        if self.kind == "uniform":
            if len(self.params) != 2:
                raise InvalidSpec("uniform law takes (lo, hi)")
            lo, hi = self.params
            if not 1e-6 <= lo <= hi:
                raise InvalidSpec(f"bad uniform radius range ({lo}, {hi})")
        elif self.kind == "two-scale":
            if len(self.params) != 3:
                raise InvalidSpec("two-scale law takes (r1, r2, fraction)")
            r1, r2, frac = self.params
            if min(r1, r2) < 1e-6:
                raise InvalidSpec("two-scale radii must be >= 1e-6")
            if not 0.0 <= frac <= 1.0:
                raise InvalidSpec("two-scale fraction must lie in [0, 1]")
        elif self.kind == "constant":
            if len(self.params) != 1 or self.params[0] < 1e-6:
                raise InvalidSpec("constant law takes one radius >= 1e-6")
        else:
            raise InvalidSpec(f"unknown radius law {self.kind!r}")
        if max(self.params[: 2 if self.kind != 'constant' else 1]) >= _MAX_COORD:
            raise InvalidSpec("radius exceeds the coordinate budget")

    @classmethod
    def parse(cls, text: str) -> "RadiusLaw":
        """Parse CLI syntax like 'uniform:1,1.7' or 'constant:2'."""
        kind, _, rest = text.partition(":")
        try:
            params = tuple(float(x) for x in rest.split(",") if x != "")
        except ValueError:
            raise InvalidSpec(f"bad radius law parameters in {text!r}")
        law = cls(kind=kind.strip(), params=params)
        law.validate()
        return law


@dataclass(frozen=True)
class GenSpec:
    dim: int
    n: int
    box: float
    law: RadiusLaw
    seed: int
    clusters: tuple[int, float] | None = None  # (count, spread)

    def validate(self) -> None:
        if self.dim not in (1, 2):
            raise InvalidSpec(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 1:
            raise InvalidSpec("n must be >= 1")
        if not 0 < self.box < _MAX_COORD:
            raise InvalidSpec("box side must be in (0, 2**19)")
        self.law.validate()
        if self.clusters is not None:
            k, spread = self.clusters
            if k < 1 or spread < 0 or self.box + spread >= _MAX_COORD:
                raise InvalidSpec("bad cluster parameters")


def _radii(spec: GenSpec, rng: np.random.Generator) -> list[float]:
    law = spec.law
    n = spec.n
    if law.kind == "constant":
        return [round(law.params[0], 6)] * n
    if law.kind == "uniform":
        lo, hi = law.params
        return [max(round(float(x), 6), 1e-6) for x in rng.uniform(lo, hi, n)]
    r1, r2, frac = law.params
    n1 = round(frac * n)
    values = [round(r1, 6)] * n1 + [round(r2, 6)] * (n - n1)
    perm = rng.permutation(n)
    return [values[perm[i]] for i in range(n)]


def generate_point_set(spec: GenSpec) -> PointSet:
    """Deterministic instance for a seed; radii follow the configured law."""
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, dim, box = spec.n, spec.dim, spec.box

    if spec.clusters is None:
        pos = rng.uniform(0.0, box, (n, dim))
    else:
        k, spread = spec.clusters
        centers = rng.uniform(0.0, box, (k, dim))
        which = rng.integers(0, k, n)
        offsets = rng.uniform(-spread, spread, (n, dim))
        pos = centers[which] + offsets

    radii = _radii(spec, rng)
    raw = []
    for i in range(n):
        coords = tuple(round(float(c), 6) for c in pos[i])
        raw.append((coords if dim == 2 else coords[0], radii[i]))
    return build_point_set(raw, dim)


def generate_instance_text(spec: GenSpec) -> str:
    """Canonical file bytes; identical seeds give identical bytes."""
    return emit_instance(generate_point_set(spec))
