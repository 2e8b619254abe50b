"""Verification and benchmark harness shared by the CLI and the test suite."""

from __future__ import annotations

import hashlib
import statistics
import time

import numpy as np

from .errors import TxError, WrongDimension
from .oracle1d import build_oracle_1d
from .planar import build_planar_oracle
from .pointset import PointSet, emit_instance
from .sampling import build_sample_oracle
from .separator import SeparatorConfig, build_separator_oracle
from .tgraph import BruteOracle, enumerate_edges, vertex_closure_rows

ORACLE_KINDS = ("oned", "planar", "separator", "sample", "brute")

SCHEMA_VERSION = 1


def build_oracle(kind: str, ps: PointSet, *, seed: int = 0,
                 alpha: float | None = None,
                 config: SeparatorConfig | None = None,
                 experimental: bool = False):
    if kind == "oned":
        return build_oracle_1d(ps)
    if kind == "planar":
        return build_planar_oracle(ps, experimental=experimental)
    if kind == "separator":
        return build_separator_oracle(ps, config)
    if kind == "sample":
        return build_sample_oracle(ps, seed, alpha=alpha)
    if kind == "brute":
        return BruteOracle(ps)
    raise TxError(f"unknown oracle kind {kind!r}")


def instance_digest(ps: PointSet) -> str:
    return hashlib.sha256(emit_instance(ps).encode()).hexdigest()


def _fmt9(value):
    """Render floats with 9 significant digits, recursively."""
    if isinstance(value, float):
        return float(f"{value:.9g}")
    if isinstance(value, dict):
        return {k: _fmt9(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt9(v) for v in value]
    return value


def _base_report(ps: PointSet, kind: str, seed: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "oracle": kind,
        "seed": seed,
        "instance": {
            "digest": instance_digest(ps),
            "dim": ps.dim,
            "n": ps.n,
            "psi": ps.psi,
        },
    }


def verify(ps: PointSet, kind: str, *, budget: int = 10000, seed: int = 0,
           alpha: float | None = None, config: SeparatorConfig | None = None,
           experimental: bool = False, mismatch_cap: int = 100) -> dict:
    """Differential check of an oracle against brute force.

    All ordered pairs when n <= 300, otherwise a seeded random sample of
    `budget` pairs.  Every comparison calls the oracle's real query path.
    """
    t0 = time.perf_counter()
    oracle = build_oracle(kind, ps, seed=seed, alpha=alpha, config=config,
                          experimental=experimental)
    build_seconds = time.perf_counter() - t0

    graph = getattr(oracle, "graph", None)
    if graph is None:
        graph = enumerate_edges(ps)
    rows = vertex_closure_rows(graph)

    n = ps.n
    mismatches = []
    mismatch_count = 0
    checked = 0
    if n <= 300:
        pairs = ((s, t) for s in range(n) for t in range(n))
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        pairs = ((int(s), int(t)) for s, t in rng.integers(0, n, (budget, 2)))
    for s, t in pairs:
        got = oracle.query(s, t)
        want = bool(rows[s] >> t & 1)
        checked += 1
        if got != want:
            mismatch_count += 1
            if len(mismatches) < mismatch_cap:
                mismatches.append([s, t, got, want])

    report = _base_report(ps, kind, seed)
    report.update(
        build_seconds=build_seconds,
        verification={
            "pairs_checked": checked,
            "mismatch_count": mismatch_count,
            "mismatches": mismatches,
        },
        metrics=oracle.metrics(),
        memory_bytes_estimate=oracle.space_bytes(),
    )
    return _fmt9(report)


def bench(ps: PointSet, kind: str, *, repetitions: int = 3,
          budget: int = 2000, seed: int = 0,
          alpha: float | None = None,
          config: SeparatorConfig | None = None,
          experimental: bool = False) -> dict:
    """Median-of-repetitions build and query timings.  No correctness claims."""
    if repetitions < 1:
        raise TxError("repetitions must be >= 1")
    builds = []
    oracle = None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        oracle = build_oracle(kind, ps, seed=seed, alpha=alpha, config=config,
                              experimental=experimental)
        builds.append(time.perf_counter() - t0)

    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = rng.integers(0, ps.n, (budget, 2))
    lat = []
    for s, t in pairs:
        s, t = int(s), int(t)
        t0 = time.perf_counter_ns()
        oracle.query(s, t)
        lat.append(time.perf_counter_ns() - t0)
    lat.sort()

    report = _base_report(ps, kind, seed)
    report.update(
        build_seconds=statistics.median(builds),
        build_seconds_all=builds,
        query_seconds_p50=lat[len(lat) // 2] / 1e9,
        query_seconds_p99=lat[min(len(lat) - 1, (len(lat) * 99) // 100)] / 1e9,
        queries_timed=len(lat),
        low_confidence=repetitions == 1,
        metrics=oracle.metrics(),
        memory_bytes_estimate=oracle.space_bytes(),
    )
    return _fmt9(report)
