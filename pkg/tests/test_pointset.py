import math

import pytest

from txreach.errors import (
    DimensionMismatch,
    EmptyInput,
    NonFiniteCoordinate,
    NonPositiveRadius,
    ParseError,
)
from txreach.pointset import (
    build_point_set,
    emit_instance,
    format_scaled,
    parse_instance,
)


def test_scaling_by_min_radius():
    ps = build_point_set([(0.0, 2.0), (5.0, 4.0)], 1)
    assert ps.radii == (1.0, 2.0)
    assert ps.psi == 2.0
    # normalization rescales coordinates too (uniform similarity)
    assert ps.coords == ((0.0,), (2.5,))


def test_single_point():
    ps = build_point_set([((0.0, 0.0), 1.0)], 2)
    assert ps.psi == 1.0
    assert ps.n == 1


def test_min_radius_already_one():
    ps = build_point_set([((0, 0), 3.0), ((1, 1), 1.0), ((4, 0), 1.5)], 2)
    assert ps.psi == 3.0
    assert ps.radii == (3.0, 1.0, 1.5)


def test_min_normalized_radius_is_exactly_one(rng):
    for _ in range(20):
        raw = [(round(rng.uniform(-10, 10), 6), round(rng.uniform(0.001, 9), 6))
               for _ in range(rng.randrange(1, 30))]
        raw = [(x, r) for x, r in raw if r > 0]
        ps = build_point_set(raw, 1)
        assert min(ps.radii) == 1.0
        assert ps.psi >= 1.0


def test_errors():
    with pytest.raises(EmptyInput):
        build_point_set([], 1)
    with pytest.raises(NonPositiveRadius) as e:
        build_point_set([(0.0, 1.0), (1.0, 0.0)], 1)
    assert e.value.index == 1
    with pytest.raises(NonPositiveRadius):
        build_point_set([(0.0, -2.0)], 1)
    with pytest.raises(NonPositiveRadius):
        # quantizes to zero at the 1e-6 grid
        build_point_set([(0.0, 1e-9)], 1)
    with pytest.raises(NonFiniteCoordinate) as e:
        build_point_set([(math.inf, 1.0)], 1)
    assert e.value.index == 0
    with pytest.raises(NonFiniteCoordinate):
        build_point_set([(math.nan, 1.0)], 1)
    with pytest.raises(DimensionMismatch):
        build_point_set([((1.0, 2.0), 1.0)], 1)


def test_edge_predicate_exact_on_boundary():
    # distance exactly equals the radius: closed-disk convention keeps it
    ps = build_point_set([(0.0, 1.5), (1.5, 1.0)], 1)
    assert ps.in_range(0, 1)
    assert not ps.in_range(1, 0)


def test_format_scaled():
    assert format_scaled(2_500_000) == "2.5"
    assert format_scaled(-500_000) == "-0.5"
    assert format_scaled(3_000_000) == "3"
    assert format_scaled(1) == "0.000001"
    assert format_scaled(-1) == "-0.000001"


def test_parse_emit_round_trip():
    text = "tg 2 3\n0 0 3\n1 1 1\n4 0 1.5\n"
    ps = parse_instance(text)
    assert emit_instance(ps) == text
    # idempotent
    assert emit_instance(parse_instance(emit_instance(ps))) == text


def test_parse_comments_and_blanks():
    text = "# generated\n\ntg 1 2  # header\n0 1\n2.25 3 # point\n"
    ps = parse_instance(text)
    assert ps.n == 2
    assert ps.dim == 1
    assert ps.iradii == (1_000_000, 3_000_000)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_instance("")
    with pytest.raises(ParseError):
        parse_instance("tg 3 1\n0 0 0 1\n")
    with pytest.raises(ParseError):
        parse_instance("tg 1 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_instance("tg 1 1\n0 1 7\n")
    with pytest.raises(ParseError):
        # seven fractional digits violates the format
        parse_instance("tg 1 1\n0.1234567 1\n")
    with pytest.raises(ParseError):
        parse_instance("tg 1 1\n2000000 1\n")
    with pytest.raises(ParseError):
        parse_instance("tg 1 1\nxyz 1\n")


def test_round_trip_random(rng):
    for _ in range(25):
        n = rng.randrange(1, 12)
        raw = [
            (
                (round(rng.uniform(-100, 100), 6), round(rng.uniform(-100, 100), 6)),
                round(rng.uniform(0.5, 20), 6),
            )
            for _ in range(n)
        ]
        ps = build_point_set(raw, 2)
        again = parse_instance(emit_instance(ps))
        assert again.icoords == ps.icoords
        assert again.iradii == ps.iradii
