"""Triangle parsing, validation, and cumulative/incremental conversion."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdrisk import (
    CumulativeTriangle,
    IncrementalTriangle,
    TriangleError,
    parse_triangle,
    serialize_triangle,
    to_cumulative,
    to_incremental,
)

from conftest import make_random_triangle


def test_parse_cumulative_echoes_input():
    tri = parse_triangle("# kind=cumulative\n1,2,4\n1,2\n1\n")
    assert tri.cell(0, 2) == 4.0
    assert tri.cell(2, 0) == 1.0
    assert tri.horizon == 2


def test_parse_incremental_cumulates_to_same_triangle():
    cum = parse_triangle("# kind=cumulative\n1,2,4\n1,2\n1\n")
    inc = parse_triangle("# kind=incremental\n1,1,2\n1,1\n1\n")
    assert np.array_equal(cum.data, inc.data, equal_nan=True)


def test_parse_rejects_zero_cumulative_with_location():
    with pytest.raises(TriangleError, match=r"\(1,1\)"):
        parse_triangle("# kind=cumulative\n1,2,4\n1,0\n1\n")


def test_parse_rejects_non_numeric_with_location():
    with pytest.raises(TriangleError, match=r"\(1,1\)"):
        parse_triangle("# kind=cumulative\n1,2,4\n1,x\n1\n")


def test_parse_rejects_ragged_row():
    with pytest.raises(TriangleError, match="ragged"):
        parse_triangle("# kind=cumulative\n1,2,4\n1,2,3\n1\n")


def test_parse_rejects_non_square():
    with pytest.raises(TriangleError, match="non-square"):
        parse_triangle("# kind=cumulative\n1,2\n1,2\n1\n")


def test_parse_rejects_missing_staircase_row():
    with pytest.raises(TriangleError):
        parse_triangle("# kind=cumulative\n1,2,4\n1,2\n")


def test_parse_rejects_zero_padding_of_unknown_region():
    # the lower-right region must stay empty; zeros there make the row ragged
    with pytest.raises(TriangleError):
        parse_triangle("# kind=cumulative\n1,2,4\n1,2,0\n1,0,0\n")


def test_trailing_empty_cells_allowed_interior_empty_rejected():
    tri = parse_triangle("# kind=cumulative\n1,2,4\n1,2,\n1,,\n")
    assert tri.cell(2, 0) == 1.0
    with pytest.raises(TriangleError, match=r"\(0,1\)"):
        parse_triangle("# kind=cumulative\n1,,4\n1,2\n1\n")


def test_kind_required_and_conflicts_detected():
    with pytest.raises(TriangleError, match="kind"):
        parse_triangle("1,2,4\n1,2\n1\n")
    tri = parse_triangle("1,2,4\n1,2\n1\n", kind="cumulative")
    assert tri.cell(0, 2) == 4.0
    with pytest.raises(TriangleError, match="conflicts"):
        parse_triangle("# kind=cumulative\n1,2,4\n1,2\n1\n", kind="incremental")


def test_construction_rejects_cell_beyond_staircase():
    data = np.full((3, 3), np.nan)
    data[0] = [1, 2, 4]
    data[1, :2] = [1, 2]
    data[2, 0] = 1
    data[2, 1] = 5.0
    with pytest.raises(TriangleError, match=r"\(2,1\)"):
        CumulativeTriangle(data)


def test_to_incremental_rows():
    tri = CumulativeTriangle.from_rows([[1, 2, 4], [1, 2], [1]])
    inc = to_incremental(tri)
    assert inc.rows()[0] == [1.0, 1.0, 2.0]
    tri2 = CumulativeTriangle.from_rows([[5, 5, 5], [5, 5], [5]])
    assert to_incremental(tri2).rows()[0] == [5.0, 0.0, 0.0]


def test_incremental_roundtrip_on_random_triangles():
    rng = np.random.default_rng(7)
    for _ in range(20):
        tri = make_random_triangle(rng, n=int(rng.integers(3, 8)))
        back = to_cumulative(to_incremental(tri))
        assert np.allclose(back.data, tri.data, rtol=1e-12, atol=0.0, equal_nan=True)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=3, max_value=7))
def test_parse_serialize_roundtrip_is_identity(seed, n):
    tri = make_random_triangle(np.random.default_rng(seed), n=n)
    again = parse_triangle(serialize_triangle(tri))
    assert np.array_equal(again.data, tri.data, equal_nan=True)

    inc = to_incremental(tri)
    inc_again = parse_triangle(serialize_triangle(inc))
    assert np.array_equal(inc_again.data, tri.data, equal_nan=True)


def test_serialized_form_has_kind_header():
    tri = CumulativeTriangle.from_rows([[1, 2, 4], [1, 2], [1]])
    text = serialize_triangle(tri)
    assert text.splitlines()[0] == "# kind=cumulative"
    inc = to_incremental(tri)
    assert serialize_triangle(inc).splitlines()[0] == "# kind=incremental"


def test_triangle_data_is_read_only():
    tri = CumulativeTriangle.from_rows([[1, 2, 4], [1, 2], [1]])
    with pytest.raises(ValueError):
        tri.data[0, 0] = 9.0


def test_incremental_values_may_be_negative():
    tri = to_cumulative(IncrementalTriangle.from_rows([[10, -3, 1], [5, 2], [4]]))
    assert tri.cell(0, 1) == 7.0
    # but the running cumulative must stay positive
    with pytest.raises(TriangleError):
        to_cumulative(IncrementalTriangle.from_rows([[10, -10, 1], [5, 2], [4]]))
