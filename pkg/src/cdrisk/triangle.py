"""Run-off triangle data model, validation, and CSV ingestion.

A cumulative triangle holds paid amounts ``C(i, j)`` for origin year ``i`` and
development period ``j``, defined exactly on the staircase ``0 <= i + j <= I``
where ``I + 1`` is the number of origin years.  Triangles are square: the
number of development periods equals the number of origin years.  All
cumulative amounts must be strictly positive.

The CSV layout is one origin row per line, development values in order
``j = 0, 1, 2, ...`` separated by commas; shorter rows encode the staircase.
The first line declares the payment kind: ``# kind=cumulative`` or
``# kind=incremental``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TriangleError",
    "CumulativeTriangle",
    "IncrementalTriangle",
    "parse_triangle",
    "serialize_triangle",
    "to_incremental",
    "to_cumulative",
]

_KINDS = ("cumulative", "incremental")


class TriangleError(ValueError):
    """Raised when triangle data violates the run-off layout or positivity rules."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _staircase_from_rows(rows: Sequence[Sequence[float]], label: str) -> np.ndarray:
    n = len(rows)
    if n == 0:
        raise TriangleError(f"{label}: no origin rows")
    if len(rows[0]) != n:
        raise TriangleError(
            f"{label}: non-square shape, first row has {len(rows[0])} development "
            f"periods for {n} origin years"
        )
    data = np.full((n, n), np.nan)
    for i, row in enumerate(rows):
        expected = n - i
        if len(row) != expected:
            raise TriangleError(
                f"{label}: ragged row, origin year {i} has {len(row)} values, "
                f"expected {expected} (cells (i,j) with i+j <= {n - 1})"
            )
        data[i, :expected] = [float(v) for v in row]
    return data


@dataclass(frozen=True)
class CumulativeTriangle:
    """Square staircase of strictly positive cumulative paid amounts.

    Immutable after construction; the backing array is marked read-only, so
    instances are safe to share across concurrent readers.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise TriangleError(f"triangle array must be square, got shape {data.shape}")
        n = data.shape[0]
        for i in range(n):
            for j in range(n):
                inside = i + j <= n - 1
                present = not np.isnan(data[i, j])
                if inside and not present:
                    raise TriangleError(f"missing staircase cell at ({i},{j})")
                if not inside and present:
                    raise TriangleError(f"unexpected cell beyond staircase at ({i},{j})")
                if inside and data[i, j] <= 0.0:
                    raise TriangleError(
                        f"non-positive cumulative amount {data[i, j]} at ({i},{j})"
                    )
        object.__setattr__(self, "data", _freeze(data))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "CumulativeTriangle":
        """Build from staircase rows (row ``i`` holds ``I + 1 - i`` values)."""
        return cls(_staircase_from_rows(rows, "cumulative triangle"))

    @property
    def n_origin_years(self) -> int:
        return self.data.shape[0]

    @property
    def horizon(self) -> int:
        """Last development index ``I`` (origin years are ``0..I``)."""
        return self.data.shape[0] - 1

    def cell(self, i: int, j: int) -> float:
        v = self.data[i, j]
        if np.isnan(v):
            raise IndexError(f"cell ({i},{j}) is outside the staircase")
        return float(v)

    def latest_diagonal(self) -> np.ndarray:
        """Most recent cumulative amount per origin year, ``C(i, I - i)``."""
        n = self.n_origin_years
        return np.array([self.data[i, n - 1 - i] for i in range(n)])

    def rows(self) -> list[list[float]]:
        n = self.n_origin_years
        return [[float(self.data[i, j]) for j in range(n - i)] for i in range(n)]


@dataclass(frozen=True)
class IncrementalTriangle:
    """Same staircase shape holding incremental amounts (may be negative)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise TriangleError(f"triangle array must be square, got shape {data.shape}")
        n = data.shape[0]
        for i in range(n):
            for j in range(n):
                inside = i + j <= n - 1
                if inside and np.isnan(data[i, j]):
                    raise TriangleError(f"missing staircase cell at ({i},{j})")
                if not inside and not np.isnan(data[i, j]):
                    raise TriangleError(f"unexpected cell beyond staircase at ({i},{j})")
        object.__setattr__(self, "data", _freeze(data))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "IncrementalTriangle":
        return cls(_staircase_from_rows(rows, "incremental triangle"))

    def rows(self) -> list[list[float]]:
        n = self.data.shape[0]
        return [[float(self.data[i, j]) for j in range(n - i)] for i in range(n)]


def to_incremental(tri: CumulativeTriangle) -> IncrementalTriangle:
    """Difference each row: ``X(i,0) = C(i,0)``, ``X(i,j) = C(i,j) - C(i,j-1)``."""
    n = tri.n_origin_years
    data = np.full((n, n), np.nan)
    for i in range(n):
        data[i, 0] = tri.data[i, 0]
        for j in range(1, n - i):
            data[i, j] = tri.data[i, j] - tri.data[i, j - 1]
    return IncrementalTriangle(data)


def to_cumulative(inc: IncrementalTriangle) -> CumulativeTriangle:
    """Cumulate each row; inverse of :func:`to_incremental`.

    Raises :class:`TriangleError` if any cumulated amount is non-positive.
    """
    n = inc.data.shape[0]
    data = np.full((n, n), np.nan)
    for i in range(n):
        acc = 0.0
        for j in range(n - i):
            acc += inc.data[i, j]
            data[i, j] = acc
    return CumulativeTriangle(data)


def _parse_rows(lines: Iterable[tuple[int, str]]) -> list[list[float]]:
    rows: list[list[float]] = []
    for i, line in lines:
        cells = line.split(",")
        # the unknown lower-right region must be empty, never zero-padded
        while cells and cells[-1].strip() == "":
            cells.pop()
        row: list[float] = []
        for j, cell in enumerate(cells):
            text = cell.strip()
            if text == "":
                raise TriangleError(f"empty interior cell at ({i},{j})")
            try:
                row.append(float(text))
            except ValueError:
                raise TriangleError(f"non-numeric cell {text!r} at ({i},{j})") from None
        rows.append(row)
    return rows


def parse_triangle(text: str, kind: str | None = None) -> CumulativeTriangle:
    """Parse triangle CSV text into a validated :class:`CumulativeTriangle`.

    The ``# kind=...`` header line declares whether values are cumulative or
    incremental; incremental input is cumulated row-wise first.  An explicit
    ``kind`` argument is required when the header is absent and must agree
    with the header when both are given.
    """
    raw_lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    header_kind = None
    if raw_lines and raw_lines[0].lstrip().startswith("#"):
        header = raw_lines.pop(0).lstrip("#").strip()
        if "=" in header:
            field, _, value = header.partition("=")
            if field.strip() == "kind":
                header_kind = value.strip().lower()
        if header_kind not in _KINDS:
            raise TriangleError(f"unrecognized header {header!r}, expected kind=cumulative|incremental")
    if kind is not None:
        kind = kind.lower()
        if kind not in _KINDS:
            raise TriangleError(f"unknown triangle kind {kind!r}")
        if header_kind is not None and header_kind != kind:
            raise TriangleError(f"kind argument {kind!r} conflicts with header {header_kind!r}")
    effective = kind or header_kind
    if effective is None:
        raise TriangleError("triangle kind not given: add a '# kind=...' header or pass kind=")

    rows = _parse_rows(enumerate(raw_lines))
    if effective == "cumulative":
        return CumulativeTriangle.from_rows(rows)
    return to_cumulative(IncrementalTriangle.from_rows(rows))


def serialize_triangle(
    tri: CumulativeTriangle | IncrementalTriangle, kind: str | None = None
) -> str:
    """Render a triangle back to CSV text with its kind header.

    Values are written with ``repr`` so a parse/serialize/parse round trip is
    bit-exact.
    """
    if kind is None:
        kind = "cumulative" if isinstance(tri, CumulativeTriangle) else "incremental"
    if kind not in _KINDS:
        raise TriangleError(f"unknown triangle kind {kind!r}")
    lines = [f"# kind={kind}"]
    for row in tri.rows():
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"
