"""Shared fixtures: reference triangles and a random-triangle factory."""

from pathlib import Path

import numpy as np
import pytest

from cdrisk import CumulativeTriangle, fit_pattern, parse_triangle

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference_triangle():
    """Nine-year industry triangle used for the published-value checks."""
    return parse_triangle((DATA_DIR / "wuthrich2008.csv").read_text())


@pytest.fixture(scope="session")
def reference_pattern(reference_triangle):
    return fit_pattern(reference_triangle)


@pytest.fixture
def doubling_triangle():
    """Every cumulative value doubles each period: fully deterministic."""
    return CumulativeTriangle.from_rows([[1, 2, 4], [1, 2], [1]])


@pytest.fixture
def small_triangle():
    """Hand-built 3x3 triangle with unequal link ratios."""
    return CumulativeTriangle.from_rows([[100.0, 160.0, 176.0], [120.0, 180.0], [130.0]])


def make_random_triangle(rng: np.random.Generator, n: int = 5) -> CumulativeTriangle:
    """Strictly positive staircase with row-wise increasing cumulatives."""
    rows = []
    first = rng.uniform(500.0, 1500.0, size=n)
    for i in range(n):
        vals = [float(first[i])]
        for j in range(1, n - i):
            growth = 1.0 + rng.uniform(0.03, 0.6) * np.exp(-0.5 * (j - 1))
            vals.append(vals[-1] * growth)
        rows.append(vals)
    return CumulativeTriangle.from_rows(rows)


@pytest.fixture
def random_triangle():
    return make_random_triangle(np.random.default_rng(2024), n=5)
