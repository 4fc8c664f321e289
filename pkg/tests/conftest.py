import numpy as np
import pytest

from ddfkit import (
    Bundle,
    Direction,
    PolyhedralA,
    PolyhedralB,
    QuadraticSeparable,
    QuadraticSeparableParams,
    REFERENCE_QUADRATIC,
    Staircase,
)


@pytest.fixture(scope="session")
def quad_ref():
    """The reference two-output, two-input quadratic instance."""
    return QuadraticSeparable(REFERENCE_QUADRATIC)


@pytest.fixture(scope="session")
def poly_a():
    return PolyhedralA()


@pytest.fixture(scope="session")
def poly_b():
    return PolyhedralB()


@pytest.fixture(scope="session")
def staircase():
    return Staircase()


@pytest.fixture(scope="session")
def ref_bundle():
    return Bundle([0.5, 0.5], [1.0, 1.0])


@pytest.fixture(scope="session")
def ref_direction():
    return Direction([0.5, 0.5], [0.0, 0.0])


def random_valid_quadratic(rng: np.random.Generator, m: int = 2, n: int = 2) -> QuadraticSeparable:
    """Random parameters meeting all constraints: L L^T with L >= 0 is both
    entrywise nonnegative and positive semidefinite."""
    L = rng.uniform(0.0, 1.0, (m, m))
    B = L @ L.T
    params = QuadraticSeparableParams(
        b=rng.uniform(0.2, 2.0, m), a=rng.uniform(0.2, 2.0, n), B=B
    )
    tech = QuadraticSeparable(params)
    assert tech.is_valid, tech.validation_report
    return tech
