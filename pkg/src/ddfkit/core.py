"""Vector orders and the shared output/input data model.

Four componentwise order relations are used throughout the package:

    geqq      u_i >= v_i for every i
    geq       geqq and u != v
    star_gt   u_i > v_i, or u_i = v_i = 0, for every i
    gt        u_i > v_i for every i

Comparisons are exact on the stored floating-point values.  They feed set
definitions, so tolerance belongs to the callers; the grid oracle applies
its own epsilon when it filters dominated points.

Values with codomain R ∪ {-inf} (distance values, maximal outputs) are
represented as plain floats where ``-inf`` means "no feasible point".
``+inf`` and NaN are never legal results; `ensure_extended` guards the
boundaries that could produce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

NEG_INF = float("-inf")

RELATIONS = ("geqq", "geq", "star_gt", "gt")


class DimensionError(ValueError):
    """Vector lengths do not match the expected dimensions."""


def as_vector(values, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-d float array, raising `DimensionError` on bad shape."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


def compare(u, v, relation: str) -> bool:
    """Evaluate one of the componentwise order relations on two vectors.

    `relation` is one of ``geqq``, ``geq``, ``star_gt``, ``gt`` as defined in
    the module docstring.  Raises `DimensionError` when lengths differ.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}, expected one of {RELATIONS}")
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    if relation == "geqq":
        return bool(np.all(u >= v))
    if relation == "geq":
        return bool(np.all(u >= v) and np.any(u != v))
    if relation == "star_gt":
        return bool(np.all((u > v) | ((u == 0.0) & (v == 0.0))))
    return bool(np.all(u > v))


def geqq(u, v) -> bool:
    return compare(u, v, "geqq")


def geq(u, v) -> bool:
    return compare(u, v, "geq")


def star_gt(u, v) -> bool:
    return compare(u, v, "star_gt")


def gt(u, v) -> bool:
    return compare(u, v, "gt")


def _frozen_nonneg(values, name: str) -> np.ndarray:
    arr = as_vector(values, name)
    if arr.size == 0:
        raise DimensionError(f"{name} must have at least one component")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} components must be finite")
    if np.any(arr < 0):
        raise ValueError(f"{name} components must be nonnegative")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Bundle:
    """A nonnegative output vector paired with a nonnegative input vector."""

    y: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", _frozen_nonneg(self.y, "y"))
        object.__setattr__(self, "x", _frozen_nonneg(self.x, "x"))

    @property
    def m(self) -> int:
        return self.y.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def __repr__(self):
        return f"Bundle(y={self.y.tolist()}, x={self.x.tolist()})"


@dataclass(frozen=True)
class Direction:
    """A nonnegative, nonzero direction pair (g_y, g_x)."""

    g_y: np.ndarray
    g_x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "g_y", _frozen_nonneg(self.g_y, "g_y"))
        object.__setattr__(self, "g_x", _frozen_nonneg(self.g_x, "g_x"))
        if not (np.any(self.g_y > 0) or np.any(self.g_x > 0)):
            raise ValueError("direction must be nonzero")

    @property
    def m(self) -> int:
        return self.g_y.shape[0]

    @property
    def n(self) -> int:
        return self.g_x.shape[0]

    def scaled(self, psi: float) -> "Direction":
        """Return the direction scaled by a positive factor."""
        if not psi > 0:
            raise ValueError("scale factor must be positive")
        return Direction(self.g_y * psi, self.g_x * psi)

    def __repr__(self):
        return f"Direction(g_y={self.g_y.tolist()}, g_x={self.g_x.tolist()})"


def is_neg_inf(value: float) -> bool:
    return math.isinf(value) and value < 0


def ensure_extended(value: float, context: str = "value") -> float:
    """Validate a finite-or-minus-infinity float and return it."""
    value = float(value)
    if math.isnan(value) or (math.isinf(value) and value > 0):
        raise ValueError(f"{context} must be finite or -inf, got {value}")
    return value


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of a sampled property check.

    `worst_violation` is the largest observed breach of the property (0.0
    when none), `witness` the sampled instance achieving it, and `seed` the
    generator seed so every report is reproducible.
    """

    prop: str
    passed: bool
    samples: int
    seed: int
    tolerance: float
    worst_violation: float
    witness: dict[str, Any] | None = None

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.prop}: {status} (samples={self.samples}, "
            f"worst={self.worst_violation:.3e}, tol={self.tolerance:.1e}, seed={self.seed})"
        )
