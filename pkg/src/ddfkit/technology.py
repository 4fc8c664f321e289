"""Production technologies and their membership/frontier queries.

Every technology is represented through a transformation value F(y, x)
with F <= 0 exactly on the feasible set of output/input bundles.  Four
families ship with the package:

``quadratic_separable``
    F(y, x) = b.y + y'By/2 - a.x with b > 0, a > 0 and B symmetric,
    entrywise nonnegative and positive semidefinite.  Under those
    constraints F is strictly increasing in outputs, strictly decreasing
    in inputs, and convex, so the zero level set of F is exactly the
    efficient boundary.

``staircase``
    One output, one input; the maximal output h(x) equals x below one and
    is capped at one afterwards.  The flat segment makes radial input and
    output boundaries disagree.

``polyhedral_a``
    Two outputs, one input: y2 <= x and y1 + y2 <= 2x.

``polyhedral_b``
    Two outputs, two inputs: y2 <= x2 and y1 + y2 <= x1 + x2.

For the polyhedral families F is the largest constraint slack: continuous
and nonpositive exactly on the feasible set, but *not* strictly monotone.
These families exist to exhibit boundaries whose weakly efficient and
efficient subsets differ, so the strict-monotonicity and convexity
property checks apply to the quadratic family only.

Partition cells: inputs split into X1 (some nonzero output is feasible),
X2 (only the zero output is feasible), X3 (the zero vector); outputs into
Y1 (some input vector works), Y2 (no input vector works), Y3 (zero).

Technologies are immutable after construction and every query is pure,
so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bundle, DimensionError, PropertyReport, as_vector

BOUNDARY_TOL = 1e-9  # |F| threshold for frontier membership on closed forms
PSD_TOL = 1e-10      # eigenvalues of B may dip this far below zero
CONV_TOL = 1e-12     # slack allowed in midpoint-convexity checks

SIDES = ("input", "output")
FRONTIER_KINDS = ("isoq", "weff", "eff")


@dataclass(frozen=True)
class QuadraticSeparableParams:
    """Coefficients (b, a, B) of the quadratic-separable transformation.

    Shape and finiteness are enforced at construction; the semantic
    constraints (positivity, symmetry, PSD) are reported by
    `validate_params` so that invalid parameter sets can still be
    inspected.
    """

    b: np.ndarray
    a: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        b = as_vector(self.b, "b")
        a = as_vector(self.a, "a")
        B = np.asarray(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionError(f"B must be a square matrix, got shape {B.shape}")
        if B.shape[0] != b.shape[0]:
            raise DimensionError(
                f"B must be {b.shape[0]}x{b.shape[0]} to match b, got {B.shape}"
            )
        if b.size == 0 or a.size == 0:
            raise DimensionError("b and a must have at least one component")
        for name, arr in (("b", b), ("a", a), ("B", B)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
        b = b.copy()
        a = a.copy()
        B = B.copy()
        for arr in (b, a, B):
            arr.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "B", B)

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[0]


def validate_params(params: QuadraticSeparableParams) -> list[str]:
    """Return the list of violated parameter constraints (empty when valid)."""
    report = []
    if not np.all(params.b > 0):
        report.append("b not strictly positive")
    if not np.all(params.a > 0):
        report.append("a not strictly positive")
    asym = float(np.max(np.abs(params.B - params.B.T))) if params.m else 0.0
    if asym > 1e-12:
        report.append("B not symmetric")
    if np.any(params.B < 0):
        report.append("B has negative entries")
    if asym <= 1e-12:
        min_eig = float(np.min(np.linalg.eigvalsh(params.B)))
        if min_eig < -PSD_TOL:
            report.append("B not positive semidefinite")
    return report


class Technology:
    """Base class: a feasible set described by F(y, x) <= 0."""

    kind: str = ""
    m: int = 0
    n: int = 0

    def eval_raw(self, y: np.ndarray, x: np.ndarray) -> float:
        raise NotImplementedError

    def eval_batch(self, Y: np.ndarray, X: np.ndarray) -> np.ndarray:
        """Vectorized F over rows of Y (N x m) and X (N x n)."""
        raise NotImplementedError

    def line_restriction(self, y, x, g_y, g_x):
        """Return beta -> F(y + beta*g_y, x - beta*g_x), scalar or array."""
        raise NotImplementedError

    def output_cell(self, v: np.ndarray) -> str:
        """Partition cell of a nonzero output vector (Y1 or Y2)."""
        return "Y1"

    def _output_frontier(self, x, y, kind: str) -> bool:
        raise NotImplementedError

    def _input_frontier(self, y, x, kind: str) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(m={self.m}, n={self.n})"


class QuadraticSeparable(Technology):
    kind = "quadratic_separable"

    def __init__(self, params: QuadraticSeparableParams):
        self.params = params
        self.m = params.m
        self.n = params.n
        self.validation_report = validate_params(params)

    @property
    def is_valid(self) -> bool:
        return not self.validation_report

    def output_value(self, y: np.ndarray) -> float:
        """Quadratic output aggregate b.y + y'By/2."""
        return float(self.params.b @ y + 0.5 * y @ self.params.B @ y)

    def eval_raw(self, y, x):
        return self.output_value(y) - float(self.params.a @ x)

    def eval_batch(self, Y, X):
        p = self.params
        quad = 0.5 * np.einsum("ij,ij->i", Y @ p.B, Y)
        return Y @ p.b + quad - X @ p.a

    def line_restriction(self, y, x, g_y, g_x):
        p = self.params
        half_quad = 0.5 * float(g_y @ p.B @ g_y)
        slope = float(p.b @ g_y + y @ p.B @ g_y + p.a @ g_x)
        const = self.eval_raw(y, x)

        def f(beta):
            beta = np.asarray(beta, dtype=float)
            return (half_quad * beta + slope) * beta + const

        return f

    def output_cell(self, v):
        # Feasibility certificate: scale inputs up along the all-ones ray
        # until the aggregate input value covers the required output value.
        needed = self.output_value(v)
        t = max(1.0, 2.0 * needed / float(np.sum(self.params.a)))
        if self.eval_raw(v, np.full(self.n, t)) <= 0.0:
            return "Y1"
        return "Y2"  # unreachable for valid parameters; kept as a guard

    def _boundary(self, y, x) -> bool:
        return abs(self.eval_raw(y, x)) <= BOUNDARY_TOL

    def _output_frontier(self, x, y, kind):
        # With strict monotonicity and convexity the isoquant, weakly
        # efficient, and efficient subsets coincide with the zero level set.
        return self._boundary(y, x)

    def _input_frontier(self, y, x, kind):
        return self._boundary(y, x)


class Staircase(Technology):
    """Single-output, single-input technology with capacity capped at one."""

    kind = "staircase"
    m = 1
    n = 1

    @staticmethod
    def h(x: float) -> float:
        return x if x < 1.0 else 1.0

    def eval_raw(self, y, x):
        return float(y[0]) - self.h(float(x[0]))

    def eval_batch(self, Y, X):
        cap = np.where(X[:, 0] < 1.0, X[:, 0], 1.0)
        return Y[:, 0] - cap

    def line_restriction(self, y, x, g_y, g_x):
        y0, x0 = float(y[0]), float(x[0])
        gy, gx = float(g_y[0]), float(g_x[0])

        def f(beta):
            beta = np.asarray(beta, dtype=float)
            xx = x0 - beta * gx
            cap = np.where(xx < 1.0, xx, 1.0)
            return y0 + beta * gy - cap

        return f

    def output_cell(self, v):
        return "Y1" if v[0] <= 1.0 else "Y2"

    def _output_frontier(self, x, y, kind):
        return abs(float(y[0]) - self.h(float(x[0]))) <= BOUNDARY_TOL

    def _input_frontier(self, y, x, kind):
        # Smallest input able to produce y: y itself below the cap, one at it.
        needed = float(y[0]) if y[0] < 1.0 else 1.0
        return abs(float(x[0]) - needed) <= BOUNDARY_TOL


class _Polyhedral(Technology):
    """Feasible set cut out by affine constraints G_y y + G_x x <= 0."""

    G_y: np.ndarray
    G_x: np.ndarray

    def eval_raw(self, y, x):
        return float(np.max(self.G_y @ y + self.G_x @ x))

    def eval_batch(self, Y, X):
        return np.max(Y @ self.G_y.T + X @ self.G_x.T, axis=1)

    def line_restriction(self, y, x, g_y, g_x):
        const = self.G_y @ y + self.G_x @ x
        slope = self.G_y @ g_y - self.G_x @ g_x

        def f(beta):
            beta = np.asarray(beta, dtype=float)
            acc = const[0] + slope[0] * beta
            for s, c in zip(const[1:], slope[1:]):
                acc = np.maximum(acc, s + c * beta)
            return acc

        return f


class PolyhedralA(_Polyhedral):
    """Two outputs, one input: y2 <= x and y1 + y2 <= 2x."""

    kind = "polyhedral_a"
    m = 2
    n = 1
    G_y = np.array([[0.0, 1.0], [1.0, 1.0]])
    G_x = np.array([[-1.0], [-2.0]])

    def _output_frontier(self, x, y, kind):
        xv = float(x[0])
        tol = BOUNDARY_TOL
        y1, y2 = float(y[0]), float(y[1])
        feasible = y2 <= xv + tol and y1 + y2 <= 2.0 * xv + tol
        if not feasible:
            return False
        on_slant = abs(y1 + y2 - 2.0 * xv) <= tol
        if kind == "eff":
            return on_slant and y1 >= xv - tol
        on_top = abs(y2 - xv) <= tol and y1 <= xv + tol
        return on_slant or on_top

    def _input_frontier(self, y, x, kind):
        needed = max(float(y[1]), 0.5 * (float(y[0]) + float(y[1])))
        return abs(float(x[0]) - needed) <= BOUNDARY_TOL


class PolyhedralB(_Polyhedral):
    """Two outputs, two inputs: y2 <= x2 and y1 + y2 <= x1 + x2."""

    kind = "polyhedral_b"
    m = 2
    n = 2
    G_y = np.array([[0.0, 1.0], [1.0, 1.0]])
    G_x = np.array([[0.0, -1.0], [-1.0, -1.0]])

    def _output_frontier(self, x, y, kind):
        tol = BOUNDARY_TOL
        x1, x2 = float(x[0]), float(x[1])
        y1, y2 = float(y[0]), float(y[1])
        total = x1 + x2
        feasible = y2 <= x2 + tol and y1 + y2 <= total + tol
        if not feasible:
            return False
        on_slant = abs(y1 + y2 - total) <= tol and y1 >= x1 - tol
        if kind == "eff":
            return on_slant
        # The horizontal top edge is weakly efficient only when x2 > 0;
        # with x2 = 0 the star order degenerates on the zero component.
        on_top = x2 > 0 and abs(y2 - x2) <= tol and y1 <= x1 + tol
        return on_slant or on_top

    def _input_frontier(self, y, x, kind):
        tol = BOUNDARY_TOL
        y1, y2 = float(y[0]), float(y[1])
        x1, x2 = float(x[0]), float(x[1])
        total = y1 + y2
        feasible = x2 >= y2 - tol and x1 + x2 >= total - tol
        if not feasible:
            return False
        on_slant = abs(x1 + x2 - total) <= tol and x1 <= y1 + tol
        if kind == "eff":
            return on_slant
        on_ray = y2 > 0 and abs(x2 - y2) <= tol and x1 >= y1 - tol
        return on_slant or on_ray


REFERENCE_QUADRATIC = QuadraticSeparableParams(
    b=(1.0, 1.0), a=(1.0, 1.0), B=((1.0, 0.0), (0.0, 1.0))
)
"""Two-output, two-input instance used by the demos and the test suite."""


def _check_bundle_dims(tech: Technology, bundle: Bundle):
    if bundle.m != tech.m or bundle.n != tech.n:
        raise DimensionError(
            f"bundle has shape (m={bundle.m}, n={bundle.n}), "
            f"technology expects (m={tech.m}, n={tech.n})"
        )


def eval_F(tech: Technology, bundle: Bundle) -> float:
    """Transformation value; feasible exactly when the result is <= 0."""
    _check_bundle_dims(tech, bundle)
    return tech.eval_raw(bundle.y, bundle.x)


def contains(tech: Technology, bundle: Bundle) -> bool:
    """Feasibility of the bundle: eval_F(tech, bundle) <= 0."""
    return eval_F(tech, bundle) <= 0.0


def _side_vector(tech, side, v, name):
    v = as_vector(v, name)
    expected = tech.n if side == "input" else tech.m
    if v.shape[0] != expected:
        raise DimensionError(f"{name} must have length {expected}, got {v.shape[0]}")
    if np.any(v < 0):
        raise ValueError(f"{name} components must be nonnegative")
    return v


def classify(tech: Technology, side: str, v) -> str:
    """Partition cell of a vector: X1/X2/X3 for inputs, Y1/Y2/Y3 for outputs.

    The zero vector maps to X3/Y3.  A nonzero input vector is X1 when some
    nonzero output is feasible with it and X2 otherwise; a nonzero output
    vector is Y1 when some input vector can produce it and Y2 otherwise.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    v = _side_vector(tech, side, v, "v")
    if not np.any(v > 0):
        return "X3" if side == "input" else "Y3"
    if side == "input":
        # All shipped technologies can produce some nonzero output from any
        # nonzero input vector, so the X2 cell is empty.
        return "X1"
    return tech.output_cell(v)


def frontier_member(tech: Technology, side: str, fixed, point, kind: str) -> bool:
    """Membership of `point` in the isoq/weff/eff subset conditioned on `fixed`.

    For the output side `fixed` is an input vector and the query set is a
    boundary subset of the feasible outputs; for the input side the roles
    swap.  When `fixed` is the zero vector the boundary subsets degenerate
    to {0}; an output vector that no input can produce raises ValueError.
    """
    if kind not in FRONTIER_KINDS:
        raise ValueError(f"kind must be one of {FRONTIER_KINDS}")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    fixed_side = "input" if side == "output" else "output"
    fixed = _side_vector(tech, fixed_side, fixed, "fixed")
    point = _side_vector(tech, side, point, "point")
    cell = classify(tech, fixed_side, fixed)
    if cell in ("X2", "X3", "Y3"):
        return not np.any(point > 0)
    if cell == "Y2":
        raise ValueError("fixed output vector admits no feasible inputs")
    if side == "output":
        return tech._output_frontier(fixed, point, kind)
    return tech._input_frontier(fixed, point, kind)


def output_ray_roots(tech: QuadraticSeparable, x) -> np.ndarray:
    """Per-output boundedness roots: the level at which each single-output
    ray leaves the feasible set for the given input vector."""
    if not isinstance(tech, QuadraticSeparable):
        raise ValueError("output_ray_roots applies to quadratic_separable only")
    x = _side_vector(tech, "input", x, "x")
    budget = float(tech.params.a @ x)
    roots = np.empty(tech.m)
    for i in range(tech.m):
        bi = float(tech.params.b[i])
        qi = float(tech.params.B[i, i])
        if qi <= 1e-300:
            roots[i] = budget / bi
        else:
            roots[i] = (-bi + np.sqrt(bi * bi + 2.0 * qi * budget)) / qi
    return roots


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------

def technology_to_json(tech: Technology) -> dict:
    """JSON-ready configuration; B is emitted row-major."""
    if isinstance(tech, QuadraticSeparable):
        return {
            "kind": tech.kind,
            "b": tech.params.b.tolist(),
            "a": tech.params.a.tolist(),
            "B": tech.params.B.tolist(),
        }
    return {"kind": tech.kind}


def technology_from_json(obj: dict) -> Technology:
    """Build a technology from its JSON configuration.

    Structural problems (unknown kind, bad shapes) raise ValueError;
    semantic parameter violations are left to `validate_params` so that
    callers can surface the full report.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("technology configuration must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "quadratic_separable":
        missing = [key for key in ("b", "a", "B") if key not in obj]
        if missing:
            raise ValueError(f"quadratic_separable configuration missing {missing}")
        return QuadraticSeparable(
            QuadraticSeparableParams(b=obj["b"], a=obj["a"], B=obj["B"])
        )
    if kind == "staircase":
        return Staircase()
    if kind == "polyhedral_a":
        return PolyhedralA()
    if kind == "polyhedral_b":
        return PolyhedralB()
    raise ValueError(f"unknown technology kind {kind!r}")


def load_technology(path) -> Technology:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        return technology_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Sampled structural checks (quadratic family only)
# ---------------------------------------------------------------------------

F_PROPERTY_NAMES = ("F1", "F3", "F4", "T1", "T4", "T5")

_F_TOLERANCES = {
    "F1": 0.0,
    "F3": 0.0,
    "F4": CONV_TOL,
    "T1": 0.0,
    "T4": 0.0,
    "T5": 0.0,
}


def _require_valid_quadratic(tech):
    if not isinstance(tech, QuadraticSeparable):
        raise ValueError("structural checks run on quadratic_separable technologies")
    if tech.validation_report:
        raise ValueError(f"invalid parameters: {tech.validation_report}")


def check_f_property(tech: Technology, prop: str, samples: int = 200, seed: int = 0) -> PropertyReport:
    """Sampled check of a structural property of the quadratic technology.

    F1 zero at the origin, F3 strict monotonicity, F4 midpoint convexity,
    T1 feasibility of inaction, T4 free disposability, T5 boundedness of
    the feasible outputs for each sampled input vector.
    """
    if prop not in F_PROPERTY_NAMES:
        raise ValueError(f"unknown property {prop!r}, expected one of {F_PROPERTY_NAMES}")
    _require_valid_quadratic(tech)
    rng = np.random.default_rng(seed)
    m, n = tech.m, tech.n
    tol = _F_TOLERANCES[prop]
    worst = 0.0
    witness = None
    passed = True

    def note(violation, info):
        nonlocal worst, witness, passed
        if violation > worst:
            worst = violation
            witness = info
        if violation > tol:
            passed = False

    if prop in ("F1", "T1"):
        value = tech.eval_raw(np.zeros(m), np.zeros(n))
        bad = abs(value) if prop == "F1" else max(0.0, value)
        note(bad, {"F(0,0)": value})
        return PropertyReport(prop, passed, 1, seed, tol, worst, witness)

    for _ in range(samples):
        y = rng.uniform(0.0, 3.0, m)
        x = rng.uniform(0.0, 3.0, n)
        if prop == "F3":
            bump = rng.uniform(0.01, 1.0)
            j = int(rng.integers(m))
            y_up = y.copy()
            y_up[j] += bump
            margin_out = tech.eval_raw(y_up, x) - tech.eval_raw(y, x)
            i = int(rng.integers(n))
            x_up = x.copy()
            x_up[i] += bump
            margin_in = tech.eval_raw(y, x) - tech.eval_raw(y, x_up)
            bad = max(0.0, -min(margin_out, margin_in))
            if min(margin_out, margin_in) <= 0.0:
                note(max(bad, np.finfo(float).tiny), {"y": y.tolist(), "x": x.tolist()})
            else:
                note(0.0, None)
        elif prop == "F4":
            y2 = rng.uniform(0.0, 3.0, m)
            x2 = rng.uniform(0.0, 3.0, n)
            mid = tech.eval_raw(0.5 * (y + y2), 0.5 * (x + x2))
            chord = 0.5 * (tech.eval_raw(y, x) + tech.eval_raw(y2, x2))
            note(max(0.0, mid - chord), {"z1": [y.tolist(), x.tolist()], "z2": [y2.tolist(), x2.tolist()]})
        elif prop == "T4":
            # Shift inputs to guarantee feasibility of the base bundle.
            need = tech.output_value(y) / float(np.sum(tech.params.a))
            x_feas = x + need
            y_low = y * rng.uniform(0.0, 1.0, m)
            x_high = x_feas * (1.0 + rng.uniform(0.0, 1.0, n))
            value = tech.eval_raw(y_low, x_high)
            note(max(0.0, value), {"y": y_low.tolist(), "x": x_high.tolist(), "F": value})
        elif prop == "T5":
            x_pos = x + 0.05
            roots = output_ray_roots(tech, x_pos)
            for i in range(m):
                e = np.zeros(m)
                e[i] = 1.01 * roots[i]
                value = tech.eval_raw(e, x_pos)
                note(max(0.0, -value), {"x": x_pos.tolist(), "output": i, "root": roots[i]})
    return PropertyReport(prop, passed, samples, seed, tol, worst, witness)
