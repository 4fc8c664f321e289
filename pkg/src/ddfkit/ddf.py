"""Directional technology distance: constructive evaluation and checks.

The distance of a bundle (y, x) in a direction (g_y, g_x) is the largest
beta such that (y + beta*g_y, x - beta*g_x) stays feasible.  Because both
shifted vectors must remain nonnegative, the search is confined to the
interval

    Gamma = [ max over {j : g_yj > 0} of -y_j / g_yj ,
              min over {i : g_xi > 0} of  x_i / g_xi ]

with an end dropped when the corresponding index set is empty.  On Gamma
the line restriction f(beta) = F(y + beta*g_y, x - beta*g_x) is
nondecreasing (strictly increasing and convex for the quadratic family),
so the feasible betas form a lower interval and three cases exhaust the
solution:

* f stays nonpositive up to a finite upper end: the value is that end,
  min over i of x_i / g_xi;
* f changes sign inside Gamma: the value is the root of f;
* f is positive on all of Gamma: no feasible point, the value is -inf.

For the quadratic family the root has a closed form; every other family
is solved by sign-bracketed bisection.  Both routes agree to 1e-8 on the
quadratic family, which the test suite enforces.

All evaluations are pure functions of their arguments; the sampled
property checks draw from their own seeded generator, so concurrent use
is safe and reports are reproducible from the recorded seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    NEG_INF,
    Bundle,
    DimensionError,
    Direction,
    PropertyReport,
    is_neg_inf,
)
from .technology import QuadraticSeparable, Technology, _check_bundle_dims

BISECT_WIDTH_TOL = 1e-12   # relative interval width at which bisection stops
BISECT_MAX_ITER = 200
EXPANSION_CAP = 64         # doublings allowed when hunting a sign bracket
DISCRIMINANT_TOL = 1e-12   # discriminants below -tol mean an infeasible line
LINEAR_BRANCH_TOL = 1e-14  # quadratic line coefficient treated as zero

D_PROPERTY_NAMES = ("D1", "D2", "D3", "D4", "D5", "D6")

D_TOLERANCES = {
    "D1": 1e-8,   # absolute, translation along the direction
    "D2": 1e-9,   # relative, homogeneity of degree -1 in the direction
    "D3": 0.0,    # exact zero at the origin
    "D4": 0.0,    # sign equivalence with F, outside a guard band
    "D5": 1e-10,  # monotonicity on dominated pairs
    "D6": 1e-10,  # midpoint concavity
}
D4_GUARD_BAND = 1e-9
D2_SCALES = (0.5, 2.0, 10.0)


@dataclass(frozen=True)
class GammaInterval:
    """Admissible beta interval with the supporting index sets (0-based)."""

    lower: float
    upper: float
    i_plus: tuple[int, ...]
    j_plus: tuple[int, ...]

    @property
    def bounded_below(self) -> bool:
        return math.isfinite(self.lower)

    @property
    def bounded_above(self) -> bool:
        return math.isfinite(self.upper)


def gamma_interval(bundle: Bundle, direction: Direction) -> GammaInterval:
    """Interval of betas keeping both shifted vectors nonnegative."""
    if bundle.m != direction.m or bundle.n != direction.n:
        raise DimensionError(
            f"direction has shape (m={direction.m}, n={direction.n}), "
            f"bundle has (m={bundle.m}, n={bundle.n})"
        )
    j_plus = tuple(int(j) for j in np.flatnonzero(direction.g_y > 0))
    i_plus = tuple(int(i) for i in np.flatnonzero(direction.g_x > 0))
    if j_plus:
        lower = float(np.max(-bundle.y[list(j_plus)] / direction.g_y[list(j_plus)]))
    else:
        lower = float("-inf")
    if i_plus:
        upper = float(np.min(bundle.x[list(i_plus)] / direction.g_x[list(i_plus)]))
    else:
        upper = float("inf")
    return GammaInterval(lower=lower, upper=upper, i_plus=i_plus, j_plus=j_plus)


def endpoint_value(tech: Technology, bundle: Bundle, direction: Direction,
                   gamma: GammaInterval, end: str) -> float:
    """Transformation value at an exact endpoint of the admissible interval.

    At the lower end the binding output coordinates are zero by definition
    (and symmetrically for inputs at the upper end), but computing
    ``y + lower * g_y`` in floating point leaves them with dust of either
    sign, which can flip the feasible/infeasible classification of a
    boundary singleton.  Evaluating with the binding coordinates pinned to
    zero is the exact endpoint value; the grid oracle uses the same
    routine so both sides agree on these razor cases.
    """
    if end == "lower":
        beta = gamma.lower
        binding = [
            j for j in gamma.j_plus
            if -bundle.y[j] / direction.g_y[j] == gamma.lower
        ]
    elif end == "upper":
        beta = gamma.upper
        binding = [
            i for i in gamma.i_plus
            if bundle.x[i] / direction.g_x[i] == gamma.upper
        ]
    else:
        raise ValueError("end must be 'lower' or 'upper'")
    if not math.isfinite(beta):
        raise ValueError(f"{end} end of the interval is unbounded")
    y = np.maximum(bundle.y + beta * direction.g_y, 0.0)
    x = np.maximum(bundle.x - beta * direction.g_x, 0.0)
    if end == "lower":
        y[binding] = 0.0
    else:
        x[binding] = 0.0
    return tech.eval_raw(y, x)


@dataclass(frozen=True)
class DdfSolution:
    """Distance value together with how it was obtained.

    `case` records which branch applied: "proper" (root inside the
    interval), "full" (feasible up to the interval's upper end) or
    "empty" (value -inf).  `bracket_exhausted` flags an "empty" verdict
    reached by giving up on the downward bracket search rather than by a
    sign test at a finite lower end.
    """

    value: float
    case: str
    gamma: GammaInterval
    method: str
    iterations: int = 0
    bracket_exhausted: bool = False


def _resolve_method(tech: Technology, method: str) -> str:
    if method == "auto":
        return "closed" if isinstance(tech, QuadraticSeparable) else "bisect"
    if method not in ("closed", "bisect"):
        raise ValueError(f"method must be 'auto', 'closed' or 'bisect', got {method!r}")
    if method == "closed" and not isinstance(tech, QuadraticSeparable):
        raise ValueError("closed-form evaluation requires a quadratic_separable technology")
    return method


def _solve_closed(tech, bundle, direction, gamma):
    p = tech.params
    g_y, g_x = direction.g_y, direction.g_x
    quad = float(g_y @ p.B @ g_y)
    slope = float(p.b @ g_y + bundle.y @ p.B @ g_y + p.a @ g_x)
    const = tech.eval_raw(bundle.y, bundle.x)

    if gamma.bounded_above and endpoint_value(tech, bundle, direction, gamma, "upper") <= 0.0:
        return DdfSolution(gamma.upper, "full", gamma, "closed")

    if const == 0.0:
        # On the boundary the root is beta = 0 exactly.
        root = 0.0
    elif quad <= LINEAR_BRANCH_TOL:
        root = -const / slope
    else:
        disc = slope * slope - 2.0 * quad * const
        if disc < -DISCRIMINANT_TOL:
            return DdfSolution(NEG_INF, "empty", gamma, "closed")
        root = (-slope + math.sqrt(max(disc, 0.0))) / quad

    if gamma.bounded_below:
        if endpoint_value(tech, bundle, direction, gamma, "lower") > 0.0:
            return DdfSolution(NEG_INF, "empty", gamma, "closed")
        root = max(root, gamma.lower)
    if gamma.bounded_above:
        root = min(root, gamma.upper)
    return DdfSolution(root, "proper", gamma, "closed")


def _solve_bisect(tech, bundle, direction, gamma, f):
    if gamma.bounded_above and endpoint_value(tech, bundle, direction, gamma, "upper") <= 0.0:
        return DdfSolution(gamma.upper, "full", gamma, "bisect")

    if gamma.bounded_below:
        if endpoint_value(tech, bundle, direction, gamma, "lower") > 0.0:
            return DdfSolution(NEG_INF, "empty", gamma, "bisect")
        lo = gamma.lower
        hi = gamma.upper
    else:
        # A zero output direction leaves the lower end open; hunt downward
        # for a feasible point by doubling, then give up.
        lo = None
        hi = gamma.upper
        candidate = -1.0
        for _ in range(EXPANSION_CAP):
            if f(candidate) <= 0.0:
                lo = candidate
                break
            hi = min(hi, candidate)
            candidate *= 2.0
        if lo is None:
            return DdfSolution(NEG_INF, "empty", gamma, "bisect", bracket_exhausted=True)

    if not math.isfinite(hi):
        # An unbounded interval that stays feasible forever would violate
        # boundedness of the feasible outputs; treat it as a broken contract.
        grow = max(1.0, lo + 1.0)
        found = False
        for _ in range(EXPANSION_CAP):
            if f(grow) > 0.0:
                hi = grow
                found = True
                break
            lo = grow
            grow *= 2.0
        if not found:
            raise RuntimeError(
                "line restriction never becomes positive: feasible set is "
                "unbounded along the direction, violating the technology contract"
            )

    iterations = 0
    while (hi - lo) > BISECT_WIDTH_TOL * max(1.0, abs(lo), abs(hi)) and iterations < BISECT_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return DdfSolution(lo, "proper", gamma, "bisect", iterations=iterations)


def solve_ddf(tech: Technology, bundle: Bundle, direction: Direction, method: str = "auto") -> DdfSolution:
    """Solve for the directional distance, reporting the branch taken."""
    _check_bundle_dims(tech, bundle)
    method = _resolve_method(tech, method)
    if isinstance(tech, QuadraticSeparable) and tech.validation_report:
        raise ValueError(f"invalid parameters: {tech.validation_report}")
    gamma = gamma_interval(bundle, direction)
    if method == "closed":
        return _solve_closed(tech, bundle, direction, gamma)
    f = tech.line_restriction(bundle.y, bundle.x, direction.g_y, direction.g_x)
    return _solve_bisect(tech, bundle, direction, gamma, f)


def eval_ddf(tech: Technology, bundle: Bundle, direction: Direction, method: str = "auto") -> float:
    """Directional distance value; -inf when no point on the line is feasible."""
    return solve_ddf(tech, bundle, direction, method).value


def unsymmetric_t(tech: Technology, i: int, bundle: Bundle) -> float:
    """Largest feasible level of output `i` given the other outputs and inputs.

    `i` is 1-based.  The entry bundle.y[i-1] is ignored: the level is
    recomputed as the distance from a zeroed copy along the i-th output
    axis, and -inf is returned when no nonnegative level is feasible.
    """
    _check_bundle_dims(tech, bundle)
    if not 1 <= i <= tech.m:
        raise IndexError(f"output index {i} out of range 1..{tech.m}")
    y0 = np.array(bundle.y)
    y0[i - 1] = 0.0
    e = np.zeros(tech.m)
    e[i - 1] = 1.0
    sol = solve_ddf(tech, Bundle(y0, bundle.x), Direction(e, np.zeros(tech.n)))
    return sol.value


# ---------------------------------------------------------------------------
# Sampled property checks (quadratic family only)
# ---------------------------------------------------------------------------

def sample_bundle(rng: np.random.Generator, m: int, n: int) -> Bundle:
    """Uniform bundle on [0, 3]^(m+n)."""
    return Bundle(rng.uniform(0.0, 3.0, m), rng.uniform(0.0, 3.0, n))


def sample_direction(rng: np.random.Generator, m: int, n: int) -> Direction:
    """Uniform direction on [0, 1]^(m+n), rejecting the zero vector."""
    while True:
        g_y = rng.uniform(0.0, 1.0, m)
        g_x = rng.uniform(0.0, 1.0, n)
        if np.any(g_y > 0) or np.any(g_x > 0):
            return Direction(g_y, g_x)


def _require_valid_quadratic(tech):
    if not isinstance(tech, QuadraticSeparable):
        raise ValueError("distance property checks run on quadratic_separable technologies")
    if tech.validation_report:
        raise ValueError(f"invalid parameters: {tech.validation_report}")


def check_property(tech: Technology, prop: str, samples: int = 200, seed: int = 0) -> PropertyReport:
    """Sampled check of one of the distance-function properties D1..D6.

    D1 translation, D2 homogeneity of degree -1 in the direction, D3 zero
    at the origin, D4 sign equivalence with the transformation value, D5
    monotonicity on dominated pairs, D6 midpoint concavity.  Bundles are
    sampled uniformly on [0, 3] and directions on [0, 1] from the seeded
    generator recorded in the report.
    """
    if prop not in D_PROPERTY_NAMES:
        raise ValueError(f"unknown property {prop!r}, expected one of {D_PROPERTY_NAMES}")
    _require_valid_quadratic(tech)
    rng = np.random.default_rng(seed)
    m, n = tech.m, tech.n
    tol = D_TOLERANCES[prop]
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

    for _ in range(samples):
        if prop == "D3":
            direction = sample_direction(rng, m, n)
            value = eval_ddf(tech, Bundle(np.zeros(m), np.zeros(n)), direction)
            note(abs(value), {"direction": [direction.g_y.tolist(), direction.g_x.tolist()]})
            continue

        bundle = sample_bundle(rng, m, n)
        direction = sample_direction(rng, m, n)
        base = eval_ddf(tech, bundle, direction)
        info = {
            "bundle": [bundle.y.tolist(), bundle.x.tolist()],
            "direction": [direction.g_y.tolist(), direction.g_x.tolist()],
        }

        if prop == "D1":
            g = gamma_interval(bundle, direction)
            lo = max(g.lower, -3.0)
            hi = min(g.upper, 3.0)
            for alpha in (0.0, rng.uniform(lo, hi)):
                shifted = Bundle(
                    np.maximum(bundle.y + alpha * direction.g_y, 0.0),
                    np.maximum(bundle.x - alpha * direction.g_x, 0.0),
                )
                value = eval_ddf(tech, shifted, direction)
                if is_neg_inf(base) or is_neg_inf(value):
                    bad = 0.0 if is_neg_inf(base) and is_neg_inf(value) else float("inf")
                else:
                    bad = abs(value - (base - alpha))
                note(bad, {**info, "alpha": alpha})
        elif prop == "D2":
            for psi in D2_SCALES:
                value = eval_ddf(tech, bundle, direction.scaled(psi))
                if is_neg_inf(base) or is_neg_inf(value):
                    bad = 0.0 if is_neg_inf(base) and is_neg_inf(value) else float("inf")
                else:
                    bad = abs(psi * value - base) / max(1.0, abs(base))
                note(bad, {**info, "psi": psi})
        elif prop == "D4":
            fval = tech.eval_raw(bundle.y, bundle.x)
            if fval <= -D4_GUARD_BAND:
                bad = max(0.0, -base)  # distance must be nonnegative
                if base < 0.0:
                    bad = max(bad, np.finfo(float).tiny)
                note(bad, {**info, "F": fval, "ddf": base})
            elif fval >= D4_GUARD_BAND:
                bad = max(0.0, base) if not is_neg_inf(base) else 0.0
                if not is_neg_inf(base) and base >= 0.0:
                    bad = max(bad, np.finfo(float).tiny)
                note(bad, {**info, "F": fval, "ddf": base})
        elif prop == "D5":
            y_low = bundle.y * rng.uniform(0.0, 1.0, m)
            x_high = bundle.x * (1.0 + rng.uniform(0.0, 1.0, n))
            more_inputs = eval_ddf(tech, Bundle(bundle.y, x_high), direction)
            fewer_outputs = eval_ddf(tech, Bundle(y_low, bundle.x), direction)
            both = eval_ddf(tech, Bundle(y_low, x_high), direction)
            bad = 0.0
            if not is_neg_inf(base):
                if is_neg_inf(more_inputs):
                    bad = float("inf")
                else:
                    bad = max(bad, base - more_inputs)
                if not is_neg_inf(fewer_outputs):
                    bad = max(bad, base - fewer_outputs)
                if not is_neg_inf(both):
                    bad = max(bad, base - both)
            note(max(0.0, bad), {**info, "y_low": y_low.tolist(), "x_high": x_high.tolist()})
        elif prop == "D6":
            other = sample_bundle(rng, m, n)
            second = eval_ddf(tech, other, direction)
            mid = Bundle(0.5 * (bundle.y + other.y), 0.5 * (bundle.x + other.x))
            mid_value = eval_ddf(tech, mid, direction)
            if not (is_neg_inf(base) or is_neg_inf(second) or is_neg_inf(mid_value)):
                bad = max(0.0, 0.5 * base + 0.5 * second - mid_value)
                note(bad, {**info, "other": [other.y.tolist(), other.x.tolist()]})

    return PropertyReport(prop, passed, samples, seed, tol, worst, witness)
