"""Independent brute-force references for the exact routines.

Everything here deliberately avoids the structure the solvers exploit:
the line search enumerates a beta grid and keeps the largest feasible
point, the frontier subsets come from pairwise dominance filtering over a
feasibility grid, and the joint-production existence checks evaluate the
defining biconditional pair by pair.  Results match the exact routines up
to grid resolution, which is what the equivalence tests assert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NEG_INF, Bundle, DimensionError, Direction, as_vector
from .ddf import endpoint_value, gamma_interval
from .technology import Technology, classify, frontier_member

DOM_EPS = 1e-9          # tolerance for dominance comparisons on grid floats
TRUNCATION_BOUND = 1e4  # scan limit replacing an unbounded interval end
_CHUNK = 1 << 21


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: points are integer multiples of `step` inside `bounds`."""

    step: float
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if not bounds:
            raise ValueError("bounds must cover at least one axis")
        for lo, hi in bounds:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"invalid axis bounds ({lo}, {hi})")
        object.__setattr__(self, "bounds", bounds)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def axis_points(self, axis: int) -> np.ndarray:
        lo, hi = self.bounds[axis]
        k_lo = math.ceil(lo / self.step - 1e-9)
        k_hi = math.floor(hi / self.step + 1e-9)
        return np.arange(k_lo, k_hi + 1) * self.step

    def points(self) -> np.ndarray:
        """All grid points as an (N, dim) array, lexicographic order."""
        axes = [self.axis_points(i) for i in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class GridDdfResult:
    value: float
    truncated_below: bool
    truncated_above: bool
    points_scanned: int


def grid_ddf_report(tech: Technology, bundle: Bundle, direction: Direction, step: float) -> GridDdfResult:
    """Line-search the beta grid, keeping the largest feasible point.

    The scan covers the admissible interval (its exact endpoints included)
    at integer multiples of `step`; an unbounded end is truncated at
    +/-1e4 and flagged.  Returns -inf when no scanned point is feasible.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    gamma = gamma_interval(bundle, direction)
    f = tech.line_restriction(bundle.y, bundle.x, direction.g_y, direction.g_x)
    truncated_below = not gamma.bounded_below
    truncated_above = not gamma.bounded_above
    lo = gamma.lower if gamma.bounded_below else -TRUNCATION_BOUND
    hi = gamma.upper if gamma.bounded_above else TRUNCATION_BOUND
    scanned = 0

    # True interval endpoints are scanned with exact binding coordinates;
    # truncation bounds are ordinary points.
    if gamma.bounded_above:
        hi_value = endpoint_value(tech, bundle, direction, gamma, "upper")
    else:
        hi_value = float(f(hi))
    if hi_value <= 0.0:
        return GridDdfResult(hi, truncated_below, truncated_above, 1)

    k_lo = math.ceil(lo / step - 1e-9)
    k_hi = math.floor(hi / step + 1e-9)
    best = NEG_INF
    k = k_hi
    while k >= k_lo:
        k_next = max(k_lo - 1, k - _CHUNK)
        betas = np.arange(k, k_next, -1, dtype=float) * step
        feasible = f(betas) <= 0.0
        scanned += betas.shape[0]
        idx = int(np.argmax(feasible))
        if feasible[idx]:
            best = float(betas[idx])
            break
        k = k_next
    if best == NEG_INF:
        if gamma.bounded_below:
            lo_value = endpoint_value(tech, bundle, direction, gamma, "lower")
        else:
            lo_value = float(f(lo))
        if lo_value <= 0.0:
            best = lo
    return GridDdfResult(best, truncated_below, truncated_above, scanned + 2)


def grid_ddf(tech: Technology, bundle: Bundle, direction: Direction, step: float) -> float:
    return grid_ddf_report(tech, bundle, direction, step).value


_PROBE_FRACTIONS = (1.0, 0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def _proportional_scale(base: np.ndarray, other: np.ndarray) -> float | None:
    """Scalar t with other == t * base (within DOM_EPS), else None."""
    pivot = int(np.argmax(base))
    if base[pivot] <= DOM_EPS:
        return None
    t = other[pivot] / base[pivot]
    if np.max(np.abs(other - t * base)) <= DOM_EPS:
        return float(t)
    return None


def _dominated_mask(tech, side, fixed, cand, kind, step) -> np.ndarray:
    """Which candidates have a feasible dominating point of the given kind.

    For eff and weff the dominating point is sought by feasibility probes
    a short distance along the dominating direction (single components up
    for eff, all nonzero components at once for weff; mirrored downward on
    the input side).  Under free disposability a dominating point exists
    exactly when such a probe succeeds for some positive offset, so the
    probe ladder resolves domination down to a fraction of the grid step.
    Radial (isoq) domination instead looks for a grid-aligned multiple of
    the candidate among the feasible candidates.
    """
    n, dim = cand.shape
    sign = 1.0 if side == "output" else -1.0

    def feasible(points: np.ndarray) -> np.ndarray:
        if side == "output":
            other = np.broadcast_to(fixed, (points.shape[0], fixed.shape[0]))
            return tech.eval_batch(points, np.ascontiguousarray(other)) <= 0.0
        other = np.broadcast_to(fixed, (points.shape[0], fixed.shape[0]))
        return tech.eval_batch(np.ascontiguousarray(other), points) <= 0.0

    if kind in ("eff", "weff"):
        dominated = np.zeros(n, dtype=bool)
        if kind == "weff":
            directions = (cand > DOM_EPS).astype(float)  # star order fixes zeros
            # A zero candidate is star-dominated by itself whenever feasible,
            # which it is by construction.
            dominated |= ~np.any(directions > 0, axis=1)
        for frac in _PROBE_FRACTIONS:
            todo = ~dominated
            if not np.any(todo):
                break
            t = frac * step
            if kind == "eff":
                for axis in range(dim):
                    base = cand[todo]
                    offs = np.minimum(t, base[:, axis]) if side == "input" else t
                    probe = base.copy()
                    probe[:, axis] += sign * offs
                    ok = feasible(probe)
                    if side == "input":
                        ok &= base[:, axis] > DOM_EPS
                    idx = np.flatnonzero(todo)
                    dominated[idx[ok]] = True
                    todo = ~dominated
            else:
                base = cand[todo]
                dirs = directions[todo]
                if side == "input":
                    smallest = np.where(
                        np.any(dirs > 0, axis=1),
                        np.min(np.where(dirs > 0, base, np.inf), axis=1),
                        0.0,
                    )
                    offs = np.minimum(t, smallest)[:, None]
                else:
                    offs = t
                probe = base + sign * offs * dirs
                ok = feasible(probe)
                idx = np.flatnonzero(todo)
                dominated[idx[ok]] = True
        return dominated

    # isoq: radial expansion (outputs) or contraction (inputs) on the grid
    out = np.zeros(n, dtype=bool)
    for i in range(n):
        base = cand[i]
        if np.all(base <= DOM_EPS):
            out[i] = True  # the zero point is its own radial image
            continue
        for j in range(n):
            if j == i:
                continue
            t = _proportional_scale(base, cand[j])
            if t is None:
                continue
            if side == "output" and t > 1.0 + DOM_EPS:
                out[i] = True
                break
            if side == "input" and t < 1.0 - DOM_EPS:
                out[i] = True
                break
    return out


def grid_frontier(tech: Technology, side: str, fixed, grid: GridSpec, kind: str) -> set[tuple[float, ...]]:
    """Feasible grid points surviving the dominance filter of `kind`.

    `kind` is one of ``isoq`` (no feasible grid-aligned radial move),
    ``weff`` (no star-dominating feasible point) or ``eff`` (no weakly
    dominating feasible point), with domination resolved by feasibility
    probes as described in `_dominated_mask`.  `fixed` is the conditioning
    vector of the other side and must classify to X1/Y1.
    """
    if side not in ("input", "output"):
        raise ValueError("side must be 'input' or 'output'")
    if kind not in ("isoq", "weff", "eff"):
        raise ValueError("kind must be 'isoq', 'weff' or 'eff'")
    fixed_side = "input" if side == "output" else "output"
    fixed = as_vector(fixed, "fixed")
    cell = classify(tech, fixed_side, fixed)
    if cell not in ("X1", "Y1"):
        raise ValueError(f"fixed vector must classify to X1/Y1, got {cell}")
    dim = tech.m if side == "output" else tech.n
    if grid.dim != dim:
        raise DimensionError(f"grid must have {dim} axes for this side, got {grid.dim}")
    pts = grid.points()
    if side == "output":
        Y = pts
        X = np.broadcast_to(fixed, (pts.shape[0], fixed.shape[0]))
    else:
        Y = np.broadcast_to(fixed, (pts.shape[0], fixed.shape[0]))
        X = pts
    feasible = tech.eval_batch(np.ascontiguousarray(Y), np.ascontiguousarray(X)) <= 0.0
    cand = pts[feasible]
    if cand.shape[0] == 0:
        return set()
    keep = ~_dominated_mask(tech, side, fixed, cand, kind, grid.step)
    return {tuple(float(v) for v in row) for row in cand[keep]}


@dataclass(frozen=True)
class JpfExistenceReport:
    """Grid verdict on a joint-production-function existence condition.

    `holds` means the defining biconditional held at every sampled grid
    pair; it is a statement about the grid, not the continuum.
    """

    kind: str
    holds: bool
    counterexample: tuple | None
    violations: tuple
    pairs_checked: int


def jpf_existence_check(tech: Technology, grid: GridSpec, kind: str) -> JpfExistenceReport:
    """Check, pair by pair on the grid, the boundary biconditional.

    For ``isoquant``: y on the output isoquant for x exactly when x is on
    the input isoquant for y.  For ``efficient``: the same with efficient
    subsets.  The grid spans outputs on the first m axes and inputs on the
    remaining n.  The first violating (y, x) becomes the counterexample;
    the full list is kept for inspection.
    """
    if kind not in ("isoquant", "efficient"):
        raise ValueError("kind must be 'isoquant' or 'efficient'")
    if grid.dim != tech.m + tech.n:
        raise DimensionError(
            f"grid must have m+n = {tech.m + tech.n} axes, got {grid.dim}"
        )
    member_kind = "isoq" if kind == "isoquant" else "eff"
    y_grid = GridSpec(grid.step, grid.bounds[: tech.m]).points()
    x_grid = GridSpec(grid.step, grid.bounds[tech.m:]).points()
    violations = []
    pairs = 0
    for y in y_grid:
        if classify(tech, "output", y) != "Y1":
            continue
        for x in x_grid:
            if classify(tech, "input", x) != "X1":
                continue
            pairs += 1
            y_on = frontier_member(tech, "output", x, y, member_kind)
            x_on = frontier_member(tech, "input", y, x, member_kind)
            if y_on != x_on:
                violations.append(
                    (tuple(float(v) for v in y), tuple(float(v) for v in x))
                )
    return JpfExistenceReport(
        kind=kind,
        holds=not violations,
        counterexample=violations[0] if violations else None,
        violations=tuple(violations),
        pairs_checked=pairs,
    )
