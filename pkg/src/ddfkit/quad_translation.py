"""Translation-restricted quadratic function of outputs, inputs and a direction.

Start from the full quadratic

    Q(y, x) = a0 + sum_i a_i x_i + sum_k b_k y_k
              + 1/2 sum_ij a_ij x_i x_j + 1/2 sum_kl b_kl y_k y_l
              + sum_ik c_ik x_i y_k

with symmetric a_ij and b_kl.  Three families of linear restrictions tie
the coefficients to a direction (g_y, g_x) so that shifting the bundle by
alpha along (g_y, -g_x) subtracts exactly alpha from Q:

    sum_k c_ik g_yk - sum_j a_ij g_xj = 0          for every input i,
    sum_k b_k  g_yk - sum_i a_i  g_xi = -1,
    sum_l b_kl g_yl - sum_i c_ik g_xi = 0          for every output k.

Solving them pins down a_n, a_in, a_nn, b_km and b_mm (the coefficients
touching the last input and last output), which requires g_xn > 0 and
g_ym > 0.  The resulting function satisfies the translation identity
exactly, but scaling the direction by psi does *not* divide the value by
psi: the restricted quadratic is not homogeneous of degree -1 in the
direction, and `homogeneity_deviation` measures the failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bundle, DimensionError, Direction, as_vector

RESTRICTION_TOL = 1e-12  # residual allowed on the three restriction families
DUAL_PATH_TOL = 1e-10    # agreement between the two evaluation routes
HOMOGENEITY_SCALES = (0.5, 2.0, 10.0)


def _symmetric_block(values, size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (size, size):
        raise DimensionError(f"{name} must have shape ({size}, {size}), got {arr.shape}")
    if arr.size and float(np.max(np.abs(arr - arr.T))) > 1e-12:
        raise ValueError(f"{name} must be symmetric")
    return arr


@dataclass(frozen=True)
class FreeQuadraticParams:
    """Coefficients left free by the translation restrictions.

    `alpha` holds the first n-1 input linear coefficients, `beta` all m
    output linear coefficients, `alpha_mat`/`beta_mat` the symmetric free
    blocks of the input/output quadratic coefficients, and `gamma` the
    full n-by-m cross-coefficient matrix.  When n = 1 or m = 1 the
    corresponding free families are empty.
    """

    alpha0: float
    alpha: np.ndarray
    beta: np.ndarray
    alpha_mat: np.ndarray
    beta_mat: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        beta = as_vector(self.beta, "beta")
        gamma = np.asarray(self.gamma, dtype=float)
        if gamma.ndim != 2:
            raise DimensionError(f"gamma must be a matrix, got shape {gamma.shape}")
        n, m = gamma.shape
        if m != beta.shape[0]:
            raise DimensionError(
                f"gamma has {m} output columns but beta has {beta.shape[0]} entries"
            )
        if m < 1 or n < 1:
            raise DimensionError("need at least one output and one input")
        alpha = as_vector(self.alpha, "alpha")
        if alpha.shape[0] != n - 1:
            raise DimensionError(f"alpha must have {n - 1} entries, got {alpha.shape[0]}")
        alpha_mat = _symmetric_block(self.alpha_mat, n - 1, "alpha_mat")
        beta_mat = _symmetric_block(self.beta_mat, m - 1, "beta_mat")
        for name, arr in (
            ("alpha", alpha), ("beta", beta), ("alpha_mat", alpha_mat),
            ("beta_mat", beta_mat), ("gamma", gamma),
        ):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "alpha0", float(self.alpha0))

    @property
    def m(self) -> int:
        return self.beta.shape[0]

    @property
    def n(self) -> int:
        return self.gamma.shape[0]


def sample_free_params(rng: np.random.Generator, m: int, n: int) -> FreeQuadraticParams:
    """Free coefficients drawn uniformly from [-1, 1]."""
    def sym(size):
        raw = rng.uniform(-1.0, 1.0, (size, size))
        return 0.5 * (raw + raw.T)

    return FreeQuadraticParams(
        alpha0=float(rng.uniform(-1.0, 1.0)),
        alpha=rng.uniform(-1.0, 1.0, n - 1),
        beta=rng.uniform(-1.0, 1.0, m),
        alpha_mat=sym(n - 1),
        beta_mat=sym(m - 1),
        gamma=rng.uniform(-1.0, 1.0, (n, m)),
    )


@dataclass(frozen=True)
class RestrictedQuadraticParams:
    """Free coefficients plus the substituted ones, tied to a direction."""

    free: FreeQuadraticParams
    direction: Direction
    alpha_full: np.ndarray
    alpha_mat_full: np.ndarray
    beta_mat_full: np.ndarray

    @property
    def m(self) -> int:
        return self.free.m

    @property
    def n(self) -> int:
        return self.free.n

    def restriction_residuals(self) -> np.ndarray:
        """Residuals of the three restriction families, concatenated."""
        g_y, g_x = self.direction.g_y, self.direction.g_x
        res_cross = self.free.gamma @ g_y - self.alpha_mat_full @ g_x
        res_linear = float(self.free.beta @ g_y - self.alpha_full @ g_x) + 1.0
        res_out = self.beta_mat_full @ g_y - self.free.gamma.T @ g_x
        return np.concatenate([res_cross, [res_linear], res_out])


def restrict_parameters(free: FreeQuadraticParams, direction: Direction) -> RestrictedQuadraticParams:
    """Solve the translation restrictions for the pinned coefficients.

    Raises ValueError when the divisors g_x[n] or g_y[m] (last components)
    are not strictly positive, naming the offending component.
    """
    if direction.m != free.m or direction.n != free.n:
        raise DimensionError(
            f"direction has shape (m={direction.m}, n={direction.n}), "
            f"parameters expect (m={free.m}, n={free.n})"
        )
    m, n = free.m, free.n
    g_y, g_x = direction.g_y, direction.g_x
    if not g_x[-1] > 0:
        raise ValueError(f"direction component g_x[{n}] must be strictly positive")
    if not g_y[-1] > 0:
        raise ValueError(f"direction component g_y[{m}] must be strictly positive")
    gxn = float(g_x[-1])
    gym = float(g_y[-1])

    alpha_full = np.empty(n)
    alpha_full[: n - 1] = free.alpha
    alpha_full[n - 1] = (float(free.beta @ g_y) - float(free.alpha @ g_x[: n - 1]) + 1.0) / gxn

    alpha_mat_full = np.zeros((n, n))
    alpha_mat_full[: n - 1, : n - 1] = free.alpha_mat
    for i in range(n - 1):
        a_in = (float(free.gamma[i] @ g_y) - float(free.alpha_mat[i] @ g_x[: n - 1])) / gxn
        alpha_mat_full[i, n - 1] = a_in
        alpha_mat_full[n - 1, i] = a_in
    alpha_mat_full[n - 1, n - 1] = (
        float(free.gamma[n - 1] @ g_y)
        - float(alpha_mat_full[n - 1, : n - 1] @ g_x[: n - 1])
    ) / gxn

    beta_mat_full = np.zeros((m, m))
    beta_mat_full[: m - 1, : m - 1] = free.beta_mat
    for k in range(m - 1):
        b_km = (float(free.gamma[:, k] @ g_x) - float(free.beta_mat[k] @ g_y[: m - 1])) / gym
        beta_mat_full[k, m - 1] = b_km
        beta_mat_full[m - 1, k] = b_km
    beta_mat_full[m - 1, m - 1] = (
        float(free.gamma[:, m - 1] @ g_x)
        - float(beta_mat_full[m - 1, : m - 1] @ g_y[: m - 1])
    ) / gym

    for arr in (alpha_full, alpha_mat_full, beta_mat_full):
        arr.setflags(write=False)
    return RestrictedQuadraticParams(
        free=free,
        direction=direction,
        alpha_full=alpha_full,
        alpha_mat_full=alpha_mat_full,
        beta_mat_full=beta_mat_full,
    )


def _check_bundle(params: RestrictedQuadraticParams, bundle: Bundle):
    if bundle.m != params.m or bundle.n != params.n:
        raise DimensionError(
            f"bundle has shape (m={bundle.m}, n={bundle.n}), "
            f"parameters expect (m={params.m}, n={params.n})"
        )


def eval_Q_coefficient_form(params: RestrictedQuadraticParams, bundle: Bundle) -> float:
    """Plain quadratic evaluated with the substituted coefficient set."""
    _check_bundle(params, bundle)
    y, x = bundle.y, bundle.x
    free = params.free
    return float(
        free.alpha0
        + params.alpha_full @ x
        + free.beta @ y
        + 0.5 * x @ params.alpha_mat_full @ x
        + 0.5 * y @ params.beta_mat_full @ y
        + x @ free.gamma @ y
    )


def eval_Q_direction_form(params: RestrictedQuadraticParams, bundle: Bundle) -> float:
    """Direction-substituted expression of the same function.

    The double sums over the free quadratic blocks run over the upper
    triangle with halved diagonal terms, which for symmetric blocks equals
    half the full quadratic form.
    """
    _check_bundle(params, bundle)
    y, x = bundle.y, bundle.x
    free = params.free
    g_y, g_x = params.direction.g_y, params.direction.g_x
    gxn = float(g_x[-1])
    gym = float(g_y[-1])
    xn = float(x[-1])
    ym = float(y[-1])

    x_tilde = x[:-1] - (g_x[:-1] / gxn) * xn
    y_shift = y + (g_y / gxn) * xn
    y_tilde = y[:-1] - (g_y[:-1] / gym) * ym
    x_shift = x + (g_x / gym) * ym

    value = (
        free.alpha0
        + float(free.alpha @ x_tilde)
        + float(free.beta @ y_shift)
        + xn / gxn
        + 0.5 * float(x_tilde @ free.alpha_mat @ x_tilde)
        + 0.5 * float(y_tilde @ free.beta_mat @ y_tilde)
        + float(x_shift @ free.gamma @ y_shift)
        - 0.5 * float(g_x @ free.gamma @ g_y) * (xn / gxn + ym / gym) ** 2
    )
    return value


def eval_Q(params: RestrictedQuadraticParams, bundle: Bundle) -> float:
    """Value of the restricted quadratic at the bundle.

    Both evaluation routes are computed and must agree to DUAL_PATH_TOL;
    a disagreement would mean the substitution algebra is broken, so it is
    raised rather than returned.
    """
    primary = eval_Q_coefficient_form(params, bundle)
    secondary = eval_Q_direction_form(params, bundle)
    if abs(primary - secondary) > DUAL_PATH_TOL:
        raise ArithmeticError(
            f"evaluation routes disagree: {primary} vs {secondary}"
        )
    return primary


def translation_residual(params: RestrictedQuadraticParams, bundle: Bundle, alpha: float) -> float:
    """|Q(y + a*g_y, x - a*g_x) - (Q(y, x) - a)| for an admissible shift."""
    g_y, g_x = params.direction.g_y, params.direction.g_x
    shifted = Bundle(bundle.y + alpha * g_y, bundle.x - alpha * g_x)
    return abs(eval_Q(params, shifted) - (eval_Q(params, bundle) - alpha))


def homogeneity_deviation(
    free: FreeQuadraticParams, bundle: Bundle, direction: Direction, psi: float
) -> float:
    """|psi * Q_{psi g}(y, x) - Q_g(y, x)| with each Q restricted to its own direction.

    A strictly positive value witnesses the failure of homogeneity of
    degree -1 in the direction vector.
    """
    if not psi > 0:
        raise ValueError("psi must be positive")
    base = eval_Q(restrict_parameters(free, direction), bundle)
    scaled = eval_Q(restrict_parameters(free, direction.scaled(psi)), bundle)
    return abs(psi * scaled - base)


def homogeneity_witness_search(
    free: FreeQuadraticParams,
    bundle: Bundle,
    direction: Direction,
    psis: tuple[float, ...] = HOMOGENEITY_SCALES,
) -> tuple[float, float]:
    """Scale in `psis` with the largest homogeneity deviation, and its value."""
    best_psi, best = psis[0], -1.0
    for psi in psis:
        dev = homogeneity_deviation(free, bundle, direction, psi)
        if dev > best:
            best_psi, best = psi, dev
    return best_psi, best
