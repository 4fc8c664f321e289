import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfkit import (
    Bundle,
    DimensionError,
    Direction,
    FreeQuadraticParams,
    eval_Q,
    eval_Q_coefficient_form,
    eval_Q_direction_form,
    homogeneity_deviation,
    homogeneity_witness_search,
    restrict_parameters,
    sample_free_params,
    translation_residual,
)

UNIT_DIR = Direction([1.0, 1.0], [1.0, 1.0])
UNIT_BUNDLE = Bundle([1.0, 1.0], [1.0, 1.0])


def single_output_single_input(beta1=1.0, gamma11=0.0, alpha0=0.0):
    return FreeQuadraticParams(
        alpha0=alpha0,
        alpha=[],
        beta=[beta1],
        alpha_mat=np.zeros((0, 0)),
        beta_mat=np.zeros((0, 0)),
        gamma=[[gamma11]],
    )


# ---------------------------------------------------------------------------
# substitution formulas
# ---------------------------------------------------------------------------

def test_single_pair_substitution():
    # with one output and one input the input coefficient is pinned to
    # (beta1 * g_y + 1) / g_x = 2
    free = single_output_single_input(beta1=1.0)
    p = restrict_parameters(free, Direction([1.0], [1.0]))
    assert p.alpha_full.tolist() == [2.0]
    assert np.max(np.abs(p.restriction_residuals())) == 0.0


def test_single_pair_quadratic_pins():
    free = single_output_single_input(beta1=0.5, gamma11=0.8)
    p = restrict_parameters(free, Direction([2.0], [0.5]))
    # cross restriction: gamma11 * g_y = alpha11 * g_x
    assert p.alpha_mat_full[0, 0] == pytest.approx(0.8 * 2.0 / 0.5)
    # output restriction: beta11 * g_y = gamma11 * g_x
    assert p.beta_mat_full[0, 0] == pytest.approx(0.8 * 0.5 / 2.0)


def test_identity_scaling_returns_same_parameters():
    free = sample_free_params(np.random.default_rng(3), 2, 2)
    p1 = restrict_parameters(free, UNIT_DIR)
    p2 = restrict_parameters(free, UNIT_DIR.scaled(1.0))
    assert np.array_equal(p1.alpha_full, p2.alpha_full)
    assert np.array_equal(p1.alpha_mat_full, p2.alpha_mat_full)
    assert np.array_equal(p1.beta_mat_full, p2.beta_mat_full)


def test_restriction_residuals_seed_42():
    free = sample_free_params(np.random.default_rng(42), 2, 2)
    p = restrict_parameters(free, UNIT_DIR)
    assert np.max(np.abs(p.restriction_residuals())) <= 1e-12


@pytest.mark.parametrize("m,n", [(1, 1), (1, 3), (3, 1), (2, 2), (3, 2)])
def test_restriction_residuals_random_shapes(m, n):
    rng = np.random.default_rng(100 + 10 * m + n)
    for _ in range(20):
        free = sample_free_params(rng, m, n)
        direction = Direction(rng.uniform(0.1, 1.0, m), rng.uniform(0.1, 1.0, n))
        p = restrict_parameters(free, direction)
        assert np.max(np.abs(p.restriction_residuals())) <= 1e-12


def test_zero_divisor_errors_name_component():
    free = sample_free_params(np.random.default_rng(0), 2, 2)
    with pytest.raises(ValueError, match=r"g_x\[2\]"):
        restrict_parameters(free, Direction([1.0, 1.0], [1.0, 0.0]))
    with pytest.raises(ValueError, match=r"g_y\[2\]"):
        restrict_parameters(free, Direction([1.0, 0.0], [1.0, 1.0]))


def test_dimension_mismatch_rejected():
    free = sample_free_params(np.random.default_rng(0), 2, 2)
    with pytest.raises(DimensionError):
        restrict_parameters(free, Direction([1.0], [1.0, 1.0]))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def test_zero_bundle_evaluates_to_constant():
    free = sample_free_params(np.random.default_rng(8), 2, 2)
    p = restrict_parameters(free, UNIT_DIR)
    zero = Bundle([0.0, 0.0], [0.0, 0.0])
    assert eval_Q(p, zero) == pytest.approx(free.alpha0, abs=1e-14)


def test_dual_path_agreement():
    rng = np.random.default_rng(21)
    for _ in range(100):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        free = sample_free_params(rng, m, n)
        direction = Direction(rng.uniform(0.1, 1.0, m), rng.uniform(0.1, 1.0, n))
        p = restrict_parameters(free, direction)
        bundle = Bundle(rng.uniform(0.0, 3.0, m), rng.uniform(0.0, 3.0, n))
        primary = eval_Q_coefficient_form(p, bundle)
        secondary = eval_Q_direction_form(p, bundle)
        assert abs(primary - secondary) <= 1e-10
        assert eval_Q(p, bundle) == primary


def test_translation_identity_alpha_03():
    free = sample_free_params(np.random.default_rng(42), 2, 2)
    p = restrict_parameters(free, UNIT_DIR)
    assert translation_residual(p, UNIT_BUNDLE, 0.3) <= 1e-10


@given(
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    alpha=st.floats(min_value=-0.8, max_value=0.8, allow_nan=False),
)
@settings(max_examples=150, deadline=None)
def test_translation_identity_property(seed, alpha):
    rng = np.random.default_rng(seed)
    free = sample_free_params(rng, 2, 2)
    p = restrict_parameters(free, UNIT_DIR)
    bundle = Bundle(rng.uniform(1.0, 3.0, 2), rng.uniform(1.0, 3.0, 2))
    assert translation_residual(p, bundle, alpha) <= 1e-10


def test_translation_identity_sampled():
    rng = np.random.default_rng(55)
    for _ in range(50):
        free = sample_free_params(rng, 2, 3)
        direction = Direction(rng.uniform(0.2, 1.0, 2), rng.uniform(0.2, 1.0, 3))
        p = restrict_parameters(free, direction)
        bundle = Bundle(rng.uniform(0.5, 3.0, 2), rng.uniform(0.5, 3.0, 3))
        alpha = rng.uniform(-0.4, 0.4)
        assert translation_residual(p, bundle, alpha) <= 1e-10


# ---------------------------------------------------------------------------
# homogeneity failure
# ---------------------------------------------------------------------------

def test_psi_one_gives_zero_deviation():
    free = sample_free_params(np.random.default_rng(5), 2, 2)
    assert homogeneity_deviation(free, UNIT_BUNDLE, UNIT_DIR, 1.0) == 0.0


def test_seed7_deviation_exceeds_threshold():
    free = sample_free_params(np.random.default_rng(7), 2, 2)
    assert homogeneity_deviation(free, UNIT_BUNDLE, UNIT_DIR, 2.0) > 1e-3


def test_witness_search_returns_max():
    free = sample_free_params(np.random.default_rng(7), 2, 2)
    psi, dev = homogeneity_witness_search(free, UNIT_BUNDLE, UNIT_DIR)
    assert dev >= homogeneity_deviation(free, UNIT_BUNDLE, UNIT_DIR, 2.0)
    assert psi in (0.5, 2.0, 10.0)


def test_purely_linear_slice_is_scale_invariant():
    # alpha0 = 0, beta1 = 0, gamma = 0 forces Q = x / g_x, which scales
    # exactly; the failure of homogeneity needs richer coefficients
    free = single_output_single_input(beta1=0.0, gamma11=0.0, alpha0=0.0)
    for g in (Direction([1.0], [0.7]), Direction([0.4], [1.3])):
        for psi in (0.5, 2.0, 10.0):
            assert homogeneity_deviation(free, Bundle([1.0], [1.0]), g, psi) <= 1e-15


def test_deviation_rejects_nonpositive_psi():
    free = sample_free_params(np.random.default_rng(1), 2, 2)
    with pytest.raises(ValueError):
        homogeneity_deviation(free, UNIT_BUNDLE, UNIT_DIR, 0.0)
