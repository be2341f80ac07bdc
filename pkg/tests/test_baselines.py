"""Classical baselines: DDC with Gamma calibration, Wilks Lambda, Puri-Sen."""

import numpy as np
import pytest

from rpdcov import (
    RankDegeneracyError,
    RngSeed,
    RpdcConfig,
    SingularCovarianceError,
    ValidationError,
    covariance_blocks,
    ddc_gamma_test,
    gamma_test,
    generate_example,
    puri_sen_test,
    wilks_lambda_test,
)
from rpdcov.examples import ExampleSpec


def test_covariance_blocks_shapes_and_symmetry():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((50, 3))
    Y = rng.standard_normal((50, 2))
    blocks = covariance_blocks(X, Y)
    assert blocks.s11.shape == (3, 3) and blocks.s22.shape == (2, 2)
    assert blocks.s12.shape == (3, 2)
    np.testing.assert_allclose(blocks.s11, blocks.s11.T)
    np.testing.assert_allclose(blocks.s22, blocks.s22.T)
    assert np.all(np.linalg.eigvalsh(blocks.s11) > -1e-12)


# ---------------------------------------------------------------------------
# DDC with Gamma calibration


def test_ddc_flags_constant_data():
    res = ddc_gamma_test(np.ones((20, 2)), np.ones((20, 2)))
    assert res.degenerate and not res.reject


def test_ddc_detects_identity_dependence():
    rng = np.random.default_rng(2)
    rejections = 0
    for r in range(100):
        X = rng.standard_normal((200, 3))
        rejections += ddc_gamma_test(X, X).reject
    assert rejections >= 99


def test_ddc_type_one_error_calibrated():
    rng = np.random.default_rng(3)
    rejections = 0
    reps = 400
    for r in range(reps):
        X = rng.standard_normal((500, 5))
        Y = rng.standard_normal((500, 5))
        rejections += ddc_gamma_test(X, Y).reject
    assert abs(rejections / reps - 0.05) <= 0.03


def test_ddc_echoes_calibration_note():
    rng = np.random.default_rng(4)
    res = ddc_gamma_test(rng.standard_normal((30, 2)), rng.standard_normal((30, 2)))
    assert "calibration" in res.config
    assert res.method == "ddc_gamma"


# ---------------------------------------------------------------------------
# Wilks Lambda


def test_wilks_power_bivariate_correlated():
    rng = np.random.default_rng(5)
    rejections = 0
    for r in range(100):
        x = rng.standard_normal((500, 1))
        y = 0.5 * x + np.sqrt(1 - 0.25) * rng.standard_normal((500, 1))
        rejections += wilks_lambda_test(x, y).reject
    assert rejections >= 99


def test_wilks_type_one_error_calibrated():
    rng = np.random.default_rng(6)
    rejections = 0
    reps = 400
    for r in range(reps):
        X = rng.standard_normal((500, 10))
        Y = rng.standard_normal((500, 10))
        rejections += wilks_lambda_test(X, Y).reject
    assert abs(rejections / reps - 0.05) <= 0.03


def test_wilks_nonnegative_statistic():
    rng = np.random.default_rng(7)
    for r in range(25):
        X = rng.standard_normal((60, 3))
        Y = rng.standard_normal((60, 4))
        assert wilks_lambda_test(X, Y).statistic >= -1e-10


def test_wilks_sample_size_precondition():
    with pytest.raises(ValidationError):
        wilks_lambda_test(np.zeros((10, 4)), np.zeros((10, 4)))


def test_wilks_singular_block_reports_condition_number():
    rng = np.random.default_rng(8)
    base = rng.standard_normal((80, 2))
    X = np.hstack([base, base[:, :1]])  # exactly collinear third column
    Y = rng.standard_normal((80, 2))
    with pytest.raises(SingularCovarianceError) as info:
        wilks_lambda_test(X, Y)
    assert info.value.condition_number > 1e10


# ---------------------------------------------------------------------------
# Puri-Sen


def test_puri_sen_monotone_transform_invariance():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((120, 3))
    Y = rng.standard_normal((120, 2))
    base = puri_sen_test(X, Y).statistic
    Xt = np.column_stack([np.exp(X[:, 0]), X[:, 1] ** 3, np.arctan(X[:, 2])])
    Yt = np.column_stack([Y[:, 0] * 7.0 + 3.0, np.expm1(Y[:, 1])])
    assert abs(puri_sen_test(Xt, Yt).statistic - base) <= 1e-10 * max(1.0, abs(base))


def test_puri_sen_type_one_error_calibrated():
    rng = np.random.default_rng(10)
    rejections = 0
    reps = 400
    for r in range(reps):
        X = rng.uniform(size=(500, 5))
        Y = rng.uniform(size=(500, 5))
        rejections += puri_sen_test(X, Y).reject
    assert abs(rejections / reps - 0.05) <= 0.03


def test_puri_sen_constant_column_raises():
    rng = np.random.default_rng(11)
    X = rng.standard_normal((50, 3))
    X[:, 1] = 4.0
    with pytest.raises(RankDegeneracyError):
        puri_sen_test(X, rng.standard_normal((50, 2)))


# ---------------------------------------------------------------------------
# Cross-method behaviour on the nonlinear example


def test_classical_tests_blind_to_log_square_link():
    rejections_wl = 0
    rejections_ps = 0
    reps = 30
    for r in range(reps):
        sample = generate_example(
            ExampleSpec(example=6, n=300, params={"sigma": 1.0}, seed=RngSeed(600 + r))
        )
        rejections_wl += wilks_lambda_test(sample.x, sample.y).reject
        rejections_ps += puri_sen_test(sample.x, sample.y).reject
    assert rejections_wl / reps <= 0.2
    assert rejections_ps / reps <= 0.2


def test_ddc_and_rpdc_gamma_mostly_agree():
    # High-power regime: both tests should reach the same decision almost
    # always.
    agreements = 0
    reps = 40
    for r in range(reps):
        sample = generate_example(
            ExampleSpec(example=6, n=1000, params={"sigma": 1.0}, seed=RngSeed(1300 + r))
        )
        ddc = ddc_gamma_test(sample.x, sample.y)
        rpdc = gamma_test(
            sample.x, sample.y, RpdcConfig(seed=RngSeed(2300 + r), k_projections=50)
        )
        agreements += ddc.reject == rpdc.reject
    assert agreements / reps >= 0.9
