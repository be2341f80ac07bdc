"""Reference independence tests: direct distance covariance with Gamma
calibration, Wilks Lambda, and the Puri-Sen rank variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, rankdata

from ._validate import as_paired
from .dcov import _omega, _pairwise_stats, _seq_sum
from .errors import (
    RankDegeneracyError,
    SingularCovarianceError,
    ValidationError,
)
from .rpdc import GammaParams, TestResult, gamma_quantile

METHOD_DDC_GAMMA = "ddc_gamma"
METHOD_WILKS = "wilks"
METHOD_PURI_SEN = "puri_sen"


@dataclass(frozen=True)
class CovBlocks:
    """Sample covariance blocks of a matched pair: X-X, Y-Y, and cross."""

    s11: np.ndarray
    s22: np.ndarray
    s12: np.ndarray


def covariance_blocks(X, Y) -> CovBlocks:
    Xa, Ya = as_paired(X, Y, min_n=4)
    p = Xa.shape[1]
    joint = np.cov(np.hstack((Xa, Ya)), rowvar=False)
    return CovBlocks(s11=joint[:p, :p], s22=joint[p:, p:], s12=joint[:p, p:])


def ddc_gamma_test(X, Y, significance: float = 0.05) -> TestResult:
    """Direct (brute-force) distance covariance with Gamma calibration.

    The statistic is ``n * estimate + m1`` where m1, the product of the two
    mean pairwise distances, estimates the eigenvalue sum of the null law;
    the squared-eigenvalue sum is estimated by the product of the two
    marginal distance variances.  The Gamma recipe mirrors the projected
    test with unprojected plug-in moments, which the result echoes under
    ``config["calibration"]``.
    """
    if not 0.0 < significance < 1.0:
        raise ValidationError("significance must lie in (0, 1)")
    Xa, Ya = as_paired(X, Y, min_n=4)
    n = Xa.shape[0]
    stats = _pairwise_stats(Xa, Ya, include_squares=True)
    omega_xy = _omega(
        n, stats.pair_ab, _seq_sum(stats.row_a * stats.row_b), stats.a_total * stats.b_total
    )
    omega_xx = _omega(
        n, stats.pair_aa, _seq_sum(stats.row_a * stats.row_a), stats.a_total**2
    )
    omega_yy = _omega(
        n, stats.pair_bb, _seq_sum(stats.row_b * stats.row_b), stats.b_total**2
    )
    pair_scale = 1.0 / (n * (n - 1.0))
    lam_sum = (stats.a_total * pair_scale) * (stats.b_total * pair_scale)
    lam_sq_sum = omega_xx * omega_yy
    statistic = n * omega_xy + lam_sum
    config = {
        "n": n,
        "p": Xa.shape[1],
        "q": Ya.shape[1],
        "significance": significance,
        "calibration": "gamma moments from plug-in distance means/variances",
    }
    if lam_sum <= 0.0 or lam_sq_sum <= 0.0:
        return TestResult(
            statistic=statistic,
            p_value=None,
            threshold=None,
            reject=False,
            method=METHOD_DDC_GAMMA,
            config=config,
            degenerate=True,
        )
    params = GammaParams(
        shape=0.5 * lam_sum * lam_sum / lam_sq_sum, rate=0.5 * lam_sum / lam_sq_sum
    )
    threshold = gamma_quantile(params, 1.0 - significance)
    return TestResult(
        statistic=statistic,
        p_value=None,
        threshold=threshold,
        reject=statistic > threshold,
        method=METHOD_DDC_GAMMA,
        config=config,
    )


def _log_det_spd(M: np.ndarray, what: str) -> float:
    """log det via Cholesky; fails loudly with a condition-number report."""
    try:
        chol = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise SingularCovarianceError(
            f"{what} is singular or not positive definite",
            condition_number=float(np.linalg.cond(M)),
        ) from None
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def _bartlett_test(joint: np.ndarray, n: int, p: int, q: int, significance: float, method: str) -> TestResult:
    # det(I - M22^-1 M21 M11^-1 M12) = det(M) / (det(M11) det(M22)); the
    # Cholesky route evaluates the log-determinants stably.
    log_ratio = (
        _log_det_spd(joint, "joint block matrix")
        - _log_det_spd(joint[:p, :p], "X block")
        - _log_det_spd(joint[p:, p:], "Y block")
    )
    statistic = -(n - (p + q + 3) / 2.0) * log_ratio
    threshold = float(chi2.ppf(1.0 - significance, p * q))
    return TestResult(
        statistic=statistic,
        p_value=None,
        threshold=threshold,
        reject=statistic > threshold,
        method=method,
        config={"n": n, "p": p, "q": q, "significance": significance},
    )


def wilks_lambda_test(X, Y, significance: float = 0.05) -> TestResult:
    """Classical likelihood-ratio test of a zero cross-covariance block.

    Uses Bartlett's correction: the scaled log-determinant ratio is
    compared against the chi-square(p*q) quantile.  Requires
    n > p + q + 3 and non-singular marginal covariance blocks.
    """
    if not 0.0 < significance < 1.0:
        raise ValidationError("significance must lie in (0, 1)")
    Xa, Ya = as_paired(X, Y, min_n=4)
    n, p = Xa.shape
    q = Ya.shape[1]
    if n <= p + q + 3:
        raise ValidationError(
            f"Wilks Lambda needs n > p + q + 3, got n={n}, p={p}, q={q}"
        )
    joint = np.cov(np.hstack((Xa, Ya)), rowvar=False)
    return _bartlett_test(joint, n, p, q, significance, METHOD_WILKS)


def puri_sen_test(X, Y, significance: float = 0.05) -> TestResult:
    """Rank-based variant: covariance blocks replaced by Spearman correlations.

    Ranks use average-rank tie handling, so the statistic is invariant
    under strictly increasing per-column transforms.  A constant column
    makes the ranks degenerate and raises ``RankDegeneracyError``.
    """
    if not 0.0 < significance < 1.0:
        raise ValidationError("significance must lie in (0, 1)")
    Xa, Ya = as_paired(X, Y, min_n=4)
    n, p = Xa.shape
    q = Ya.shape[1]
    if n <= p + q + 3:
        raise ValidationError(
            f"Puri-Sen needs n > p + q + 3, got n={n}, p={p}, q={q}"
        )
    joint = np.hstack((Xa, Ya))
    mins = joint.min(axis=0)
    maxs = joint.max(axis=0)
    if np.any(mins == maxs):
        col = int(np.flatnonzero(mins == maxs)[0])
        raise RankDegeneracyError(
            f"column {col} is constant; Spearman ranks are degenerate"
        )
    ranks = rankdata(joint, method="average", axis=0)
    corr = np.corrcoef(ranks, rowvar=False)
    return _bartlett_test(corr, n, p, q, significance, METHOD_PURI_SEN)
