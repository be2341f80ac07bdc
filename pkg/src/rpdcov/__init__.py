"""Distance-covariance independence testing with random projections.

A multivariate distance covariance can be written as a constant times the
average of univariate distance covariances over uniformly random
projection directions.  Averaging K projections, each computed by an
O(n log n) univariate algorithm, gives an O(K n log n) estimator and two
independence tests (permutation and Gamma calibrated), together with
brute-force oracles, classical baselines, and a simulation harness.
"""

from .baselines import (
    CovBlocks,
    covariance_blocks,
    ddc_gamma_test,
    puri_sen_test,
    wilks_lambda_test,
)
from .bench import BenchmarkRow, BreakEvenPoint, benchmark, break_even
from .dcov import (
    DcovEstimate,
    PairwiseSums,
    dcov_unbiased_bruteforce,
    dcov_unbiased_fast,
    h4_kernel,
    pairwise_sums_fast,
)
from .errors import (
    DegenerateDataError,
    RankDegeneracyError,
    RpdcovError,
    SingularCovarianceError,
    ValidationError,
)
from .examples import ExampleSpec, PairedSample, generate_example
from .projection import (
    RngSeed,
    cp_constant,
    project,
    projected_dcov,
    sample_unit_sphere,
    stream_rng,
)
from .rpdc import (
    GammaParams,
    ProjectionMoments,
    RpdcConfig,
    TestResult,
    gamma_params_from_projections,
    gamma_quantile,
    gamma_test,
    permutation_test,
    rpdc_estimate,
)
from .simulate import GridCell, SimulationReport, run_simulation, run_test
from .spectrum import (
    CenteredKernelMatrix,
    Spectrum,
    centered_kernel_matrix,
    empirical_spectrum,
    quadratic_form_quantile_mc,
    tensor_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRow",
    "BreakEvenPoint",
    "CenteredKernelMatrix",
    "CovBlocks",
    "DcovEstimate",
    "DegenerateDataError",
    "ExampleSpec",
    "GammaParams",
    "GridCell",
    "PairedSample",
    "PairwiseSums",
    "ProjectionMoments",
    "RankDegeneracyError",
    "RngSeed",
    "RpdcConfig",
    "RpdcovError",
    "SimulationReport",
    "SingularCovarianceError",
    "Spectrum",
    "TestResult",
    "ValidationError",
    "benchmark",
    "break_even",
    "centered_kernel_matrix",
    "covariance_blocks",
    "cp_constant",
    "dcov_unbiased_bruteforce",
    "dcov_unbiased_fast",
    "ddc_gamma_test",
    "empirical_spectrum",
    "gamma_params_from_projections",
    "gamma_quantile",
    "gamma_test",
    "generate_example",
    "h4_kernel",
    "pairwise_sums_fast",
    "permutation_test",
    "project",
    "projected_dcov",
    "puri_sen_test",
    "quadratic_form_quantile_mc",
    "rpdc_estimate",
    "run_simulation",
    "run_test",
    "sample_unit_sphere",
    "stream_rng",
    "tensor_spectrum",
    "wilks_lambda_test",
]
