"""Distribution-free inference for quantile-based measures."""

from ._core import (
    ComputationError,
    TestResult,
    bootstrap_se,
    coverage,
    estimate,
    g2,
    measures,
    optimal_bandwidth,
    q_test,
    qcov,
    qineq,
    qor_lognormal,
    qri,
    quantile,
    quantiles,
)

__all__ = [
    "ComputationError",
    "TestResult",
    "bootstrap_se",
    "coverage",
    "estimate",
    "g2",
    "measures",
    "optimal_bandwidth",
    "q_test",
    "qcov",
    "qineq",
    "qor_lognormal",
    "qri",
    "quantile",
    "quantiles",
]

__version__ = "0.1.0"
