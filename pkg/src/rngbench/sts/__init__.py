"""Statistical randomness battery (15 tests, chi-square / erfc based)."""

from .suite import (  # noqa: F401
    ALPHA,
    SuiteReport,
    TestId,
    TestResult,
    render_matrix,
    run_suite,
    run_test,
)
