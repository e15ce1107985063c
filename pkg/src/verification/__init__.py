"""Finite-difference, Monte-Carlo and least-squares checks."""

from .checks import (
    DEFAULT_IDENTITY_DIMS,
    SolutionOracleResult,
    estimator_audit,
    fd_gradient_check,
    identity_audit,
    pl_inequality_check,
    solution_oracle,
)
from .report import CheckItem, CheckReport

__all__ = [
    "DEFAULT_IDENTITY_DIMS",
    "CheckItem",
    "CheckReport",
    "SolutionOracleResult",
    "estimator_audit",
    "fd_gradient_check",
    "identity_audit",
    "pl_inequality_check",
    "solution_oracle",
]
