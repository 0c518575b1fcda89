"""Error taxonomy shared by every module.

The CLI maps these onto exit codes: DomainError / ConstraintError /
HypothesisError -> 2, ToleranceNotMet -> 3.
"""
from __future__ import annotations


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConstraintError(ValueError):
    """Operation requires an admissible spec (sum a_k theta_k = 0) and got none."""


class HypothesisError(ValueError):
    """Operation requires the unit-fraction / |a_k| <= 1 hypotheses and they fail."""


class ToleranceNotMet(RuntimeError):
    """The requested tolerance cannot be certified within the evaluation budget."""


class SingularSystemError(RuntimeError):
    """The KKT system is numerically singular (typically duplicate thetas)."""
