"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, domain problems
(points outside a metric's chart, non-positive-definite metrics, singular
inputs) exit 2.
"""


class CurvlabError(Exception):
    """Base class for all toolkit errors."""


class UsageError(CurvlabError):
    """Bad arguments: wrong dimensions, unknown identifiers, invalid config."""


class DomainError(CurvlabError):
    """Mathematically invalid input: point outside a chart, singular or
    non-positive-definite metric, non-finite data."""
