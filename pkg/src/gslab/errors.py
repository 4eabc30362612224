"""Shared exception types."""


class GslabError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceededError(GslabError):
    """An exhaustive enumeration would exceed the configured budget."""


class ClassifierPreconditionError(GslabError):
    """A census classifier was invoked outside its domain of validity."""


class TableLimitError(GslabError):
    """The field is too large for precomputed arithmetic tables."""


class LemmaCheckError(GslabError):
    """An exact identity check failed; carries the full report."""

    def __init__(self, failed_names, report):
        self.failed_names = list(failed_names)
        self.report = report
        super().__init__(f"identity check failed: {', '.join(self.failed_names)}")
