"""Exception types shared across the package."""

from __future__ import annotations


class QuandleLabError(Exception):
    """Base class for domain failures (CLI exit status 1)."""


class TableShapeError(QuandleLabError, ValueError):
    """Raised for non-square tables or entries outside ``[0, n-1]``."""


class InvalidQuandle(QuandleLabError):
    """A table failed one or more quandle axioms.

    ``violations`` holds every failing axiom instance.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        kinds = sorted({v.axiom for v in self.violations})
        super().__init__(
            f"{len(self.violations)} axiom violation(s), axioms {kinds}"
        )


class InvalidCocycle(QuandleLabError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"{len(self.violations)} cocycle violation(s)")


class NotAKnot(QuandleLabError):
    """The braid closure has more than one component."""

    def __init__(self, components: int):
        self.components = components
        super().__init__(f"closure is a {components}-component link")


class CapExceeded(QuandleLabError):
    pass


class CellTimeout(QuandleLabError):
    pass


class DataError(QuandleLabError):
    """Ingested data is malformed or contradicts a proven bound."""
