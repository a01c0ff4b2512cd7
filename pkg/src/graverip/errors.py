"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """An enumeration or state-space cap was hit.

    This signals a desk-scale limit, never a wrong answer: the computation
    was abandoned before it could finish.
    """


class InvalidInstance(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class IncompleteBasis(ValueError):
    """A kernel vector has no sign-compatible minorant in the given basis."""
