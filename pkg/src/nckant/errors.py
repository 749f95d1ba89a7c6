"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates one of the documented invariants."""


class InfeasibleError(RuntimeError):
    """A linear program has no feasible point."""


class NotApplicableError(RuntimeError):
    """The operation's precondition fails in a way that makes it meaningless,
    e.g. rescaling an element that already satisfies every constraint."""


class DegenerateTripleError(RuntimeError):
    """Every available search direction commutes with the Dirac operator."""
