"""Exception type shared across the package."""


class OrliczError(ValueError):
    """A precondition on a body, function or grid does not hold."""


class DegenerateError(OrliczError):
    """An extremal problem has no minimizer in the admissible class."""
