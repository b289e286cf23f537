"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter or constraint lies outside its admissible domain."""


class NumericsError(RuntimeError):
    """An iterative solver failed to converge, or the run blew up."""
