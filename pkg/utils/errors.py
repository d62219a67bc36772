"""Exception hierarchy for the eigenvector laboratory.

Everything derives from ValueError so that callers catching ValueError keep working.
"""

from typing import Any, Dict, Optional, Sequence


class EvlabError(ValueError):
    """Base class for all laboratory errors."""


class InvalidInputError(EvlabError):
    """A pre-condition of a library operation was violated."""


class ConfigurationError(EvlabError):
    """An experiment configuration violates its invariants."""


class EnumerationLimitError(EvlabError):
    """A combinatorial enumeration was requested beyond its supported size."""

    def __init__(self, what: str, requested: int, bound: int):
        self.what = what
        self.requested = requested
        self.bound = bound
        super().__init__(f"{what}: {requested} particles requested, at most {bound} supported")


class MissingValueError(EvlabError):
    """A flow right-hand side needed a value that was not supplied."""

    def __init__(self, key: Any):
        self.key = key
        super().__init__(f"no value supplied for {key!r}")


class EigenvalueCollisionError(EvlabError):
    """Two eigenvalues came closer than the collision threshold during a DBM step."""

    def __init__(self, time: float, indices: Sequence[int], gap: float):
        self.time = time
        self.indices = tuple(indices)
        self.gap = gap
        super().__init__(
            f"eigenvalue collision at s={time:.6g} between indices {self.indices} (gap={gap:.3e})"
        )


def error_payload(error: Exception, context: Optional[str] = None) -> Dict[str, str]:
    """Format an exception the way workflow nodes record it in state."""
    key = context or "error"
    return {key: f"{type(error).__name__}: {error}"}
