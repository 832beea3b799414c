"""Exceptions raised by dessinator.

All of them derive from :class:`DessinatorError`, itself a :obj:`ValueError`, so callers
that only care about bad input can keep catching :obj:`ValueError`.

.. versionadded:: 0.1.0
"""

from typing import Optional

__all__ = [
    "DessinatorError",
    "PermutationError",
    "DisconnectedDessinError",
    "PresentationSyntaxError",
    "CosetLimitError",
    "IncompleteTableError",
    "CapExceededError",
    "HomologyCoverError",
    "BranchDataError",
    "EvaluationOverflowError",
    "ConfigurationError",
]


class DessinatorError(ValueError):
    """Base class of every domain error."""


class PermutationError(DessinatorError):
    """Invalid permutation data, degree mismatch or a transitivity precondition failure."""


class DisconnectedDessinError(DessinatorError):
    """The permutation pair does not act transitively on the edges."""


class PresentationSyntaxError(DessinatorError):
    """A presentation or word could not be parsed.

    Attributes:
        position (:obj:`int`): Offset of the offending character in the input
    """

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class CosetLimitError(DessinatorError):
    """Todd-Coxeter ran out of room.

    Attributes:
        max_cosets (:obj:`int`): The limit that was hit
    """

    def __init__(self, max_cosets: int) -> None:
        self.max_cosets = max_cosets
        super().__init__(f"enumeration did not close within max_cosets ({max_cosets})")


class IncompleteTableError(DessinatorError):
    """A coset table has undefined entries."""


class CapExceededError(DessinatorError):
    """A configured size cap was exceeded.

    Attributes:
        cap (:obj:`int`): The cap
    """

    def __init__(self, message: str, cap: int) -> None:
        self.cap = cap
        super().__init__(f"{message} (cap {cap})")


class HomologyCoverError(DessinatorError):
    """The base dessin does not admit the requested homology cover."""


class BranchDataError(DessinatorError):
    """Invalid superelliptic branch data or genus parameters."""


class EvaluationOverflowError(DessinatorError):
    """A truncated product left the floating point range.

    Attributes:
        k (:obj:`int`): One based index of the first offending zero
    """

    def __init__(self, k: int) -> None:
        self.k = k
        super().__init__(f"truncated product overflows at zero k={k}")


class ConfigurationError(DessinatorError):
    """Invalid setting or environment override."""
