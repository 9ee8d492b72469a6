"""Exception hierarchy.

Every domain failure derives from :class:`CobiasError`; the CLI maps those to
exit status 1 and anything else to a crash.
"""

from __future__ import annotations


class CobiasError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(CobiasError, ValueError):
    """A line-oriented input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownEdgeError(CobiasError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownElementError(CobiasError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class GuardExceededError(CobiasError):
    """An exhaustive enumeration would exceed its configured size limit."""


class NotInLatticeError(CobiasError, ValueError):
    """A vertex partition is not an element of the connected-partition lattice."""


class NotABondError(CobiasError, ValueError):
    pass


class NotModularError(CobiasError, ValueError):
    pass


class NotLinearError(CobiasError, ValueError):
    """A set of bonds meets some tribond in exactly two members."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"tribond {witness} contains exactly two members of the class")


class LoopContractionError(CobiasError, ValueError):
    pass


class IsthmusDeletionError(CobiasError, ValueError):
    """Gain deletion needs a cycle through the edge to re-gauge it to zero."""


class UncobalancedIsthmusError(CobiasError, ValueError):
    """Deleting this edge would leave a labeling with a nonzero component sum."""


class InvalidLabelingError(CobiasError, ValueError):
    pass


class NotAMaximalForestError(CobiasError, ValueError):
    pass


class NotACycleError(CobiasError, ValueError):
    pass


class NotABlockError(CobiasError, ValueError):
    pass


class PreconditionError(CobiasError, ValueError):
    pass


class TrivialClassError(CobiasError, ValueError):
    pass


class GroupMismatchError(CobiasError, ValueError):
    pass


class GroundMismatchError(CobiasError, ValueError):
    pass


class EmbeddingError(CobiasError, ValueError):
    pass


class MatroidAxiomError(CobiasError):
    """An explicit set family violates the independence axioms."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"axiom {axiom} fails, witness {witness}")
