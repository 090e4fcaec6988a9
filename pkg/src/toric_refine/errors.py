"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map it without a lookup
table: 3 for rejected input, 4 for internal engine failures.
"""

from __future__ import annotations


class ToricRefineError(Exception):
    exit_code = 4


class InputError(ToricRefineError):
    """The caller handed us something that violates a documented precondition."""

    exit_code = 3


class EngineError(ToricRefineError):
    """An internal invariant broke. Always a bug or an unsupported input class."""

    exit_code = 4


# lattice
class ZeroVector(InputError):
    pass


class NotSimplicial(InputError):
    pass


class NoRelation(InputError):
    pass


class AmbiguousRelation(InputError):
    pass


class NormalizationFailure(EngineError):
    pass


# dual complex
class EmptyFacet(InputError):
    pass


class UnknownVertex(InputError):
    pass


# resolution
class CenterNotPresent(InputError):
    pass


class UnknownComponent(InputError):
    pass


class ConsistencyViolation(EngineError):
    pass


class NoProgress(EngineError):
    pass


# refinement
class NotTerminal(InputError):
    pass


class ValidationFailure(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"refinement invalid: {head}{more}")


class UnknownSimplex(InputError):
    pass


# chow
class IllegalAmbient(InputError):
    pass
