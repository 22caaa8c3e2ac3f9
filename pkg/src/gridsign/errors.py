"""Exception hierarchy.

Each class carries an ``exit_code`` so the CLI can map failures without a
lookup table: 1 for bad input, 2 for axiom/verification failures, 3 for
internal invariant breaches.
"""


class GridSignError(Exception):
    exit_code = 3


class InputError(GridSignError):
    exit_code = 1


class MalformedInput(InputError):
    pass


class NotPermutation(InputError):
    pass


class MarkingCollision(InputError):
    pass


class BoundExceeded(InputError):
    pass


class SizeMismatch(InputError):
    pass


class MissingRectangle(InputError):
    pass


class StateMismatch(GridSignError):
    pass


class VerificationError(GridSignError):
    exit_code = 2


class NotGaugeEquivalent(VerificationError):
    pass


class DisconnectedStates(VerificationError):
    pass


class AxiomViolation(VerificationError):
    pass


class InternalError(GridSignError):
    exit_code = 3


class Inconsistent(InternalError):
    pass


class AnomalousClass(InternalError):
    pass
