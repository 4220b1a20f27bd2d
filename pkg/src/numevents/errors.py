"""Exception hierarchy.

Every precondition failure raised by the library derives from
:class:`PreconditionError`; the CLI maps those to exit code 4 and
:class:`ParseError` (with its subclasses) to exit code 5.
"""


class NumEventsError(Exception):
    """Base class for all library errors."""


class PreconditionError(NumEventsError):
    """An operation was called outside its domain."""


class StateSetMismatch(PreconditionError):
    pass


class ValueOutOfRange(PreconditionError):
    pass


class NotOrthogonal(PreconditionError):
    pass


class NotComparable(PreconditionError):
    pass


class NotProper(PreconditionError):
    pass


class NotVarying(PreconditionError):
    pass


class ElementNotInSet(PreconditionError):
    pass


class EventInSet(PreconditionError):
    pass


class NotAnAlgebra(PreconditionError):
    pass


class DuplicateStateLabel(PreconditionError):
    pass


class AtomsNotVarying(PreconditionError):
    pass


class AtomsNotOrthogonal(PreconditionError):
    pass


class AtomsDontSumToOne(PreconditionError):
    pass


class AtomCountTooLarge(PreconditionError):
    pass


class NotBoolean(PreconditionError):
    pass


class BooleanInput(PreconditionError):
    pass


class NotAnAtom(PreconditionError):
    pass


class NotBelowAtom(PreconditionError):
    pass


class DifferenceNotProper(PreconditionError):
    pass


class NotComplementaryPair(PreconditionError):
    pass


class ComparableElements(PreconditionError):
    pass


class AxiomCViolated(PreconditionError):
    pass


class NotMO2(PreconditionError):
    pass


class HypothesisViolated(PreconditionError):
    def __init__(self, message, failing=()):
        super().__init__(message)
        self.failing = tuple(failing)


class NotExtension(PreconditionError):
    pass


class StateSetTooLarge(PreconditionError):
    pass


class UnsupportedSize(PreconditionError):
    pass


class InconsistentVerdict(NumEventsError):
    """A destructive certificate and an embedding witness were both produced.

    This can only happen through an implementation bug.
    """


class ParseError(NumEventsError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class RangeError(ParseError):
    pass


class ShapeError(ParseError):
    pass
