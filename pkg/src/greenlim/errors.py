"""Exception hierarchy.

``UserError`` subclasses signal bad input (CLI exit code 1); ``InternalError``
subclasses signal a failed internal consistency check (exit code 2).
"""


class GreenlimError(Exception):
    pass


class UserError(GreenlimError):
    pass


class InternalError(GreenlimError):
    pass


class VariableCountMismatch(UserError):
    pass


class FieldMismatch(UserError):
    pass


class ZeroPolynomial(UserError):
    pass


class ParseError(UserError):
    pass


class EmptyGenerators(UserError):
    pass


class StepBudgetExceeded(UserError):
    pass


class RingMismatch(UserError):
    pass


class DuplicatePoint(UserError):
    pass


class DuplicatePointFamily(UserError):
    pass


class NotZeroDimensional(UserError):
    pass


class NotZeroDimensionalFiber(NotZeroDimensional):
    pass


class NoStabilization(UserError):
    pass


class NotSinglePoint(UserError):
    pass


class NotOriginSupported(UserError):
    pass


class NotMonomial(UserError):
    pass


class UnsupportedDimension(UserError):
    pass


class UnknownPreset(UserError):
    pass


class ConfigError(UserError):
    pass


class InternalLengthMismatch(InternalError):
    pass


class GradedInclusionViolation(InternalError):
    pass


class MethodDisagreement(InternalError):
    pass
