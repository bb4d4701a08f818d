"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class EisenError(ValueError):
    exit_code = 10


class CharacterError(EisenError):
    exit_code = 11


class NotFundamentalError(CharacterError):
    exit_code = 12


class NewformError(EisenError):
    exit_code = 20


class NotPrimitiveError(NewformError):
    exit_code = 21


class ParityError(NewformError):
    exit_code = 22


class ExcludedFormError(NewformError):
    exit_code = 23


class RamifiedPrimeError(EisenError):
    exit_code = 24


class NotCoprimeError(EisenError):
    exit_code = 25


class NotQuadraticError(EisenError):
    exit_code = 26


class WeightMismatchError(EisenError):
    exit_code = 30


class DecompositionError(EisenError):
    exit_code = 40


class NotInSpaceError(DecompositionError):
    exit_code = 41


class UnderdeterminedError(DecompositionError):
    exit_code = 42


class NonRationalError(DecompositionError):
    exit_code = 43


class NonRealCharacterError(DecompositionError):
    exit_code = 44


class HypothesisViolationError(EisenError):
    exit_code = 50
