"""Exception hierarchy. Every engine error carries a stable machine-readable ``code``."""


class BGeomError(Exception):
    code = "BGeomError"


class ValidationError(BGeomError, ValueError):
    code = "ValidationError"


class UnknownCurveName(ValidationError, KeyError):
    code = "UnknownCurveName"

    def __str__(self) -> str:
        return Exception.__str__(self)


class InvalidMultiplicity(ValidationError):
    code = "InvalidMultiplicity"


class InconsistentCenter(ValidationError):
    code = "InconsistentCenter"


class InvalidLattice(ValidationError):
    code = "InvalidLattice"


class ModelMismatch(BGeomError, ValueError):
    code = "ModelMismatch"


class SingularGram(BGeomError, ArithmeticError):
    code = "SingularGram"


class NotExceptional(BGeomError, ValueError):
    code = "NotExceptional"


class NotPseudoeffective(BGeomError, ArithmeticError):
    code = "NotPseudoeffective"


class NotLogResolution(BGeomError, ValueError):
    code = "NotLogResolution"


class NotMinusOneCurve(BGeomError, ValueError):
    code = "NotMinusOneCurve"


class NotNef(BGeomError, ValueError):
    code = "NotNef"


class PreconditionUnmet(BGeomError, ValueError):
    code = "PreconditionUnmet"


class EParamInvalid(BGeomError, ValueError):
    code = "EParamInvalid"


class InternalConsistencyError(BGeomError, AssertionError):
    """A theorem-backed self-check failed. Seeing this means an engine bug."""

    code = "InternalConsistencyError"


class CriterionMismatch(InternalConsistencyError):
    code = "CriterionMismatch"


class ParseError(BGeomError, ValueError):
    code = "ParseError"

    def __init__(self, message: str, path: str = "$", line: int | None = None):
        self.path = path
        self.line = line
        where = f" at {path}" if line is None else f" at {path} (line {line})"
        super().__init__(message + where)


class RankLimitExceeded(ValidationError):
    code = "RankLimitExceeded"
