# ============================================================
# ❗ Error hierarchy
# Every failure the library can signal, with the CLI exit code
# it maps to (2 input, 3 math domain, 4 internal).
# ============================================================


class BuresError(Exception):
    """Base class for all library errors."""

    exit_code = 3


# ------------------------------------------------------------
# 📥 Input errors (exit 2)
# ------------------------------------------------------------
class ParseError(BuresError):
    exit_code = 2


class UnknownSuite(BuresError):
    exit_code = 2


# ------------------------------------------------------------
# 📐 Math-domain errors (exit 3)
# ------------------------------------------------------------
class AlgebraMismatch(BuresError):
    pass


class ShapeError(BuresError):
    pass


class NonFiniteInput(BuresError):
    pass


class NonHermitianInput(BuresError):
    pass


class NotPositive(BuresError):
    pass


class NotProjection(BuresError):
    pass


class NotFaithful(BuresError):
    pass


class SingularOmega(BuresError):
    pass


class SingularDensity(BuresError):
    pass


class DomainError(BuresError):
    pass


class BadIsometry(BuresError):
    pass


# ------------------------------------------------------------
# 🧯 Internal inconsistencies (exit 4)
# ------------------------------------------------------------
class InconsistentCriteria(BuresError):
    """Equivalent criteria disagreed beyond tolerance (numerical-rank pathology)."""

    exit_code = 4


class InternalInconsistency(BuresError):
    exit_code = 4
