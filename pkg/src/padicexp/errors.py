"""Exception hierarchy for the padicexp kernel.

Every failure mode is a distinct class so callers (and the CLI report
layer) can tell a precision shortfall from a genuine mathematical
contradiction.  ``CheckFailed`` and its relatives signal that a verified
identity did *not* hold at the requested precision; they are hard
failures, never warnings.
"""


class PadicError(Exception):
    """Base class for all padicexp errors."""


class RingMismatch(PadicError):
    """Operands do not share a ring tag / precision context."""


class PrecisionExhausted(PadicError):
    """An operation produced a result with no trusted digits left."""


class InverseOfNonUnit(PadicError):
    """Ring-level inverse requested for an element of positive valuation."""


class ConvergenceDomain(PadicError):
    """Argument outside the convergence domain of exp/log."""


class NotAUnit(PadicError):
    """Expected a Teichmueller unit (root of X^(q-1) - 1)."""


class RootCountMismatch(PadicError):
    """Root finding did not produce the expected number of distinct roots."""


class NotInSubfield(PadicError):
    """Subfield expression solve left a nonzero residual."""


class NonzeroConstantTerm(PadicError):
    """series_exp requires a series with zero constant term."""


class NonUnitLeadingTerm(PadicError):
    """Series inverse / gauge factor requires a unit constant term."""


class TailNotBounded(PadicError):
    """Valuation profile cannot certify the requested evaluation precision."""


class NotInGhostImage(PadicError):
    """Ghost vector is not integrally unghostable at working precision."""


class IntegralityViolation(PadicError):
    """A series or Witt component that must be integral is not."""


class DegreeOverflow(PadicError):
    """Operation would need coefficients beyond the series degree cap."""


class PivotNotUnit(PadicError):
    """Triangular solve hit a pivot of unexpected valuation."""


class CheckFailed(PadicError):
    """A verified identity failed at the requested precision."""


class GramNotIdentity(CheckFailed):
    """Self-duality Gram matrix differs from the identity."""


class SetMismatch(CheckFailed):
    """Two conjugate sets that must coincide do not."""


class DuplicateFingerprint(CheckFailed):
    """Two projective points produced the same trace-kernel fingerprint."""


class IdentityResidualNonzero(CheckFailed):
    """A series identity left a nonzero residual coefficient."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConfigError(PadicError):
    """Invalid run configuration (CLI exit code 2)."""
