"""Exception types shared across the engine.

Every mathematically meaningful failure derives from EngineError and
carries a short stable ``name`` used by the command line front end when
mapping failures to exit codes and stderr messages.
"""


class EngineError(Exception):
    name = "engine-error"


class NotAUnitError(EngineError):
    """Division was requested by an element that is not invertible."""

    name = "NotAUnit"


class RingMismatchError(EngineError):
    """Operands live over different rings or in different series contexts."""

    name = "RingMismatch"


class TailOverflowError(EngineError):
    """A Laurent operation produced exponents below the declared tail."""

    name = "TailOverflow"


class TruncationError(EngineError):
    """A coefficient beyond the truncation order was requested."""

    name = "TruncationTooSmall"


class ConstantTermError(EngineError):
    """A substitution violated the zero-constant-term precondition."""

    name = "ConstantTerm"


class RationalsRequiredError(EngineError):
    """An operation needed rational scalars over a non-Q-algebra."""

    name = "RationalsRequired"


class LawAxiomError(EngineError):
    """A claimed formal group law failed one of the axioms."""

    name = "LawAxiomFailure"


class UnrepresentableError(EngineError):
    """A requested exact value has no representation in the target ring."""

    name = "Unrepresentable"


class NonConvergentError(EngineError):
    """A limit was requested for a family that does not stabilize."""

    name = "NonConvergent"


class PoleError(EngineError):
    """Evaluation was requested at a pole of the expression."""

    name = "Pole"
