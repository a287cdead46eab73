# core/exceptions.py
class VMBDError(Exception):
    """Base exception for all multibody-dynamics errors."""
    def __init__(self, message: str, *, context: dict | None = None):
        self.context = context or {}
        super().__init__(f"{self.__class__.__name__}: {message}")


# ---- model ----
class ModelError(VMBDError):
    """Errors raised while evaluating a system description."""


class NonFiniteEvaluation(ModelError):
    """A provider map returned NaN or infinite entries."""


class SingularMass(ModelError):
    """The derived mass matrix is not positive definite."""


class GimbalProximity(ModelError):
    """Euler-angle kinematics evaluated too close to the pitch singularity."""


# ---- ignorable coordinates ----
class IgnorableError(VMBDError):
    """Errors raised while building dynamical constraints."""


class NoIgnorableCoordinates(IgnorableError):
    """A dynamical constraint was requested for a system with s = 0."""


# ---- formulations ----
class FormulationError(VMBDError):
    """Errors raised while evaluating equations of motion."""


class SingularAugmentedMatrix(FormulationError):
    """The stacked [Y; M'; a] matrix is rank-deficient."""


class SingularReducedMass(FormulationError):
    """The reduced mass matrix could not be factorized."""


class SingularKKT(FormulationError):
    """The Lagrange multiplier system is rank-deficient."""


class SingularProjection(FormulationError):
    """The multiplier-free projected system is rank-deficient."""


class InconsistentInitialState(FormulationError):
    """Initial generalized velocities violate a velocity constraint."""


# ---- integration & post-processing ----
class IntegrationError(VMBDError):
    """Errors raised by the time integrators."""


class StepSizeUnderflow(IntegrationError):
    """Adaptive step fell below the representable minimum."""


class MetricsError(VMBDError):
    """Errors raised while reducing series to norms."""


class EmptySeries(MetricsError):
    """A norm was requested for a series without samples."""


# ---- harness ----
class ConfigError(VMBDError):
    """Errors raised when configuration is missing or invalid."""


class RegistryError(VMBDError):
    """Errors raised during registration or lookup of components."""


class VMBDRuntimeError(VMBDError):
    """Generic runtime error for harness-level failures."""


# Example usage:
# raise SingularAugmentedMatrix("condition 3e15", context={"case": "cart", "t": t})
