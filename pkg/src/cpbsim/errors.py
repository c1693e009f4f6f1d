"""Exception and warning types shared across the package."""


class CpbsimError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(CpbsimError):
    """Fock-space truncation too small for the requested state (tail bound violated)."""


class UnsupportedOrder(CpbsimError):
    """Photon process order k outside the implemented range {1, 2, 3}."""


class DegenerateError(CpbsimError):
    """Mixing angle undefined (both Josephson energy and detuning vanish)."""


class ConvergenceError(CpbsimError):
    """Operator-series truncation would exceed the configured cap."""


class StepError(CpbsimError):
    """Fixed-step integrator detected unacceptable drift (step too large)."""


class InvalidState(CpbsimError):
    """Input matrix is not a physical state (e.g. significantly negative eigenvalue)."""


class NegligibleSupport(CpbsimError):
    """Projection onto the requested subspace captures too little weight to be meaningful."""


class ScenarioError(CpbsimError):
    """Scenario description failed validation."""


class TruncationWarning(UserWarning):
    """Truncation is adequate for the state but marginal for a requested evaluation."""
