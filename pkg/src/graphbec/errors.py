"""Exception types shared across the package."""


class GraphBecError(Exception):
    """Base class for all graphbec errors."""


# -- graph construction ------------------------------------------------------

class NonPositiveLength(GraphBecError):
    """An edge length is zero, negative, or not finite."""


class NonPositiveScale(GraphBecError):
    """A scaling factor is zero, negative, or not finite."""


class DisconnectedGraph(GraphBecError):
    """The metric graph is not connected."""


class DanglingEndpoint(GraphBecError):
    """An edge references a vertex outside 1..vertex_count."""


# -- vertex conditions -------------------------------------------------------

class MissingStrength(GraphBecError):
    """A delta-coupling strength map does not cover every vertex."""


class InvalidConditions(GraphBecError):
    """The (P, L) matrices violate the self-adjointness requirements."""


# -- spectral solver ---------------------------------------------------------

class CutoffTooSmall(GraphBecError):
    """No eigenvalue was found although the Weyl count predicts some."""


class BoundViolation(GraphBecError):
    """More negative eigenvalues were found than the coupling matrix allows."""


# -- gas statistics ----------------------------------------------------------

class ChemicalPotentialAboveGroundState(GraphBecError):
    """Bose occupations require mu strictly below the ground-state energy."""


class InsufficientCutoff(GraphBecError):
    """The truncated spectrum is too short for the requested observable."""


class NoConvergence(GraphBecError):
    """An iterative solve failed to reach its target residual."""


# -- free-energy machinery ---------------------------------------------------

class QuadratureFailure(GraphBecError):
    """Adaptive quadrature could not meet the requested error bound."""


class TooFewLevels(GraphBecError):
    """Fewer one-particle levels than particles requested."""


# -- configuration -----------------------------------------------------------

class SchemaError(GraphBecError):
    """Config text does not match the documented schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(GraphBecError):
    """Config values fail domain validation (graph, conditions, ranges)."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
