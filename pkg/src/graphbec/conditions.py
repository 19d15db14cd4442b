"""Self-adjoint vertex conditions for the graph Laplacian.

A realisation is parameterised by an orthogonal projector P on the
boundary-value space C^(2E) together with a self-adjoint map L on ker P.
Functions in the operator domain satisfy

    P F_bv = 0   and   (1 - P) (F'_bv + L F_bv) = 0,

where F_bv stacks the endpoint values and F'_bv the inward-pointing
derivatives (+f'(0) at the x=0 end, -f'(l) at the x=l end).  The sign of the
L term is fixed so that a single boundary block with eigenvalue sigma > 0 at
one end of an interval of length l (Neumann at the other end) binds a state
with E = -kappa^2, kappa tanh(kappa l) = sigma; for l -> infinity the energy
tends to -sigma^2.  Attractive delta couplings therefore produce positive L
eigenvalues and bound states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidConditions, MissingStrength
from .graphs import MetricGraph

#: entrywise tolerance for the projector / self-adjointness checks
MATRIX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class VertexConditions:
    """(P, L) pair acting on the 2E-dimensional boundary-value space."""

    P: np.ndarray
    L: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P)
        L = np.asarray(self.L)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape != L.shape:
            raise InvalidConditions("P and L must be square matrices of equal shape")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "L", L)

    @property
    def boundary_dim(self) -> int:
        return self.P.shape[0]


@dataclass(frozen=True)
class LSpectrumSummary:
    """Eigenvalues of L restricted to ker P, sorted descending."""

    eigenvalues: np.ndarray
    l_max: float
    count_positive: int


def _max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def validate(vc: VertexConditions) -> list[str]:
    """Check the self-adjointness requirements; return violations (empty = ok)."""
    P, L = vc.P, vc.L
    violations = []
    if _max_abs(P - P.conj().T) > MATRIX_TOL:
        violations.append("P is not Hermitian")
    if _max_abs(P @ P - P) > MATRIX_TOL:
        violations.append("P is not a projector (P@P != P)")
    if _max_abs(L - L.conj().T) > MATRIX_TOL:
        violations.append("L is not Hermitian")
    if _max_abs(P @ L) > MATRIX_TOL or _max_abs(L @ P) > MATRIX_TOL:
        violations.append("L is not an endomorphism of ker P (P@L or L@P != 0)")
    return violations


def require_valid(vc: VertexConditions) -> None:
    violations = validate(vc)
    if violations:
        raise InvalidConditions("; ".join(violations))


def l_spectrum(vc: VertexConditions) -> LSpectrumSummary:
    """Spectrum of L restricted to ker P.

    `l_max` is -inf when ker P is trivial (full Dirichlet decoupling); the
    positive count then is zero, consistent with the absence of bound states.
    """
    require_valid(vc)
    evals, evecs = np.linalg.eigh(vc.P)
    kernel = evecs[:, evals < 0.5]
    if kernel.shape[1] == 0:
        return LSpectrumSummary(np.empty(0), float("-inf"), 0)
    restricted = kernel.conj().T @ vc.L @ kernel
    eigs = np.sort(np.linalg.eigvalsh(restricted))[::-1]
    tol = MATRIX_TOL * max(1.0, _max_abs(eigs))
    return LSpectrumSummary(eigs, float(eigs[0]), int((eigs > tol).sum()))


# -- presets -------------------------------------------------------------------


def preset_dirichlet(graph: MetricGraph) -> VertexConditions:
    """All boundary values vanish: P = identity, L = 0 (edges decouple)."""
    n = graph.boundary_dim
    return VertexConditions(np.eye(n), np.zeros((n, n)))


def preset_neumann(graph: MetricGraph) -> VertexConditions:
    """All inward derivatives vanish: P = 0, L = 0 (edges decouple)."""
    n = graph.boundary_dim
    return VertexConditions(np.zeros((n, n)), np.zeros((n, n)))


def preset_delta(graph: MetricGraph, strengths: Mapping[int, float]) -> VertexConditions:
    """Delta coupling of strength alpha_v at every vertex.

    Boundary values at a vertex agree (continuity) and the inward derivatives
    sum to alpha_v times the vertex value.  On the continuity direction of a
    degree-d vertex, L acts with eigenvalue -alpha_v / d, so attractive
    (negative) strengths produce positive L eigenvalues.  All strengths zero
    reproduces Kirchhoff (standard) conditions.
    """
    for v in strengths:
        if not 1 <= int(v) <= graph.vertex_count:
            raise MissingStrength(f"strength given for unknown vertex {v}")
    n = graph.boundary_dim
    P = np.eye(n)
    L = np.zeros((n, n))
    for v in range(1, graph.vertex_count + 1):
        if v not in strengths:
            raise MissingStrength(f"no strength for vertex {v} (use 0 for Kirchhoff)")
        ends = graph.vertex_ends(v)
        d = len(ends)
        u = np.zeros(n)
        u[ends] = 1.0 / np.sqrt(d)
        P -= np.outer(u, u)
        L += (-float(strengths[v]) / d) * np.outer(u, u)
    return VertexConditions(P, L)


def preset_kirchhoff(graph: MetricGraph) -> VertexConditions:
    """Continuity plus vanishing sum of inward derivatives at every vertex."""
    return preset_delta(graph, {v: 0.0 for v in range(1, graph.vertex_count + 1)})
