"""Laplacian spectra on metric graphs via a secular-matrix singular-value scan.

For each trial energy the per-edge solution ansatz is reduced to a square
linear system on the 2E coefficient vector; the energy is an eigenvalue
exactly when the system is singular.  Roots are located by scanning the
smallest singular value on a grid, refining local minima by golden section,
and reading the multiplicity off the number of near-zero singular values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .conditions import VertexConditions, l_spectrum, require_valid
from .errors import BoundViolation, CutoffTooSmall, InvalidConditions
from .graphs import MetricGraph

logger = logging.getLogger(__name__)

#: singular values below ROOT_TOL * max(1, sigma_max) count as zero
ROOT_TOL = 1e-8
#: golden-section bracket width at which refinement stops
REFINE_TOL = 1e-12
#: refined roots closer than this merge into one
DEDUPE_TOL = 1e-9

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Spectrum:
    """Sorted Laplacian eigenvalues with multiplicities for one graph.

    `negatives` holds the E < 0 branch, `nonnegatives` the E >= 0 branch up
    to `cutoff`; both ascending.  `total_length` records the graph size the
    spectrum belongs to.
    """

    negatives: np.ndarray
    negative_mults: np.ndarray
    nonnegatives: np.ndarray
    nonnegative_mults: np.ndarray
    total_length: float
    cutoff: float

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated (energies, multiplicities), ascending."""
        return (
            np.concatenate([self.negatives, self.nonnegatives]),
            np.concatenate([self.negative_mults, self.nonnegative_mults]).astype(int),
        )

    @property
    def state_count(self) -> int:
        e, m = self.levels()
        return int(m.sum())

    @property
    def ground_energy(self) -> float:
        e, _ = self.levels()
        if e.size == 0:
            raise CutoffTooSmall("spectrum is empty")
        return float(e[0])

    @property
    def ground_multiplicity(self) -> int:
        e, m = self.levels()
        if e.size == 0:
            raise CutoffTooSmall("spectrum is empty")
        return int(m[0])


class SecularSystem:
    """Matrix-valued secular function for one (graph, conditions) pair.

    Branches: "positive" evaluates at k (E = k^2) with a cos/sin edge basis,
    "negative" at kappa (E = -kappa^2) with the decaying-exponential basis
    exp(-kappa x), exp(-kappa (l - x)) which stays well conditioned on long
    edges, and "zero" uses the linear ansatz a + b x/l.  Derivative rows are
    rescaled by max(point, 1, ||L||) so all entries stay O(1); rescaling
    moves no roots.
    """

    def __init__(self, graph: MetricGraph, vc: VertexConditions):
        require_valid(vc)
        if vc.boundary_dim != graph.boundary_dim:
            raise InvalidConditions(
                f"conditions act on dim {vc.boundary_dim}, graph has {graph.boundary_dim}")
        self.graph = graph
        self.lengths = graph.lengths
        dtype = np.result_type(vc.P.dtype, vc.L.dtype, np.float64)
        self.P = vc.P.astype(dtype)
        self.L = vc.L.astype(dtype)
        self.IP = np.eye(graph.boundary_dim, dtype=dtype) - self.P
        self.l_norm = float(np.linalg.norm(vc.L, 2)) if vc.L.size else 0.0
        self.row_scale_floor = max(1.0, self.l_norm)

    # -- edge bases ------------------------------------------------------------

    def _basis_positive(self, ks: np.ndarray):
        n, E = ks.size, len(self.lengths)
        A = np.zeros((n, 2 * E, 2 * E))
        B = np.zeros((n, 2 * E, 2 * E))
        i = np.arange(E)
        kl = ks[:, None] * self.lengths[None, :]
        A[:, i, i] = 1.0
        A[:, E + i, i] = np.cos(kl)
        A[:, E + i, E + i] = np.sin(kl)
        B[:, i, E + i] = ks[:, None]
        B[:, E + i, i] = ks[:, None] * np.sin(kl)
        B[:, E + i, E + i] = -ks[:, None] * np.cos(kl)
        return A, B

    def _basis_negative(self, kaps: np.ndarray):
        n, E = kaps.size, len(self.lengths)
        A = np.zeros((n, 2 * E, 2 * E))
        B = np.zeros((n, 2 * E, 2 * E))
        i = np.arange(E)
        q = np.exp(-kaps[:, None] * self.lengths[None, :])
        A[:, i, i] = 1.0
        A[:, i, E + i] = q
        A[:, E + i, i] = q
        A[:, E + i, E + i] = 1.0
        B[:, i, i] = -kaps[:, None]
        B[:, i, E + i] = kaps[:, None] * q
        B[:, E + i, i] = kaps[:, None] * q
        B[:, E + i, E + i] = -kaps[:, None]
        return A, B

    def _basis_zero(self):
        E = len(self.lengths)
        A = np.zeros((1, 2 * E, 2 * E))
        B = np.zeros((1, 2 * E, 2 * E))
        i = np.arange(E)
        A[0, i, i] = 1.0
        A[0, E + i, i] = 1.0
        A[0, E + i, E + i] = 1.0
        B[0, i, E + i] = 1.0 / self.lengths
        B[0, E + i, E + i] = -1.0 / self.lengths
        return A, B

    # -- secular matrices --------------------------------------------------------

    def matrices(self, points: np.ndarray, branch: str) -> np.ndarray:
        points = np.atleast_1d(np.asarray(points, dtype=float))
        if branch == "positive":
            A, B = self._basis_positive(points)
        elif branch == "negative":
            A, B = self._basis_negative(points)
        elif branch == "zero":
            A, B = self._basis_zero()
            points = np.zeros(1)
        else:
            raise ValueError(f"unknown branch {branch!r}")
        scale = np.maximum(points, self.row_scale_floor)
        deriv = B + np.einsum("ij,njk->nik", self.L, A)
        M = np.einsum("ij,njk->nik", self.P, A)
        M = M + np.einsum("ij,njk->nik", self.IP, deriv) / scale[:, None, None]
        return M

    def singular_values(self, points, branch: str) -> np.ndarray:
        """Descending singular values, shape (n_points, 2E)."""
        return np.linalg.svd(self.matrices(points, branch), compute_uv=False)

    def sigma_min(self, point: float, branch: str) -> float:
        return float(self.singular_values([point], branch)[0, -1])


def secular_value(graph: MetricGraph, vc: VertexConditions, energy: float) -> float:
    """Smallest singular value of the secular matrix at one trial energy.

    Zero (to tolerance) exactly when `energy` is an eigenvalue.  Positive
    energies evaluate at k = sqrt(E), negative ones at kappa = sqrt(-E).
    """
    system = SecularSystem(graph, vc)
    if energy > 0:
        return system.sigma_min(float(np.sqrt(energy)), "positive")
    if energy < 0:
        return system.sigma_min(float(np.sqrt(-energy)), "negative")
    return system.sigma_min(0.0, "zero")


# -- root location ---------------------------------------------------------------


def _golden_min(f, a: float, b: float, xtol: float = REFINE_TOL) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _roots_on_grid(system: SecularSystem, branch: str, grid: np.ndarray,
                   accept_max: float) -> list[tuple[float, int]]:
    """Refine every interior grid minimum of sigma_min into candidate roots.

    Boundary minima are ignored: the left boundary absorbs the spurious
    x -> 0 degeneracy of both bases, the right one lies beyond the range.
    """
    sigma = system.singular_values(grid, branch)[:, -1]
    interior = np.flatnonzero(
        (sigma[1:-1] <= sigma[:-2]) & (sigma[1:-1] < sigma[2:])) + 1

    roots: list[tuple[float, int]] = []
    for i in interior:
        x = _golden_min(lambda t: system.sigma_min(t, branch), grid[i - 1], grid[i + 1])
        if x > accept_max * (1.0 + 1e-12) + 1e-12:
            continue
        svals = system.singular_values([x], branch)[0]
        threshold = ROOT_TOL * max(1.0, float(svals[0]))
        if svals[-1] < threshold:
            roots.append((x, int((svals < threshold).sum())))
    return roots


def _dedupe(roots: list[tuple[float, int]]) -> list[tuple[float, int]]:
    out: list[tuple[float, int]] = []
    for x, m in sorted(roots):
        if out and abs(x - out[-1][0]) < DEDUPE_TOL * (1.0 + abs(x)):
            continue
        out.append((x, m))
    return out


def _scan_branch(system: SecularSystem, branch: str, x_max: float, step: float):
    """Locate roots of the secular matrix on (0, x_max] for one branch."""
    if x_max <= 0:
        return []
    grid = np.arange(step, x_max + 2.0 * step, step)
    if grid.size < 3:
        grid = np.linspace(step / 4.0, x_max + step, 8)
    return _dedupe(_roots_on_grid(system, branch, grid, x_max))


def _split_pairs(system: SecularSystem, branch: str, x_max: float, step: float,
                 roots: list[tuple[float, int]], target: int, levels: int = 2):
    """Windowed rescans around known roots at cascading resolution.

    Bound states of identical wells pair up with exponentially small
    splittings; a partner the global grid merged into a known root sits
    within one grid step of it, so only narrow windows need finer sampling.
    Splittings below the finest window step register instead as multiplicity
    through the near-zero singular values.
    """
    fine = step
    for _ in range(levels):
        if sum(m for _, m in roots) >= target:
            break
        window, fine = 2.0 * fine, fine / 1024.0
        found: list[tuple[float, int]] = []
        for x, _ in roots:
            lo = max(fine, x - window)
            hi = min(x_max + fine, x + window)
            grid = np.arange(lo, hi, fine)
            if grid.size >= 3:
                found.extend(_roots_on_grid(system, branch, grid, x_max))
        roots = _dedupe(roots + found)
    return roots


def _zero_mode_multiplicity(system: SecularSystem) -> int:
    svals = system.singular_values([0.0], "zero")[0]
    threshold = ROOT_TOL * max(1.0, float(svals[0]))
    return int((svals < threshold).sum())


def _default_step(graph: MetricGraph, x_max: float) -> float:
    # pi/(4 total_length) resolves the mean Weyl spacing pi/L four times over;
    # the x_max/64 floor keeps short scans from degenerating to a few points.
    return min(np.pi / (4.0 * graph.total_length), x_max / 64.0)


def positive_spectrum(graph: MetricGraph, vc: VertexConditions, e_max: float,
                      grid_step: float | None = None) -> Spectrum:
    """All eigenvalues in [0, e_max] with multiplicities."""
    if e_max <= 0:
        raise CutoffTooSmall("e_max must be positive")
    system = SecularSystem(graph, vc)
    k_max = float(np.sqrt(e_max))
    step = grid_step if grid_step is not None else _default_step(graph, k_max)
    roots = _scan_branch(system, "positive", k_max, step)

    energies = [k * k for k, _ in roots]
    mults = [m for _, m in roots]
    m0 = _zero_mode_multiplicity(system)
    if m0:
        energies.insert(0, 0.0)
        mults.insert(0, m0)

    weyl_estimate = graph.total_length * k_max / np.pi
    budget = 2 * graph.num_edges + graph.vertex_count
    if not energies and weyl_estimate > budget:
        raise CutoffTooSmall(
            f"no eigenvalue found although the Weyl count predicts ~{weyl_estimate:.0f}")
    logger.debug("positive branch: %d levels (%d states) up to E=%g",
                 len(energies), int(sum(mults)), e_max)
    return Spectrum(
        negatives=np.empty(0), negative_mults=np.empty(0, dtype=int),
        nonnegatives=np.array(energies), nonnegative_mults=np.array(mults, dtype=int),
        total_length=graph.total_length, cutoff=float(e_max),
    )


def default_kappa_max(graph: MetricGraph, vc: VertexConditions) -> float:
    """Scan limit for the negative branch.

    Covers both the long-edge limit kappa -> L_max and the short-edge regime
    where a boundary block sigma on an edge of length l binds at
    kappa ~ sqrt(sigma / l).
    """
    l_max = max(l_spectrum(vc).l_max, 0.0)
    short_edge = np.sqrt(l_max / graph.min_length) if l_max > 0 else 0.0
    return 2.0 * max(1.0, l_max, short_edge)


def negative_spectrum(graph: MetricGraph, vc: VertexConditions,
                      kappa_max: float | None = None,
                      grid_step: float | None = None) -> Spectrum:
    """All eigenvalues E = -kappa^2 < 0.

    The number of states found must not exceed the number of positive
    eigenvalues of L restricted to ker P; a violation signals a solver or
    convention bug and raises BoundViolation.
    """
    system = SecularSystem(graph, vc)
    summary = l_spectrum(vc)
    k_max = kappa_max if kappa_max is not None else default_kappa_max(graph, vc)
    step = grid_step if grid_step is not None else min(
        np.pi / (4.0 * graph.total_length), k_max / 256.0)
    roots = _scan_branch(system, "negative", k_max, step)

    count = int(sum(m for _, m in roots))
    if grid_step is None and 0 < count < summary.count_positive:
        roots = _split_pairs(system, "negative", k_max, step, roots,
                             target=summary.count_positive)
        count = int(sum(m for _, m in roots))
    if count > summary.count_positive:
        raise BoundViolation(
            f"found {count} negative states but L allows at most {summary.count_positive}")
    energies = sorted((-k * k, m) for k, m in roots)
    logger.debug("negative branch: %d states (bound %d)", count, summary.count_positive)
    return Spectrum(
        negatives=np.array([e for e, _ in energies]),
        negative_mults=np.array([m for _, m in energies], dtype=int),
        nonnegatives=np.empty(0), nonnegative_mults=np.empty(0, dtype=int),
        total_length=graph.total_length, cutoff=0.0,
    )


def full_spectrum(graph: MetricGraph, vc: VertexConditions, e_max: float,
                  kappa_max: float | None = None,
                  grid_step: float | None = None) -> Spectrum:
    """Negative and nonnegative branches merged into one Spectrum."""
    neg = negative_spectrum(graph, vc, kappa_max=kappa_max)
    pos = positive_spectrum(graph, vc, e_max, grid_step=grid_step)
    return Spectrum(
        negatives=neg.negatives, negative_mults=neg.negative_mults,
        nonnegatives=pos.nonnegatives, nonnegative_mults=pos.nonnegative_mults,
        total_length=graph.total_length, cutoff=float(e_max),
    )


def ground_state_energy(graph: MetricGraph, vc: VertexConditions, e_max: float) -> float:
    """Minimum over both branches."""
    return full_spectrum(graph, vc, e_max).ground_energy


def weyl_deviation(spec: Spectrum) -> float:
    """sup over k in [0, sqrt(cutoff)] of |N(k) - total_length * k / pi|.

    N(k) counts eigenvalues E <= k^2 of the nonnegative branch with
    multiplicity.  The supremum is attained at the jump points or at the
    cutoff, so it is evaluated exactly.
    """
    slope = spec.total_length / np.pi
    ks = np.sqrt(spec.nonnegatives)
    counts = np.cumsum(spec.nonnegative_mults)
    k_cut = float(np.sqrt(max(spec.cutoff, 0.0)))
    dev = 0.0
    for j, k in enumerate(ks):
        before = counts[j - 1] if j else 0
        dev = max(dev, abs(before - slope * k), abs(counts[j] - slope * k))
    total = counts[-1] if counts.size else 0
    dev = max(dev, abs(total - slope * k_cut))
    return float(dev)
