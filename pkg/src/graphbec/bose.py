"""Ideal Bose gas thermodynamics over a computed spectrum.

Grand-canonical density and chemical potential, condensate fraction, and the
canonical occupation machinery behind the macroscopic-occupation criterion
(largest eigenvalue of the reduced one-particle density matrix, which for a
non-interacting gas is just the largest mean occupation over N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import logsumexp

from .errors import ChemicalPotentialAboveGroundState, InsufficientCutoff, NoConvergence
from .spectral import Spectrum

#: maximum admissible ratio of the Weyl tail correction to the density
TAIL_TOL = 1e-8
#: relative residual required from the chemical-potential solve
MU_RESIDUAL = 1e-10


def _occupation(x):
    """Bose factor 1/(e^x - 1) for x > 0, stable for both tiny and huge x."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x) / (-np.expm1(-x))


def _occupation_scalar(x: float) -> float:
    if x > 745.0:
        return 0.0
    return math.exp(-x) / (-math.expm1(-x))


def _weyl_tail_density(cutoff: float, beta: float, mu: float) -> float:
    """Density (per unit length) carried by levels above the cutoff.

    Levels at E > cutoff are approximated by the leading eigenvalue density
    dN = (total_length/pi) dk and weighted with the Bose factor.
    """
    k_cut = math.sqrt(max(cutoff, 0.0))
    val, _ = quad(lambda k: _occupation_scalar(beta * (k * k - mu)), k_cut, np.inf)
    return val / math.pi


def bose_density(spec: Spectrum, beta: float, mu: float) -> float:
    """Particle density (1/length) at inverse temperature beta and potential mu.

    Sums Bose occupations over the truncated spectrum and adds the Weyl tail
    correction for levels above the cutoff; the correction must stay below
    1e-8 of the density or InsufficientCutoff is raised.
    """
    e0 = spec.ground_energy
    if not mu < e0:
        raise ChemicalPotentialAboveGroundState(f"mu={mu} must lie below E0={e0}")
    energies, mults = spec.levels()
    occ = _occupation(beta * (energies - mu))
    rho_levels = float((occ * mults).sum()) / spec.total_length
    tail = _weyl_tail_density(spec.cutoff, beta, mu)
    rho = rho_levels + tail
    if tail > TAIL_TOL * rho:
        raise InsufficientCutoff(
            f"Weyl tail correction {tail:.3e} exceeds {TAIL_TOL:.0e} of rho={rho:.3e}; "
            "recompute the spectrum with a larger cutoff")
    return rho


def solve_chemical_potential(spec: Spectrum, beta: float, rho_target: float) -> float:
    """Invert rho(mu) = rho_target on (-inf, E0).

    rho(mu) is continuous and strictly increasing, diverging at mu -> E0, so
    a bracketing solve always succeeds; the lower bracket expands
    geometrically until the density falls below target.
    """
    if rho_target <= 0:
        raise ValueError("rho_target must be positive")
    e0 = spec.ground_energy
    scale = max(1.0, abs(e0))

    delta = min(1e-3, 1.0 / (4.0 * spec.total_length * beta * rho_target))
    delta = max(delta, 1e-13 * scale)
    for _ in range(60):
        if bose_density(spec, beta, e0 - delta) >= rho_target:
            break
        delta /= 8.0
    else:
        raise NoConvergence("could not bracket mu from above")
    upper = e0 - delta

    offset = max(1.0, 1.0 / beta)
    for _ in range(200):
        lower = e0 - offset
        if bose_density(spec, beta, lower) <= rho_target:
            break
        offset *= 2.0
    else:
        raise NoConvergence("could not bracket mu from below")

    mu = brentq(lambda m: bose_density(spec, beta, m) - rho_target,
                lower, upper, xtol=1e-15 * scale, rtol=8.9e-16, maxiter=300)
    residual = abs(bose_density(spec, beta, mu) - rho_target) / rho_target
    if residual > MU_RESIDUAL:
        raise NoConvergence(f"chemical potential residual {residual:.3e} > {MU_RESIDUAL:.0e}")
    return float(mu)


def condensate_fraction(spec: Spectrum, beta: float, mu: float, rho: float) -> float:
    """Ground-level occupation divided by the total particle number rho * length."""
    e0 = spec.ground_energy
    if not mu < e0:
        raise ChemicalPotentialAboveGroundState(f"mu={mu} must lie below E0={e0}")
    n0 = spec.ground_multiplicity * _occupation_scalar(beta * (e0 - mu))
    return float(n0 / (rho * spec.total_length))


@dataclass(frozen=True)
class GasObservables:
    """Grand-canonical state of the trapped gas at one (beta, mu) point."""

    beta: float
    mu: float
    rho: float
    n0_fraction: float
    total_length: float


def gas_observables(spec: Spectrum, beta: float, mu: float | None = None,
                    rho: float | None = None) -> GasObservables:
    """Fill in the missing one of (mu, rho) and report the condensate fraction."""
    if (mu is None) == (rho is None):
        raise ValueError("give exactly one of mu or rho")
    if mu is None:
        mu = solve_chemical_potential(spec, beta, rho)
    else:
        rho = bose_density(spec, beta, mu)
    return GasObservables(
        beta=beta, mu=float(mu), rho=float(rho),
        n0_fraction=condensate_fraction(spec, beta, mu, rho),
        total_length=spec.total_length,
    )


# -- canonical ensemble ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalTable:
    """Canonical partition functions and occupations for N = 0..n_max bosons.

    `energies` lists the one-particle states (degenerate levels expanded),
    `log_z[N]` is log Z_N, and `occupations[j]` the mean occupation of state
    j at N = n_max.  Z_N itself is exposed as `z_values` and may overflow for
    strongly negative ground states; the logs never do.
    """

    beta: float
    energies: np.ndarray
    n_max: int
    log_z: np.ndarray
    occupations: np.ndarray
    _log_z_shifted: np.ndarray = field(repr=False)

    @property
    def z_values(self) -> np.ndarray:
        return np.exp(self.log_z)

    def occupation_table(self, n: int) -> np.ndarray:
        """Mean occupations per state at particle number n <= n_max."""
        if not 0 <= n <= self.n_max:
            raise ValueError(f"n must lie in 0..{self.n_max}")
        return _occupations_at(self.beta, self.energies, self._log_z_shifted, n)


def _expand_levels(levels, multiplicities) -> np.ndarray:
    energies = np.asarray(levels, dtype=float)
    if energies.ndim != 1 or energies.size == 0:
        raise ValueError("levels must be a non-empty 1-d sequence")
    if multiplicities is not None:
        mults = np.asarray(multiplicities, dtype=int)
        if mults.shape != energies.shape or (mults < 1).any():
            raise ValueError("multiplicities must match levels and be >= 1")
        energies = np.repeat(energies, mults)
    return np.sort(energies)


def _occupations_at(beta, shifted, log_z_shifted, n) -> np.ndarray:
    if n == 0:
        return np.zeros_like(shifted)
    ks = np.arange(1, n + 1)
    # <n_j> = sum_k exp(-k beta eps_j) Z_{n-k} / Z_n, all in shifted logs
    weights = log_z_shifted[n - ks] - log_z_shifted[n]
    return np.exp(-beta * np.outer(ks, shifted) + weights[:, None]).sum(axis=0)


def canonical_partitions(levels, n_max: int, beta: float,
                         multiplicities=None) -> CanonicalTable:
    """Bosonic Z_N for N = 0..n_max by the standard single-particle recursion.

        Z_N = (1/N) sum_{k=1..N} Z_1(k beta) Z_{N-k}(beta)

    Energies are shifted by the ground state internally, and the recursion
    runs in log space, so deeply bound or large-N systems neither overflow
    nor underflow.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    energies = _expand_levels(levels, multiplicities)
    shifted = energies - energies[0]

    ks = np.arange(1, n_max + 1)
    log_z1 = logsumexp(-beta * np.outer(ks, shifted), axis=1)
    log_zs = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        terms = log_z1[:n] + log_zs[n - 1::-1]
        log_zs[n] = logsumexp(terms) - math.log(n)

    log_z = log_zs - beta * energies[0] * np.arange(n_max + 1)
    occ = _occupations_at(beta, shifted, log_zs, n_max)
    return CanonicalTable(beta=beta, energies=energies, n_max=n_max,
                          log_z=log_z, occupations=occ, _log_z_shifted=log_zs)


def penrose_onsager_lambda(levels, n: int, beta: float, multiplicities=None) -> float:
    """Largest mean occupation per particle, max_j <n_j> / N.

    For a non-interacting gas the reduced one-particle density matrix is
    diagonal in the one-particle eigenbasis, so this is its largest
    eigenvalue; values of order one signal condensation.
    """
    table = canonical_partitions(levels, n, beta, multiplicities)
    return float(table.occupations.max() / n)
