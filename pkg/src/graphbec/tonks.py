"""Hardcore-boson (fermionized) free energies and smoothness diagnostics.

Hardcore bosons on a graph map to free fermions level by level: N-particle
energies are sums of N distinct one-particle levels, and the grand-canonical
free-energy density converges, independently of the vertex conditions, to

    f(beta, mu) = -(1 / pi beta) * integral_0^inf log(1 + e^{-beta (k^2 - mu)}) dk,

a smooth function of mu -- hence no phase transition survives the hardcore
interaction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp

from .errors import InsufficientCutoff, QuadratureFailure, TooFewLevels
from .spectral import Spectrum

#: absolute error allowed from the limit-integral quadrature
QUAD_TOL = 1e-10
#: analytic bound required of the discarded Gaussian tail
TAIL_BOUND = 1e-12


def _softplus(x: float) -> float:
    """log(1 + e^x) without overflow."""
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def limit_free_energy_density(beta: float, mu: float) -> float:
    """Thermodynamic-limit free-energy density of the hardcore gas."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    margin = 40.0
    for _ in range(8):
        k_cut = math.sqrt(max(mu, 0.0) + margin / beta)
        tail_bound = math.exp(-beta * (k_cut * k_cut - mu)) / (2.0 * beta * k_cut)
        if tail_bound < TAIL_BOUND:
            break
        margin *= 2.0
    else:
        raise QuadratureFailure("could not push the tail bound below tolerance")
    val, abserr = quad(lambda k: _softplus(beta * (mu - k * k)), 0.0, k_cut,
                       epsabs=1e-12, epsrel=1e-12, limit=300)
    if abserr > QUAD_TOL:
        raise QuadratureFailure(f"quadrature error estimate {abserr:.3e} > {QUAD_TOL:.0e}")
    return -val / (math.pi * beta)


def finite_free_energy_density(spec: Spectrum, beta: float, mu: float) -> float:
    """Fermionic grand-canonical free-energy density over a truncated spectrum.

    Requires e^{-beta (cutoff - mu)} < 1e-14 so the truncation is negligible;
    levels beyond the cutoff are folded in through the leading Weyl density.
    """
    if math.exp(-beta * (spec.cutoff - mu)) >= 1e-14:
        raise InsufficientCutoff(
            f"cutoff {spec.cutoff} too small for beta={beta}, mu={mu}")
    energies, mults = spec.levels()
    body = sum(m * _softplus(beta * (mu - e)) for e, m in zip(energies, mults))
    k_cut = math.sqrt(max(spec.cutoff, 0.0))
    tail, _ = quad(lambda k: _softplus(beta * (mu - k * k)), k_cut, np.inf)
    return -(body / spec.total_length + tail / math.pi) / beta


@dataclass(frozen=True)
class HardcoreSpectrum:
    """N-particle energies of the hardcore gas in the mapped cases."""

    energies: np.ndarray
    particle_count: int
    source_level_count: int


def hardcore_levels(one_particle_levels, n: int) -> HardcoreSpectrum:
    """All sums of n distinct one-particle levels, sorted ascending.

    Degenerate levels must be passed as repeated entries; each entry is one
    fermionic orbital.  Intended for small truncations (n <= 6 or so).
    """
    levels = np.asarray(one_particle_levels, dtype=float)
    if n < 1:
        raise ValueError("n must be >= 1")
    if levels.size < n:
        raise TooFewLevels(f"{levels.size} levels cannot host {n} hardcore particles")
    if math.comb(levels.size, n) > 2_000_000:
        raise TooFewLevels("combination count too large; truncate the level list")
    sums = np.fromiter(
        (s for s in map(sum, combinations(levels, n))), dtype=float,
        count=math.comb(levels.size, n))
    return HardcoreSpectrum(np.sort(sums), n, int(levels.size))


def grand_canonical_consistency(levels, beta: float, mu: float,
                                n_max: int | None = None) -> float:
    """Relative gap between the two grand-canonical forms of the hardcore gas.

    Compares prod_n (1 + e^{-beta (E_n - mu)}) against
    sum_N e^{N beta mu} Z_N with Z_N built from sums over N distinct levels.
    With n_max equal to the level count the identity is exact (fermionization
    is pure level combinatorics); smaller n_max measures truncation error.
    """
    levels = np.asarray(levels, dtype=float)
    if levels.size == 0:
        return 0.0
    if n_max is None:
        n_max = int(levels.size)
    log_lhs = sum(_softplus(beta * (mu - e)) for e in levels)
    log_terms = [0.0]
    for n in range(1, n_max + 1):
        sums = hardcore_levels(levels, n).energies
        log_terms.append(n * beta * mu + logsumexp(-beta * sums))
    log_rhs = logsumexp(log_terms)
    return float(abs(math.expm1(log_rhs - log_lhs)))


@dataclass(frozen=True, eq=False)
class FreeEnergyCurve:
    """Limit free energy on a uniform mu grid with finite-difference derivatives.

    Derivatives use 5-point central stencils and live on the interior points
    `mu_interior` = mu[2:-2]; `d2_jump_max` is the largest jump of the second
    derivative between neighbouring points, a crude non-smoothness detector
    that must shrink under grid refinement.
    """

    beta: float
    mu: np.ndarray
    f: np.ndarray
    mu_interior: np.ndarray
    df_dmu: np.ndarray
    d2f_dmu2: np.ndarray
    d2_jump_max: float


def free_energy_curve(beta: float, mu_grid) -> FreeEnergyCurve:
    mu = np.asarray(mu_grid, dtype=float)
    if mu.ndim != 1 or mu.size < 5:
        raise ValueError("mu grid needs at least 5 points")
    steps = np.diff(mu)
    h = float(steps[0])
    if h <= 0 or np.abs(steps - h).max() > 1e-8 * abs(h):
        raise ValueError("mu grid must be uniform and increasing")
    f = np.array([limit_free_energy_density(beta, m) for m in mu])
    d1 = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)
    d2 = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) / (12.0 * h * h)
    jump = float(np.abs(np.diff(d2)).max()) if d2.size > 1 else 0.0
    return FreeEnergyCurve(beta=beta, mu=mu, f=f, mu_interior=mu[2:-2],
                           df_dmu=d1, d2f_dmu2=d2, d2_jump_max=jump)


def smoothness_scan(beta_grid, mu_grid) -> list[FreeEnergyCurve]:
    """Free-energy curve with derivative tables for every beta in the grid."""
    return [free_energy_curve(float(b), mu_grid) for b in np.asarray(beta_grid, dtype=float)]
