import math
from itertools import combinations_with_replacement

import numpy as np
import pytest

import graphbec as gb
from graphbec.errors import (ChemicalPotentialAboveGroundState,
                             InsufficientCutoff)
from graphbec.spectral import Spectrum


def make_spec(levels, mults=None, total_length=1.0, cutoff=None):
    """Synthetic spectrum for statistics tests."""
    levels = np.asarray(levels, dtype=float)
    mults = np.ones(levels.size, dtype=int) if mults is None else np.asarray(mults, dtype=int)
    neg = levels < 0
    if cutoff is None:
        cutoff = 1e9  # tail negligible
    return Spectrum(negatives=levels[neg], negative_mults=mults[neg],
                    nonnegatives=levels[~neg], nonnegative_mults=mults[~neg],
                    total_length=total_length, cutoff=cutoff)


def brute_force_canonical(states, n, beta):
    """Enumerate all boson multisets of size n over the given orbitals."""
    z = 0.0
    occ = np.zeros(len(states))
    for combo in combinations_with_replacement(range(len(states)), n):
        w = math.exp(-beta * sum(states[i] for i in combo))
        z += w
        for i in combo:
            occ[i] += w
    return z, occ / z


# -- grand canonical ----------------------------------------------------------------


def test_density_single_level():
    spec = make_spec([1.0])
    rho = gb.bose_density(spec, beta=1.0, mu=0.0)
    assert rho == pytest.approx(1.0 / (math.e - 1.0), rel=1e-14)


def test_density_dominated_term():
    spec = make_spec([0.0, 1e6])
    rho = gb.bose_density(spec, beta=1.0, mu=-1.0)
    assert rho == pytest.approx(1.0 / (math.e - 1.0), rel=1e-12)


def test_density_against_explicit_neumann_sum():
    # oracle: direct summation over 10^4 explicit interval levels (n pi)^2
    length = 1.0
    n = np.arange(0, 10_000)
    levels = (n * np.pi / length) ** 2
    beta, mu = 1.0, -0.5
    x = beta * (levels - mu)
    oracle = (np.exp(-x) / (1.0 - np.exp(-x))).sum() / length

    g = gb.interval(length)
    spec = gb.positive_spectrum(g, gb.preset_neumann(g), 60.0)
    assert gb.bose_density(spec, beta, mu) == pytest.approx(oracle, rel=1e-9)


def test_density_requires_mu_below_ground_state():
    spec = make_spec([1.0])
    with pytest.raises(ChemicalPotentialAboveGroundState):
        gb.bose_density(spec, beta=1.0, mu=1.0)


def test_density_rejects_short_spectrum():
    spec = make_spec([0.0], total_length=1.0, cutoff=0.1)
    with pytest.raises(InsufficientCutoff):
        gb.bose_density(spec, beta=0.1, mu=-1.0)


def test_solve_mu_single_level():
    spec = make_spec([1.0])
    mu = gb.solve_chemical_potential(spec, beta=1.0, rho_target=1.0 / (math.e - 1.0))
    assert mu == pytest.approx(0.0, abs=1e-10)


def test_solve_mu_monotone_in_density():
    spec = make_spec([0.0, 1.0, 4.0], total_length=2.0)
    mu1 = gb.solve_chemical_potential(spec, beta=1.0, rho_target=0.5)
    mu2 = gb.solve_chemical_potential(spec, beta=1.0, rho_target=1.0)
    assert mu2 > mu1


def test_solve_mu_round_trip_neumann():
    g = gb.interval(100.0)
    spec = gb.positive_spectrum(g, gb.preset_neumann(g), 45.0)
    mu = gb.solve_chemical_potential(spec, beta=1.0, rho_target=1.0)
    assert mu < 0
    assert gb.bose_density(spec, 1.0, mu) == pytest.approx(1.0, rel=1e-10)


def test_condensate_fraction_single_level():
    spec = make_spec([2.0])
    mu = -1.0
    rho = gb.bose_density(spec, 1.0, mu)
    assert gb.condensate_fraction(spec, 1.0, mu, rho) == pytest.approx(1.0, rel=1e-14)


def test_condensate_fraction_decreases_with_temperature():
    spec = make_spec([0.0, 1.0, 2.0])
    mu = -0.5
    fractions = []
    for beta in (4.0, 2.0, 1.0, 0.5):  # T increasing
        rho = gb.bose_density(spec, beta, mu)
        fractions.append(gb.condensate_fraction(spec, beta, mu, rho))
    assert all(b < a for a, b in zip(fractions, fractions[1:]))


def test_gas_observables_round_trip():
    spec = make_spec([0.0, 1.0, 4.0], total_length=3.0)
    obs = gb.gas_observables(spec, beta=1.0, rho=0.7)
    assert obs.mu < 0.0
    again = gb.gas_observables(spec, beta=1.0, mu=obs.mu)
    assert again.rho == pytest.approx(0.7, rel=1e-10)
    assert 0.0 <= obs.n0_fraction <= 1.0


# -- canonical ensemble ----------------------------------------------------------------


def test_partition_two_levels_enumeration():
    table = gb.canonical_partitions([0.0, 1.0], n_max=2, beta=1.0)
    expected = 1.0 + math.exp(-1.0) + math.exp(-2.0)  # (2,0), (1,1), (0,2)
    assert table.z_values[2] == pytest.approx(expected, abs=1e-14)
    assert table.z_values[0] == 1.0


def test_partition_single_level_is_one():
    table = gb.canonical_partitions([0.0], n_max=7, beta=2.3)
    np.testing.assert_allclose(table.z_values, np.ones(8), atol=1e-14)


@pytest.mark.parametrize("beta", [0.3, 1.0, 3.0])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_recursion_matches_brute_force(beta, n):
    rng = np.random.default_rng(42)
    level_sets = [
        [0.0, 1.0],
        [0.0, 1.0, 2.0],
        sorted(rng.uniform(0.0, 3.0, size=6)),
    ]
    for states in level_sets:
        z_ref, occ_ref = brute_force_canonical(states, n, beta)
        table = gb.canonical_partitions(states, n_max=n, beta=beta)
        assert table.z_values[n] == pytest.approx(z_ref, abs=1e-12)
        np.testing.assert_allclose(table.occupations, occ_ref, atol=1e-12)
        assert table.occupations.sum() == pytest.approx(n, abs=1e-10)


def test_specific_brute_force_case():
    states = [0.0, 1.0, 2.0]
    z_ref, _ = brute_force_canonical(states, 3, 0.7)
    table = gb.canonical_partitions(states, n_max=3, beta=0.7)
    assert table.z_values[3] == pytest.approx(z_ref, abs=1e-12)


def test_degenerate_level_equivalence():
    # a doubly degenerate level entered once with multiplicity 2 must match
    # entering it as two equal levels
    a = gb.canonical_partitions([0.0, 1.5], n_max=4, beta=0.8, multiplicities=[1, 2])
    b = gb.canonical_partitions([0.0, 1.5, 1.5], n_max=4, beta=0.8)
    np.testing.assert_allclose(a.log_z, b.log_z, atol=1e-12)
    np.testing.assert_allclose(a.occupations, b.occupations, atol=1e-12)
    assert a.energies.size == 3


def test_negative_ground_state_shift():
    # deeply bound level: the recursion must not overflow and occupations stay finite
    table = gb.canonical_partitions([-50.0, 0.0], n_max=5, beta=8.0)
    assert np.isfinite(table.log_z).all()
    assert table.occupations[0] == pytest.approx(5.0, abs=1e-10)


def test_occupation_table_other_n():
    table = gb.canonical_partitions([0.0, 1.0], n_max=4, beta=1.0)
    _, occ2 = brute_force_canonical([0.0, 1.0], 2, 1.0)
    np.testing.assert_allclose(table.occupation_table(2), occ2, atol=1e-12)


# -- macroscopic occupation -----------------------------------------------------------


def test_lambda_po_single_level():
    assert gb.penrose_onsager_lambda([0.0], n=5, beta=1.0) == pytest.approx(1.0, abs=1e-12)


def test_lambda_po_two_levels_matches_enumeration():
    _, occ = brute_force_canonical([0.0, 1.0], 2, 1.0)
    lam = gb.penrose_onsager_lambda([0.0, 1.0], n=2, beta=1.0)
    assert lam == pytest.approx(occ.max() / 2.0, abs=1e-12)
    # enumeration gives (2 + e^-1) / (1 + e^-1 + e^-2) / 2
    explicit = (2.0 + math.exp(-1.0)) / (1.0 + math.exp(-1.0) + math.exp(-2.0)) / 2.0
    assert lam == pytest.approx(explicit, abs=1e-12)


def test_lambda_po_saturates_at_low_temperature():
    lam = gb.penrose_onsager_lambda([0.0, 1.0, 4.0], n=3, beta=200.0)
    assert lam == pytest.approx(1.0, abs=1e-10)
