"""Laplacian spectra on compact metric graphs and the Bose gases built on them.

The package computes one-particle spectra under general self-adjoint vertex
conditions, classifies condensation of the ideal Bose gas in the edge-scaling
limit, and checks that the hardcore (fermionized) gas has a smooth free
energy with no transition.
"""

__version__ = "0.1.0"

from .graphs import Edge, MetricGraph, interval, loop, new_graph, scale, star, total_length
from .conditions import (LSpectrumSummary, VertexConditions, l_spectrum,
                         preset_delta, preset_dirichlet, preset_kirchhoff,
                         preset_neumann, validate)
from .spectral import (SecularSystem, Spectrum, full_spectrum, ground_state_energy,
                       negative_spectrum, positive_spectrum, secular_value,
                       weyl_deviation)
from .bose import (CanonicalTable, GasObservables, bose_density,
                   canonical_partitions, condensate_fraction, gas_observables,
                   penrose_onsager_lambda, solve_chemical_potential)
from .tonks import (FreeEnergyCurve, HardcoreSpectrum, finite_free_energy_density,
                    free_energy_curve, grand_canonical_consistency, hardcore_levels,
                    limit_free_energy_density, smoothness_scan)
from .sweeps import (SweepRecord, bec_sweep, classify_condensation,
                     critical_temperature_estimate, ground_state_sweep,
                     temperature_scan, tonks_convergence_sweep)
from .config import RunConfig, parse_config
from . import errors
