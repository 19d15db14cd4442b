"""Command-line entry point: config-driven runs with deterministic CSV output."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bose import condensate_fraction, solve_chemical_potential
from .config import RunConfig, parse_config
from .conditions import validate as validate_conditions
from .errors import (BoundViolation, ChemicalPotentialAboveGroundState,
                     CutoffTooSmall, GraphBecError, InsufficientCutoff,
                     NoConvergence, QuadratureFailure, SchemaError,
                     TooFewLevels, ValidationError)
from .spectral import full_spectrum
from .sweeps import (bec_sweep, classify_condensation,
                     critical_temperature_estimate, temperature_scan,
                     tonks_convergence_sweep)
from .tonks import finite_free_energy_density, limit_free_energy_density, smoothness_scan

logger = logging.getLogger(__name__)

_NUMERICAL = (CutoffTooSmall, BoundViolation, ChemicalPotentialAboveGroundState,
              InsufficientCutoff, NoConvergence, QuadratureFailure, TooFewLevels)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _fmt(x) -> str:
    """Fixed 17-significant-digit float formatting keeps CSV output byte-stable."""
    if x is None:
        return "nan"
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: Path, metadata: list[tuple[str, object]],
               columns: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {key}={_fmt(val) if isinstance(val, (int, float, np.integer, np.floating)) else val}"
             for key, val in metadata]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(x) if not isinstance(x, str) else x for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(path: Path, config: RunConfig, outputs: dict, results: dict) -> None:
    manifest = {
        "version": __version__,
        "command": config.command,
        "config": config.raw,
        "thresholds": config.thresholds,
        "outputs": outputs,
        "results": results,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _scaled(config: RunConfig):
    eta = config.params.get("eta")
    return config.graph.scaled(eta) if eta else config.graph


# -- command handlers --------------------------------------------------------------


def _run_spectrum(config: RunConfig, stem: Path, threads: int) -> int:
    g = _scaled(config)
    spec = full_spectrum(g, config.conditions, config.params["e_max"])
    rows = [("negative", e, int(m)) for e, m in zip(spec.negatives, spec.negative_mults)]
    rows += [("nonnegative", e, int(m))
             for e, m in zip(spec.nonnegatives, spec.nonnegative_mults)]
    meta = [("command", "spectrum"), ("version", __version__),
            ("total_length", spec.total_length), ("e_max", config.params["e_max"]),
            ("state_count", spec.state_count)]
    _write_csv(stem.with_suffix(".csv"), meta, ["branch", "energy", "multiplicity"], rows)
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))},
                    {"state_count": spec.state_count,
                     "negative_count": int(spec.negative_mults.sum())})
    return EXIT_OK


def _run_bec_sweep(config: RunConfig, stem: Path, threads: int) -> int:
    p = config.params
    records = bec_sweep(config.graph, config.conditions, p["eta_list"],
                        p["temperature"], p["density"],
                        compute_lambda=p["lambda_po"], threads=threads)
    verdict = classify_condensation(
        records, vanishing_threshold=config.thresholds["vanishing"],
        persistent_threshold=config.thresholds["persistent"])
    rows = [(r.eta, r.total_length, r.ground_energy, r.mu, p["density"],
             r.n0_fraction, r.lambda_po) for r in records]
    meta = [("command", "bec-sweep"), ("version", __version__),
            ("temperature", p["temperature"]), ("density", p["density"]),
            ("vanishing_threshold", config.thresholds["vanishing"]),
            ("persistent_threshold", config.thresholds["persistent"]),
            ("verdict", verdict)]
    _write_csv(stem.with_suffix(".csv"), meta,
               ["eta", "total_length", "E0", "mu", "rho", "n0_fraction", "lambda_PO"], rows)
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))}, {"verdict": verdict})
    return EXIT_OK


def _run_tc_estimate(config: RunConfig, stem: Path, threads: int) -> int:
    p = config.params
    records = temperature_scan(config.graph, config.conditions, p["eta"],
                               p["density"], p["t_grid"])
    threshold = config.thresholds["tc_fraction"]
    estimate = critical_temperature_estimate(
        config.graph, config.conditions, p["eta"], p["density"], p["t_grid"],
        fraction_threshold=threshold)
    rows = [(t, r.mu, r.n0_fraction) for t, r in zip(p["t_grid"], records)]
    meta = [("command", "tc-estimate"), ("version", __version__),
            ("eta", p["eta"]), ("density", p["density"]),
            ("tc_fraction_threshold", threshold),
            ("tc_estimate", "none" if estimate is None else _fmt(estimate))]
    _write_csv(stem.with_suffix(".csv"), meta, ["T", "mu", "n0_fraction"], rows)
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))},
                    {"tc_estimate": estimate})
    return EXIT_OK


def _run_tonks_free_energy(config: RunConfig, stem: Path, threads: int) -> int:
    p = config.params
    g = _scaled(config)
    from .conditions import preset_dirichlet  # mapped case: Dirichlet hyperplanes
    vc = preset_dirichlet(g)
    e_max = max(max(max(p["mu_values"]), 0.0) + 40.0 / min(p["beta_values"]), 1.0)
    spec = full_spectrum(g, vc, e_max)
    rows = []
    for beta in p["beta_values"]:
        for mu in p["mu_values"]:
            f_l = finite_free_energy_density(spec, beta, mu)
            f_inf = limit_free_energy_density(beta, mu)
            rows.append((beta, mu, f_l, f_inf, abs(f_l - f_inf)))
    meta = [("command", "tonks-free-energy"), ("version", __version__),
            ("total_length", g.total_length), ("e_max", e_max)]
    _write_csv(stem.with_suffix(".csv"), meta,
               ["beta", "mu", "f_finite", "f_limit", "abs_gap"], rows)
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))},
                    {"rows": len(rows)})
    return EXIT_OK


def _run_tonks_smoothness(config: RunConfig, stem: Path, threads: int) -> int:
    p = config.params
    curves = smoothness_scan(p["beta_values"], p["mu_values"])
    rows = []
    meta = [("command", "tonks-smoothness"), ("version", __version__)]
    jumps = {}
    for curve in curves:
        meta.append((f"d2_jump_max_beta_{_fmt(curve.beta)}", curve.d2_jump_max))
        jumps[_fmt(curve.beta)] = curve.d2_jump_max
        interior = {round(float(m), 12): j for j, m in enumerate(curve.mu_interior)}
        for i, mu in enumerate(curve.mu):
            j = interior.get(round(float(mu), 12))
            rows.append((curve.beta, mu, curve.f[i],
                         None if j is None else curve.df_dmu[j],
                         None if j is None else curve.d2f_dmu2[j]))
    _write_csv(stem.with_suffix(".csv"), meta,
               ["beta", "mu", "f", "df_dmu", "d2f_dmu2"], rows)
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))},
                    {"d2_jump_max": jumps})
    return EXIT_OK


def _run_validate(config: RunConfig, stem: Path, threads: int) -> int:
    violations = validate_conditions(config.conditions)
    meta = [("command", "validate"), ("version", __version__),
            ("violation_count", len(violations))]
    _write_csv(stem.with_suffix(".csv"), meta, ["violation"], [(v,) for v in violations])
    _write_manifest(stem.with_suffix(".manifest.json"), config,
                    {"csv": str(stem.with_suffix(".csv"))},
                    {"violations": violations})
    print(json.dumps({"violations": violations}))
    return EXIT_OK if not violations else EXIT_VALIDATION


_HANDLERS = {
    "spectrum": _run_spectrum,
    "bec-sweep": _run_bec_sweep,
    "tc-estimate": _run_tc_estimate,
    "tonks-free-energy": _run_tonks_free_energy,
    "tonks-smoothness": _run_tonks_smoothness,
    "validate": _run_validate,
}


def run(config: RunConfig, out: str | None = None, threads: int = 1) -> int:
    """Execute one command, writing the CSV and its JSON manifest."""
    stem = Path(out or config.output or "graphbec_run")
    return _HANDLERS[config.command](config, stem, threads)


def _error_json(exc: Exception) -> str:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if hasattr(exc, "path"):
        payload["path"] = exc.path
    return json.dumps(payload)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="graphbec",
        description="Metric-graph Laplacian spectra and Bose gas sweeps from a JSON config.")
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--command", default=None,
                        help="override the command named in the config")
    parser.add_argument("--out", default=None,
                        help="output stem; writes <out>.csv and <out>.manifest.json")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker budget for per-eta sweep parallelism")
    args = parser.parse_args(argv)

    logging.basicConfig(level=os.environ.get("GRAPHBEC_LOG", "WARNING").upper())

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(_error_json(exc), file=sys.stderr)
        return EXIT_VALIDATION

    if args.command is not None:
        try:
            raw = json.loads(text)
            raw["command"] = args.command
            text = json.dumps(raw)
        except (json.JSONDecodeError, TypeError):
            pass  # leave the original text; parse_config reports the schema error

    try:
        config = parse_config(text)
        return run(config, out=args.out, threads=max(1, args.threads))
    except (SchemaError, ValidationError) as exc:
        print(_error_json(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL as exc:
        print(_error_json(exc), file=sys.stderr)
        return EXIT_NUMERICAL
    except GraphBecError as exc:
        print(_error_json(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
