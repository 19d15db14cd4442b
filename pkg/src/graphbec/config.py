"""Strict JSON run configuration: schema checks with exact error paths."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import graphs
from .conditions import (VertexConditions, preset_delta, preset_dirichlet,
                         preset_kirchhoff, preset_neumann, validate)
from .errors import (DisconnectedGraph, GraphBecError, MissingStrength,
                     SchemaError, ValidationError)

COMMANDS = ("spectrum", "bec-sweep", "tc-estimate", "tonks-free-energy",
            "tonks-smoothness", "validate")

DEFAULT_THRESHOLDS = {"vanishing": 0.02, "persistent": 0.5, "tc_fraction": 0.1}


@dataclass(frozen=True)
class RunConfig:
    graph: graphs.MetricGraph
    conditions: VertexConditions
    command: str
    params: dict
    output: str | None
    thresholds: dict
    raw: dict = field(repr=False)


# -- primitive checkers -----------------------------------------------------------


def _obj(value, path: str, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    for key in value:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown key")
    for key in required:
        if key not in value:
            raise SchemaError(path, f"missing required key '{key}'")
    return value


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, "expected a number")
    if not math.isfinite(value):
        raise ValidationError(path, "must be finite")
    return float(value)


def _positive(value, path: str) -> float:
    x = _number(value, path)
    if x <= 0:
        raise ValidationError(path, "must be positive")
    return x


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "expected an integer")
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array")
    return value


def _number_list(value, path: str, positive=False, increasing=False, min_len=1) -> list[float]:
    items = _list(value, path)
    if len(items) < min_len:
        raise ValidationError(path, f"needs at least {min_len} entries")
    out = [(_positive if positive else _number)(x, f"{path}[{i}]") for i, x in enumerate(items)]
    if increasing and any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError(path, "must be strictly increasing")
    return out


# -- graph and conditions ----------------------------------------------------------


def _parse_graph(value, path: str) -> graphs.MetricGraph:
    block = _obj(value, path, {"vertex_count", "edges"}, {"vertex_count", "edges"})
    count = _integer(block["vertex_count"], f"{path}.vertex_count")
    if count < 1:
        raise ValidationError(f"{path}.vertex_count", "must be >= 1")
    edges = _list(block["edges"], f"{path}.edges")
    if not edges:
        raise ValidationError(f"{path}.edges", "needs at least one edge")
    triples = []
    for i, entry in enumerate(edges):
        epath = f"{path}.edges[{i}]"
        items = _list(entry, epath)
        if len(items) != 3:
            raise SchemaError(epath, "expected [start, end, length]")
        u = _integer(items[0], f"{epath}[0]")
        v = _integer(items[1], f"{epath}[1]")
        length = _number(items[2], f"{epath}.length")
        if not (1 <= u <= count) or not (1 <= v <= count):
            raise ValidationError(epath, f"endpoint outside 1..{count}")
        if length <= 0:
            raise ValidationError(f"{epath}.length", "must be positive")
        triples.append((u, v, length))
    try:
        return graphs.new_graph(count, triples)
    except DisconnectedGraph as exc:
        raise ValidationError(path, str(exc)) from exc


def _parse_matrix(value, path: str, dim: int) -> np.ndarray:
    rows = _list(value, path)
    if len(rows) != dim:
        raise SchemaError(path, f"expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        items = _list(row, f"{path}[{i}]")
        if len(items) != dim:
            raise SchemaError(f"{path}[{i}]", f"expected {dim} entries")
        for j, cell in enumerate(items):
            cpath = f"{path}[{i}][{j}]"
            if isinstance(cell, list):
                if len(cell) != 2:
                    raise SchemaError(cpath, "expected [re, im]")
                out[i, j] = complex(_number(cell[0], f"{cpath}[0]"),
                                    _number(cell[1], f"{cpath}[1]"))
            else:
                out[i, j] = _number(cell, cpath)
    return out


def _parse_conditions(value, path: str, graph: graphs.MetricGraph) -> VertexConditions:
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    if "preset" in value:
        name = value["preset"]
        if name == "delta":
            block = _obj(value, path, {"preset", "strengths"}, {"preset", "strengths"})
            raw = block["strengths"]
            if not isinstance(raw, dict):
                raise SchemaError(f"{path}.strengths", "expected an object of vertex -> strength")
            strengths = {}
            for key, val in raw.items():
                try:
                    vertex = int(key)
                except ValueError:
                    raise SchemaError(f"{path}.strengths.{key}", "key must be a vertex id")
                strengths[vertex] = _number(val, f"{path}.strengths.{key}")
            try:
                return preset_delta(graph, strengths)
            except MissingStrength as exc:
                raise ValidationError(f"{path}.strengths", str(exc)) from exc
        _obj(value, path, {"preset"}, {"preset"})
        presets = {"dirichlet": preset_dirichlet, "neumann": preset_neumann,
                   "kirchhoff": preset_kirchhoff}
        if name not in presets:
            raise SchemaError(f"{path}.preset",
                              f"unknown preset {name!r}; use one of {sorted(presets)} or 'delta'")
        return presets[name](graph)

    block = _obj(value, path, {"P", "L"}, {"P", "L"})
    dim = graph.boundary_dim
    vc = VertexConditions(_parse_matrix(block["P"], f"{path}.P", dim),
                          _parse_matrix(block["L"], f"{path}.L", dim))
    violations = validate(vc)
    if violations:
        raise ValidationError(path, "; ".join(violations))
    return vc


# -- per-command parameter blocks -----------------------------------------------------


def _params_spectrum(block, path):
    block = _obj(block, path, {"e_max", "eta"}, {"e_max"})
    out = {"e_max": _positive(block["e_max"], f"{path}.e_max")}
    if "eta" in block:
        out["eta"] = _positive(block["eta"], f"{path}.eta")
    return out


def _params_bec_sweep(block, path):
    block = _obj(block, path, {"temperature", "density", "eta_list", "lambda_po"},
                 {"temperature", "density", "eta_list"})
    out = {
        "temperature": _positive(block["temperature"], f"{path}.temperature"),
        "density": _positive(block["density"], f"{path}.density"),
        "eta_list": _number_list(block["eta_list"], f"{path}.eta_list",
                                 positive=True, increasing=True),
        "lambda_po": True,
    }
    if "lambda_po" in block:
        if not isinstance(block["lambda_po"], bool):
            raise SchemaError(f"{path}.lambda_po", "expected a boolean")
        out["lambda_po"] = block["lambda_po"]
    return out


def _params_tc_estimate(block, path):
    block = _obj(block, path, {"eta", "density", "t_grid"}, {"eta", "density", "t_grid"})
    return {
        "eta": _positive(block["eta"], f"{path}.eta"),
        "density": _positive(block["density"], f"{path}.density"),
        "t_grid": _number_list(block["t_grid"], f"{path}.t_grid",
                               positive=True, increasing=True),
    }


def _params_tonks_free_energy(block, path):
    block = _obj(block, path, {"beta_values", "mu_values", "eta"},
                 {"beta_values", "mu_values"})
    out = {
        "beta_values": _number_list(block["beta_values"], f"{path}.beta_values", positive=True),
        "mu_values": _number_list(block["mu_values"], f"{path}.mu_values"),
    }
    if "eta" in block:
        out["eta"] = _positive(block["eta"], f"{path}.eta")
    return out


def _params_tonks_smoothness(block, path):
    block = _obj(block, path, {"beta_values", "mu_values"}, {"beta_values", "mu_values"})
    mus = _number_list(block["mu_values"], f"{path}.mu_values", min_len=5)
    steps = [b - a for a, b in zip(mus, mus[1:])]
    if steps[0] <= 0 or any(abs(s - steps[0]) > 1e-8 * abs(steps[0]) for s in steps):
        raise ValidationError(f"{path}.mu_values", "must be a uniform increasing grid")
    return {
        "beta_values": _number_list(block["beta_values"], f"{path}.beta_values", positive=True),
        "mu_values": mus,
    }


def _params_validate(block, path):
    _obj(block, path, set(), set())
    return {}


_PARAM_PARSERS = {
    "spectrum": _params_spectrum,
    "bec-sweep": _params_bec_sweep,
    "tc-estimate": _params_tc_estimate,
    "tonks-free-energy": _params_tonks_free_energy,
    "tonks-smoothness": _params_tonks_smoothness,
    "validate": _params_validate,
}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON run configuration.

    Unknown keys are rejected; structural problems raise SchemaError,
    out-of-range or domain-invalid values raise ValidationError, both
    carrying the path of the offending key.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("$", "expected a top-level object")

    if "command" not in raw:
        raise SchemaError("$", "missing required key 'command'")
    command = raw["command"]
    if command not in COMMANDS:
        raise SchemaError("$.command", f"unknown command {command!r}; use one of {COMMANDS}")

    allowed = {"graph", "conditions", "command", "output", "thresholds", command}
    _obj(raw, "$", allowed, {"graph", "conditions", "command"})

    graph = _parse_graph(raw["graph"], "$.graph")
    conditions = _parse_conditions(raw["conditions"], "$.conditions", graph)
    params = _PARAM_PARSERS[command](raw.get(command, {}), f"$.{command}")

    output = None
    if "output" in raw:
        if not isinstance(raw["output"], str) or not raw["output"]:
            raise SchemaError("$.output", "expected a non-empty string")
        output = raw["output"]

    thresholds = dict(DEFAULT_THRESHOLDS)
    if "thresholds" in raw:
        block = _obj(raw["thresholds"], "$.thresholds", set(DEFAULT_THRESHOLDS), set())
        for key, val in block.items():
            thresholds[key] = _positive(val, f"$.thresholds.{key}")

    return RunConfig(graph=graph, conditions=conditions, command=command,
                     params=params, output=output, thresholds=thresholds, raw=raw)
