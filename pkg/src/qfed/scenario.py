"""Scenario files: a YAML description of a stack, grids and requested outputs.

Example::

    name: uniform
    layers:
      - index: [1.5, 0.1]
        thickness_um: semi-infinite
        temperature_K: 300
      - index: [1.5, 0.1]
        thickness_um: semi-infinite
        temperature_K: 300
    energy_eV: {min: 0.02, max: 0.2, count: 10}
    position_um: {values: [-1.0, 0.0, 1.0]}
    outputs: [n_total, poynting]
    numerics: {tolerance: 1.0e-8, threads: 1}

Validation errors carry the dotted path of the offending field and, when
parsed from a file, its line number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .quadrature import DEFAULT_RTOL
from .stack import SEMI_INFINITE, Layer, LayerStack, StackError

OUTPUT_NAMES = (
    "ldos", "ldos_raw", "ldos_em_split", "n_total", "n_plus", "n_minus",
    "poynting", "energy_density", "t_eff_total", "t_eff_plus", "t_eff_minus",
    "commutator_norm",
)


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str, line: int | None = None, source: str | None = None):
        self.path = path
        self.line = line
        self.source = source
        where = f"{source or '<scenario>'}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {path}: {message}")


@dataclass(frozen=True)
class Grid:
    """Either ``start``/``stop``/``count`` or an explicit ``values`` list."""

    start: float | None = None
    stop: float | None = None
    count: int | None = None
    values: tuple[float, ...] | None = None

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.array(self.values, dtype=float)
        if self.count == 1:
            return np.array([self.start], dtype=float)
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        if self.values is not None:
            return {"values": list(self.values)}
        return {"min": self.start, "max": self.stop, "count": self.count}


@dataclass(frozen=True)
class Scenario:
    name: str
    stack: LayerStack
    energies: Grid
    positions: Grid
    outputs: tuple[str, ...]
    tolerance: float = DEFAULT_RTOL
    threads: int = 1

    def to_dict(self) -> dict:
        layers = []
        for layer in self.stack.layers:
            n = layer.refractive_index
            layers.append({
                "index": [n.real, n.imag],
                "thickness_um": SEMI_INFINITE if layer.semi_infinite else layer.thickness,
                "temperature_K": layer.temperature,
            })
        return {
            "name": self.name,
            "layers": layers,
            "energy_eV": self.energies.to_dict(),
            "position_um": self.positions.to_dict(),
            "outputs": list(self.outputs),
            "numerics": {"tolerance": self.tolerance, "threads": self.threads},
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)


def _line_map(node, path="", out=None) -> dict[str, int]:
    """Dotted path -> 1-based line for every node of a composed YAML tree."""
    if out is None:
        out = {}
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            sub = f"{path}.{key.value}" if path else str(key.value)
            out[sub] = key.start_mark.line + 1
            _line_map(value, sub, out)
            out[sub] = key.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            _line_map(item, f"{path}[{i}]", out)
    return out


class _Validator:
    def __init__(self, lines: dict[str, int], source: str | None):
        self.lines = lines
        self.source = source

    def error(self, path: str, message: str) -> ScenarioError:
        line = self.lines.get(path)
        probe = path
        while line is None and probe:
            probe = probe.rpartition(".")[0] if "." in probe else ""
            line = self.lines.get(probe)
        return ScenarioError(path, message, line, self.source)

    def number(self, value: Any, path: str, *, positive=False, nonneg=False) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(path, f"expected a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise self.error(path, "must be finite")
        if positive and v <= 0:
            raise self.error(path, f"must be > 0, got {v}")
        if nonneg and v < 0:
            raise self.error(path, f"must be >= 0, got {v}")
        return v

    def mapping(self, value: Any, path: str) -> dict:
        if not isinstance(value, dict):
            raise self.error(path, "expected a mapping")
        return value

    def grid(self, value: Any, path: str, *, positive: bool) -> Grid:
        g = self.mapping(value, path)
        if "values" in g:
            extra = set(g) - {"values"}
            if extra:
                raise self.error(f"{path}.{sorted(extra)[0]}", "not allowed together with 'values'")
            vals = g["values"]
            if not isinstance(vals, list) or not vals:
                raise self.error(f"{path}.values", "expected a non-empty list")
            out = tuple(self.number(v, f"{path}.values[{i}]", positive=positive)
                        for i, v in enumerate(vals))
            if any(b <= a for a, b in zip(out, out[1:])):
                raise self.error(f"{path}.values", "must be strictly increasing")
            return Grid(values=out)
        for key in ("min", "max", "count"):
            if key not in g:
                raise self.error(f"{path}.{key}", "missing (or give 'values')")
        extra = set(g) - {"min", "max", "count"}
        if extra:
            raise self.error(f"{path}.{sorted(extra)[0]}", "unknown key")
        lo = self.number(g["min"], f"{path}.min", positive=positive)
        hi = self.number(g["max"], f"{path}.max", positive=positive)
        count = g["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise self.error(f"{path}.count", f"expected a positive integer, got {count!r}")
        if count > 1 and not hi > lo:
            raise self.error(f"{path}.max", "must exceed min")
        return Grid(start=lo, stop=hi, count=count)

    def layer(self, value: Any, i: int, last: int) -> Layer:
        path = f"layers[{i}]"
        entry = self.mapping(value, path)
        extra = set(entry) - {"index", "thickness_um", "temperature_K"}
        if extra:
            raise self.error(f"{path}.{sorted(extra)[0]}", "unknown key")
        for key in ("index", "thickness_um", "temperature_K"):
            if key not in entry:
                raise self.error(f"{path}.{key}", "missing")
        idx = entry["index"]
        if not (isinstance(idx, list) and len(idx) == 2):
            raise self.error(f"{path}.index", "expected [n_r, n_i]")
        n_r = self.number(idx[0], f"{path}.index", positive=True)
        n_i = self.number(idx[1], f"{path}.index", nonneg=True)
        thick = entry["thickness_um"]
        outer = i in (0, last)
        if thick == SEMI_INFINITE:
            if not outer:
                raise self.error(f"{path}.thickness_um", "only the first and last layers are semi-infinite")
            d = None
        else:
            if outer:
                raise self.error(f"{path}.thickness_um", f"outer layers must be '{SEMI_INFINITE}'")
            d = self.number(thick, f"{path}.thickness_um", positive=True)
        temp = self.number(entry["temperature_K"], f"{path}.temperature_K", nonneg=True)
        try:
            return Layer(complex(n_r, n_i), d, temp)
        except StackError as exc:
            raise self.error(path, str(exc)) from None


def scenario_from_dict(data: Any, *, lines: dict[str, int] | None = None,
                       source: str | None = None) -> Scenario:
    v = _Validator(lines or {}, source)
    data = v.mapping(data, "<root>")
    known = {"name", "layers", "energy_eV", "position_um", "outputs", "numerics"}
    extra = set(data) - known
    if extra:
        raise v.error(sorted(extra)[0], "unknown key")
    for key in ("layers", "energy_eV", "position_um", "outputs"):
        if key not in data:
            raise v.error(key, "missing")
    layers = data["layers"]
    if not isinstance(layers, list) or len(layers) < 2:
        raise v.error("layers", "expected a list of at least two layers")
    stack = LayerStack(tuple(v.layer(l, i, len(layers) - 1) for i, l in enumerate(layers)))
    energies = v.grid(data["energy_eV"], "energy_eV", positive=True)
    positions = v.grid(data["position_um"], "position_um", positive=False)
    outputs = data["outputs"]
    if not isinstance(outputs, list) or not outputs:
        raise v.error("outputs", "expected a non-empty list")
    for i, name in enumerate(outputs):
        if name not in OUTPUT_NAMES:
            raise v.error(f"outputs[{i}]", f"unknown output {name!r}; choose from {', '.join(OUTPUT_NAMES)}")
    if len(set(outputs)) != len(outputs):
        raise v.error("outputs", "duplicate entries")
    numerics = v.mapping(data.get("numerics", {}) or {}, "numerics")
    extra = set(numerics) - {"tolerance", "threads"}
    if extra:
        raise v.error(f"numerics.{sorted(extra)[0]}", "unknown key")
    tol = v.number(numerics.get("tolerance", DEFAULT_RTOL), "numerics.tolerance", positive=True)
    if tol >= 1:
        raise v.error("numerics.tolerance", "must be < 1")
    threads = numerics.get("threads", 1)
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise v.error("numerics.threads", f"expected a positive integer, got {threads!r}")
    for side, layer in (("layers[0]", stack.layers[0]), (f"layers[{len(layers) - 1}]", stack.layers[-1])):
        if layer.permittivity.imag <= 0:
            raise v.error(f"{side}.index", "outer layers must be lossy (n_i > 0)")
    name = data.get("name", "scenario")
    if not isinstance(name, str):
        raise v.error("name", "expected a string")
    return Scenario(name=name, stack=stack, energies=energies, positions=positions,
                    outputs=tuple(outputs), tolerance=tol, threads=threads)


def parse_scenario(text: str, source: str | None = None) -> Scenario:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError("<syntax>", str(getattr(exc, "problem", exc)),
                            mark.line + 1 if mark else None, source) from None
    if node is None:
        raise ScenarioError("<root>", "empty scenario", None, source)
    return scenario_from_dict(data, lines=_line_map(node), source=source)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), source=str(path))


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package, e.g. ``fig2``."""
    here = Path(__file__).parent / "scenarios"
    p = here / (name if name.endswith(".scenario") else f"{name}.scenario")
    if not p.exists():
        raise FileNotFoundError(p)
    return p
