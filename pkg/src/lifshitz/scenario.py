"""Sectioned key = value scenario files with mandatory unit suffixes.

    [materials]
    halfspace = drude
    halfspace_omega_p_eV = 9.0
    halfspace_gamma_eV = 0.035
    gap = vacuum

    [geometry]
    d_um = 1.0

    [thermal]
    T_K = 300

configparser is not used because every error must point at a line number,
including semantic ones (unknown keys, bad units) found after parsing.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dielectric import DielectricModel, from_config
from .quantities import FM


class ScenarioError(ValueError):
    def __init__(self, message, line: Optional[int] = None, path: str = "<scenario>"):
        loc = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(loc + message)
        self.line = line


# per-metre counts, so that e.g. 10 um -> 10 / 1e6 = 1e-05 exactly
_PER_M = {"m": 1.0, "um": 1e6, "nm": 1e9, "fm": 1.0 / FM}
_MODELS = ("drude", "plasma", "ideal", "vacuum", "constant", "oscillator")

_MATERIAL_KEYS = {
    "": "word",
    "_omega_p_eV": "float",
    "_gamma_eV": "float",
    "_eps_dimless": "float",
    "_strengths_dimless": "floats",
    "_omega0_eV": "floats",
}

SECTIONS = {
    "materials": {f"{side}{suffix}": kind for side in ("halfspace", "gap") for suffix, kind in _MATERIAL_KEYS.items()},
    "geometry": {f"d_{u}": "float" for u in _PER_M},
    "thermal": {"T_K": "float"},
    "sweep": {"variable": "word", "spacing": "word", "points_count": "int",
              **{f"start_{u}": "float" for u in list(_PER_M) + ["K"]},
              **{f"stop_{u}": "float" for u in list(_PER_M) + ["K"]}},
    "output": {"units": "word", "tol_rel": "float", "n_cap_count": "int"},
    "plasma": {"kappa_per_m": "float", "kappa_per_fm": "float"},
    "resonance": {"alpha0_m3": "float", "omega0_eV": "float", "sign": "word"},
}

_SECTION_RE = re.compile(r"^\[([A-Za-z_]+)\]$")
_KEY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


@dataclass
class ScenarioFile:
    sections: Dict[str, Dict[str, object]] = field(default_factory=dict)
    lines: Dict[Tuple[str, str], int] = field(default_factory=dict)
    path: str = "<scenario>"

    def get(self, section, key, default=None):
        return self.sections.get(section, {}).get(key, default)

    def error(self, message, section=None, key=None):
        return ScenarioError(message, self.lines.get((section, key)), self.path)

    def as_dict(self):
        return {s: dict(sorted(kv.items())) for s, kv in sorted(self.sections.items())}


def _convert(kind, raw, line, path):
    try:
        if kind == "word":
            if not raw:
                raise ValueError("empty value")
            return raw.strip().lower()
        if kind == "int":
            return int(raw)
        if kind == "float":
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("non-finite number")
            return v
        if kind == "floats":
            return tuple(float(p) for p in raw.split(",") if p.strip())
    except ValueError as exc:
        raise ScenarioError(f"bad value {raw!r}: {exc}", line, path) from None
    raise AssertionError(kind)


def parse_scenario(text: str, path: str = "<scenario>") -> ScenarioFile:
    sc = ScenarioFile(path=path)
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).lower()
            if section not in SECTIONS:
                raise ScenarioError(f"unknown section [{section}]", lineno, path)
            if section in sc.sections:
                raise ScenarioError(f"duplicate section [{section}]", lineno, path)
            sc.sections[section] = {}
            continue
        m = _KEY_RE.match(line)
        if not m:
            raise ScenarioError(f"cannot parse line {raw.strip()!r}", lineno, path)
        if section is None:
            raise ScenarioError("key outside of any section", lineno, path)
        key, value = m.group(1), m.group(2).strip()
        allowed = SECTIONS[section]
        if key not in allowed:
            raise ScenarioError(f"unknown key {key!r} in [{section}]", lineno, path)
        if key in sc.sections[section]:
            raise ScenarioError(f"duplicate key {key!r}", lineno, path)
        sc.sections[section][key] = _convert(allowed[key], value, lineno, path)
        sc.lines[(section, key)] = lineno
    return sc


def load_scenario(path) -> ScenarioFile:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read(), str(path))


def material(sc: ScenarioFile, side: str) -> DielectricModel:
    mats = sc.sections.get("materials", {})
    kind = mats.get(side)
    if kind is None:
        if side == "gap":
            kind = "vacuum"
        else:
            raise ScenarioError(f"[materials] needs {side!r}", None, sc.path)
    if kind not in _MODELS:
        raise sc.error(f"unknown model {kind!r}", "materials", side)
    params = {}
    for suffix, name in (("_omega_p_eV", "omega_p_eV"), ("_gamma_eV", "gamma_eV"), ("_eps_dimless", "eps"),
                         ("_strengths_dimless", "strengths"), ("_omega0_eV", "omega0_eV")):
        if side + suffix in mats:
            params[name] = mats[side + suffix]
    try:
        return from_config(kind, **params)
    except KeyError as exc:
        raise sc.error(f"model {kind!r} needs parameter {exc.args[0]!r}", "materials", side) from None
    except (TypeError, ValueError) as exc:
        raise sc.error(str(exc), "materials", side) from None


def _length(section: Dict[str, object], prefix: str, sc: ScenarioFile, name: str):
    found = [(k, v) for k, v in section.items() if k.startswith(prefix) and k[len(prefix):] in _PER_M]
    if len(found) > 1:
        raise sc.error(f"give exactly one of the {prefix}* lengths", name, found[1][0])
    if not found:
        return None
    key, value = found[0]
    return float(value) / _PER_M[key[len(prefix):]]


def separation(sc: ScenarioFile) -> Optional[float]:
    return _length(sc.sections.get("geometry", {}), "d_", sc, "geometry")


def temperature(sc: ScenarioFile) -> Optional[float]:
    return sc.get("thermal", "T_K")


@dataclass(frozen=True)
class Sweep:
    variable: str
    values: np.ndarray


def sweep(sc: ScenarioFile) -> Optional[Sweep]:
    sw = sc.sections.get("sweep")
    if sw is None:
        return None
    var = sw.get("variable")
    if var not in ("d", "t"):
        raise sc.error("sweep variable must be d or T", "sweep", "variable")
    n = sw.get("points_count")
    if n is None or n < 1:
        raise sc.error("points_count must be >= 1", "sweep", "points_count")
    if var == "d":
        start, stop = _length(sw, "start_", sc, "sweep"), _length(sw, "stop_", sc, "sweep")
    else:
        start, stop = sw.get("start_K"), sw.get("stop_K")
    if start is None or stop is None:
        raise sc.error("sweep needs start_* and stop_*", "sweep", "variable")
    spacing = sw.get("spacing", "log")
    if spacing == "log":
        if not (start > 0 and stop > 0):
            raise sc.error("log spacing needs positive bounds", "sweep", "spacing")
        values = np.geomspace(start, stop, n)
    elif spacing == "linear":
        values = np.linspace(start, stop, n)
    else:
        raise sc.error("spacing must be log or linear", "sweep", "spacing")
    return Sweep("d" if var == "d" else "T", values)
