"""Run configuration: compiled-in defaults for every model parameter, YAML
overlay files, and dotted-key overrides. Keys carry SI unit suffixes."""

import copy
from dataclasses import dataclass

import numpy as np
import yaml

from .errors import DomainError
from .materials import Environment, Material
from .microstrip import Geometry
from .network import CellLayout
from .noise import NoiseModel, StripGeometry

DEFAULTS = {
    "strip": {
        "name": "NbTiN",
        "tc_k": 12.0,
        "gap_ratio": 3.5,
        "sigma_n_s_per_m": 0.56e6,
        "thickness_m": 35e-9,
        "bc_perp_eff_t": 13.8,
        "bc_par_eff_t": 13.8,
        "alpha_ki": 1.6,
    },
    "ground": {
        "name": "Nb",
        "tc_k": 9.15,
        "gap_ratio": 3.5,
        "sigma_n_s_per_m": 5e6,
        "thickness_m": 350e-9,
        "bc_perp_eff_t": 1.6,
        "bc_par_eff_t": 1.6,
        "alpha_ki": 1.0,
    },
    "geometry": {
        "width_m": 340e-9,
        "dielectric_h_m": 100e-9,
        "strip_t_m": 35e-9,
        "ground_t_m": 350e-9,
        "eps_sub": 10.3,
        "eps_super": 11.4,
        "tand_sub": 1e-5,
        "tand_super": 0.03,
    },
    "layout": {
        "stub_spacing_m": 2.21e-6,
        "n_stubs": 59,
        "n_cells": 80,
        "l0_m": 10.8e-6,
        "la_m": 2.08e-6,
    },
    "noise": {
        "gain_db": 12.0,
        "t_second_k": 13.0,
        "t_min_k": 0.48,
        "f_pump_hz": 9.75e9,
        "f_signal_hz": 6.0e9,
    },
    "vortex": {
        "strip_width_m": 340e-9,
        "coherence_len_m": 4.9e-9,
    },
    "environment": {
        "temperature_k": 0.05,
        "b_perp_t": 0.0,
        "b_par_t": 0.0,
    },
    "sweep": {
        "f_min_hz": 4e9,
        "f_max_hz": 8e9,
        "n_freq": 200,
        "wide_f_min_hz": 1e9,
        "wide_f_max_hz": 20e9,
        "n_freq_wide": 1901,
        "t_min_k": 0.05,
        "t_max_k": 9.2,
        "n_temp": 20,
        "b_min_t": 0.0,
        "b_max_t": 0.1,
        "n_field": 21,
        "field_orientation": "perp",
        "z_env_ohm": 50.0,
    },
}


def _num(section: dict, key: str, where: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"config key {where}.{key} must be a number, got {value!r}", op="config")
    return float(value)


@dataclass(frozen=True)
class Config:
    """Resolved configuration; ``raw`` is the full nested dict, the typed
    accessors build the domain objects from it."""

    raw: dict

    def section(self, name):
        return self.raw[name]

    def num(self, section: str, key: str) -> float:
        return _num(self.raw[section], key, section)

    @property
    def strip(self) -> Material:
        return _material(self.raw["strip"])

    @property
    def ground(self) -> Material:
        return _material(self.raw["ground"])

    @property
    def geometry(self) -> Geometry:
        g = self.raw["geometry"]
        return Geometry(
            width=_num(g, "width_m", "geometry"),
            dielectric_h=_num(g, "dielectric_h_m", "geometry"),
            strip_t=_num(g, "strip_t_m", "geometry"),
            ground_t=_num(g, "ground_t_m", "geometry"),
            eps_sub=_num(g, "eps_sub", "geometry"),
            eps_super=_num(g, "eps_super", "geometry"),
            tand_sub=_num(g, "tand_sub", "geometry"),
            tand_super=_num(g, "tand_super", "geometry"),
        )

    @property
    def layout(self) -> CellLayout:
        l = self.raw["layout"]
        return CellLayout(
            stub_spacing=_num(l, "stub_spacing_m", "layout"),
            n_stubs=int(_num(l, "n_stubs", "layout")),
            n_cells=int(_num(l, "n_cells", "layout")),
            l0=_num(l, "l0_m", "layout"),
            la=_num(l, "la_m", "layout"),
        )

    @property
    def noise_model(self) -> NoiseModel:
        n = self.raw["noise"]
        return NoiseModel(
            gain_db=_num(n, "gain_db", "noise"),
            t_second=_num(n, "t_second_k", "noise"),
            t_min=_num(n, "t_min_k", "noise"),
            f_pump=_num(n, "f_pump_hz", "noise"),
        )

    @property
    def vortex_strip(self) -> StripGeometry:
        v = self.raw["vortex"]
        return StripGeometry(
            width=_num(v, "strip_width_m", "vortex"),
            coherence_len=_num(v, "coherence_len_m", "vortex"),
        )

    @property
    def environment(self) -> Environment:
        e = self.raw["environment"]
        return Environment(
            temperature=_num(e, "temperature_k", "environment"),
            b_perp=_num(e, "b_perp_t", "environment"),
            b_par=_num(e, "b_par_t", "environment"),
        )

    def frequency_grid(self, wide: bool = False) -> np.ndarray:
        s = self.raw["sweep"]
        if wide:
            return np.linspace(_num(s, "wide_f_min_hz", "sweep"), _num(s, "wide_f_max_hz", "sweep"),
                               int(_num(s, "n_freq_wide", "sweep")))
        return np.linspace(_num(s, "f_min_hz", "sweep"), _num(s, "f_max_hz", "sweep"),
                           int(_num(s, "n_freq", "sweep")))

    def temperature_grid(self) -> np.ndarray:
        s = self.raw["sweep"]
        return np.linspace(_num(s, "t_min_k", "sweep"), _num(s, "t_max_k", "sweep"), int(_num(s, "n_temp", "sweep")))

    def field_grid(self) -> np.ndarray:
        s = self.raw["sweep"]
        return np.linspace(_num(s, "b_min_t", "sweep"), _num(s, "b_max_t", "sweep"), int(_num(s, "n_field", "sweep")))


def _material(m) -> Material:
    return Material(
        name=str(m["name"]),
        tc=_num(m, "tc_k", "material"),
        gap_ratio=_num(m, "gap_ratio", "material"),
        sigma_n=_num(m, "sigma_n_s_per_m", "material"),
        thickness=_num(m, "thickness_m", "material"),
        bc_perp_eff=_num(m, "bc_perp_eff_t", "material"),
        bc_par_eff=_num(m, "bc_par_eff_t", "material"),
        alpha_ki=_num(m, "alpha_ki", "material"),
    )


def _deep_merge(base, overlay, path=""):
    out = dict(base)
    for key, value in overlay.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise DomainError(f"unknown config key {where!r}", op="config.load_config")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise DomainError(f"config key {where!r} must be a mapping", op="config.load_config")
            out[key] = _deep_merge(base[key], value, where)
        else:
            out[key] = value
    return out


def _apply_override(raw, assignment):
    if "=" not in assignment:
        raise DomainError(f"override {assignment!r} is not of the form key=value", op="config.load_config")
    dotted, text = assignment.split("=", 1)
    keys = dotted.strip().split(".")
    value = yaml.safe_load(text)
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            pass
    node = raw
    for key in keys[:-1]:
        if not isinstance(node, dict) or key not in node:
            raise DomainError(f"unknown config key {dotted.strip()!r}", op="config.load_config")
        node = node[key]
    leaf = keys[-1]
    if not isinstance(node, dict) or leaf not in node or isinstance(node[leaf], dict):
        raise DomainError(f"unknown config key {dotted.strip()!r}", op="config.load_config")
    node[leaf] = value


def default_config() -> Config:
    return Config(copy.deepcopy(DEFAULTS))


def load_config(path=None, overrides=()) -> Config:
    """Defaults, overlaid by an optional YAML file, then key=value overrides."""
    raw = copy.deepcopy(DEFAULTS)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            overlay = yaml.safe_load(fh) or {}
        if not isinstance(overlay, dict):
            raise DomainError(f"config file {path} must contain a mapping", op="config.load_config")
        raw = _deep_merge(raw, overlay)
    for assignment in overrides:
        _apply_override(raw, assignment)
    return Config(raw)


def flatten(raw, prefix=""):
    """Nested dict -> sorted (dotted_key, value) pairs for file headers."""
    items = []
    for key in sorted(raw):
        where = f"{prefix}.{key}" if prefix else key
        if isinstance(raw[key], dict):
            items.extend(flatten(raw[key], where))
        else:
            items.append((where, raw[key]))
    return items
