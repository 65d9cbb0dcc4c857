"""Canned sweeps mirroring the standard evaluation figures."""

from __future__ import annotations

import math
import os
from dataclasses import replace

import numpy as np

from ..asymptotics import ScalingScenario, power_scaling_limit
from ..channel import db2lin
from ..energy import PowerModel
from ..errors import ConfigurationError
from ..quantization import alpha_for_bits
from ..receivers import se_from_sinr
from .config import ExperimentSpec, SystemConfig, profile_for
from .montecarlo import run_monte_carlo
from .results import ResultTable

BITS = tuple(range(1, 13))

# name -> (sweep axis, values, config defaults, K-factor families in dB, needs power model)
FIGURES = {
    "fig_power": ("power_db", tuple(range(-10, 31, 5)), {}, None, False),
    "fig_antennas": ("antennas", (20, 50, 100, 150, 200, 300, 400, 500), {}, None, False),
    "fig_pilot": ("pilot_len", tuple(range(10, 101, 10)), {"csi": ("imperfect",)}, None, False),
    "fig_resolution_kfactor": ("bits", BITS, {"csi": ("imperfect",)}, (-10.0, 0.0, 10.0), False),
    "fig_scaling": ("scaling_m", (20, 50, 100, 200, 500, 1000, 2000, 5000),
                    {"csi": ("imperfect",), "energy_db": 40.0}, None, False),
    "fig_ee_m": ("antennas", (20, 40, 60, 80, 100, 150, 200, 250, 300), {"csi": ("imperfect",)}, None, True),
    "fig_ee_bits": ("bits", BITS, {"csi": ("imperfect",), "antennas": 100}, (-10.0, 0.0), True),
}


def figure_specs(name: str, overrides: dict | None = None, profile=None, power_model=None,
                 sweep_values=None) -> dict:
    """Experiment specs for figure ``name``, keyed by output file stem."""
    if name not in FIGURES:
        raise ConfigurationError(f"unknown figure {name!r}; expected one of {sorted(FIGURES)}")
    axis, values, defaults, families, wants_power = FIGURES[name]
    base = replace(SystemConfig(common_random_numbers=True, **defaults), **(overrides or {}))
    if sweep_values is not None:
        values = tuple(sweep_values)
    pm = power_model if power_model is not None else (PowerModel() if wants_power else None)
    if families is None:
        return {name: ExperimentSpec(axis, values, base, profile, pm)}
    out = {}
    for kdb in families:
        out[f"{name}_k{kdb:+g}dB"] = ExperimentSpec(axis, values, replace(base, kfactor_db=kdb),
                                                   _with_kfactor(profile, kdb), pm)
    return out


def _with_kfactor(profile, kfactor_db):
    if profile is None:
        return None
    return profile.replace(kfactor=np.full(profile.n_users, float(db2lin(kfactor_db))))


def attach_scaling_limit(spec: ExperimentSpec, table: ResultTable) -> ResultTable:
    """Add the M -> inf sum-SE under P_u = E_u / M**nu to every row."""
    cfg = spec.base
    aoa = np.zeros(cfg.users)
    profile = profile_for(spec, cfg, aoa)
    adc = alpha_for_bits(cfg.bits)
    scenario = ScalingScenario(e_u=float(db2lin(cfg.energy_db)), nu=cfg.scaling_nu,
                               fading="rician" if np.all(profile.kfactor > 0) else "rayleigh")
    limits = [power_scaling_limit(b, kf, adc, scenario, cfg.sigma2, cfg.pilot_length)
              for b, kf in zip(profile.beta, profile.kfactor)]
    total = float(np.sum(se_from_sinr(np.asarray(limits), cfg.log_base)))
    table.rows = [replace(r, se_limit=total) for r in table.rows]
    return table


def reproduce_figure(name: str, overrides: dict | None = None, out_dir=".", workers: int = 1,
                     profile=None, power_model=None, sweep_values=None) -> dict:
    """Run figure ``name`` and write one CSV per table into ``out_dir``.

    Returns a mapping from the written path to its :class:`ResultTable`.
    """
    specs = figure_specs(name, overrides, profile, power_model, sweep_values)
    os.makedirs(out_dir, exist_ok=True)
    written = {}
    for stem, spec in specs.items():
        table = run_monte_carlo(spec, workers=workers)
        if spec.sweep_axis == "scaling_m":
            table = attach_scaling_limit(spec, table)
        table.metadata["figure"] = stem
        path = os.path.join(out_dir, f"{stem}.csv")
        table.write_csv(path)
        written[path] = table
    return written


def gap_to_limit(table: ResultTable, receiver: str, csi: str = "imperfect") -> list:
    return [abs(r.se_sim_mean - r.se_limit) for r in table.select(receiver, csi)
            if not math.isnan(r.se_limit)]
