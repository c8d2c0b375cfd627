"""Multi-RIS MISO simulation with EMI and inter-RIS reflections."""

import json

from . import _risemi
from ._risemi import ConfigError, ZfDegenerate, path_loss_db, noise_power_watts, spatial_correlation, zf_precoder

__all__ = [
    "ConfigError",
    "ZfDegenerate",
    "default_config",
    "validate_config",
    "draw_realization",
    "evaluate_fixed",
    "run_sweep",
    "path_loss_db",
    "noise_power_watts",
    "spatial_correlation",
    "zf_precoder",
]


def default_config():
    return json.loads(_risemi.default_config_json())


def validate_config(cfg):
    return json.loads(_risemi.validate_config_json(json.dumps(cfg)))


def draw_realization(cfg, trial):
    return _risemi.draw_realization(json.dumps(cfg), trial)


def evaluate_fixed(cfg, trial, scenario="EIF"):
    sinr, rate = _risemi.evaluate_fixed(json.dumps(cfg), trial, scenario)
    return {"sinr": sinr, "rate_bps_hz": rate}


def run_sweep(cfg, variable, grid, scenarios, modes=("fixed_phase",), trials=100, seed=7, threads=0):
    return _risemi.run_sweep(json.dumps(cfg), variable, list(grid), list(scenarios), list(modes), trials, seed,
                             threads)
