"""Discontinuous Galerkin solver for the reduced Landau-de Gennes model."""

import json as _json

from ._ldg import (
    ConfigError,
    Mesh,
    annulus_mesh,
    default_config,
    eoc,
    normalize_config,
    square_mesh,
)
from ._ldg import run_study as _run_study

__all__ = [
    "ConfigError",
    "Mesh",
    "annulus_mesh",
    "default_config",
    "eoc",
    "normalize_config",
    "run",
    "square_mesh",
]


def run(config=None, **overrides):
    """Run a study. `config` is a dict or JSON string; keyword overrides use
    underscores in place of dashes (n_seg -> "n-seg")."""
    if config is None:
        cfg = {}
    elif isinstance(config, str):
        cfg = _json.loads(config)
    else:
        cfg = dict(config)
    for key, value in overrides.items():
        cfg[key.replace("_", "-")] = value
    return _run_study(_json.dumps(cfg))
