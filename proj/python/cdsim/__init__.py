"""Simulator for periodically driven open quantum systems.

Thin wrapper around the compiled core: a thermodynamically consistent GKLS
master equation in the instantaneous eigenbasis, slow-driving expansions, and
counterdiabatic driving. Configurations are JSON documents (see the project
README for the schema); `simulate`, `scan` and `expand` also accept plain
dicts for convenience.
"""

import json as _json

from ._core import (  # noqa: F401
    ConfigError,
    SimulationError,
    __version__,
    bloch_hamiltonian,
    eigendecompose,
    gibbs_state,
    trace_distance,
    two_level_cd,
    validate,
)
from ._core import expand as _expand
from ._core import generator as _generator
from ._core import scan as _scan
from ._core import simulate as _simulate


def _as_json(config):
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def simulate(config):
    """Integrate one configuration (dict or JSON string)."""
    return _simulate(_as_json(config))


def scan(config, axis, grid, jobs=1):
    """Sweep omega or h over `grid`, returning steady-state d statistics."""
    return _scan(_as_json(config), axis, list(grid), jobs)


def expand(config, order=1):
    """Perturbative state per sampled time alongside the integrated one."""
    return _expand(_as_json(config), order)


def generator(config, t, dense_oracle_route=False):
    """Dense block generator at time t in (pop, coh) ordering."""
    return _generator(_as_json(config), t, dense_oracle_route)
