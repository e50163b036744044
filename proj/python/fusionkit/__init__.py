"""Python access to the fusionkit C++ library.

Densities and track sets use the same JSON layout as the command-line tool.
"""

import json

import numpy as np

from . import _core

__version__ = _core.__version__

METHODS = ("labelwise", "lm", "jl", "simplified-jl")


def kappa(omega, covariance):
    """Integral of N(x; 0, covariance) ** omega over the whole space."""
    return _core.kappa(float(omega), np.atleast_2d(np.asarray(covariance, dtype=float)))


def fuse(a, b, method="jl", omega=0.5, k_best=100):
    """Fuse two labeled multi-Bernoulli densities given as dicts."""
    return json.loads(_core.fuse_json(json.dumps(a), json.dumps(b), method, omega, k_best))


def tospa(x, y, p=1.0, c=100.0, alpha=100.0):
    """Labeled OSPA distance between two track sets given as dicts."""
    return _core.tospa_json(json.dumps(x), json.dumps(y), p, c, alpha)


def default_scenario():
    """The built-in two-agent scenario as a dict."""
    return json.loads(_core.default_scenario_json())


def experiment(scenario, methods=METHODS, trials=1):
    """Monte Carlo summary for a scenario dict."""
    return json.loads(_core.experiment_json(json.dumps(scenario), list(methods), int(trials)))
