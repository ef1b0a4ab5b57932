"""Bloch-type norms and integral-type composition operators on the unit ball.

Thin convenience layer over the compiled core: JSON-string results from the
extension are decoded into plain dicts here.
"""

import json as _json

from ._core import (
    BlochError,
    Operator,
    Poly,
    SelfMap,
    Weight,
    bloch_norm,
    pseudohyperbolic,
    seminorm,
)
from ._core import epsnet_json as _epsnet_json
from ._core import run_experiment_json as _run_experiment_json
from ._core import test_series_constants_json as _test_series_constants_json

__all__ = [
    "BlochError",
    "Operator",
    "Poly",
    "SelfMap",
    "Weight",
    "bloch_norm",
    "classify_boundedness",
    "classify_compactness",
    "describe_weight",
    "epsnet",
    "pseudohyperbolic",
    "run_experiment",
    "seminorm",
    "test_series_constants",
]


def describe_weight(weight):
    """Weight parameters (family, exponents, admissible interval) as a dict."""
    return _json.loads(weight.describe_json())


def classify_boundedness(operator):
    """Boundedness report of the operator between the four space kinds."""
    return _json.loads(operator.classify_boundedness_json())


def classify_compactness(operator):
    """Compactness report of the operator (boundary decay or symbol norm)."""
    return _json.loads(operator.classify_compactness_json())


def epsnet(phi, r, eps, random_samples=512, seed=0xE7A09EB):
    """Greedy epsilon-net of the image {phi(y): ||phi(y)|| < r} as a dict."""
    return _json.loads(_epsnet_json(phi, r, eps, random_samples, seed))


def test_series_constants(nu, k_max=34):
    """Extremal constants of the lacunary test series built from nu."""
    return _json.loads(_test_series_constants_json(nu, k_max))


def run_experiment(config):
    """Run the task pipeline for a config dict (or JSON string).

    Returns (report: dict, files: list[(name, content)], exit_code: int).
    """
    if not isinstance(config, str):
        config = _json.dumps(config)
    report, files, exit_code = _run_experiment_json(config)
    return _json.loads(report), files, exit_code
