"""Hybrid-system until-formula monitoring and certification.

Thin wrappers over the C++ core: scenario simulation, weak/strong until
monitoring along hybrid arcs, and the barrier/Lyapunov certificate routes.
"""

import json

from huntil import _core

__all__ = [
    "list_scenarios",
    "simulate",
    "monitor",
    "certify",
    "trajectory_dsv",
]


def list_scenarios():
    return list(_core.list_scenarios())


def simulate(scenario, x0, **kwargs):
    """Simulate all retained branches; returns the report as a dict."""
    return json.loads(_core.simulate_json(scenario, list(x0), **kwargs))


def monitor(scenario, mode="weak", **kwargs):
    """Evaluate p-until-q over sampled initial conditions."""
    return json.loads(_core.monitor_json(scenario, mode, **kwargs))


def certify(scenario, theorem="weak", **kwargs):
    """Run a certificate route and return its report as a dict."""
    return json.loads(_core.certify_json(scenario, theorem, **kwargs))


def trajectory_dsv(scenario, x0, **kwargs):
    """Single-branch trajectory export as delimiter-separated text."""
    return _core.trajectory_dsv(scenario, list(x0), **kwargs)
