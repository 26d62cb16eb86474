"""Fixed-order robust controller synthesis.

Every function takes the YAML run configuration either as text or as a path
to a file. Controllers are passed as dicts ``{"x": [x1..xm], "y": [y0..ym]}``
or in the JSON form written by ``synth``.
"""

import json
import os

from . import _core

__all__ = ["synth", "check", "poles", "simulate", "export_sdpa", "compare"]


def _config_text(config):
    if isinstance(config, os.PathLike) or (isinstance(config, str) and "\n" not in config and os.path.isfile(config)):
        with open(config, encoding="utf-8") as f:
            return f.read()
    return config


def _controller_text(controller):
    if controller is None or isinstance(controller, str):
        return controller
    return json.dumps(controller)


def synth(config, method="proposed"):
    """Solve the synthesis LMIs; returns the certificate and the controller."""
    return json.loads(_core.synth(_config_text(config), method))


def check(config, controller=None, seed=None):
    """Sampled verification report for a controller (default: the config's)."""
    return json.loads(_core.check(_config_text(config), _controller_text(controller), seed))


def poles(a, b, x, y):
    """Closed-loop poles for plant tails a1..an, b1..bn and controller x1..xm, y0..ym."""
    return _core.poles(list(a), list(b), list(x), list(y))


def simulate(config, controller=None):
    return _core.simulate(_config_text(config), _controller_text(controller))


def export_sdpa(config, method="proposed"):
    return _core.export_sdpa(_config_text(config), method)


def compare(config):
    return json.loads(_core.compare(_config_text(config)))
