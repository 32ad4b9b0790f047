"""Python bindings for the bfholes C++ library."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_experiment as _run_experiment


def run(config):
    """Run an experiment from a dict (or JSON string) config."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _run_experiment(text)
