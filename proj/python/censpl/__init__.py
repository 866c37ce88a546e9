"""Censored pathloss estimation: OLS baseline and Tobit maximum likelihood."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import (
    __version__,
    _result_json,
    _run_experiment_json,
)


def run_experiment(spec, include_records=True):
    """Run a Monte-Carlo comparison described by a spec dict; returns the report dict."""
    return _json.loads(_run_experiment_json(_json.dumps(spec), include_records))


def result_dict(dataset, ols=None, tobit=None):
    """The JSON result document `censpl fit` writes, as a dict."""
    return _json.loads(_result_json(dataset, ols, tobit))
