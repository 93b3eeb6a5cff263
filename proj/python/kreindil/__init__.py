"""Python front end for the kreindil C++ core."""

import json

from ._core import (
    ConsistencyError,
    DomainError,
    HypothesisError,
    InvalidArgument,
    Kernel,
    KreindilError,
    Model,
    NumericsError,
    PreconditionError,
    RegularityError,
    dilate,
    dissipative_margin,
    expm,
    find_beta,
    generate_instance,
)
from . import _core

__all__ = [
    "ConsistencyError",
    "DomainError",
    "HypothesisError",
    "InvalidArgument",
    "Kernel",
    "KreindilError",
    "Model",
    "NumericsError",
    "PreconditionError",
    "RegularityError",
    "analyze",
    "certify",
    "dilate",
    "dilate_report",
    "dissipative_margin",
    "expm",
    "find_beta",
    "generate_instance",
]


def _encode(model):
    # Accepts the model-file dict or its JSON text.
    return model if isinstance(model, str) else json.dumps(model)


def analyze(model, theta=None, beta=None):
    """Run the analyze command; returns (exit_code, report)."""
    code, text = _core._analyze(_encode(model), theta, beta)
    return code, json.loads(text)


def certify(model, trials=100, seed=0, max_points=5, jobs=1, force=False):
    code, text = _core._certify(_encode(model), trials, seed, max_points, jobs, force)
    return code, json.loads(text)


def dilate_report(model, delta=0.25, m=8, plain=False, force=False):
    code, text = _core._dilate_report(_encode(model), delta, m, plain, force)
    return code, json.loads(text)
