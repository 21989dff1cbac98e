"""Fitzpatrick functions, convex conjugates and representability checks.

Grid functions are numpy arrays together with one (lo, hi) pair per axis;
node i of an axis with m nodes sits at lo + (hi - lo) * i / (m - 1).
Exact objects (operators, max-affine and generator functions) use the same
JSON layout as the command line tool and are passed as dicts.
"""

import json

from . import _core
from ._core import DEFAULT_SEED, InputError, PreconditionError, UnsupportedError, llt_1d

__all__ = [
    "DEFAULT_SEED",
    "InputError",
    "PreconditionError",
    "UnsupportedError",
    "conjugate",
    "conjugate_exact",
    "extract",
    "gate",
    "is_monotone",
    "lemma_battery",
    "llt_1d",
    "phi",
    "phi_on_grid",
    "run_cli",
    "sigma",
    "sigma_on_grid",
]


def conjugate(values, bounds, dual=None, method="llt"):
    """Discrete conjugate of a grid function.

    `dual` is a list of (lo, hi, m) axes; by default it is chosen from the
    slopes of the input. Returns (values, saturation_mask).
    """
    return _core.conjugate_grid(values, bounds, dual or [], method)


def conjugate_exact(function):
    """Conjugate of a max-affine or generator function, exactly."""
    return json.loads(_core.conjugate_exact(json.dumps(function)))


def phi(operator):
    """Fitzpatrick function of a finite operator as a max-affine function."""
    return json.loads(_core.phi_exact(json.dumps(operator)))


def sigma(operator):
    """The function sigma_T of a finite operator as a generator function."""
    return json.loads(_core.sigma_exact(json.dumps(operator)))


def phi_on_grid(operator, axes):
    return _core.phi_on_grid(json.dumps(operator), axes)


def sigma_on_grid(operator, axes):
    return _core.sigma_on_grid(json.dumps(operator), axes)


def is_monotone(operator):
    return _core.is_monotone(json.dumps(operator))


def gate(values, bounds, tol=1e-9):
    return _core.gate(values, bounds, tol)


def extract(values, bounds, tol=1e-9, gate_tol=1e-9):
    return _core.extract(values, bounds, tol, gate_tol)


def lemma_battery(seed=DEFAULT_SEED):
    return json.loads(_core.lemma_battery(seed))


def run_cli(*args):
    """Run the command line tool in process. Returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
