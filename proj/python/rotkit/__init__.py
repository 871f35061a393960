"""Exact rotation numbers of contracted rotations f(x) = {lam*x + delta}.

Rationals are accepted as fractions.Fraction, int or "num/den" strings and
returned as fractions.Fraction.
"""

from fractions import Fraction

from . import _core
from ._core import (
    DepthExceeded,
    HorizonExceeded,
    HypothesisViolated,
    InvalidArgument,
    MatchingFailed,
    ParseError,
    PreconditionViolated,
    ResourceLimit,
    RotkitError,
    VerificationFailed,
)

__all__ = [
    "rho_exact",
    "rho_estimate",
    "tree_row",
    "periodic_orbit",
    "delta_of_rho",
    "cover_row",
    "suite_names",
    "run_suite",
    "criterion_ids",
    "run_criterion",
    "RotkitError",
    "InvalidArgument",
    "ParseError",
    "ResourceLimit",
    "DepthExceeded",
    "VerificationFailed",
    "HorizonExceeded",
    "HypothesisViolated",
    "PreconditionViolated",
    "MatchingFailed",
]


def _s(x):
    if isinstance(x, str):
        return x
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _F(s):
    return Fraction(s)


def _plateau(p):
    return (_F(p["lo"]), _F(p["hi"]))


def rho_exact(lam, delta, max_depth=None):
    """Returns (rho, (plateau_lo, plateau_hi), depth)."""
    r = _core.rho_exact(_s(lam), _s(delta), max_depth)
    return _F(r["rho"]), _plateau(r["plateau"]), r["depth"]


def rho_estimate(lam, delta, n, precision_bits=128):
    """Returns (estimate_str, lower, upper, error_bar) for (F^n(0))/n."""
    r = _core.rho_estimate(_s(lam), _s(delta), n, precision_bits)
    return r["estimate"], _F(r["lower"]), _F(r["upper"]), _F(r["error_bar"])


def tree_row(lam, k):
    """Row k of the lambda-tree as (fraction, value, plateau) triples."""
    return [(_F(n["fraction"]), _F(n["value"]), _plateau(n["plateau"])) for n in _core.tree_row(_s(lam), k)]


def periodic_orbit(lam, delta):
    """Returns (rho, points, wrap_word)."""
    r = _core.periodic_orbit(_s(lam), _s(delta))
    return _F(r["rho"]), [_F(p) for p in r["points"]], list(r["wrap_word"])


def delta_of_rho(lam, rho, eps=Fraction(1, 2**64)):
    """delta(lam, rho) as (partial_sum, tail_bound); rho is a RhoSpec string or a rational."""
    spec = rho if isinstance(rho, str) else _s(rho)
    r = _core.delta_of_rho(_s(lam), spec, _s(eps))
    return _F(r["partial_sum"]), _F(r["tail_bound"])


def cover_row(lam, k):
    """Gap intervals (lo, hi) making up E_k."""
    return [(_F(lo), _F(hi)) for lo, hi in _core.cover_row(_s(lam), k)]


def suite_names():
    return list(_core.suite_names())


def run_suite(name, seed=None):
    return _core.run_suite(name) if seed is None else _core.run_suite(name, seed)


def criterion_ids():
    return list(_core.criterion_ids())


def run_criterion(criterion_id):
    return _core.run_criterion(criterion_id)
