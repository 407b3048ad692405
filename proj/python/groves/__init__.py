"""Exact evaluation of Groves redistribution mechanisms.

Every exact quantity comes back as ``fractions.Fraction``. Inputs may be
``Fraction``, ``int`` or strings such as ``"7/24"``.
"""

from fractions import Fraction

from . import _core
from ._core import ArgumentError, EvaluationError, UnsupportedStrategy, UsageError

__all__ = [
    "ArgumentError",
    "EvaluationError",
    "UnsupportedStrategy",
    "UsageError",
    "auction",
    "public_project",
    "oel_coefficients",
    "evaluate",
    "compare",
    "check_feasible",
    "check_pay_only",
    "bcgc_surplus",
    "classify",
    "search",
    "run_cli",
]


def _s(value):
    return str(Fraction(value))


def _ss(values):
    return [_s(v) for v in values]


def _f(text):
    return Fraction(text)


def _fs(texts):
    return [Fraction(t) for t in texts]


def auction(n, m, L, U):
    """Setting for m identical units and n unit-demand bidders with bids in [L, U]."""
    return {"domain": "auction", "n": n, "m": m, "L": _s(L), "U": _s(U)}


def public_project(cost, shares=None, n=None):
    """Build-or-not project; equal shares unless ``shares`` is given."""
    setting = {"domain": "public", "cost": _s(cost)}
    if shares is not None:
        setting["shares"] = _ss(shares)
    else:
        setting["n"] = n
    return setting


def oel_coefficients(setting, k):
    constant, slopes = _core.oel_coefficients(setting, k)
    return _f(constant), _fs(slopes)


def evaluate(setting, mech, profile):
    out = dict(_core.evaluate(setting, mech, _ss(profile)))
    for key in ("taxes", "utilities"):
        out[key] = _fs(out[key])
    for key in ("total_tax", "welfare"):
        out[key] = _f(out[key])
    return out


def _witness(w):
    if w is None:
        return None
    return {"profile": _fs(w["profile"]), "agent": w["agent"]}


def compare(setting, mech_a, mech_b, grid):
    out = dict(_core.compare(setting, mech_a, mech_b, _ss(grid)))
    out["strict_witness"] = _witness(out["strict_witness"])
    out["violation_witness"] = _witness(out["violation_witness"])
    return out


def check_feasible(setting, mech, grid):
    return _core.check_feasible(setting, mech, _ss(grid))


def check_pay_only(setting, mech, grid):
    return _core.check_pay_only(setting, mech, _ss(grid))


def bcgc_surplus(setting, mech, agent, others):
    return _f(_core.bcgc_surplus(setting, mech, agent, _ss(others)))


def classify(setting, coeffs):
    out = dict(_core.classify(setting, _ss(coeffs)))
    out["slack"] = _f(out["slack"])
    out["witness"] = _fs(out["witness"])
    return out


def search(setting, mech, grid, kind="welfare", pay_only=False):
    out = dict(_core.search(setting, mech, _ss(grid), kind, pay_only))
    out["optimum"] = _f(out["optimum"])
    out["delta"] = {tuple(_fs(k.split(","))): _f(v) for k, v in out["delta"].items()}
    return out


def run_cli(args):
    """Runs the command-line front end in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli(list(args))
