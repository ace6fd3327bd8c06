"""Bessel functions J_l and K_l of integer order and real argument.

The numerical kernels live in a compiled extension (``_ckernels``) with a
pure-Python twin (``_pykernels``).  The compiled one is used when it was
built; setting ``FIBERCAVITY_PURE_PYTHON=1`` before import, or calling
:func:`set_backend`, selects the fallback.

Regimes for J_l: ascending series for x <= 5, Miller backward recurrence
up to max(50, 1.5 l^2), Hankel asymptotic expansion beyond.  K_0 and K_1
come from the ascending series for x <= 2, Temme's continued fraction up to
25 and the asymptotic expansion beyond; higher orders are reached by the
(stable) forward recurrence.
"""
import importlib
import os
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from . import _pykernels

__all__ = [
    "SpecfunResult",
    "bessel_j",
    "bessel_k",
    "bessel_prime",
    "jv_array",
    "kv_array",
    "available_backends",
    "set_backend",
    "get_backend",
]

MAX_ORDER = 30
J_MAX_ARG = 1e4
K_MAX_ARG = 700.0


def _load_compiled():
    try:
        return importlib.import_module("fibercavity.specfun._ckernels")
    except ImportError:
        return None


_compiled = _load_compiled()
_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

if _compiled is not None and os.environ.get("FIBERCAVITY_PURE_PYTHON", "") != "1":
    kernels = _compiled
else:
    kernels = _pykernels


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module called ``name``, or the active one."""
    if name is None:
        return kernels
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None


def set_backend(name):
    """Switch the process-wide kernel module (used by benchmarks and tests)."""
    global kernels
    kernels = get_backend(name)
    return kernels


@dataclass(frozen=True)
class SpecfunResult:
    value: float
    abs_error_estimate: float


def _check_order(l):
    if isinstance(l, bool) or int(l) != l:
        raise DomainError("l", f"order must be an integer, got {l!r}")
    l = int(l)
    if l < 0 or l > MAX_ORDER:
        raise DomainError("l", f"order must lie in [0, {MAX_ORDER}], got {l}")
    return l


def _check_j_arg(x):
    x = float(x)
    if not (0.0 <= x <= J_MAX_ARG):
        raise DomainError("x", f"argument must lie in [0, {J_MAX_ARG:g}], got {x!r}")
    return x


def _check_k_arg(x):
    x = float(x)
    if not (0.0 < x <= K_MAX_ARG):
        raise DomainError("x", f"argument must lie in (0, {K_MAX_ARG:g}], got {x!r}")
    return x


def bessel_j(l, x):
    """Bessel function of the first kind J_l(x)."""
    l = _check_order(l)
    x = _check_j_arg(x)
    v, e = kernels.jn(l, x)
    return SpecfunResult(v, e)


def bessel_k(l, x):
    """Modified Bessel function of the second kind K_l(x); diverges at x = 0."""
    l = _check_order(l)
    x = _check_k_arg(x)
    v, e = kernels.kn(l, x)
    return SpecfunResult(v, e)


def bessel_prime(kind, l, x):
    """First derivative of J_l or K_l with respect to the argument.

    Parameters
    ----------
    kind : {"J", "K"}
    l : int
        Order, ``0 <= l <= 29`` (the recurrence needs order ``l + 1``).
    x : float
        Argument, same domain as the underlying function.
    """
    kind = str(kind).upper()
    if kind not in ("J", "K"):
        raise DomainError("kind", f"must be 'J' or 'K', got {kind!r}")
    l = _check_order(l)
    if l == MAX_ORDER:
        raise DomainError("l", f"derivative needs order l+1 <= {MAX_ORDER}")
    if kind == "J":
        x = _check_j_arg(x)
        up, eu = kernels.jn(l + 1, x)
        if l == 0:
            return SpecfunResult(-up, eu)
        dn, ed = kernels.jn(l - 1, x)
        return SpecfunResult(0.5 * (dn - up), 0.5 * (ed + eu))
    x = _check_k_arg(x)
    up, eu = kernels.kn(l + 1, x)
    if l == 0:
        return SpecfunResult(-up, eu)
    dn, ed = kernels.kn(l - 1, x)
    return SpecfunResult(-0.5 * (dn + up), 0.5 * (ed + eu))


def jv_array(l, x):
    """Vectorised J_l over a float array; negative orders via J_{-l} = (-1)^l J_l.

    No domain checks: internal helper for field evaluation.
    """
    x = np.ascontiguousarray(x, dtype=float)
    out = np.empty_like(x)
    kernels.jn_fill(abs(l), x.ravel(), out.ravel())
    if l < 0 and l % 2:
        out = -out
    return out


def kv_array(l, x):
    """Vectorised K_l over a positive float array; K_{-l} = K_l."""
    x = np.ascontiguousarray(x, dtype=float)
    out = np.empty_like(x)
    kernels.kn_fill(abs(l), x.ravel(), out.ravel())
    return out
