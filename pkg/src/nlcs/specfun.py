"""Generalized Laguerre polynomials and log-factorials.

Laguerre values come from the upward recurrence in the degree

    (n+1) L_{n+1}^m(x) = (2n + 1 + m - x) L_n^m(x) - (n + m) L_{n-1}^m(x)

seeded with L_0^m = 1 and L_1^m = 1 + m - x. The nonlinearity needs every
degree up to some cutoff at one fixed argument, so the whole sequence is
produced in a single pass.
"""
import math

import numpy as np
from scipy.special import gammaln

from nlcs._backend import laguerre_sequence as _laguerre_sequence
from nlcs.errors import InvalidArgument


def _check_degree(n, name="n"):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InvalidArgument(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


def _check_real(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgument(f"{name} must be finite, got {x!r}")
    return x


def laguerre_sequence(n_max, m, x):
    """Return ``L_0^m(x), ..., L_{n_max}^m(x)`` as a float array."""
    n_max = _check_degree(n_max, "n_max")
    m = _check_degree(m, "m")
    x = _check_real(x)
    return _laguerre_sequence(n_max, float(m), x)


def laguerre(n, m, x):
    """Generalized Laguerre polynomial L_n^m(x).

    Parameters
    ----------
    n : int
        degree, n >= 0
    m : int
        superscript (order), m >= 0
    x : float
        finite argument

    Returns
    -------
    float
    """
    return float(laguerre_sequence(n, m, x)[-1])


def log_factorial(n):
    """ln(n!) for a non-negative integer n."""
    n = _check_degree(n)
    if n < 2:
        return 0.0
    return math.lgamma(n + 1)


def log_factorial_table(n_max):
    """Array of ln(k!) for k = 0..n_max."""
    n_max = _check_degree(n_max, "n_max")
    out = gammaln(np.arange(n_max + 1, dtype=np.float64) + 1.0)
    out[:2] = 0.0
    return out
