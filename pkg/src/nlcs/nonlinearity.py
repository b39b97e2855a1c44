"""Nonlinearity functions f(n) and their running products f(n)! = f(1)...f(n).

Three kinds are supported:

``identity``
    f(n) = 1, the undeformed oscillator.
``trapped_ion``
    f(n) = L_n^1(eta^2) / [(n+1) L_n^0(eta^2)], with eta the Lamb-Dicke
    parameter. Reduces to identity at eta = 0.
``table``
    f(1), f(2), ... read from a user-supplied list or text file.

Products are carried as :class:`SignedLogValue` because f(n)! can span
hundreds of decades and f(n) changes sign past Laguerre zeros.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from nlcs._backend import signed_log_cumprod
from nlcs.errors import InvalidArgument, SingularDenominator
from nlcs.specfun import laguerre_sequence

IDENTITY = "identity"
TRAPPED_ION = "trapped_ion"
TABLE = "table"
KINDS = (IDENTITY, TRAPPED_ION, TABLE)

DEFAULT_DENOM_EPSILON = 1e-12


@dataclass(frozen=True)
class NonlinearitySpec:
    kind: str = IDENTITY
    eta: float = 0.0
    table: tuple = field(default=(), repr=False)
    denom_epsilon: float = DEFAULT_DENOM_EPSILON

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown nonlinearity kind {self.kind!r}")
        if not (math.isfinite(self.eta) and self.eta >= 0.0):
            raise InvalidArgument(f"eta must be finite and >= 0, got {self.eta!r}")
        if not (self.denom_epsilon > 0.0):
            raise InvalidArgument("denom_epsilon must be > 0")
        table = tuple(float(v) for v in self.table)
        if any(not math.isfinite(v) for v in table):
            raise InvalidArgument("table values must be finite")
        object.__setattr__(self, "table", table)

    @classmethod
    def identity(cls):
        return cls(IDENTITY)

    @classmethod
    def trapped_ion(cls, eta, denom_epsilon=DEFAULT_DENOM_EPSILON):
        return cls(TRAPPED_ION, eta=float(eta), denom_epsilon=denom_epsilon)

    @classmethod
    def from_table(cls, values):
        return cls(TABLE, table=tuple(values))

    @property
    def max_order(self):
        """Largest n for which f(n) is defined (None when unbounded)."""
        return len(self.table) if self.kind == TABLE else None

    def label(self):
        if self.kind == TRAPPED_ION:
            return f"trapped_ion(eta={self.eta!r})"
        if self.kind == TABLE:
            return f"table({len(self.table)} values)"
        return IDENTITY


def load_table(path):
    """Read a nonlinearity table: one f(k) per line starting at k = 1.

    Blank lines and ``#`` comments are skipped.
    """
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise InvalidArgument(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise InvalidArgument(f"{path}: empty nonlinearity table")
    return NonlinearitySpec.from_table(values)


@dataclass(frozen=True)
class SignedLogValue:
    """Real number stored as sign and natural log of its magnitude."""

    sign: int
    log_magnitude: float

    @classmethod
    def from_real(cls, x):
        x = float(x)
        if x == 0.0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def to_real(self):
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other):
        if not isinstance(other, SignedLogValue):
            return NotImplemented
        sign = self.sign * other.sign
        if sign == 0:
            return SignedLogValue(0, -math.inf)
        return SignedLogValue(sign, self.log_magnitude + other.log_magnitude)

    def __float__(self):
        return self.to_real()


def _raw_values(spec, n_max):
    """f(0..n_max) plus the Laguerre denominators (None unless trapped_ion)."""
    if n_max < 0:
        raise InvalidArgument(f"n must be >= 0, got {n_max}")
    if spec.kind == IDENTITY or (spec.kind == TRAPPED_ION and spec.eta == 0.0):
        return np.ones(n_max + 1), None
    if spec.kind == TABLE:
        if n_max > len(spec.table):
            raise InvalidArgument(
                f"table defines f(1)..f({len(spec.table)}) but f({n_max}) was requested"
            )
        # f(0) never enters a product or a matrix element; 1 keeps 1/f(0) finite
        return np.array((1.0,) + spec.table[:n_max]), None
    x = spec.eta * spec.eta
    l0 = laguerre_sequence(n_max, 0, x)
    l1 = laguerre_sequence(n_max, 1, x)
    denom = np.arange(1, n_max + 2, dtype=np.float64) * l0
    with np.errstate(divide="ignore", invalid="ignore"):
        f = l1 / denom
    return f, denom


def f_value(spec, n):
    """The nonlinearity f(n). May be negative for the trapped-ion kind."""
    n = int(n)
    f, denom = _raw_values(spec, n)
    if denom is not None and abs(denom[n]) < spec.denom_epsilon:
        raise SingularDenominator(n, denom[n], spec.denom_epsilon)
    return float(f[n])


def f_values(spec, n_max):
    """Array f(0), ..., f(n_max); every level is checked for singularity."""
    f, denom = _raw_values(spec, int(n_max))
    if denom is not None:
        bad = np.flatnonzero(np.abs(denom) < spec.denom_epsilon)
        if bad.size:
            k = int(bad[0])
            raise SingularDenominator(k, denom[k], spec.denom_epsilon)
    return f


def f_factorial_arrays(spec, n_max):
    """(signs, logs) arrays of f(k)! for k = 0..n_max, with f(0)! = 1."""
    f = f_values(spec, n_max)
    return signed_log_cumprod(f[1:])


def f_factorial_prefix(spec, n_max):
    """List of f(0)!, ..., f(n_max)! as SignedLogValue."""
    signs, logs = f_factorial_arrays(spec, n_max)
    return [SignedLogValue(int(s), float(l)) for s, l in zip(signs, logs)]


def f_factorial(spec, n):
    """f(n)! = f(1)...f(n); the empty product f(0)! is +1."""
    return f_factorial_prefix(spec, n)[-1]
