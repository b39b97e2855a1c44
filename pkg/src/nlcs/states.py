"""Number-basis expansions of the two nonlinear coherent-state families.

eigenstate
    A|z> = z|z> with A = a f(N); c_n ~ z^n / (sqrt(n!) f(n)!). The same
    expansion is produced by exp(z B^dag - z* A)|0>.
displacement
    exp(z A^dag - z* B)|0>; c_n ~ z^n f(n)! / sqrt(n!).

Both are assembled in the log domain and exponentiated only after the
normalization sum is known, so wildly growing f(n)! never overflows.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from nlcs.errors import Divergence, InvalidArgument, ZeroNonlinearity
from nlcs.nonlinearity import NonlinearitySpec, f_factorial_arrays
from nlcs.specfun import log_factorial_table

EIGENSTATE = "eigenstate"
DISPLACEMENT = "displacement"
FAMILIES = (EIGENSTATE, DISPLACEMENT)


@dataclass(frozen=True)
class TruncationPolicy:
    """Adaptive cutoff for infinite number-basis sums.

    The cutoff starts at ``max(n_min, ceil(8 |z|^2))`` and doubles (up to
    ``n_hard``) until the last ``window`` terms are each below ``tail_tol``
    relative to the running sum and decay with ratio below ``decay_ratio``.
    """

    tail_tol: float = 1e-16
    n_min: int = 32
    n_hard: int = 4096
    window: int = 8
    decay_ratio: float = 0.9

    def __post_init__(self):
        if not (0.0 < self.tail_tol < 1.0):
            raise InvalidArgument("tail_tol must lie in (0, 1)")
        if not (0.0 < self.decay_ratio < 1.0):
            raise InvalidArgument("decay_ratio must lie in (0, 1)")
        if self.window < 1 or self.n_min <= self.window or self.n_hard < self.n_min:
            raise InvalidArgument("need 1 <= window < n_min <= n_hard")

    def initial_order(self, modulus):
        return min(self.n_hard, max(self.n_min, math.ceil(8.0 * modulus * modulus)))

    def tail(self, log_terms):
        """Return (converged, tail_estimate) for log pre-normalization terms."""
        w = self.window
        running = np.logaddexp.accumulate(log_terms)
        last = log_terms[-w:]
        relative = last - running[-w:]
        with np.errstate(invalid="ignore"):
            steps = np.diff(log_terms[-w - 1:])
        # -inf -> -inf steps are exact zeros and decay trivially
        steps = np.where(np.isneginf(log_terms[-w:]), -np.inf, steps)
        if np.isneginf(last[-1]):
            estimate = 0.0
        else:
            ratio = math.exp(min(float(np.max(steps)), 0.0))
            if ratio >= 1.0:
                return False, math.inf
            estimate = math.exp(relative[-1]) * ratio / (1.0 - ratio)
        converged = (
            bool(np.all(relative < math.log(self.tail_tol)))
            and bool(np.all(steps < math.log(self.decay_ratio)))
            and estimate <= self.tail_tol
        )
        return converged, estimate


DEFAULT_POLICY = TruncationPolicy()


def certify(log_terms_fn, modulus, policy):
    """Grow the cutoff until ``policy`` accepts the tail of ``log_terms_fn(N)``.

    Returns (N, log_terms, tail_estimate).
    """
    n = policy.initial_order(modulus)
    while True:
        log_terms = log_terms_fn(n)
        ok, estimate = policy.tail(log_terms)
        if ok:
            return n, log_terms, estimate
        if n >= policy.n_hard:
            raise Divergence(n, estimate)
        n = min(2 * n, policy.n_hard)


def _log_powers(log_modulus, n_max):
    ns = np.arange(n_max + 1, dtype=np.float64)
    if math.isinf(log_modulus):
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0
        return out
    return ns * log_modulus


@dataclass(frozen=True, eq=False)
class StateExpansion:
    family: str
    amplitude: complex
    spec: NonlinearitySpec
    coeffs: np.ndarray = field(repr=False)
    truncation_n: int
    tail_estimate: float
    norm_log: float

    def probabilities(self):
        return np.abs(self.coeffs) ** 2

    def coefficient(self, n):
        return coefficient(self, n)

    def padded(self, dim):
        """Coefficient vector of length ``dim`` (zero-padded or cut)."""
        out = np.zeros(dim, dtype=np.complex128)
        k = min(dim, self.coeffs.size)
        out[:k] = self.coeffs[:k]
        return out

    def header(self):
        return {
            "family": self.family,
            "amplitude": [self.amplitude.real, self.amplitude.imag],
            "kind": self.spec.kind,
            "eta": self.spec.eta,
            "truncation_n": self.truncation_n,
            "tail_estimate": self.tail_estimate,
        }

    def to_csv(self):
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.header()) + "\n")
        buf.write("n,re_c,im_c,prob\n")
        for n, (c, p) in enumerate(zip(self.coeffs, self.probabilities())):
            buf.write(f"{n},{float(c.real)!r},{float(c.imag)!r},{float(p)!r}\n")
        return buf.getvalue()


def coefficient(state, n):
    """c_n of ``state``; exactly zero beyond the truncation order."""
    n = int(n)
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    if n > state.truncation_n:
        return 0j
    return complex(state.coeffs[n])


def _build(family, spec, z, policy):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidArgument(f"amplitude must be finite, got {z!r}")
    modulus = abs(z)
    log_mod = math.log(modulus) if modulus > 0 else -math.inf
    direction = 1 if family == DISPLACEMENT else -1
    cache = {}

    def log_terms(n_max):
        signs, logs = f_factorial_arrays(spec, n_max)
        if direction < 0:
            zeros = np.flatnonzero(signs == 0)
            if zeros.size:
                raise ZeroNonlinearity(int(zeros[0]))
        with np.errstate(invalid="ignore"):
            out = 2.0 * _log_powers(log_mod, n_max) - log_factorial_table(n_max)
            out = out + direction * 2.0 * logs
        out[np.isnan(out)] = -np.inf
        cache[n_max] = signs
        return out

    n, lt, estimate = certify(log_terms, modulus, policy)
    signs = cache[n]
    norm_log = float(logsumexp(lt))
    with np.errstate(under="ignore"):
        mags = np.exp(0.5 * (lt - norm_log))
    phase = np.exp(1j * np.arange(n + 1) * np.angle(z)) if modulus > 0 else 1.0
    coeffs = signs * mags * phase
    nonzero = np.flatnonzero(coeffs)
    coeffs = np.ascontiguousarray(coeffs[: int(nonzero[-1]) + 1], dtype=np.complex128)
    coeffs /= np.linalg.norm(coeffs)
    coeffs.flags.writeable = False
    return StateExpansion(
        family=family,
        amplitude=z,
        spec=spec,
        coeffs=coeffs,
        truncation_n=coeffs.size - 1,
        tail_estimate=float(estimate),
        norm_log=norm_log,
    )


def build_eigenstate(spec, alpha, policy=DEFAULT_POLICY):
    """Normalized eigenstate of A = a f(N) with eigenvalue ``alpha``.

    Raises ZeroNonlinearity if f(k) = 0 below the cutoff and Divergence
    when the tail criterion fails at ``policy.n_hard``.
    """
    return _build(EIGENSTATE, spec, alpha, policy)


def build_displacement_state(spec, beta, policy=DEFAULT_POLICY):
    """Normalized exp(beta A^dag - beta* B)|0>; c_n ~ beta^n f(n)! / sqrt(n!)."""
    return _build(DISPLACEMENT, spec, beta, policy)


def build_state(family, spec, amplitude, policy=DEFAULT_POLICY):
    if family not in FAMILIES:
        raise InvalidArgument(f"unknown family {family!r}")
    return _build(family, spec, amplitude, policy)
