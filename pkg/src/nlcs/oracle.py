"""Brute-force truncated-Fock operator algebra.

Everything here works with explicit dense matrices in a basis |0>..|dim-1>
and never uses the closed-form expansions, so it can serve as an
independent check on them. Products of degree-k ladder words are wrong in
the top k levels of a truncated basis; algebraic identities are therefore
compared on the "safe block" that drops the top ``SAFE_MARGIN`` levels.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from nlcs.errors import InvalidArgument, TailOverflow, ZeroNonlinearity
from nlcs.nonlinearity import f_values

SAFE_MARGIN = 2
TAIL_LIMIT = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    label: str
    entries: np.ndarray

    @property
    def dim(self):
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(f"{self.label}{other.label}", self.entries @ other.entries)
        return self.entries @ other


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    dim: int
    f: np.ndarray
    a: OperatorMatrix
    adag: OperatorMatrix
    N: OperatorMatrix
    A: OperatorMatrix
    Adag: OperatorMatrix
    B: OperatorMatrix
    Bdag: OperatorMatrix


def _frozen(m):
    m = np.ascontiguousarray(m)
    m.flags.writeable = False
    return m


def ladder(dim):
    """Annihilation operator a with a[n, n+1] = sqrt(n+1)."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1)


def build_operators(spec, dim):
    """Matrices of a, a^dag, N, A = a f(N), A^dag, B = a f(N)^-1 and B^dag.

    ``f`` on the returned family holds f(0)..f(dim), one level beyond the
    basis, which the [A, A^dag] check needs.
    """
    dim = int(dim)
    if dim < 2:
        raise InvalidArgument(f"dim must be >= 2, got {dim}")
    f = f_values(spec, dim)
    zeros = np.flatnonzero(f[:dim] == 0.0)
    if zeros.size:
        raise ZeroNonlinearity(int(zeros[0]))
    a = ladder(dim)
    fN = np.diag(f[:dim])
    inv_fN = np.diag(1.0 / f[:dim])
    A = a @ fN
    B = a @ inv_fN
    return OperatorFamily(
        dim=dim,
        f=_frozen(f),
        a=OperatorMatrix("a", _frozen(a)),
        adag=OperatorMatrix("a†", _frozen(a.T.copy())),
        N=OperatorMatrix("N", _frozen(np.diag(np.arange(dim, dtype=np.float64)))),
        A=OperatorMatrix("A", _frozen(A)),
        Adag=OperatorMatrix("A†", _frozen(fN @ a.T)),
        B=OperatorMatrix("B", _frozen(B)),
        Bdag=OperatorMatrix("B†", _frozen(inv_fN @ a.T)),
    )


def _comm(x, y):
    return x @ y - y @ x


@dataclass(frozen=True)
class CommutatorReport:
    dim: int
    residuals: dict
    corner: float

    def max_residual(self):
        return max(self.residuals.values())


def check_commutators(family):
    """Safe-block residuals of the deformed algebra and its conjugate pair.

    Checks [N,A] = -A, [N,A^dag] = A^dag,
    [A,A^dag] = (N+1) f(N+1)^2 - N f(N)^2, [A,B^dag] = 1 and [B,A^dag] = 1.
    ``corner`` is |residual| of [A,A^dag] at (dim-1, dim-1), where truncation
    is expected to spoil the identity.
    """
    dim = family.dim
    n = np.arange(dim, dtype=np.float64)
    f = family.f
    N, A, Ad = family.N.entries, family.A.entries, family.Adag.entries
    B, Bd = family.B.entries, family.Bdag.entries
    eye = np.eye(dim)
    deformed = np.diag((n + 1) * f[1 : dim + 1] ** 2 - n * f[:dim] ** 2)
    mats = {
        "N_A": _comm(N, A) + A,
        "N_Adag": _comm(N, Ad) - Ad,
        "A_Adag": _comm(A, Ad) - deformed,
        "A_Bdag": _comm(A, Bd) - eye,
        "B_Adag": _comm(B, Ad) - eye,
    }
    k = dim - SAFE_MARGIN
    residuals = {name: float(np.max(np.abs(m[:k, :k]))) for name, m in mats.items()}
    corner = float(abs(mats["A_Adag"][dim - 1, dim - 1]))
    return CommutatorReport(dim=dim, residuals=residuals, corner=corner)


def expm_vector(M, v, tol=1e-17):
    """exp(M) v by scaled Taylor summation of the matrix action.

    M is scaled by s = ceil(max(||M||_1, ||M||_inf)) so each sub-step has norm <= 1, and the
    Taylor series of each sub-step stops once a term and the geometric bound
    on the remaining terms fall below ``tol`` relative to the current vector.
    """
    absM = np.abs(M)
    # max(||M||_1, ||M||_inf) bounds the 2-norm
    norm = float(max(np.max(np.sum(absM, axis=0)), np.max(np.sum(absM, axis=1))))
    steps = max(1, math.ceil(norm))
    Ms = M / steps
    eta = norm / steps
    v = np.array(v, dtype=np.complex128)
    for _ in range(steps):
        term = v.copy()
        acc = v.copy()
        scale = np.linalg.norm(v)
        for k in range(1, 200):
            term = (Ms @ term) / k
            acc += term
            tnorm = np.linalg.norm(term)
            # remaining terms bounded by tnorm * eta/(k+1) / (1 - eta/(k+1))
            r = eta / (k + 1)
            if tnorm * r / (1.0 - r) <= tol * scale:
                break
        v = acc
    return v


def vacuum(dim):
    v = np.zeros(dim, dtype=np.complex128)
    v[0] = 1.0
    return v


def displace_exact(spec, beta, which="D", dim=64):
    """Normalized exp(M)|0> for a displacement-type generator M.

    which="D":  M = beta A^dag - beta* B
    which="D1": M = beta B^dag - beta* A

    Raises TailOverflow when more than 1e-10 of the weight sits in the top
    quarter of the basis.
    """
    beta = complex(beta)
    fam = build_operators(spec, dim)
    if which == "D":
        M = beta * fam.Adag.entries - beta.conjugate() * fam.B.entries
    elif which == "D1":
        M = beta * fam.Bdag.entries - beta.conjugate() * fam.A.entries
    else:
        raise InvalidArgument(f"which must be 'D' or 'D1', got {which!r}")
    psi = expm_vector(M, vacuum(dim))
    psi /= np.linalg.norm(psi)
    top = float(np.sum(np.abs(psi[dim - dim // 4 :]) ** 2))
    if top > TAIL_LIMIT:
        raise TailOverflow(dim, top)
    return psi


def overlap(u, v):
    """|<u|v>| for vectors of possibly different length (zero-padded)."""
    k = max(len(u), len(v))
    uu = np.zeros(k, dtype=np.complex128)
    vv = np.zeros(k, dtype=np.complex128)
    uu[: len(u)] = u
    vv[: len(v)] = v
    return float(abs(np.vdot(uu, vv)) / (np.linalg.norm(uu) * np.linalg.norm(vv)))


def eigen_residual(psi, spec, alpha, dim=None):
    """||(A - alpha)|psi>|| over the safe block."""
    psi = np.asarray(psi, dtype=np.complex128)
    dim = psi.size if dim is None else int(dim)
    v = np.zeros(dim, dtype=np.complex128)
    k = min(dim, psi.size)
    v[:k] = psi[:k]
    f = f_values(spec, dim - 1)
    A = ladder(dim) @ np.diag(f)
    r = A @ v - complex(alpha) * v
    return float(np.linalg.norm(r[: dim - SAFE_MARGIN]))


_TOKEN = re.compile(r"\s*(a†|a\^\+|ad|a)(?:\^(\d+))?")


def parse_word(word):
    """Parse an operator word like ``"a†^2 a^2"`` or ``"a†a"`` into factors.

    Returns a list of 'a' / 'ad' tokens, leftmost first.
    """
    out = []
    pos = 0
    word = word.strip()
    while pos < len(word):
        m = _TOKEN.match(word, pos)
        if not m or m.end() == pos:
            raise InvalidArgument(f"cannot parse operator word {word!r}")
        kind = "a" if m.group(1) == "a" else "ad"
        out.extend([kind] * int(m.group(2) or 1))
        pos = m.end()
        while pos < len(word) and word[pos] in " *·":
            pos += 1
    if len(out) > 4:
        raise InvalidArgument(f"operator word degree {len(out)} exceeds 4")
    return out


def quadratic_form(psi, word):
    """<psi|word|psi> using truncated ladder matrices in the dimension of ``psi``."""
    psi = np.asarray(psi, dtype=np.complex128)
    a = ladder(psi.size)
    ops = {"a": a, "ad": a.T}
    v = psi
    for tok in reversed(parse_word(word)):
        v = ops[tok] @ v
    return complex(np.vdot(psi, v))
