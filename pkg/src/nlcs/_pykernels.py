"""Pure-Python reference versions of the compiled kernels in ``_ckernels.pyx``.

Both modules expose the same functions with the same return types.
"""
import math

import numpy as np


def laguerre_sequence(n_max, m, x):
    """L_0^m(x) .. L_{n_max}^m(x) by upward three-term recurrence."""
    out = np.empty(n_max + 1, dtype=np.float64)
    prev = 1.0
    out[0] = prev
    if n_max == 0:
        return out
    cur = 1.0 + m - x
    out[1] = cur
    for n in range(1, n_max):
        nxt = ((2 * n + 1 + m - x) * cur - (n + m) * prev) / (n + 1)
        out[n + 1] = nxt
        prev, cur = cur, nxt
    return out


def signed_log_cumprod(values):
    """Running products of ``values`` as (sign, log|.|) arrays.

    Element k holds the product of values[0..k-1], so element 0 is the empty
    product (+1, 0.0). A zero factor is absorbing: sign 0 and log -inf from
    there on.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    signs = np.empty(n + 1, dtype=np.int8)
    logs = np.empty(n + 1, dtype=np.float64)
    sign = 1
    acc = 0.0
    signs[0] = 1
    logs[0] = 0.0
    for k in range(n):
        v = values[k]
        if sign != 0:
            if v == 0.0:
                sign = 0
                acc = -math.inf
            else:
                if v < 0.0:
                    sign = -sign
                acc += math.log(abs(v))
        signs[k + 1] = sign
        logs[k + 1] = acc
    return signs, logs
