"""Qualitative figure patterns over a beta sweep and an eta scan for them.

Each pattern looks only at ``ok`` sweep records.

fig1  F1 > 0 and G1 < 0 everywhere.
fig2  F2_printed negative first, exactly one sign change, G2_printed > 0.
fig3  g2 < 1 everywhere and non-decreasing over the top third of the grid.
"""
import numpy as np

from nlcs.analysis import sweep
from nlcs.nonlinearity import NonlinearitySpec
from nlcs.states import DEFAULT_POLICY

DEFAULT_ETAS = (0.1, 0.2, 0.3)
SCAN_ETAS = tuple(round(0.05 * k, 2) for k in range(1, 11))


def default_grid(points=50, beta_max=1.0):
    """``points`` equally spaced values in (0, beta_max]."""
    return np.arange(1, points + 1) * (beta_max / points)


def _ok(records):
    return [r for r in records if r.ok]


def fig1_pattern(records):
    ok = _ok(records)
    return bool(ok) and all(r.report.F1 > 0 and r.report.G1 < 0 for r in ok)


def sign_changes(values):
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


def fig2_pattern(records):
    ok = _ok(records)
    if not ok:
        return False
    f2 = [r.report.F2_printed for r in ok]
    return (
        f2[0] < 0
        and sign_changes(f2) == 1
        and all(r.report.G2_printed > 0 for r in ok)
    )


def fig3_pattern(records):
    ok = _ok(records)
    if not ok or any(r.report.g2_true is None for r in ok):
        return False
    g2 = np.array([r.report.g2_true for r in ok])
    top = g2[len(g2) - len(g2) // 3 :]
    return bool(np.all(g2 < 1.0) and np.all(np.diff(top) >= 0.0))


PATTERNS = {"fig1": fig1_pattern, "fig2": fig2_pattern, "fig3": fig3_pattern}


def pattern_table(etas, grid=None, policy=DEFAULT_POLICY):
    """{eta: {pattern name: bool}} for trapped-ion sweeps at each eta."""
    grid = default_grid() if grid is None else grid
    out = {}
    for eta in etas:
        records = sweep(NonlinearitySpec.trapped_ion(eta), grid, policy)
        out[eta] = {name: check(records) for name, check in PATTERNS.items()}
    return out


def first_eta(table):
    """First eta (in table order) at which each pattern appears, else None."""
    found = {}
    for name in PATTERNS:
        found[name] = next((eta for eta, res in table.items() if res[name]), None)
    return found
