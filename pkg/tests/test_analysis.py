import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlcs import (
    NonlinearitySpec,
    UndefinedG2,
    build_displacement_state,
    build_eigenstate,
    moments_direct,
    reconcile_series,
    series,
    squeezing_report,
    sweep,
)
from nlcs import oracle
from nlcs.analysis import quadrature_variances, sweep_csv, SWEEP_COLUMNS
from nlcs.nonlinearity import f_factorial_prefix


def report_for(spec, beta):
    state = build_displacement_state(spec, beta)
    m = moments_direct(state)
    s = series(spec, beta)
    return s, m, squeezing_report(s, m, beta)


def test_identity_series(identity):
    s = series(identity, 0.7)
    for v in (s.I1, s.I2, s.I4, s.I5):
        assert v == pytest.approx(1.0, abs=1e-10)
    assert s.I3 == pytest.approx(0.49, abs=1e-10)


def test_series_at_zero(ion02):
    s = series(ion02, 0.0)
    f = [v.to_real() for v in f_factorial_prefix(ion02, 4)]
    assert s.I1 == pytest.approx(f[1], rel=1e-14)
    assert s.I2 == pytest.approx(f[2], rel=1e-14)
    assert s.I3 == 0.0
    assert s.I4 == pytest.approx(f[2] ** 2, rel=1e-14)
    assert s.I5 == pytest.approx(f[4], rel=1e-14)


def test_series_against_naive_sum(ion02):
    beta = 0.5
    f = [v.to_real() for v in f_factorial_prefix(ion02, 70)]
    w = [beta ** (2 * n) / math.factorial(n) for n in range(60)]
    c2 = 1 / math.fsum(w[n] * f[n] ** 2 for n in range(60))
    I5 = c2 * math.fsum(w[n] * f[n] * f[n + 4] for n in range(60))
    I3 = c2 * math.fsum(w[n] * beta**2 * f[n + 1] ** 2 for n in range(60))
    s = series(ion02, beta)
    assert s.I5 == pytest.approx(I5, rel=1e-12)
    assert s.I3 == pytest.approx(I3, rel=1e-12)


def test_series_rejects_complex(ion02):
    with pytest.raises(ValueError):
        series(ion02, 0.3 + 0.1j)


def test_moments_vacuum(identity):
    m = moments_direct(build_displacement_state(identity, 0.0))
    assert (m.mean_a, m.mean_a2, m.mean_a4, m.nbar, m.a2dag_a2) == (0, 0, 0, 0, 0)


def test_moments_coherent(identity):
    m = moments_direct(build_displacement_state(identity, 0.5))
    assert m.mean_a == pytest.approx(0.5, abs=1e-14)
    assert m.mean_a2 == pytest.approx(0.25, abs=1e-14)
    assert m.mean_a4 == pytest.approx(0.0625, abs=1e-14)
    assert m.nbar == pytest.approx(0.25, abs=1e-14)
    assert m.a2dag_a2 == pytest.approx(0.0625, abs=1e-14)


@pytest.mark.parametrize("family", ["displacement", "eigenstate"])
def test_moments_match_oracle(ion02, family):
    build = build_displacement_state if family == "displacement" else build_eigenstate
    state = build(ion02, 0.5)
    m = moments_direct(state)
    psi = state.padded(64)
    q = oracle.quadratic_form
    assert abs(m.mean_a - q(psi, "a")) < 1e-10
    assert abs(m.mean_a2 - q(psi, "a^2")) < 1e-10
    assert abs(m.mean_a4 - q(psi, "a^4")) < 1e-10
    assert abs(m.nbar - q(psi, "a†a")) < 1e-10
    assert abs(m.a2dag_a2 - q(psi, "a†^2 a^2")) < 1e-10
    assert abs(m.a2_a2dag - q(psi, "a^2 a†^2")) < 1e-10


def test_reconcile_identity():
    spec = NonlinearitySpec.identity()
    s = series(spec, 0.7)
    m = moments_direct(build_displacement_state(spec, 0.7))
    rec = reconcile_series(s, m, 0.7)
    assert m.a2dag_a2 == pytest.approx(0.2401, abs=1e-12)
    assert rec.a4_reading == "scaled"
    assert rec.row("a2dag_a2_printed").holds is False
    assert rec.flagged_ok()


def test_reconcile_at_zero(ion02):
    s = series(ion02, 0.0)
    m = moments_direct(build_displacement_state(ion02, 0.0))
    rec = reconcile_series(s, m, 0.0)
    for name in ("a", "a2", "a4"):
        assert rec.row(name).skipped
    assert rec.row("nbar").holds
    assert rec.a4_reading == "scaled"


def test_reconcile_reading_stable(ion02):
    readings = set()
    for beta in (0.3, 0.5, 0.8):
        s = series(ion02, beta)
        m = moments_direct(build_displacement_state(ion02, beta))
        rec = reconcile_series(s, m, beta)
        assert rec.flagged_ok()
        readings.add(rec.a4_reading)
    assert readings == {"scaled"}


@pytest.mark.parametrize("eta", [0.0, 0.1, 0.2, 0.3])
@pytest.mark.parametrize("beta", [0.2, 0.5, 0.8])
def test_series_direct_agreement(eta, beta):
    spec = NonlinearitySpec.trapped_ion(eta)
    s = series(spec, beta)
    rec = reconcile_series(s, moments_direct(build_displacement_state(spec, beta)), beta)
    for name in ("a", "a2", "nbar", "a4", "a2dag_a2_scaled"):
        assert rec.row(name).residual < 1e-9


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.9, 1.7])
def test_coherent_boundary(identity, beta):
    _, _, r = report_for(identity, beta)
    assert r.var_X1 == pytest.approx(0.25, abs=1e-10)
    assert r.var_Y1 == pytest.approx(0.25, abs=1e-10)
    assert r.F1 == pytest.approx(0, abs=1e-9)
    assert r.G1 == pytest.approx(0, abs=1e-9)
    assert r.g2_true == pytest.approx(1, abs=1e-10)
    assert r.var_X2 == pytest.approx(r.comm_bound, abs=1e-9)
    assert not (r.squeezed_X1 or r.squeezed_Y1 or r.squeezed_X2 or r.squeezed_Y2)
    assert not r.sub_poissonian


def test_vacuum_report(identity):
    _, _, r = report_for(identity, 0.0)
    assert r.var_X1 == pytest.approx(0.25, abs=1e-15)
    assert r.var_Y1 == pytest.approx(0.25, abs=1e-15)
    assert r.g2_true is None and r.g2_printed is None
    with pytest.raises(UndefinedG2):
        r.g2


def test_printed_indicators_match_variances(ion02):
    # var_X1 - 1/4 = F1/2 and var_Y1 - 1/4 = G1/2 for real beta
    for beta in (0.2, 0.6, 0.9):
        _, _, r = report_for(ion02, beta)
        assert r.var_X1 - 0.25 == pytest.approx(r.F1 / 2, abs=1e-12)
        assert r.var_Y1 - 0.25 == pytest.approx(r.G1 / 2, abs=1e-12)


def test_verdicts_follow_variances(ion02):
    _, _, r = report_for(ion02, 0.6)
    assert r.var_Y1 < 0.25 - 1e-6 and r.squeezed_Y1
    assert r.var_X1 > 0.25 and not r.squeezed_X1
    assert r.sub_poissonian == (r.g2_true < 1)


def test_g2_consistency(ion02):
    for beta in (0.2, 0.5, 0.9):
        state = build_displacement_state(ion02, beta)
        p = np.abs(state.coeffs) ** 2
        n = np.arange(p.size)
        g2 = np.sum(n * (n - 1) * p) / np.sum(n * p) ** 2
        _, _, r = report_for(ion02, beta)
        assert r.g2_true == pytest.approx(g2, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([0.0, 0.1, 0.2, 0.3, 0.4, 0.5]),
    st.sampled_from(["eigenstate", "displacement"]),
    st.complex_numbers(max_magnitude=1.5),
)
def test_uncertainty_floors(eta, family, z):
    spec = NonlinearitySpec.trapped_ion(eta)
    build = build_displacement_state if family == "displacement" else build_eigenstate
    vx1, vy1, vx2, vy2, bound = quadrature_variances(moments_direct(build(spec, z)))
    assert vx1 * vy1 >= 1 / 16 - 1e-12
    assert vx2 * vy2 >= bound**2 - 1e-10


def test_sweep_identity(identity):
    records = sweep(identity, [0.1, 0.5, 1.0])
    assert [r.status for r in records] == ["ok"] * 3
    for r in records:
        assert abs(r.report.F1) < 1e-10 and abs(r.report.G1) < 1e-10


def test_sweep_marks_singular_points():
    from scipy.special import roots_laguerre

    eta = math.sqrt(roots_laguerre(10)[0][0])
    records = sweep(NonlinearitySpec.trapped_ion(eta), [0.2, 0.4])
    assert [r.status for r in records] == ["singular", "singular"]
    text = sweep_csv(records, NonlinearitySpec.trapped_ion(eta))
    row = text.splitlines()[1].split(",")
    assert row[-1] == "singular" and all(v == "" for v in row[2:-1])


def test_sweep_rejects_descending(identity):
    with pytest.raises(ValueError):
        sweep(identity, [0.5, 0.1])


def test_sweep_csv_format(ion02):
    text = sweep_csv(sweep(ion02, [0.25, 0.5]), ion02)
    lines = text.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "0.25"
