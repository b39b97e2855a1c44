"""The compiled and pure-Python kernels must agree."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlcs import _pykernels

ck = pytest.importorskip("nlcs._ckernels")


@settings(max_examples=60, deadline=None)
@given(
    n_max=st.integers(0, 300),
    m=st.integers(0, 4),
    x=st.floats(0.0, 2.0, allow_nan=False),
)
def test_laguerre_backends_agree(n_max, m, x):
    a = ck.laguerre_sequence(n_max, float(m), x)
    b = _pykernels.laguerre_sequence(n_max, float(m), x)
    np.testing.assert_array_equal(a, b)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), max_size=200))
def test_cumprod_backends_agree(values):
    sa, la = ck.signed_log_cumprod(np.array(values))
    sb, lb = _pykernels.signed_log_cumprod(np.array(values))
    np.testing.assert_array_equal(sa, sb)
    np.testing.assert_allclose(la, lb, rtol=0, atol=1e-12)


def test_zero_factor_is_absorbing():
    for mod in (ck, _pykernels):
        signs, logs = mod.signed_log_cumprod(np.array([2.0, -3.0, 0.0, 5.0]))
        assert list(signs) == [1, 1, -1, 0, 0]
        assert logs[2] == pytest.approx(np.log(6.0))
        assert np.isneginf(logs[3]) and np.isneginf(logs[4])


def test_env_forces_fallback():
    import os
    import subprocess
    import sys

    code = "from nlcs._backend import BACKEND; print(BACKEND)"
    env = dict(os.environ, NLCS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
