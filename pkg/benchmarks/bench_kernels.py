"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py

Times the two recurrence kernels directly, then an end-to-end sweep in a
subprocess per backend (the backend is fixed at import time).
"""
import os
import subprocess
import sys
import timeit

import numpy as np

from nlcs import _pykernels

try:
    from nlcs import _ckernels
except ImportError:
    _ckernels = None

SWEEP = (
    "import time, numpy as np;"
    "from nlcs import NonlinearitySpec, sweep;"
    "from nlcs._backend import BACKEND;"
    "t = time.perf_counter();"
    "[sweep(NonlinearitySpec.trapped_ion(e), np.arange(1, 51) / 50) for e in (0.1, 0.2, 0.3)];"
    "print(BACKEND, time.perf_counter() - t)"
)


def bench(label, fn, number):
    t = min(timeit.repeat(fn, number=number, repeat=5)) / number
    print(f"  {label:<28s} {t * 1e6:10.1f} us")
    return t


def main():
    values = np.random.default_rng(0).uniform(-2, 2, 4096)
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled kernels not built; only the fallback is timed")
    times = {}
    for name, mod in backends:
        print(name)
        times[name, "lag"] = bench("laguerre_sequence(4096)", lambda: mod.laguerre_sequence(4096, 1.0, 0.04), 20)
        times[name, "cum"] = bench("signed_log_cumprod(4096)", lambda: mod.signed_log_cumprod(values), 20)
    if _ckernels is not None:
        for k in ("lag", "cum"):
            print(f"speedup {k}: {times['python', k] / times['cython', k]:.0f}x")

    print("end-to-end: 3 sweeps x 50 points")
    for pure in ("1", "0"):
        env = dict(os.environ, NLCS_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True)
        name, secs = out.stdout.split()
        print(f"  {name:<8s} {float(secs):.3f} s")


if __name__ == "__main__":
    main()
