"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from wngdf import _backend, linalg, noise
from wngdf.beamformer import BeamformerSpec
from wngdf.geometry import ArrayGeometry, FrequencyGrid
from wngdf.metrics import evaluate


def cases(k, geom, grid):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((512, 30, 30)) + 1j * rng.standard_normal((512, 30, 30))
    A = A @ A.conj().transpose(0, 2, 1) + 30 * np.eye(30)
    b = rng.standard_normal((512, 30)) + 0j
    load = np.zeros(512)
    x, w = np.polynomial.legendre.leggauss(200)
    theta = np.pi / 2 * (x + 1)
    phase = rng.uniform(0, 3, 512)
    args = (phase, np.cos(theta), 0.5 * w * np.sin(theta), 30)
    return {
        "lu_solve_batch 512x30x30": lambda: k.lu_solve_batch(A, b, load, linalg.PIVOT_RTOL),
        "segment_lags 512x200x30": lambda: k.segment_lags(*args),
        "evaluate RSD(0.5)": lambda: evaluate(BeamformerSpec("RSD", 0.5), geom, grid),
        "evaluate TUN(1.0)": lambda: evaluate(BeamformerSpec("TUN", 1.0), geom, grid),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    geom, grid = ArrayGeometry(30, 0.02), FrequencyGrid()
    names = ["python"]
    try:
        _backend.load("compiled")
        names.append("compiled")
    except ImportError:
        print("compiled extension not built; fallback only")
    timings = {}
    for name in names:
        k = _backend.load(name)
        linalg.kernels = noise.kernels = k
        for label, fn in cases(k, geom, grid).items():
            timings.setdefault(label, {})[name] = min(timeit.repeat(fn, number=1, repeat=opts.repeat))
    print(f"{'case':<28}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, t in timings.items():
        row = f"{label:<28}" + "".join(f"{t[n] * 1e3:>10.1f}ms" for n in names)
        if len(names) == 2:
            row += f"{t['python'] / t['compiled']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
