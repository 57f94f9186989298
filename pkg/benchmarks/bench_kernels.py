"""Compare the numba and numpy versions of the hot kernels.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run once per backend before timing so numba compilation is
excluded. Prints the best wall time per backend, the speedup, and the largest
difference between the two outputs (absolute for values below one,
relative above).
"""
import argparse
import time

import numpy as np

from relqfi import _kernels
from relqfi.model import ModelParams
from relqfi.wavepacket import _radial_weight, momentum_cutoff
from relqfi.numerics import composite_gauss_legendre_rule


def _cases():
    rng = np.random.default_rng(1)
    x_erfc = rng.uniform(-6.0, 6.0, 200_000)
    x_j1 = rng.uniform(0.0, 500.0, 200_000)

    params = ModelParams(1.0, 1.0)
    p, w = composite_gauss_legendre_rule(0.0, momentum_cutoff(params), 40)
    profile = (w * _radial_weight(p, params)).astype(complex)
    n_ang = 160
    angles = 2.0 * np.pi * np.arange(n_ang) / n_ang
    r = np.linspace(0.05, 4.0, 64)
    x1 = r * np.cos(0.3)
    x2 = r * np.sin(0.3)

    return {
        "erfc (2e5 points)": lambda k, out: k["erfc"](x_erfc, False, out),
        "erfcx (2e5 points)": lambda k, out: k["erfc"](x_erfc, True, out),
        "j1 (2e5 points)": lambda k, out: k["j1"](x_j1, out),
        "polar_fourier (64 points)": lambda k, out: k["polar_fourier"](
            p, profile, angles, 2.0 * np.pi / n_ang, x1, x2, out),
    }, {"erfc (2e5 points)": (x_erfc.size, float), "erfcx (2e5 points)": (x_erfc.size, float),
        "j1 (2e5 points)": (x_j1.size, float), "polar_fourier (64 points)": (r.size, complex)}


def bench(repeat):
    cases, shapes = _cases()
    backends = [b for b in ("numba", "numpy") if b in _kernels.IMPLEMENTATIONS]
    print(f"{'kernel':28s} " + " ".join(f"{b + ' [ms]':>12s}" for b in backends) + f" {'speedup':>9s} {'max diff':>12s}")
    for name, run in cases.items():
        n, dtype = shapes[name]
        times = {}
        outs = {}
        for b in backends:
            kern = _kernels.IMPLEMENTATIONS[b]
            out = np.empty(n, dtype=dtype)
            run(kern, out)  # warm-up / compile
            best = np.inf
            for _ in range(repeat):
                t0 = time.perf_counter()
                run(kern, out)
                best = min(best, time.perf_counter() - t0)
            times[b] = best
            outs[b] = out.copy()
        cols = " ".join(f"{1e3 * times[b]:12.3f}" for b in backends)
        if len(backends) == 2:
            speed = times["numpy"] / times["numba"]
            a, b = outs["numba"], outs["numpy"]
            diff = float(np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)))
            print(f"{name:28s} {cols} {speed:9.2f} {diff:12.2e}")
        else:
            print(f"{name:28s} {cols}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench(args.repeat)


if __name__ == "__main__":
    main()
