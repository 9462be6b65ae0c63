"""Compare the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--N 64 128 256] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from torus_scar import _pykernels

try:
    from torus_scar import _kernels
except ImportError:
    _kernels = None


def bench(mod, N, repeat):
    image = np.asarray(mod.lattice_image(1, 2, 2, 3, N))
    rng = np.random.default_rng(0)
    psi = rng.standard_normal(N * N) + 1j * rng.standard_normal(N * N)
    phases = np.exp(2j * np.pi * rng.random(N * N))
    cases = {
        "lattice_image": lambda: mod.lattice_image(1, 2, 2, 3, N),
        "cycle_decompose": lambda: mod.cycle_decompose(image),
        "apply_monomial": lambda: mod.apply_monomial(phases, image, psi, 1),
    }
    out = {}
    for name, fn in cases.items():
        t = timeit.Timer(fn)
        n, _ = t.autorange()
        out[name] = min(t.repeat(repeat, n)) / n
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':<16} {'N':>4} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for N in args.N:
        py = bench(_pykernels, N, args.repeat)
        cy = bench(_kernels, N, args.repeat) if _kernels else {}
        for name, tp in py.items():
            tc = cy.get(name)
            extra = f"{tc * 1e3:12.3f} {tp / tc:8.1f}" if tc else f"{'-':>12} {'-':>8}"
            print(f"{name:<16} {N:>4} {tp * 1e3:12.3f} {extra}")


if __name__ == "__main__":
    main()
