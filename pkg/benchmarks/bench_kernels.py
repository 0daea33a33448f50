"""Compare the compiled and pure-Python kernels.

Run with ``python benchmarks/bench_kernels.py``. Times are the best of
several repeats; the compiled column reads ``n/a`` when the extension was
not built.
"""
import argparse
import importlib
import timeit

import numpy as np

from bandcert import _pykernels
from bandcert.limit_spectra import SpectralFunctionConfig, spectral_terms


def _backends():
    out = {"python": _pykernels}
    try:
        out["compiled"] = importlib.import_module("bandcert._kernels")
    except ImportError:
        pass
    return out


def _cases(truncation: int):
    weights, poles, tail = spectral_terms(SpectralFunctionConfig(1, 0.3, truncation))
    xs = np.linspace(0.5, 60.0, 400)

    def bessel(mod):
        for n in range(4):
            for x in xs:
                mod.bessel_j(n, float(x))

    def zeros(mod):
        # bracketed refinement around the first twenty J_0 zeros
        for k in range(1, 21):
            guess = (k - 0.25) * np.pi
            mod.refine_zero(0, guess - 0.5, guess + 0.5, guess, 1e-14)

    def secular(mod):
        for j in range(5):
            lo, hi = poles[j] * (1 + 1e-9), poles[j + 1] * (1 - 1e-9)
            mod.spectral_bisect(lo, hi, weights, poles, 1, tail, 1e-14)

    return {"bessel_j (1600 evals)": bessel, "zero refinement (20)": zeros,
            "secular roots (5)": secular}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--truncation", type=int, default=200)
    args = ap.parse_args(argv)

    backends = _backends()
    print(f"{'case':<26}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name, fn in _cases(args.truncation).items():
        times = {}
        for label, mod in backends.items():
            times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) * 1e3
        comp = times.get("compiled")
        comp_s = f"{comp:16.3f}" if comp is not None else f"{'n/a':>16}"
        speed = f"{times['python'] / comp:9.1f}x" if comp else f"{'':>10}"
        print(f"{name:<26}{times['python']:14.3f}{comp_s}{speed}")


if __name__ == "__main__":
    main()
