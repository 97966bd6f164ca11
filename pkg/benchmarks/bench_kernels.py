"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both kernels are run on identical inputs; the maximum absolute deviation
between backends is printed next to the timings.
"""
import argparse
import timeit

import numpy as np

from sqdiscord import _pykernels
from sqdiscord.discord import GRID_PHI, GRID_THETA, correlation_tensor
from sqdiscord.qstate import haar_amplitudes, partial_trace, random_pure_haar

try:
    from sqdiscord import _ckernels
except ImportError:
    _ckernels = None


def _measurement_inputs():
    rho = random_pure_haar(3, seed=11).density_matrix()
    T = correlation_tensor(partial_trace(rho, [0, 1]).entries)
    tt, pp = np.meshgrid(GRID_THETA, GRID_PHI, indexing="ij")
    return T, np.ascontiguousarray(tt.ravel()), np.ascontiguousarray(pp.ravel())


def bench(fn, make_out, repeat):
    out = make_out()
    best = min(timeit.repeat(lambda: fn(out), number=1, repeat=repeat))
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--states", type=int, default=200_000)
    args = ap.parse_args()

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the numpy fallback only")

    T, theta, phi = _measurement_inputs()
    amps = np.ascontiguousarray(haar_amplitudes(3, args.states, seed=5))

    cases = {
        f"measured_entropy_batch ({theta.size} angles)":
            (lambda k: (lambda out: k.measured_entropy_batch(T, theta, phi, out)),
             lambda: np.empty(theta.size)),
        f"pure3_constituents ({args.states} states)":
            (lambda k: (lambda out: k.pure3_constituents(amps, out)),
             lambda: np.empty((args.states, 6))),
    }
    print(f"{'kernel':48s} {'backend':8s} {'best [ms]':>10s} {'speedup':>8s} {'max dev':>9s}")
    for name, (wrap, make_out) in cases.items():
        results = {b: bench(wrap(k), make_out, args.repeat) for b, k in backends.items()}
        ref_t, ref_out = results["python"]
        for b, (t, out) in results.items():
            dev = float(np.max(np.abs(out - ref_out)))
            print(f"{name:48s} {b:8s} {t * 1e3:10.3f} {ref_t / t:8.1f} {dev:9.1e}")


if __name__ == "__main__":
    main()
