"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Prints one row per kernel with the best-of-repeat wall time for each
backend and the speedup.  Each workload is first checked for agreement
between backends so the timings compare like with like.
"""

import argparse
import math
import sys
import timeit

import numpy as np

from gravab import _kernels
from gravab.clock import ClockTransition
from gravab.missions import get_preset
from gravab.phase import modulation_index
from gravab.spectrum import _miller_start, default_n_max


def workloads(quick):
    galileo = get_preset("galileo").elements
    alpha = modulation_index(ClockTransition(1.42e9), galileo)
    rng = np.random.default_rng(0)
    n_kep = 20_000 if quick else 200_000
    m = rng.uniform(0.0, 2 * math.pi, n_kep)
    n_fft = 1 << (14 if quick else 18)
    x = np.exp(1j * rng.uniform(0.0, 2 * math.pi, n_fft))
    n_dft = 1024 if quick else 4096
    xd = x[:n_dft].copy()
    nmax = default_n_max(alpha)
    n_steps = 100_000 if quick else 1_000_000
    h = galileo.period / n_steps
    el = galileo
    return [
        (f"kepler_solve ({n_kep} anomalies, e=0.7)", "kepler_solve", (m, 0.7)),
        (f"bessel_jn_orders (n<={nmax}, x={alpha:.1f})", "bessel_jn_orders",
         (nmax, alpha, _miller_start(nmax, alpha))),
        (f"fft_radix2 (N={n_fft})", "fft_radix2", (x,)),
        (f"dft_direct (N={n_dft})", "dft_direct", (xd,)),
        (f"midpoint sum, exact orbit ({n_steps} steps)", "potential_midpoint_sum",
         (0.0, h, n_steps, el.mu, el.r0, el.e, el.period, True)),
        (f"midpoint sum, paper orbit ({n_steps} steps)", "potential_midpoint_sum",
         (0.0, h, n_steps, el.mu, el.r0, el.e, el.period, False)),
    ]


def _agree(a, b):
    return np.allclose(a, b, rtol=1e-12, atol=1e-9)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args(argv)

    backends = _kernels.backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the fallback is available", file=sys.stderr)
    names = sorted(backends, key=lambda k: k != "cython")
    header = f"{'kernel':<48}" + "".join(f"{n + ' [ms]':>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, fn_name, fn_args in workloads(args.quick):
        fns = {n: getattr(backends[n], fn_name) for n in names}
        outs = {n: fns[n](*fn_args) for n in names}
        if len(names) == 2 and not _agree(outs[names[0]], outs[names[1]]):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        times = {n: min(timeit.repeat(lambda f=fns[n]: f(*fn_args), number=1, repeat=args.repeat))
                 for n in names}
        row = f"{label:<48}" + "".join(f"{1e3 * times[n]:>14.3f}" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
