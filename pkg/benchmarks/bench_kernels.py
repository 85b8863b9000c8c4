"""Compare the compiled and pure-NumPy kernels on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeats 5]

Workloads:
  * full protocol at N=1000 (999 cycles of the joint recurrence)
  * the minimum-matching-size scan at alpha=0.25
  * a 10000-step constant-temperature cost recurrence
"""

import argparse
import time

import numpy as np

from spinerase import ReservoirSpec, initial_reservoir
from spinerase._kernels import _pykernels
from spinerase.core import log_binomials
from spinerase.finite import _first_equilibration_table

try:
    from spinerase._kernels import _cykernels
except ImportError:
    _cykernels = None


def protocol_workload(kernels):
    spec = ReservoirSpec(1000, 0.46)
    lchoose = log_binomials(spec.size_n)
    table = _first_equilibration_table(initial_reservoir(spec), 0.5, lchoose)
    kernels.run_cycles(table, 0, spec.max_cycles, lchoose)
    return table[:, 1].sum()


def matching_scan_workload(kernels):
    # mirrors the inner loop of the minimum-size search
    alpha = 0.25
    gamma = np.log((1 - alpha) / alpha)
    total = 0.0
    for n_size in range(2, 140):
        spec = ReservoirSpec(n_size, alpha)
        lchoose = log_binomials(n_size)
        table = _first_equilibration_table(initial_reservoir(spec), 0.5, lchoose)
        p0 = table[:, 1].sum()
        p_up, _, _, _ = kernels.run_cycles(table, 0, n_size - 1, lchoose)
        p_seq = np.concatenate(([p0], p_up[:-1]))
        fin = kernels.bernoulli_chain(p_seq)
        m = np.arange(n_size - 1)
        x = np.exp(-(m + 1) * gamma)
        inf = kernels.bernoulli_chain(np.ascontiguousarray(x / (1 + x)))
        total += fin[0] + inf[0]
    return total


def long_chain_workload(kernels):
    gamma = np.log(4)
    m = np.arange(10000)
    x = np.exp(-(m + 1) * gamma)
    probs = kernels.bernoulli_chain(np.ascontiguousarray(x / (1 + x)))
    return probs[0]


WORKLOADS = [
    ("protocol N=1000", protocol_workload),
    ("matching scan alpha=0.25", matching_scan_workload),
    ("cost chain m=10000", long_chain_workload),
]


def best_time(func, kernels, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        func(kernels)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = [("python", _pykernels)]
    if _cykernels is not None:
        backends.append(("compiled", _cykernels))
    else:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'workload':<28} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")
    for label, func in WORKLOADS:
        times = [best_time(func, kernels, args.repeats) for _, kernels in backends]
        cells = " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        speedup = f"{times[0] / times[-1]:6.1f}x" if len(times) == 2 else "     -"
        print(f"{label:<28} {cells}  {speedup}")

    # both backends must agree on the numbers they produce
    if _cykernels is not None:
        for label, func in WORKLOADS:
            a, b = func(_pykernels), func(_cykernels)
            assert abs(a - b) < 1e-12, (label, a, b)
        print("backend agreement verified on all workloads")


if __name__ == "__main__":
    main()
