"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py            # default sizes
    python benchmarks/bench_kernels.py --scale 3  # bigger runs

Every workload is run on both backends and the outputs are compared, so the
benchmark doubles as an equivalence check.
"""

import argparse
import statistics
import sys
import time

from sternct import kernels
from sternct.holonomic import derive_rec_u, derive_rec_v
from sternct.transfer import choose_split, psi_init


def _time(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def workloads(scale):
    rec_u = derive_rec_u()
    rec_v = derive_rec_v()
    K = 2000 * scale

    def u_run(j):
        coeffs = rec_u.specialize(j)
        window = [(0, 0)] * (rec_u.order - 1) + [(1, 1)]
        start = -j
        return lambda be: kernels.rec_run(coeffs, window, start, K, [K - 4, K], backend=be)

    def v_run(be):
        window = [(0, 0)] * (rec_v.order - 1) + [(-1, 1)]
        return kernels.rec_run(rec_v.specialize(0), window, 0, 4 * K, [4 * K], backend=be)

    N = 600 * scale
    m, n = choose_split(N)
    state = psi_init(n)

    def transfer(be):
        return kernels.transfer_steps(state, m, 0, backend=be)

    return [
        (f"rec_run u j=0 to k={K}", u_run(0)),
        (f"rec_run u j=-{K // 4} to k={K}", u_run(-(K // 4))),
        (f"rec_run v to k={4 * K}", v_run),
        (f"transfer_steps N={N}", transfer),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--scale", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the Python backend will run")
    print(f"{'workload':<32}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    ok = True
    for name, fn in workloads(args.scale):
        results, times = {}, {}
        for be in backends:
            results[be], times[be] = _time(lambda: fn(be), args.repeat)
        same = len({repr(r) for r in results.values()}) == 1
        ok &= same
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{name:<32}" + "".join(f"{times[b]:>11.3f}s" for b in backends)
              + f"  {speed:>8.1f}x" + ("" if same else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
