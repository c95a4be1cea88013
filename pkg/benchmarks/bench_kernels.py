"""Compare the compiled and pure-Python Bernoulli counting kernels.

    python benchmarks/bench_kernels.py [--trials 2000000] [--repeat 3]

Both backends must return identical counts; the script exits non-zero if
they do not.
"""
import argparse
import sys
import time
from fractions import Fraction

from bornrule import _kernels_py
from bornrule.rng import bernoulli_threshold

try:
    from bornrule import _kernels_c
except ImportError:
    _kernels_c = None


def best_of(repeat, fn, *args):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--trials", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("cython", _kernels_c))
    else:
        print("compiled kernels not built; timing the fallback only")

    t = bernoulli_threshold(Fraction(3, 4))
    block = 500
    thresholds = [t] * (args.trials // block)
    cases = [
        ("count_below", lambda k: k.count_below(args.seed, 0, args.trials, t)),
        (f"batch_counts (N={block})",
         lambda k: list(k.batch_counts(args.seed, 0, block, thresholds))),
    ]

    ok = True
    print(f"{'kernel':<24}{'backend':<10}{'seconds':>10}{'Mtrials/s':>12}{'speedup':>10}")
    for name, call in cases:
        results, base = {}, None
        for label, mod in backends:
            secs, results[label] = best_of(args.repeat, call, mod)
            base = base or secs
            rate = args.trials / secs / 1e6
            print(f"{name:<24}{label:<10}{secs:>10.4f}{rate:>12.2f}{base / secs:>9.1f}x")
        if len({repr(r) for r in results.values()}) != 1:
            print(f"  MISMATCH in {name}")
            ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
