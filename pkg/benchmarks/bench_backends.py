"""Time the numba and numpy chunk evaluators on the Monte Carlo hot loop.

Both backends are run over identical sampled grids; besides wall-clock time
the script re-checks that their estimates agree exactly.

    python3 benchmarks/bench_backends.py --samples 200000
"""

import argparse
import time
from dataclasses import replace

from ftmux.config import Occupancy, Variant, preset
from ftmux.kernels import available_backends, use_backend
from ftmux.montecarlo import McSettings, mc_estimate


def _cases():
    fixed = replace(preset("one-loop-default", m=20, n=4), p=0.1)
    unlimited = replace(preset("one-loop-default", m=6, n=4,
                               variant=Variant.PARTIAL), p=0.1)
    single = replace(unlimited, occupancy=Occupancy.SINGLE)
    return [("fixed m=20 n=4", fixed),
            ("partial-unlimited m=6 n=4", unlimited),
            ("partial-single m=6 n=4", single)]


def _time(cfg, settings, backend, repeats):
    use_backend(backend)
    try:
        mc_estimate(cfg, McSettings(samples=2048, seed=settings.seed))  # warm-up/JIT
        best = float("inf")
        estimate = None
        for _ in range(repeats):
            start = time.perf_counter()
            estimate = mc_estimate(cfg, settings)
            best = min(best, time.perf_counter() - start)
        return best, estimate
    finally:
        use_backend(None)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if "numba" not in available_backends():
        print("numba is not importable; nothing to compare")
        return 1

    settings = McSettings(samples=args.samples, seed=args.seed)
    print(f"samples={args.samples} seed={args.seed} best of {args.repeats}\n")
    header = f"{'case':<28} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}  match"
    print(header)
    print("-" * len(header))
    for name, cfg in _cases():
        t_nb, est_nb = _time(cfg, settings, "numba", args.repeats)
        t_np, est_np = _time(cfg, settings, "numpy", args.repeats)
        match = "yes" if est_nb == est_np else "NO"
        print(f"{name:<28} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x  {match}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
