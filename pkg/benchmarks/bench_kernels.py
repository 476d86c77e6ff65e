"""Time the compiled enumeration kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Both backends are checked
for identical output before timing.
"""

import argparse
import random
import timeit

from tvar import _kernels_py

try:
    from tvar import _kernels as compiled
except ImportError:
    compiled = None


def cases(seed):
    rng = random.Random(seed)
    A = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(5)]
    b = [rng.randint(-20, 0) for _ in A]
    W = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(2)]
    vals = [[rng.randint(0, 6) for _ in range(3)] for _ in range(120)]
    return {
        "box_points": lambda k: k.box_points(A, b, [-12] * 3, [12] * 3),
        "weight_fibers": lambda k: k.weight_fibers(W, 10),
        "reducible_mask": lambda k: list(k.reducible_mask(vals)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    if compiled is None:
        print("compiled kernels not built; run `python3 setup.py build_ext --inplace`")
    print(f"{'kernel':<16}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, call in cases(args.seed).items():
        py = min(timeit.repeat(lambda: call(_kernels_py), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:<16}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        assert call(compiled) == call(_kernels_py), name
        c = min(timeit.repeat(lambda: call(compiled), number=1, repeat=args.repeat))
        print(f"{name:<16}{py:>12.4f}{c:>12.4f}{py / c:>9.1f}x")


if __name__ == "__main__":
    main()
