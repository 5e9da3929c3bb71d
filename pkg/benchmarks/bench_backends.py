"""Compare the compiled and pure-Python kernels on the worst-case families.

    python3 benchmarks/bench_backends.py [--sizes 500,1000,2000] [--repeats 3]

Prints CSV ``family,size,checker,compiled_ms,python_ms,speedup``.
"""

import argparse
import csv
import sys

from cstream import bench, kernels


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="500,1000,2000")
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    if "compiled" not in kernels.BACKENDS:
        sys.exit("the compiled kernels are not built; run: python3 setup.py build_ext --inplace")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("family", "size", "checker", "compiled_ms", "python_ms", "speedup"))
    for family in bench.FAMILIES:
        fast = bench.run(family, sizes, backend="compiled", repeats=args.repeats)
        slow = bench.run(family, sizes, backend="python", repeats=args.repeats)
        for f, s in zip(fast, slow):
            for col, checker in ((2, "naive"), (3, "optimized")):
                w.writerow((family, f[1], checker, f"{f[col]:.4f}", f"{s[col]:.4f}",
                            f"{s[col] / f[col]:.1f}"))


if __name__ == "__main__":
    main()
