"""Compare the compiled term-arithmetic kernel against the pure-Python one.

Times the raw kernel (terms_mul), polynomial powering, GCD, and the full
curvature pipeline on the bundled quintic system, once per backend. The
pipeline spends nearly all of its time in term arithmetic, so the kernel
choice shows up directly in the end-to-end number.

Usage: python3 benchmarks/bench_backends.py [--repeat N] [--size N]
"""

import argparse
import random
import time
from fractions import Fraction
from pathlib import Path

from gbtcycles import backend
from gbtcycles.algebra import Polynomial, poly_gcd
from gbtcycles.riemann import curvature_pipeline
from gbtcycles.sysdsl import parse_system_path

SYSTEMS = Path(__file__).resolve().parent.parent / "src" / "gbtcycles" / "systems"


def random_poly(rng, nvars, nterms, max_exp, coef_bound):
    terms = {}
    while len(terms) < nterms:
        exp = tuple(rng.randrange(max_exp + 1) for _ in range(nvars))
        c = rng.randrange(-coef_bound, coef_bound) or 1
        terms[exp] = Fraction(c, rng.randrange(1, 40))
    names = tuple(f"x{i}" for i in range(nvars))
    return Polynomial(names, terms)


def timed(label, func, repeat):
    # warm up once so one-time setup does not pollute the timing
    func()
    best = min(_one(func) for _ in range(repeat))
    print(f"    {label:<26} {best * 1e3:9.2f} ms")
    return best


def _one(func):
    t0 = time.perf_counter()
    func()
    return time.perf_counter() - t0


def bench_backend(name, repeat, size):
    backend.set_backend(name)
    rng = random.Random(20240817)
    a = random_poly(rng, 2, size, 9, 50)
    b = random_poly(rng, 2, size, 9, 50)
    base = random_poly(rng, 2, 8, 3, 10)
    common = random_poly(rng, 2, 5, 3, 10)
    left = a * common
    right = b * common
    vf = parse_system_path(SYSTEMS / "ex02.sys")

    print(f"  backend: {name}")
    out = {}
    out["terms_mul"] = timed(
        "terms_mul (raw kernel)",
        lambda: backend.terms_mul(a.terms, b.terms), repeat)
    out["pow"] = timed("poly ** 6", lambda: base ** 6, repeat)
    out["gcd"] = timed("poly_gcd", lambda: poly_gcd(left, right), repeat)
    out["pipeline"] = timed(
        "curvature pipeline (ex02)", lambda: curvature_pipeline(vf), repeat)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    parser.add_argument("--size", type=int, default=60,
                        help="number of terms in the random operands")
    args = parser.parse_args(argv)

    names = backend.available_backends()
    if "cython" not in names:
        print("note: compiled kernel not built; timing pure python only")
    results = {}
    for name in names:
        results[name] = bench_backend(name, args.repeat, args.size)

    if "cython" in results and "python" in results:
        print("  speedup (python / cython):")
        for key, py_time in results["python"].items():
            ratio = py_time / results["cython"][key]
            print(f"    {key:<26} {ratio:9.2f}x")
    backend.set_backend("cython" if "cython" in names else "python")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
