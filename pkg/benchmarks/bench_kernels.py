"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Part one times the kernel functions directly on the same inputs.  Part two
runs a Gröbner basis computation and a principalization end to end in two
subprocesses, one with ``RES_KERNEL_PURE=1``.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from res_kernel import _kernels_py as py

try:
    from res_kernel import _kernels as compiled
except ImportError:
    compiled = None

GREVLEX3 = ((1, 1, 1), (0, 0, -1), (0, -1, 0))

END_TO_END = r"""
import time
from res_kernel import kernels
from res_kernel.ideal import Ideal, groebner_basis, LEX
from res_kernel.driver import principalize
from res_kernel.poly import parse_polynomial
V = ("x", "y", "z")
I = Ideal([parse_polynomial(g, V) for g in ("x^3 - 2*x*y + z", "x^2*y - 2*y^2 + x", "x*z^2 - y^3")], V)
t = time.perf_counter(); groebner_basis(I, LEX); gb = time.perf_counter() - t
J = Ideal([parse_polynomial(g, V) for g in ("y^5 - x^2", "z")], V)
t = time.perf_counter(); principalize(J); pr = time.perf_counter() - t
print(kernels.IMPLEMENTATION, gb, pr)
"""


def random_poly(rng, terms, degree=6):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, degree) for _ in range(3))
        out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4))
    return out


def bench_functions(repeat: int):
    rng = random.Random(1)
    p, q = random_poly(rng, 40), random_poly(rng, 40)
    basis = [random_poly(rng, 4, 3) for _ in range(4)]
    leads = [py.leading_exp(g, GREVLEX3) for g in basis]
    cases = {
        "poly_mul 40x40": lambda m: m.poly_mul(p, q),
        "poly_add": lambda m: m.poly_add(p, q),
        "normal_form": lambda m: m.normal_form(p, basis, leads, GREVLEX3),
        "leading_exp": lambda m: m.leading_exp(p, GREVLEX3),
    }
    print(f"{'kernel':<18}{'python (ms)':>14}{'compiled (ms)':>16}{'speed-up':>10}")
    for name, fn in cases.items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat)) * 1e3
        if compiled is None:
            print(f"{name:<18}{tp:>14.3f}{'n/a':>16}{'':>10}")
            continue
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=repeat)) * 1e3
        print(f"{name:<18}{tp:>14.3f}{tc:>16.3f}{tp / tc:>9.2f}x")


def bench_end_to_end():
    print()
    print(f"{'selection':<12}{'groebner lex (s)':>18}{'principalize (s)':>18}")
    for pure in ("1", "0"):
        env = dict(os.environ, RES_KERNEL_PURE=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        impl, gb, pr = out.stdout.split()
        print(f"{impl:<12}{float(gb):>18.3f}{float(pr):>18.3f}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)
    bench_functions(args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
