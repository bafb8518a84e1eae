import importlib
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from res_kernel import _kernels_py as py
from res_kernel import kernels

try:
    from res_kernel import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

N = 3
WEIGHTS = [
    ((1, 1, 1), (0, 0, -1), (0, -1, 0)),  # grevlex
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),  # lex
]
exps = st.tuples(*(st.integers(0, 3) for _ in range(N)))
coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool)
polys = st.dictionaries(exps, coeffs, max_size=6)
nonzero = st.dictionaries(exps, coeffs, min_size=1, max_size=4)


def test_implementation_reported():
    assert kernels.IMPLEMENTATION in ("cython", "python")
    if compiled is not None:
        assert kernels.IMPLEMENTATION == "cython"


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, RES_KERNEL_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from res_kernel import kernels; print(kernels.IMPLEMENTATION)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_python_kernels_basic():
    p = {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(1)}
    q = {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(-1)}
    assert py.poly_mul(p, q) == {(2, 0, 0): 1, (0, 2, 0): -1}
    assert py.poly_add(p, q) == {(1, 0, 0): 2}
    assert py.poly_sub(p, p) == {}
    assert py.divides((1, 0, 0), (1, 2, 0)) and not py.divides((2, 0, 0), (1, 2, 0))


@needs_compiled
@given(polys, polys)
def test_arithmetic_agrees(p, q):
    assert compiled.poly_add(p, q) == py.poly_add(p, q)
    assert compiled.poly_sub(p, q) == py.poly_sub(p, q)
    assert compiled.poly_mul(p, q) == py.poly_mul(p, q)


@needs_compiled
@given(polys, polys, coeffs, exps)
def test_sub_mul_term_agrees(p, q, c, shift):
    assert compiled.sub_mul_term(p, q, c, shift) == py.sub_mul_term(p, q, c, shift)


@needs_compiled
@given(nonzero, st.sampled_from(WEIGHTS))
def test_leading_exponent_agrees(p, W):
    assert compiled.leading_exp(p, W) == py.leading_exp(p, W)
    e = next(iter(p))
    assert compiled.order_key(e, W) == py.order_key(e, W)


@needs_compiled
@given(polys, st.lists(nonzero, min_size=1, max_size=3), st.sampled_from(WEIGHTS))
def test_normal_form_and_spoly_agree(p, basis, W):
    leads = [py.leading_exp(g, W) for g in basis]
    assert compiled.normal_form(p, basis, leads, W) == py.normal_form(p, basis, leads, W)
    if len(basis) > 1:
        f, g = basis[0], basis[1]
        assert compiled.spoly(f, g, leads[0], leads[1]) == py.spoly(f, g, leads[0], leads[1])


def test_kernels_module_reloads_with_fallback(monkeypatch):
    monkeypatch.setenv("RES_KERNEL_PURE", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.IMPLEMENTATION == "python"
        assert mod.poly_mul is py.poly_mul
    finally:
        monkeypatch.delenv("RES_KERNEL_PURE")
        importlib.reload(kernels)
