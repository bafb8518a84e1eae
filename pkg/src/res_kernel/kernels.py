"""Kernel selection: compiled core when built, pure Python otherwise.

Set ``RES_KERNEL_PURE=1`` to force the Python fallback.
"""

from __future__ import annotations

import os

if os.environ.get("RES_KERNEL_PURE", "") not in ("", "0"):
    from res_kernel import _kernels_py as _impl
else:
    try:
        from res_kernel import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from res_kernel import _kernels_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
order_key = _impl.order_key
leading_exp = _impl.leading_exp
poly_add = _impl.poly_add
poly_sub = _impl.poly_sub
poly_mul = _impl.poly_mul
sub_mul_term = _impl.sub_mul_term
divides = _impl.divides
normal_form = _impl.normal_form
spoly = _impl.spoly

__all__ = [
    "IMPLEMENTATION",
    "order_key",
    "leading_exp",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "sub_mul_term",
    "divides",
    "normal_form",
    "spoly",
]
