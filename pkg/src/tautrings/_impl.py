"""Kernel selection: compiled extension when available, pure Python otherwise.

TAUTRINGS_PURE=1 forces the pure twin (used by tests and the benchmark to
compare the two implementations).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("TAUTRINGS_PURE"):
    impl = _kernel_py
else:
    try:
        from . import _speedups as impl  # type: ignore[attr-defined]
    except ImportError:
        impl = _kernel_py

BACKEND = impl.BACKEND

Echelon = impl.Echelon
row_reduce = impl.row_reduce
vec_axpy = impl.vec_axpy
merge_monomials = impl.merge_monomials
class_mul = impl.class_mul
push_point = impl.push_point
