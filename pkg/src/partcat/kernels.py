"""Kernel dispatch.

The compiled module is used when it imports and ``PARTCAT_KERNELS`` is not
``python``.  It only handles int64 data; rational data, or an overflow inside
the compiled path, goes to the exact pure-Python kernels.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

from . import _pykernels as _py

try:
    from . import _ckernels as _c
except ImportError:  # no compiler at install time
    _c = None

AVAILABLE = ("cython", "python") if _c is not None else ("python",)
_backend = "python" if _c is None or os.environ.get("PARTCAT_KERNELS") == "python" else "cython"

pack = _py.pack


def backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    global _backend
    if name not in AVAILABLE:
        raise ValueError(f"kernel backend {name!r} is not available (have {AVAILABLE})")
    previous, _backend = _backend, name
    return previous


@contextmanager
def using(name: str):
    previous = set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def _fast(*value_arrays) -> bool:
    return _backend == "cython" and all(v.dtype == np.int64 for v in value_arrays)


def realize_codes(labels, nblocks: int, N: int) -> np.ndarray:
    if _backend == "cython":
        return _c.realize_codes(np.asarray(labels, dtype=np.int64), nblocks, N)
    return _py.realize_codes(labels, nblocks, N)


def outer(ca, va, cb, vb, shift: int):
    if _fast(va, vb):
        try:
            return _c.outer(ca, va, cb, vb, shift)
        except OverflowError:
            pass
    return _py.outer(ca, va, cb, vb, shift)


def permute(codes, vals, N: int, perm):
    if _backend == "cython":
        # permute an index array so values of any dtype follow their codes
        new, order = _c.permute(codes, np.arange(len(codes), dtype=np.int64), N, perm)
        return new, vals[order]
    return _py.permute(codes, vals, N, perm)


def apply_local(codes, vals, N: int, pos: int, w_in: int, local_in, local_out, local_vals, w_out: int):
    if _fast(vals, local_vals):
        try:
            return _c.apply_local(codes, vals, N, pos, w_in, local_in, local_out, local_vals, w_out)
        except OverflowError:
            pass
    return _py.apply_local(codes, vals, N, pos, w_in, local_in, local_out, local_vals, w_out)


def matmul(ac, av, bc, bv, N: int, l: int, m: int, k: int):
    if _fast(av, bv):
        try:
            return _c.matmul(ac, av, bc, bv, N, l, m, k)
        except OverflowError:
            pass
    return _py.matmul(ac, av, bc, bv, N, l, m, k)


def reduce_vector(keys, vals, rows):
    if _fast(vals, *(rv for _, rv in rows)):
        try:
            return _c.reduce_vector(keys, vals, rows)
        except OverflowError:
            pass
    return _py.reduce_vector(keys, vals, rows)
