"""Pure-Python reference kernels.

Exact for arbitrary Python ints and Fractions.  Inputs and outputs follow the
compiled module: sorted int64 code arrays with parallel value arrays.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

INT64_MAX = 2**63 - 1


def pack(codes: Sequence[int], values: Sequence) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray(codes, dtype=np.int64)
    if all(type(v) is int and -INT64_MAX <= v <= INT64_MAX for v in values):
        v = np.asarray(values, dtype=np.int64) if len(values) else np.zeros(0, dtype=np.int64)
    else:
        v = np.empty(len(values), dtype=object)
        v[:] = list(values)
    return c, v


def _from_dict(acc: dict) -> tuple[np.ndarray, np.ndarray]:
    items = sorted((c, v) for c, v in acc.items() if v != 0)
    return pack([c for c, _ in items], [_normal(v) for _, v in items])


def _normal(v):
    # Fractions with denominator 1 become ints so they stay on the fast path
    if not isinstance(v, int) and getattr(v, "denominator", None) == 1:
        return int(v.numerator)
    return v


def realize_codes(labels: Sequence[int], nblocks: int, N: int) -> np.ndarray:
    legs = len(labels)
    codes = []
    values = [0] * nblocks
    weights = [N**leg for leg in range(legs)]
    for idx in range(N**nblocks):
        x = idx
        for b in range(nblocks):
            x, values[b] = divmod(x, N)
        codes.append(sum(values[labels[leg]] * weights[leg] for leg in range(legs)))
    codes.sort()
    return np.asarray(codes, dtype=np.int64)


def outer(ca, va, cb, vb, shift: int):
    ca, va, cb, vb = ca.tolist(), va.tolist(), cb.tolist(), vb.tolist()
    codes, vals = [], []
    for b, y in zip(cb, vb):
        for a, x in zip(ca, va):
            codes.append(a + shift * b)
            vals.append(_normal(x * y))
    return pack(codes, vals)


def permute(codes, vals, N: int, perm: Sequence[int]):
    legs = len(perm)
    acc = {}
    for code, v in zip(codes.tolist(), vals.tolist()):
        digits = []
        for _ in range(legs):
            code, d = divmod(code, N)
            digits.append(d)
        new = 0
        for j in reversed(range(legs)):
            new = new * N + digits[perm[j]]
        acc[new] = v
    return _from_dict(acc)


def apply_local(codes, vals, N: int, pos: int, w_in: int, local_in, local_out, local_vals, w_out: int):
    table: dict[int, list] = {}
    for i, o, v in zip(local_in.tolist(), local_out.tolist(), local_vals.tolist()):
        table.setdefault(i, []).append((o, v))
    low, mid_size, out_size = N**pos, N**w_in, N**w_out
    acc: dict[int, object] = {}
    for code, v in zip(codes.tolist(), vals.tolist()):
        rest, lo = divmod(code, low)
        hi, mid = divmod(rest, mid_size)
        for o, lv in table.get(mid, ()):
            key = lo + low * (o + out_size * hi)
            acc[key] = acc.get(key, 0) + v * lv
    return _from_dict(acc)


def matmul(ac, av, bc, bv, N: int, l: int, m: int, k: int):
    """(A: m -> l) composed after (B: k -> m); codes are out + N**rows * in."""
    out_a, mid_b = N**l, N**m
    rows: dict[int, list] = {}
    for code, v in zip(ac.tolist(), av.tolist()):
        mid, out = divmod(code, out_a)
        rows.setdefault(mid, []).append((out, v))
    acc: dict[int, object] = {}
    for code, v in zip(bc.tolist(), bv.tolist()):
        inn, mid = divmod(code, mid_b)
        for out, w in rows.get(mid, ()):
            key = out + out_a * inn
            acc[key] = acc.get(key, 0) + w * v
    return _from_dict(acc)


def _primitive(vec: dict) -> dict:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
    first = vec[min(vec)]
    if first < 0:
        g = -g
    if g not in (1, 0):
        vec = {c: v // g for c, v in vec.items()}
    return vec


def reduce_vector(keys, vals, rows: Sequence[tuple[np.ndarray, np.ndarray]]):
    """Reduce an integer vector against reduced-echelon integer rows; result is primitive."""
    vec = dict(zip(keys.tolist(), vals.tolist()))
    for rk, rv in rows:
        pivot = int(rk[0])
        b = vec.get(pivot, 0)
        if not b:
            continue
        a = int(rv[0])
        vec = {c: a * v for c, v in vec.items()}
        for c, w in zip(rk.tolist(), rv.tolist()):
            nv = vec.get(c, 0) - b * w
            if nv:
                vec[c] = nv
            else:
                vec.pop(c, None)
        if not vec:
            break
        vec = _primitive(vec)
    if not vec:
        return pack([], [])
    vec = _primitive(vec)
    items = sorted(vec.items())
    return pack([c for c, _ in items], [v for _, v in items])
