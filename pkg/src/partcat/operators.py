"""Exact sparse linear maps (C^N)^(x)k -> (C^N)^(x)l and the realization of diagrams.

Layout: an entry is addressed by ``code = out_code + N**l * in_code`` where a
row multi-index ``(i_1, ..., i_r)`` is encoded little-endian,
``i_1 + N*i_2 + ... + N**(r-1)*i_r``.  Equivalently an operator is a vector
whose legs are the out legs followed by the in legs.  Values are exact
rationals: int64 arrays when integral and small, object arrays otherwise.
"""

from __future__ import annotations

import io
import json
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from . import partition as pc
from .partition import SetPartition

MAX_CODE = 2**62


class OperatorError(ValueError):
    pass


def _norm(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def encode(index: Sequence[int], N: int) -> int:
    code = 0
    for d in reversed(index):
        code = code * N + d
    return code


def decode(code: int, N: int, legs: int) -> tuple[int, ...]:
    out = []
    for _ in range(legs):
        code, d = divmod(code, N)
        out.append(d)
    return tuple(out)


class SparseOperator:
    __slots__ = ("dim", "in_legs", "out_legs", "codes", "values")

    def __init__(self, dim: int, in_legs: int, out_legs: int, codes: np.ndarray, values: np.ndarray, check: bool = True):
        if dim < 1:
            raise OperatorError("leg dimension must be at least 1")
        if dim ** (in_legs + out_legs) > MAX_CODE:
            raise OperatorError(f"{dim}^{in_legs + out_legs} coordinates do not fit the int64 index space")
        codes = np.asarray(codes, dtype=np.int64)
        if check:
            if len(codes) != len(values):
                raise OperatorError("codes and values differ in length")
            if len(codes):
                if codes[0] < 0 or codes[-1] >= dim ** (in_legs + out_legs):
                    raise OperatorError("index out of range")
                if np.any(np.diff(codes) <= 0):
                    raise OperatorError("codes must be strictly increasing")
                if any(v == 0 for v in values.tolist()):
                    raise OperatorError("explicit zero entry")
        codes.flags.writeable = False
        values.flags.writeable = False
        self.dim, self.in_legs, self.out_legs = dim, in_legs, out_legs
        self.codes, self.values = codes, values

    # -- construction ----------------------------------------------------

    @classmethod
    def from_entries(cls, dim: int, in_legs: int, out_legs: int, entries: Mapping) -> SparseOperator:
        """``entries`` maps ``(out, in)`` to a rational; indices are tuples or row codes."""
        acc: dict[int, object] = {}
        for (out, inn), value in entries.items():
            o = out if isinstance(out, (int, np.integer)) else encode(out, dim)
            i = inn if isinstance(inn, (int, np.integer)) else encode(inn, dim)
            code = int(o) + dim**out_legs * int(i)
            acc[code] = acc.get(code, 0) + Fraction(value)
        items = sorted((c, _norm(v)) for c, v in acc.items() if v != 0)
        codes, vals = kernels.pack([c for c, _ in items], [v for _, v in items])
        return cls(dim, in_legs, out_legs, codes, vals)

    @classmethod
    def _raw(cls, dim, in_legs, out_legs, codes, vals) -> SparseOperator:
        return cls(dim, in_legs, out_legs, codes, vals, check=False)

    @classmethod
    def zero(cls, dim: int, in_legs: int, out_legs: int) -> SparseOperator:
        return cls._raw(dim, in_legs, out_legs, *kernels.pack([], []))

    @classmethod
    def scalar(cls, dim: int, value=1) -> SparseOperator:
        return cls.from_entries(dim, 0, 0, {((), ()): value})

    @classmethod
    def identity(cls, dim: int, legs: int = 1) -> SparseOperator:
        size = dim**legs
        c = np.arange(size, dtype=np.int64)
        return cls._raw(dim, legs, legs, c + size * c, np.ones(size, dtype=np.int64))

    # -- inspection ------------------------------------------------------

    @property
    def signature(self) -> tuple[int, int]:
        return self.in_legs, self.out_legs

    @property
    def nnz(self) -> int:
        return len(self.codes)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def entries(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
        split = self.dim**self.out_legs
        out = {}
        for code, v in zip(self.codes.tolist(), self.values.tolist()):
            inn, o = divmod(code, split)
            out[decode(o, self.dim, self.out_legs), decode(inn, self.dim, self.in_legs)] = Fraction(v)
        return out

    def entry(self, out: Sequence[int], inn: Sequence[int]) -> Fraction:
        code = encode(out, self.dim) + self.dim**self.out_legs * encode(inn, self.dim)
        i = int(np.searchsorted(self.codes, code))
        if i < self.nnz and self.codes[i] == code:
            return Fraction(self.values[i])
        return Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (
            (self.dim, self.in_legs, self.out_legs) == (other.dim, other.in_legs, other.out_legs)
            and np.array_equal(self.codes, other.codes)
            and self.values.tolist() == other.values.tolist()
        )

    def __hash__(self):
        return hash((self.dim, self.in_legs, self.out_legs, self.codes.tobytes(), tuple(self.values.tolist())))

    def __repr__(self):
        return f"SparseOperator(N={self.dim}, {self.in_legs}->{self.out_legs}, nnz={self.nnz})"

    def is_integral(self) -> bool:
        return self.values.dtype == np.int64 or all(Fraction(v).denominator == 1 for v in self.values.tolist())

    # -- arithmetic ------------------------------------------------------

    def _like(self, other: SparseOperator):
        if (self.dim, self.in_legs, self.out_legs) != (other.dim, other.in_legs, other.out_legs):
            raise OperatorError(f"shape mismatch: {self!r} vs {other!r}")

    def __add__(self, other: SparseOperator) -> SparseOperator:
        self._like(other)
        acc: dict[int, object] = dict(zip(self.codes.tolist(), self.values.tolist()))
        for c, v in zip(other.codes.tolist(), other.values.tolist()):
            acc[c] = acc.get(c, 0) + v
        items = sorted((c, _norm(v)) for c, v in acc.items() if v != 0)
        return SparseOperator._raw(self.dim, self.in_legs, self.out_legs,
                                   *kernels.pack([c for c, _ in items], [v for _, v in items]))

    def __neg__(self) -> SparseOperator:
        return self.scale(-1)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        return self + (-other)

    def scale(self, c) -> SparseOperator:
        c = Fraction(c)
        if c == 0:
            return SparseOperator.zero(self.dim, self.in_legs, self.out_legs)
        if c.denominator == 1 and self.values.dtype == np.int64:
            largest = int(np.abs(self.values).max()) if self.nnz else 0
            if abs(c.numerator) * largest < 2**62:
                return SparseOperator._raw(self.dim, self.in_legs, self.out_legs, self.codes,
                                           self.values * c.numerator)
        vals = [_norm(v * c) for v in self.values.tolist()]
        return SparseOperator._raw(self.dim, self.in_legs, self.out_legs, *kernels.pack(self.codes.tolist(), vals))

    def __matmul__(self, other: SparseOperator) -> SparseOperator:
        return compose_ops(self, other)

    def to_dense(self) -> np.ndarray:
        """Float matrix in Kronecker order (first leg most significant)."""
        N, k, l = self.dim, self.in_legs, self.out_legs
        split = N**l
        out = np.zeros((N**l, N**k))
        if self.nnz:
            rows = _reverse_digits(self.codes % split, N, l)
            cols = _reverse_digits(self.codes // split, N, k)
            out[rows, cols] = [float(v) for v in self.values.tolist()]
        return out


def _reverse_digits(codes: np.ndarray, N: int, legs: int) -> np.ndarray:
    out = np.zeros(len(codes), dtype=np.int64)
    c = codes.copy()
    for _ in range(legs):
        out = out * N + c % N
        c //= N
    return out


# -- category operations ------------------------------------------------------

def compose_ops(S: SparseOperator, T: SparseOperator) -> SparseOperator:
    """``S`` after ``T``."""
    if S.dim != T.dim or S.in_legs != T.out_legs:
        raise OperatorError(f"cannot compose {S!r} after {T!r}")
    codes, vals = kernels.matmul(S.codes, S.values, T.codes, T.values, S.dim, S.out_legs, S.in_legs, T.in_legs)
    return SparseOperator._raw(S.dim, T.in_legs, S.out_legs, codes, vals)


def tensor_ops(S: SparseOperator, T: SparseOperator) -> SparseOperator:
    if S.dim != T.dim:
        raise OperatorError("leg dimensions differ")
    N = S.dim
    ls, ks, lt, kt = S.out_legs, S.in_legs, T.out_legs, T.in_legs
    codes, vals = kernels.outer(S.codes, S.values, T.codes, T.values, N ** (ls + ks))
    if ks and lt:
        # legs are [out S, in S, out T, in T]; reorder to [out S, out T, in S, in T]
        perm = list(range(ls)) + [ls + ks + j for j in range(lt)] + [ls + j for j in range(ks)]
        perm += [ls + ks + lt + j for j in range(kt)]
        codes, vals = kernels.permute(codes, vals, N, perm)
    elif len(codes) > 1:
        order = np.argsort(codes, kind="stable")
        codes, vals = codes[order], vals[order]
    return SparseOperator._raw(N, ks + kt, ls + lt, codes, vals)


def tensor_all(ops: Iterable[SparseOperator], dim: int) -> SparseOperator:
    result = SparseOperator.scalar(dim)
    for op in ops:
        result = tensor_ops(result, op)
    return result


def adjoint_op(T: SparseOperator) -> SparseOperator:
    """Transpose; entries are real so conjugation is the identity."""
    k, l = T.in_legs, T.out_legs
    if k == 0 or l == 0:
        return SparseOperator._raw(T.dim, l, k, T.codes, T.values)
    perm = [l + j for j in range(k)] + list(range(l))
    codes, vals = kernels.permute(T.codes, T.values, T.dim, perm)
    return SparseOperator._raw(T.dim, l, k, codes, vals)


def permute_out_legs(T: SparseOperator, perm: Sequence[int]) -> SparseOperator:
    """New out leg ``j`` is old out leg ``perm[j]``."""
    full = list(perm) + [T.out_legs + j for j in range(T.in_legs)]
    codes, vals = kernels.permute(T.codes, T.values, T.dim, full)
    return SparseOperator._raw(T.dim, T.in_legs, T.out_legs, codes, vals)


def apply_at(T: SparseOperator, position: int, local: SparseOperator) -> SparseOperator:
    """Apply ``local`` to out legs ``position ...`` of ``T``: (id (x) local (x) id) T."""
    if local.dim != T.dim or position + local.in_legs > T.out_legs or position < 0:
        raise OperatorError(f"cannot apply {local!r} at out leg {position} of {T!r}")
    split = T.dim**local.out_legs
    codes, vals = kernels.apply_local(
        T.codes, T.values, T.dim, position, local.in_legs,
        local.codes // split, local.codes % split, local.values, local.out_legs,
    )
    return SparseOperator._raw(T.dim, T.in_legs, T.out_legs - local.in_legs + local.out_legs, codes, vals)


# -- duality and rotations -----------------------------------------------------

def _object_map(duality: SparseOperator, unit: int) -> SparseOperator:
    # D viewed as the map y -> sum_w D[w, y] e_w on one object; same codes as D
    if duality.signature != (0, 2 * unit):
        raise OperatorError(f"duality must be a (0, {2 * unit}) operator")
    return SparseOperator._raw(duality.dim, unit, unit, duality.codes, duality.values)


def _as_vector(T: SparseOperator) -> SparseOperator:
    return SparseOperator._raw(T.dim, 0, T.out_legs + T.in_legs, T.codes, T.values)


def to_vector(T: SparseOperator, duality: SparseOperator, unit: int = 1) -> SparseOperator:
    """Rotate every input object of ``T`` down on the left: C(k, l) -> C(0, k + l)."""
    k, l = T.in_legs, T.out_legs
    if k % unit:
        raise OperatorError("input legs are not a whole number of objects")
    V = _as_vector(T)
    if k == 0:
        return V
    M = _object_map(duality, unit)
    for j in range(k // unit):
        V = apply_at(V, l + j * unit, M)
    objs = k // unit
    perm = [l + (objs - 1 - j) * unit + t for j in range(objs) for t in range(unit)] + list(range(l))
    return permute_out_legs(V, perm)


def from_vector(V: SparseOperator, duality: SparseOperator, unit: int, in_legs: int) -> SparseOperator:
    """Rotate the first ``in_legs`` legs of a (0, m) vector up on the left: C(0, m) -> C(k, m - k)."""
    if V.in_legs:
        raise OperatorError("from_vector expects a (0, m) operator")
    if in_legs % unit or in_legs > V.out_legs:
        raise OperatorError(f"cannot move {in_legs} legs up")
    if in_legs == 0:
        return V
    M = _object_map(duality, unit)
    for j in range(in_legs // unit):
        V = apply_at(V, j * unit, M)
    objs, rest = in_legs // unit, V.out_legs - in_legs
    perm = [in_legs + j for j in range(rest)]
    perm += [(objs - 1 - j) * unit + t for j in range(objs) for t in range(unit)]
    V = permute_out_legs(V, perm)
    return SparseOperator._raw(V.dim, in_legs, rest, V.codes, V.values)


def rotate_object(V: SparseOperator, duality: SparseOperator, unit: int = 1) -> SparseOperator:
    """(id^m (x) D*)(id_u (x) V (x) id_u) D: the last object of a (0, m) vector moves to the front."""
    m = V.out_legs
    if V.in_legs or m % unit or m == 0:
        raise OperatorError("rotate_object expects a non-empty (0, m) vector of whole objects")
    X = tensor_ops(duality, V)  # legs [x, y, V]
    perm = list(range(unit)) + [2 * unit + j for j in range(m)] + [unit + t for t in range(unit)]
    X = permute_out_legs(X, perm)  # legs [x, V, y]
    return apply_at(X, m, adjoint_op(duality))


def contract_objects(V: SparseOperator, index: int, duality: SparseOperator, unit: int = 1) -> SparseOperator:
    """Cap objects ``index`` and ``index + 1`` of a (0, m) vector with the adjoint duality."""
    return apply_at(V, index * unit, adjoint_op(duality))


def reflect(V: SparseOperator, duality: SparseOperator, unit: int = 1) -> SparseOperator:
    """The involution transported to C(0, m): rotate the adjoint back down."""
    return to_vector(adjoint_op(V), duality, unit)


def nested_duality(R: SparseOperator) -> SparseOperator:
    """(id (x) R (x) id) R, the duality of the doubled object."""
    I = SparseOperator.identity(R.dim)
    return compose_ops(tensor_all([I, R, I], R.dim), R)


@dataclass(frozen=True)
class ConjugateCheck:
    ok: bool
    multiple: Fraction | None

    def __bool__(self):
        return self.ok


def check_conjugate_equations(R: SparseOperator) -> ConjugateCheck:
    """Both snakes (id (x) R*)(R (x) id) and (R* (x) id)(id (x) R) must be c * id with c != 0."""
    if R.signature != (0, 2):
        raise OperatorError("a duality morphism is a (0, 2) operator")
    N = R.dim
    I = SparseOperator.identity(N)
    Rs = adjoint_op(R)
    snakes = [
        compose_ops(tensor_ops(I, Rs), tensor_ops(R, I)),
        compose_ops(tensor_ops(Rs, I), tensor_ops(I, R)),
    ]
    multiple = None
    for S in snakes:
        c = S.entry((0,), (0,))
        if c == 0 or S != I.scale(c):
            return ConjugateCheck(False, None)
        if multiple is not None and c != multiple:
            return ConjugateCheck(False, None)
        multiple = c
    return ConjugateCheck(True, multiple)


# -- realizations ---------------------------------------------------------------

@lru_cache(maxsize=4096)
def realize(p: SetPartition, N: int) -> SparseOperator:
    """Kronecker-delta operator of ``p``: entry 1 iff legs in each block carry equal indices."""
    if N < 1:
        raise OperatorError("dimension must be at least 1")
    k, l = p.upper, p.lower
    labels = p.block_labels()
    leg_labels = [labels[k + j] for j in range(l)] + [labels[i] for i in range(k)]
    codes = kernels.realize_codes(leg_labels, len(p.blocks), N)
    return SparseOperator._raw(N, k, l, codes, np.ones(len(codes), dtype=np.int64))


def realize_twisted_cross(N: int) -> SparseOperator:
    """[T]^{ij}_{kl} = -d_il d_jk + 2 d_ijkl."""
    entries = {}
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    v = -(i == l and j == k) + 2 * (i == j == k == l)
                    if v:
                        entries[(i, j), (k, l)] = v
    return SparseOperator.from_entries(N, 2, 2, entries)


def realize_twisted_pair(N: int) -> SparseOperator:
    return realize(pc.pairpart(), N)


def _determinant(rows: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def duality_from_matrix(F: Sequence[Sequence]) -> SparseOperator:
    """R with R^{ij} = F_i^j (row i, column j of ``F``)."""
    rows = [[Fraction(x) for x in row] for row in F]
    N = len(rows)
    if N == 0 or any(len(r) != N for r in rows):
        raise OperatorError("F must be a non-empty square matrix")
    if _determinant(rows) == 0:
        raise OperatorError("F is singular")
    return SparseOperator.from_entries(
        N, 0, 2, {((i, j), ()): rows[i][j] for i in range(N) for j in range(N) if rows[i][j]}
    )


# -- inner products -------------------------------------------------------------

def inner_product(S: SparseOperator, T: SparseOperator) -> Fraction:
    S._like(T)
    _, ia, ib = np.intersect1d(S.codes, T.codes, assume_unique=True, return_indices=True)
    total = sum(map(operator.mul, S.values[ia].tolist(), T.values[ib].tolist()), 0)
    return Fraction(total)


def gram_matrix(partitions: Sequence[SetPartition], N: int, method: str = "join") -> list[list[Fraction]]:
    """Gram matrix <T_p, T_q> at dimension ``N``.

    ``join`` uses N ** blocks(p v q); ``entrywise`` realizes both operators
    and sums products of entries.
    """
    parts = list(partitions)
    if method == "join":
        return [[Fraction(N) ** pc.join(p, q) for q in parts] for p in parts]
    if method == "entrywise":
        ops = [realize(p, N) for p in parts]
        return [[inner_product(a, b) for b in ops] for a in ops]
    raise ValueError(f"unknown Gram method {method!r}")


# -- file formats ----------------------------------------------------------------

def write_operator(T: SparseOperator) -> str:
    """Header ``N k l nnz`` then ``out_code in_code numerator denominator`` per entry."""
    buf = io.StringIO()
    buf.write(f"{T.dim} {T.in_legs} {T.out_legs} {T.nnz}\n")
    split = T.dim**T.out_legs
    for code, v in zip(T.codes.tolist(), T.values.tolist()):
        v = Fraction(v)
        inn, out = divmod(code, split)
        buf.write(f"{out} {inn} {v.numerator} {v.denominator}\n")
    return buf.getvalue()


def read_operator(text: str) -> SparseOperator:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise OperatorError("empty operator file")
    try:
        N, k, l, nnz = map(int, lines[0].split())
    except ValueError as exc:
        raise OperatorError(f"bad header {lines[0]!r}") from exc
    if len(lines) - 1 != nnz:
        raise OperatorError(f"header announces {nnz} entries, found {len(lines) - 1}")
    entries = {}
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 4:
            raise OperatorError(f"line {lineno}: expected 4 fields")
        out, inn, num, den = map(int, parts)
        if (out, inn) in entries:
            raise OperatorError(f"line {lineno}: duplicate entry")
        entries[out, inn] = Fraction(num, den)
    return SparseOperator.from_entries(N, k, l, entries)


def operator_to_json(T: SparseOperator) -> dict:
    return {"format": "partcat-sparse-1", "data": write_operator(T)}


def operator_from_json(data: dict | str) -> SparseOperator:
    if isinstance(data, str):
        data = json.loads(data)
    return read_operator(data["data"])
