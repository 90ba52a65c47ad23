"""Exact reduced row echelon bases of operator spans.

Coordinates are ordered lexicographically on the pair (out multi-index, in
multi-index), first leg most significant.  Rows are kept as primitive integer
vectors (rational operators are cleared of denominators first; scaling does
not change a span), so elimination never leaves the integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .operators import OperatorError, SparseOperator


def _lex_perm(legs: int) -> list[int]:
    return list(reversed(range(legs)))


def lex_vector(T: SparseOperator) -> tuple[np.ndarray, np.ndarray]:
    """Integer (key, value) arrays of ``T`` sorted by the echelon coordinate order."""
    legs = T.in_legs + T.out_legs
    vals = T.values
    if vals.dtype != np.int64:
        fr = [Fraction(v) for v in vals.tolist()]
        d = lcm(*(f.denominator for f in fr)) if fr else 1
        vals = kernels.pack(T.codes, [int(f * d) for f in fr])[1]
    if legs <= 1:
        return np.array(T.codes, dtype=np.int64), vals
    return kernels.permute(T.codes, vals, T.dim, _lex_perm(legs))


class HomSpaceBasis:
    """Echelonized basis of a subspace of Hom((C^N)^k, (C^N)^l).

    Each element is reduced: its pivot (first nonzero coordinate) occurs in no
    other element.  The basis depends only on the insertion order.
    """

    def __init__(self, in_legs: int, out_legs: int, dim: int):
        self.in_legs, self.out_legs, self.dim = in_legs, out_legs, dim
        self._rows: list[tuple[np.ndarray, np.ndarray]] = []

    @property
    def signature(self) -> tuple[int, int, int]:
        return self.in_legs, self.out_legs, self.dim

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _check(self, T: SparseOperator):
        if (T.in_legs, T.out_legs, T.dim) != self.signature:
            raise OperatorError(f"{T!r} does not live in the space {self.signature}")

    def reduce(self, T: SparseOperator) -> tuple[np.ndarray, np.ndarray]:
        self._check(T)
        keys, vals = lex_vector(T)
        if not len(keys):
            return keys, vals
        return kernels.reduce_vector(keys, vals, self._rows)

    def contains(self, T: SparseOperator) -> bool:
        return len(self.reduce(T)[0]) == 0

    def insert(self, T: SparseOperator) -> bool:
        """Add ``T`` if it is independent; returns whether the rank grew."""
        keys, vals = self.reduce(T)
        if not len(keys):
            return False
        self._add_row(keys, vals)
        return True

    def _add_row(self, keys, vals):
        pivot = keys[0]
        for i, (rk, rv) in enumerate(self._rows):
            j = np.searchsorted(rk, pivot)
            if j < len(rk) and rk[j] == pivot:
                self._rows[i] = kernels.reduce_vector(rk, rv, [(keys, vals)])
        self._rows.append((keys, vals))

    def pivots(self) -> list[int]:
        return [int(rk[0]) for rk, _ in self._rows]

    def rows(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(self._rows)

    def operators(self) -> list[SparseOperator]:
        legs = self.in_legs + self.out_legs
        out = []
        for rk, rv in self._rows:
            codes, vals = (rk, rv) if legs <= 1 else kernels.permute(rk, rv, self.dim, _lex_perm(legs))
            out.append(SparseOperator._raw(self.dim, self.in_legs, self.out_legs, codes, vals))
        return out

    def copy(self) -> HomSpaceBasis:
        b = HomSpaceBasis(self.in_legs, self.out_legs, self.dim)
        b._rows = list(self._rows)
        return b

    @classmethod
    def from_rows(cls, in_legs: int, out_legs: int, dim: int, rows: Sequence[tuple[np.ndarray, np.ndarray]]) -> HomSpaceBasis:
        b = cls(in_legs, out_legs, dim)
        b._rows = [(np.asarray(k, dtype=np.int64), v) for k, v in rows]
        return b


def basis_of(ops: Iterable[SparseOperator]) -> HomSpaceBasis | None:
    basis = None
    for T in ops:
        if basis is None:
            basis = HomSpaceBasis(T.in_legs, T.out_legs, T.dim)
        basis.insert(T)
    return basis


def span_dimension(ops: Iterable[SparseOperator]) -> int:
    basis = basis_of(ops)
    return 0 if basis is None else basis.rank


def membership(T: SparseOperator, basis: HomSpaceBasis | Iterable[SparseOperator]) -> bool:
    if not isinstance(basis, HomSpaceBasis):
        ops = list(basis)
        if not ops:
            return T.is_zero()
        basis = basis_of(ops)
    return basis.contains(T)
