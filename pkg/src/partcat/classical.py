"""Point-level checks against the classical orthogonal group.

Sampling uses numpy's PCG64 generator: a Gaussian matrix is QR-factorized and
the columns of Q are multiplied by the signs of diag(R), which gives the Haar
measure on O(n).  Everything here is floating point with explicit tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import partition as pc
from .operators import SparseOperator, compose_ops, realize, tensor_all


def random_orthogonal(n: int, seed: int | np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def sample_orthogonal(n: int, samples: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [random_orthogonal(n, rng) for _ in range(samples)]


def projective_matrix(A: np.ndarray) -> np.ndarray:
    """B[i, k, j, l] = A[i, j] * A[k, l], i.e. v^{ik}_{jl} = u^i_j u^k_l."""
    return np.einsum("ij,kl->ikjl", A, A)


@dataclass(frozen=True)
class RelationCheck:
    symmetry: float
    trace: float
    product: float
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.symmetry, self.trace, self.product) <= self.tol

    def __bool__(self):
        return self.ok


def po_relation_residuals(A: np.ndarray, tol: float = 1e-9) -> RelationCheck:
    """Largest violation of each relation family satisfied by B = A (x) A.

    B^{ik}_{jl} = B^{ki}_{lj};  sum_k B^{ij}_{kk} = delta_ij;
    sum_k B^{ai}_{bk} B^{jc}_{kd} = delta_ij B^{ac}_{bd}.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    B = projective_matrix(A)
    sym = np.abs(B - B.transpose(1, 0, 3, 2)).max()
    trace = np.abs(np.einsum("ijkk->ij", B) - np.eye(n)).max()
    lhs = np.einsum("aibk,jckd->aijcbd", B, B)
    rhs = np.einsum("ij,acbd->aijcbd", np.eye(n), B)
    return RelationCheck(float(sym), float(trace), float(np.abs(lhs - rhs).max()), tol)


def po_relation_check(A: np.ndarray, tol: float = 1e-9) -> bool:
    A = np.asarray(A, dtype=float)
    if np.abs(A @ A.T - np.eye(A.shape[0])).max() > tol:
        raise ValueError("matrix is not orthogonal to the requested tolerance")
    return po_relation_residuals(A, tol).ok


def kron_power(A: np.ndarray, legs: int) -> np.ndarray:
    out = np.ones((1, 1))
    for _ in range(legs):
        out = np.kron(out, A)
    return out


def intertwiner_residual(T: SparseOperator, A: np.ndarray) -> float:
    """max |T A^(x)k - A^(x)l T| for a (k, l) operator."""
    D = T.to_dense()
    return float(np.abs(D @ kron_power(A, T.in_legs) - kron_power(A, T.out_legs) @ D).max(initial=0.0))


def is_intertwiner(T: SparseOperator, A: np.ndarray, tol: float = 1e-9) -> bool:
    return intertwiner_residual(T, A) <= tol


def permutation_matrix(perm) -> np.ndarray:
    n = len(perm)
    P = np.zeros((n, n))
    P[list(perm), list(range(n))] = 1.0
    return P


# -- the four-leg crossing identity --------------------------------------------------

def icrosspart_factorization(N: int) -> tuple[SparseOperator, SparseOperator]:
    """(id^3 (x) pair* (x) id)(id^2 (x) cross (x) id^2)(id (x) pair (x) id^3) and id (x) cross (x) id."""
    I = realize(pc.identity(1), N)
    pair, cap = realize(pc.pairpart(), N), realize(pc.uppairpart(), N)
    cross = realize(pc.crosspart(), N)
    top = tensor_all([I, pair, I, I, I], N)
    mid = tensor_all([I, I, cross, I, I], N)
    bottom = tensor_all([I, I, I, cap, I], N)
    lhs = compose_ops(bottom, compose_ops(mid, top))
    rhs = tensor_all([I, cross, I], N)
    return lhs, rhs


def icrosspart_identity_holds(N: int) -> bool:
    lhs, rhs = icrosspart_factorization(N)
    return lhs == rhs
