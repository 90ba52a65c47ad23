from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from partcat import operators as op
from partcat import partition as pc
from partcat.echelon import membership, span_dimension
from partcat.operators import OperatorError, SparseOperator
from partcat.partition import SetPartition

import oracles

P_DRAWN = SetPartition(3, 4, ((1, 2, 3, 5, 6), (4,), (7,)))


def _dict(T):
    return {(o, i): Fraction(v) for (o, i), v in T.entries().items()}


def test_encode_decode():
    for idx in [(0, 1, 2), (2, 2, 0), ()]:
        assert op.decode(op.encode(idx, 3), 3, len(idx)) == idx


def test_realize_pairpart():
    T = op.realize(pc.pairpart(), 3)
    assert T.signature == (0, 2) and T.nnz == 3
    assert _dict(T) == {((i, i), ()): 1 for i in range(3)}


def test_realize_identity(backend):
    assert op.realize(pc.identity(1), 4) == SparseOperator.identity(4)
    assert np.array_equal(op.realize(pc.identity(1), 3).to_dense(), np.eye(3))


def test_realize_drawn_partition():
    # entries are 1 exactly when j1 = j2 = j3 = i2 = i3, with i1, i4 free
    N = 2
    T = op.realize(P_DRAWN, N)
    expected = {}
    for j in range(N):
        for i1 in range(N):
            for i4 in range(N):
                expected[(i1, j, j, i4), (j, j, j)] = 1
    assert _dict(T) == expected
    assert T.nnz == N ** len(P_DRAWN.blocks)


@pytest.mark.parametrize("k, l", [(0, 4), (1, 3), (2, 2), (2, 3), (1, 1)])
def test_realize_matches_brute_force(k, l, backend):
    for N in (2, 3):
        for p in pc.enumerate_nc_partitions(k, l):
            assert _dict(op.realize(p, N)) == oracles.dense_realization(p.blocks, k, l, N)


def test_twisted_cross_entries():
    T = op.realize_twisted_cross(2)
    assert T.entry((0, 0), (0, 0)) == 1
    assert T.entry((0, 1), (1, 0)) == -1
    assert T.entry((0, 1), (0, 1)) == 0
    assert ((0, 1), (0, 1)) not in T.entries()
    assert op.realize_twisted_pair(3) == op.realize(pc.pairpart(), 3)


def test_duality_from_matrix():
    assert op.duality_from_matrix([[1, 0], [0, 1]]) == op.realize(pc.pairpart(), 2)
    R = op.duality_from_matrix([[1, 0], [0, 2]])
    assert _dict(R) == {((0, 0), ()): 1, ((1, 1), ()): 2}
    with pytest.raises(OperatorError):
        op.duality_from_matrix([[1, 2], [2, 4]])


def test_conjugate_equations():
    ident = op.check_conjugate_equations(op.duality_from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert ident and ident.multiple == 1
    sym = op.check_conjugate_equations(op.duality_from_matrix([[0, 1], [-1, 0]]))
    assert sym and sym.multiple == -1
    # diag(1, 2): the snake is diag(1, 4), not a multiple of the identity
    assert not op.check_conjugate_equations(op.duality_from_matrix([[1, 0], [0, 2]]))
    degenerate = SparseOperator.from_entries(2, 0, 2, {((0, 0), ()): 1})
    assert not op.check_conjugate_equations(degenerate)


def test_compose_example_with_loop():
    cup, cap = op.realize(pc.pairpart(), 3), op.realize(pc.uppairpart(), 3)
    assert op.compose_ops(cap, cup) == SparseOperator.scalar(3, 3)


def _small(max_points):
    return {(k, t - k): pc.enumerate_nc_partitions(k, t - k) for t in range(max_points + 1) for k in range(t + 1)}


@pytest.mark.parametrize("N", [2, 3])
def test_homomorphism_small(N, backend):
    fam = _small(4)
    for (a, b), ps in fam.items():
        for (b2, c), qs in fam.items():
            if b != b2:
                continue
            for p in ps[:8]:
                for q in qs[:8]:
                    r, loops = pc.compose(q, p)
                    got = op.compose_ops(op.realize(q, N), op.realize(p, N))
                    assert got == op.realize(r, N).scale(N**loops)
                    dense = oracles.dense_compose(oracles.dense_realization(q.blocks, b, c, N),
                                                  oracles.dense_realization(p.blocks, a, b, N))
                    assert _dict(got) == dense


def test_tensor_and_adjoint(backend):
    ps = pc.enumerate_nc_partitions(1, 2)
    for p in ps:
        assert op.adjoint_op(op.realize(p, 2)) == op.realize(pc.involute(p), 2)
        for q in ps[:3]:
            assert op.tensor_ops(op.realize(p, 2), op.realize(q, 2)) == op.realize(pc.tensor(p, q), 2)


def test_dense_kronecker_order():
    a = SparseOperator.from_entries(2, 1, 1, {((0,), (1,)): 1})
    b = SparseOperator.from_entries(2, 1, 1, {((1,), (1,)): 2})
    assert np.array_equal(op.tensor_ops(a, b).to_dense(), np.kron(a.to_dense(), b.to_dense()))


def test_arithmetic():
    I = SparseOperator.identity(2)
    assert (I - I).is_zero()
    assert (I + I) == I.scale(2)
    assert (I @ I) == I
    with pytest.raises(OperatorError):
        I + op.realize(pc.pairpart(), 2)


def test_inner_products_and_gram():
    assert op.inner_product(op.realize(pc.pairpart(), 5), op.realize(pc.pairpart(), 5)) == 5
    pairs = pc.enumerate_nc_pairings(0, 4)
    assert op.gram_matrix(pairs, 2, method="entrywise") == [[4, 2], [2, 4]]
    with pytest.raises(ValueError):
        op.gram_matrix(pairs, 2, method="bogus")


@pytest.mark.parametrize("N", [2, 3])
def test_gram_join_equals_entrywise(N):
    parts = pc.enumerate_nc_partitions(0, 4)
    assert op.gram_matrix(parts, N, "join") == op.gram_matrix(parts, N, "entrywise")


def test_span_examples():
    assert span_dimension(op.realize(p, 2) for p in pc.enumerate_nc_pairings(0, 4)) == 2
    assert span_dimension(op.realize(p, 4) for p in pc.enumerate_nc_partitions(0, 3)) == 5
    assert membership(SparseOperator.identity(3), [SparseOperator.identity(3)])


def test_span_independent_of_order():
    ops = [op.realize(p, 2) for p in pc.enumerate_pairings(0, 6)]
    dims = {span_dimension(ops[i:] + ops[:i]) for i in range(0, len(ops), 3)}
    dims.add(span_dimension(reversed(ops)))
    assert dims == {10}
    vectors = [_dict(T) for T in ops]
    assert oracles.rank(vectors) == 10


def test_text_roundtrip():
    T = op.realize_twisted_cross(3).scale(Fraction(2, 7))
    assert op.read_operator(op.write_operator(T)) == T
    assert op.operator_from_json(op.operator_to_json(T)) == T


@pytest.mark.parametrize("text", ["", "2 1 1 2\n0 0 1 1\n", "2 1 1 1\n0 0 1\n", "x y\n"])
def test_read_operator_errors(text):
    with pytest.raises(OperatorError):
        op.read_operator(text)


def test_nested_duality_is_nested_pairing():
    R = op.realize(pc.pairpart(), 2)
    assert op.nested_duality(R) == op.realize(SetPartition(0, 4, ((1, 4), (2, 3))), 2)


def test_vector_roundtrip():
    R = op.realize(pc.pairpart(), 2)
    for p in pc.enumerate_nc_partitions(2, 2):
        T = op.realize(p, 2)
        V = op.to_vector(T, R)
        assert V.signature == (0, 4)
        assert op.from_vector(V, R, 1, 2) == T


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("N", [2, 3])
def test_rotation_matches_partition_rotation(m, N):
    R = op.realize(pc.pairpart(), N)
    for p in pc.enumerate_nc_partitions(0, m):
        assert op.rotate_object(op.realize(p, N), R) == op.realize(pc.cyclic_rotate(p), N)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.data())
def test_reflect_is_involutive(m, data):
    p = data.draw(st.sampled_from(pc.enumerate_nc_partitions(0, m)))
    R = op.realize(pc.pairpart(), 2)
    V = op.realize(p, 2)
    assert op.reflect(op.reflect(V, R), R) == V
