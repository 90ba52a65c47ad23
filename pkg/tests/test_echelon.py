from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from partcat import partition as pc
from partcat.echelon import HomSpaceBasis, basis_of, membership, span_dimension
from partcat.operators import OperatorError, SparseOperator, realize

import oracles


def _vec(entries, legs=2, N=2):
    return SparseOperator.from_entries(N, 0, legs, {(o, ()): v for o, v in entries.items()})


def test_insert_and_reduce():
    b = HomSpaceBasis(0, 2, 2)
    assert b.insert(_vec({(0, 0): 1, (1, 1): 1}))
    assert b.insert(_vec({(0, 1): 1}))
    assert not b.insert(_vec({(0, 0): 3, (1, 1): 3, (0, 1): Fraction(1, 2)}))
    assert b.rank == len(b) == 2
    assert not b.contains(_vec({(1, 0): 1}))


def test_zero_is_member():
    b = HomSpaceBasis(0, 2, 2)
    assert b.contains(SparseOperator.zero(2, 0, 2))
    assert not b.insert(SparseOperator.zero(2, 0, 2))


def test_signature_checked():
    b = HomSpaceBasis(0, 2, 2)
    with pytest.raises((OperatorError, ValueError)):
        b.insert(SparseOperator.identity(2))


def test_rows_are_reduced():
    b = basis_of(realize(p, 3) for p in pc.enumerate_nc_partitions(0, 3))
    piv = b.pivots()
    assert len(set(piv)) == len(piv) == 5
    # every pivot appears in exactly one row
    for key in piv:
        assert sum(key in rk.tolist() for rk, _ in b.rows()) == 1


def test_copy_is_independent():
    b = HomSpaceBasis(0, 2, 2)
    b.insert(_vec({(0, 0): 1}))
    c = b.copy()
    c.insert(_vec({(1, 1): 1}))
    assert b.rank == 1 and c.rank == 2


@pytest.mark.parametrize("k", range(1, 5))
@pytest.mark.parametrize("N", [2, 3, 4])
def test_nc_pairing_ranks(k, N):
    ops = [realize(p, N) for p in pc.enumerate_nc_pairings(0, 2 * k)]
    assert span_dimension(ops) == oracles.catalan(k)


def test_ranks_degenerate_at_small_n():
    # at N=1 every diagram realizes to the same scalar vector
    assert span_dimension(realize(p, 1) for p in pc.enumerate_nc_pairings(0, 6)) == 1
    # NCPart_2(0,4) is not independent: 14 diagrams in a 16-dim space
    ops = [realize(p, 2) for p in pc.enumerate_nc_partitions(0, 4)]
    assert span_dimension(ops) == oracles.rank([{o: 1 for (o, _), _v in T.entries().items()} for T in ops])


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(14)))
def test_rank_order_independent(order):
    ops = [realize(p, 2) for p in pc.enumerate_nc_partitions(0, 4)]
    assert span_dimension([ops[i] for i in order]) == span_dimension(ops)


def test_membership_examples():
    I = SparseOperator.identity(3)
    assert membership(I, [I])
    assert membership(I.scale(5), basis_of([I]))
    assert not membership(realize(pc.crosspart(), 2), [realize(p, 2) for p in pc.enumerate_nc_pairings(2, 2)])
