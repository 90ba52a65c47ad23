import pytest
from hypothesis import given, settings, strategies as st

from partcat import fattening as ft
from partcat import partition as pc
from partcat.partition import PartitionError, SetPartition
from partcat.scalars import HalfPowerScalar


def test_fatten_singleton_and_pair():
    s = ft.fatten(pc.singleton())
    assert s.pairing == SetPartition(0, 2, ((1, 2),))
    assert s.scalar == HalfPowerScalar.power(1)
    idf = ft.fatten(pc.identity(1))
    assert idf.pairing == pc.identity(2)
    assert idf.scalar == HalfPowerScalar.power(0)


def test_fatten_drawn_example():
    p = pc.parse("4|3 : [1,4,5,7][2,3][6]")
    f = ft.fatten(p)
    assert pc.serialize(f.pairing) == "8|6 : [1,9][2,7][3,6][4,5][8,14][10,13][11,12]"
    assert f.scalar == HalfPowerScalar.power(-1)


def test_fatten_rejects_crossing():
    with pytest.raises(PartitionError):
        ft.fatten(SetPartition(0, 4, ((1, 3), (2, 4))))


def test_unfatten_rejects_non_image():
    with pytest.raises(PartitionError):
        ft.unfatten(SetPartition(0, 3, ((1, 2), (3,))))
    with pytest.raises(PartitionError):
        ft.unfatten(SetPartition(0, 4, ((1, 3), (2, 4))))


@pytest.mark.parametrize("total", range(0, 9))
def test_roundtrip_bijection(total):
    for k in range(total + 1):
        parts = pc.enumerate_nc_partitions(k, total - k)
        images = {ft.fatten(p).pairing for p in parts}
        assert images == set(pc.enumerate_nc_pairings(2 * k, 2 * (total - k)))
        for p in parts:
            assert ft.unfatten(ft.fatten(p).pairing) == p


def test_contraction_cases_examples():
    assert ft.contraction_case(SetPartition(0, 2, ((1, 2),)), 1) == 1
    assert ft.contraction_case(SetPartition(0, 2, ((1,), (2,))), 1) == 2
    assert ft.contraction_case(SetPartition(0, 3, ((1, 2, 3),)), 1) == 3
    assert ft.contraction_case(SetPartition(0, 3, ((1,), (2, 3))), 1) == 4


@pytest.mark.parametrize("case, shift", [(1, 0), (2, 2), (3, -2), (4, 0)])
def test_contraction_weight_shift(case, shift):
    # half-exponent change when contracting two neighbours, measured on all width-4 rows
    seen = False
    for p in pc.enumerate_nc_partitions(0, 4):
        for pos in range(1, 4):
            if ft.contraction_case(p, pos) != case:
                continue
            r, loops = ft.contract(p, pos)
            got = ft.half_exponent(p) - ft.half_exponent(r)
            assert got == shift
            check = ft.check_compose(ft.cap(4, pos), p)
            assert check.ok and check.loops == loops
            seen = True
    assert seen


def test_functor_all_composable_small():
    sigs = [(k, t - k) for t in range(4) for k in range(t + 1)]
    fam = {s: pc.enumerate_nc_partitions(*s) for s in sigs}
    for (a, b), ps in fam.items():
        for (b2, c), qs in fam.items():
            if b == b2:
                for p in ps:
                    for q in qs:
                        assert ft.check_compose(q, p)


@st.composite
def nc(draw, max_points=5):
    total = draw(st.integers(0, max_points))
    k = draw(st.integers(0, total))
    return draw(st.sampled_from(pc.enumerate_nc_partitions(k, total - k)))


@settings(max_examples=150, deadline=None)
@given(nc(), nc())
def test_tensor_functorial(p, q):
    assert ft.functor_check_tensor(p, q)


@settings(max_examples=150, deadline=None)
@given(nc())
def test_involution_functorial(p):
    assert ft.functor_check_involution(p)


@pytest.mark.parametrize("n", [2, 3])
def test_gram_preserved(n):
    for k, l in [(0, 2), (1, 1), (0, 3), (1, 2), (2, 2)]:
        assert ft.gram_preservation(pc.enumerate_nc_partitions(k, l), n)


def test_fatten_listed_examples():
    two = ft.fatten(pc.pairpart())
    assert two.pairing == SetPartition(0, 4, ((1, 4), (2, 3)))
    assert two.scalar == HalfPowerScalar.power(0)
    assert ft.unfatten(two.pairing) == pc.pairpart()
    three = ft.fatten(SetPartition(0, 3, ((1, 2, 3),)))
    assert three.pairing == SetPartition(0, 6, ((1, 6), (2, 3), (4, 5)))
    assert three.scalar == HalfPowerScalar.power(-1)


def test_singleton_tensor_scalar():
    s = ft.fatten(pc.tensor(pc.singleton(), pc.singleton()))
    assert s.scalar == HalfPowerScalar.power(2)
