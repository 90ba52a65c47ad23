import pytest
from hypothesis import given, settings, strategies as st

from partcat import partition as pc
from partcat.partition import ParseError, PartitionError, SetPartition

import oracles

# the two drawn examples: p in P(3,4) noncrossing, q in P(4,4) crossing
P_DRAWN = SetPartition(3, 4, ((1, 2, 3, 5, 6), (4,), (7,)))
Q_DRAWN = SetPartition(4, 4, ((1,), (4,), (5,), (3, 6), (2, 7, 8)))
# operands of the drawn composition and tensor examples
B_DRAWN = SetPartition(4, 5, ((1, 5), (2, 3, 4, 6, 7), (8, 9)))
A_DRAWN = SetPartition(5, 3, ((1, 2), (4, 5), (3, 6, 7, 8)))


def test_canonicalize_sorts():
    assert pc.canonicalize([{2, 1}], 0, 2).blocks == ((1, 2),)
    assert pc.canonicalize([{1}, {2, 3}], 1, 2).blocks == ((1,), (2, 3))


@pytest.mark.parametrize("blocks, k, l, bad", [
    ([{1, 2}, {2, 3}], 0, 3, 2),   # point in two blocks
    ([{1}, {3}], 0, 3, 2),         # gap
    ([{1, 4}], 0, 3, 4),           # out of range
])
def test_canonicalize_errors_name_point(blocks, k, l, bad):
    with pytest.raises(PartitionError) as err:
        pc.canonicalize(blocks, k, l)
    assert err.value.point == bad


def test_tensor_examples():
    assert pc.tensor(pc.pairpart(), pc.pairpart()).blocks == ((1, 2), (3, 4))
    t = pc.tensor(pc.identity(1), pc.identity(1))
    assert t.signature == (2, 2) and t.blocks == ((1, 3), (2, 4))


def test_drawn_tensor():
    t = pc.tensor(B_DRAWN, A_DRAWN)
    assert t.signature == (9, 8)
    assert t == SetPartition(9, 8, ((1, 10), (2, 3, 4, 11, 12), (13, 14), (5, 6), (8, 9), (7, 15, 16, 17)))


def test_drawn_composition():
    r, loops = pc.compose(A_DRAWN, B_DRAWN)
    assert loops == 1
    assert r == SetPartition(4, 3, (tuple(range(1, 8)),))


def test_drawn_involution():
    assert pc.involute(B_DRAWN) == SetPartition(5, 4, ((1, 6), (2, 3, 7, 8, 9), (4, 5)))


def test_compose_identity_and_loop():
    for p in pc.enumerate_nc_partitions(2, 3):
        assert pc.compose(pc.identity(3), p) == (p, 0)
        assert pc.compose(p, pc.identity(2)) == (p, 0)
    assert pc.compose(pc.uppairpart(), pc.pairpart()) == (pc.empty(), 1)


def test_compose_signature_mismatch():
    with pytest.raises(PartitionError):
        pc.compose(pc.identity(2), pc.identity(1))


def test_noncrossing_examples():
    assert not pc.is_noncrossing(SetPartition(0, 4, ((1, 3), (2, 4))))
    assert pc.is_noncrossing(P_DRAWN)
    assert not pc.is_noncrossing(Q_DRAWN)


def test_rotation_examples():
    r = pc.rotate(pc.identity(1), "left", "down")
    assert r.signature == (0, 2) and r.blocks == ((1, 2),)
    assert pc.cyclic_rotate(SetPartition(0, 4, ((1, 2), (3, 4)))).blocks == ((1, 4), (2, 3))
    with pytest.raises(PartitionError):
        pc.rotate(pc.pairpart(), "left", "down")


def test_rotations_invert():
    for p in pc.enumerate_nc_partitions(2, 2):
        assert pc.rotate(pc.rotate(p, "left", "down"), "left", "up") == p
        assert pc.rotate(pc.rotate(p, "right", "down"), "right", "up") == p


def test_cyclic_rotation_has_full_order():
    for p in pc.enumerate_nc_partitions(0, 5):
        q = p
        for _ in range(5):
            q = pc.cyclic_rotate(q)
            assert pc.is_noncrossing(q)
        assert q == p


@pytest.mark.parametrize("k", range(1, 9))
def test_pairing_counts_are_catalan(k):
    assert len(pc.enumerate_nc_pairings(0, 2 * k)) == oracles.catalan(k)
    assert len(pc.enumerate_nc_partitions(0, k)) == oracles.catalan(k)


def test_odd_pairings_empty():
    assert pc.enumerate_nc_pairings(0, 3) == []


@pytest.mark.parametrize("k, l", [(0, 4), (1, 3), (2, 2), (3, 3), (2, 4), (0, 6), (4, 2)])
def test_enumeration_matches_brute_force(k, l):
    ours = {frozenset(frozenset(b) for b in p.blocks) for p in pc.enumerate_nc_partitions(k, l)}
    assert ours == set(oracles.nc_partitions(k, l))
    pairs = {frozenset(frozenset(b) for b in p.blocks) for p in pc.enumerate_nc_pairings(k, l)}
    assert pairs == set(oracles.nc_partitions(k, l, pairs=True))


@pytest.mark.parametrize("k, l", [(0, 4), (2, 2), (1, 5), (3, 3)])
def test_noncrossing_matches_brute_force(k, l):
    for bl in oracles.set_partitions(k + l):
        blocks = [tuple(x + 1 for x in b) for b in bl]
        p = SetPartition(k, l, tuple(blocks))
        assert pc.is_noncrossing(p) == oracles.noncrossing(blocks, k, l)


def test_all_pairings_count():
    # (2m - 1)!! pairings
    assert [len(pc.enumerate_pairings(0, 2 * m)) for m in range(1, 5)] == [1, 3, 15, 105]


def test_color_compatibility():
    assert pc.color_compatible(pc.identity(1), ("w", "w"))
    assert not pc.color_compatible(pc.pairpart(), ("", "ww"))
    assert pc.color_compatible(pc.pairpart(), ("", "wb"))
    nested = SetPartition(0, 4, ((1, 4), (2, 3)))
    # outer pair joins w-w on one row: incompatible under the convention
    assert not pc.color_compatible(nested, ("", "wbbw"))
    assert pc.color_compatible(nested, ("", "wbwb"))
    with pytest.raises(PartitionError):
        pc.color_compatible(pc.singleton(), ("", "w"))


def test_colored_involution_inverts_colors():
    p = pc.identity(1).with_colors("w", "w")
    assert pc.involute(p).colors == ("b", "b")


def test_parse_serialize_example():
    p = pc.parse("2|3 : [1,4][2,3][5]")
    assert p == SetPartition(2, 3, ((1, 4), (2, 3), (5,)))
    assert pc.parse(pc.serialize(p)) == p
    c = pc.parse("0|2 : [1,2]; colors=|wb")
    assert c.colors == ("", "wb")
    assert pc.parse(str(c)) == c


@pytest.mark.parametrize("text", ["2|3 [1,2]", "2|3 : [1,2", "0|2 : [1,2] junk", "x|2 : [1,2]", "0|2 : [1,1][2]"])
def test_parse_errors(text):
    with pytest.raises((ParseError, PartitionError)):
        pc.parse(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        pc.parse("0|2 : [1,2] junk")
    assert err.value.position == 12


def test_serialize_roundtrip_and_injective():
    seen = set()
    for total in range(9):
        for k in range(total + 1):
            for p in pc.enumerate_nc_partitions(k, total - k):
                s = pc.serialize(p)
                assert pc.parse(s) == p
                if total <= 6:
                    assert s not in seen
                    seen.add(s)
                assert pc.from_json(pc.to_json(p)) == p


def _sigs(max_points):
    return [(k, t - k) for t in range(max_points + 1) for k in range(t + 1)]


def test_compose_associative_with_loop_additivity():
    fam = {s: pc.enumerate_nc_partitions(*s) for s in _sigs(4)}
    for (a, b), ps in fam.items():
        for (b2, c), qs in fam.items():
            if b2 != b or b + a > 4:
                continue
            for (c2, d), rs in fam.items():
                if c2 != c:
                    continue
                for p in ps[:6]:
                    for q in qs[:6]:
                        for r in rs[:6]:
                            qp, l1 = pc.compose(q, p)
                            left, l2 = pc.compose(r, qp)
                            rq, l3 = pc.compose(r, q)
                            right, l4 = pc.compose(rq, p)
                            assert left == right and l1 + l2 == l3 + l4


def test_involution_reverses_composition():
    for p in pc.enumerate_nc_partitions(2, 2):
        for q in pc.enumerate_nc_partitions(2, 3):
            r, c = pc.compose(q, p)
            r2, c2 = pc.compose(pc.involute(p), pc.involute(q))
            assert r2 == pc.involute(r) and c == c2


def test_tensor_associative():
    ps = pc.enumerate_nc_partitions(1, 2)
    for a in ps:
        for b in ps[:3]:
            for c in ps[:3]:
                assert pc.tensor(pc.tensor(a, b), c) == pc.tensor(a, pc.tensor(b, c))


@st.composite
def nc_partitions(draw, max_points=7):
    total = draw(st.integers(0, max_points))
    k = draw(st.integers(0, total))
    return draw(st.sampled_from(pc.enumerate_nc_partitions(k, total - k)))


@settings(max_examples=200, deadline=None)
@given(nc_partitions(), nc_partitions())
def test_tensor_preserves_noncrossing(p, q):
    t = pc.tensor(p, q)
    assert pc.is_noncrossing(t)
    assert t.size == p.size + q.size


@settings(max_examples=200, deadline=None)
@given(nc_partitions())
def test_involution_is_involutive(p):
    assert pc.involute(pc.involute(p)) == p
    assert pc.is_noncrossing(pc.involute(p))
