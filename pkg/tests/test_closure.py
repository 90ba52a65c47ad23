import pytest

from partcat import closure as cl
from partcat import partition as pc
from partcat.echelon import span_dimension
from partcat.operators import OperatorError, SparseOperator, duality_from_matrix, realize
from partcat.partition import SetPartition

import oracles


def _plain(n, gens=()):
    return cl.GeneratorSet(n, "plain", realize(pc.pairpart(), n), tuple(gens))


def test_generator_set_validation():
    with pytest.raises(cl.ClosureError):
        cl.GeneratorSet(2, "weird", realize(pc.pairpart(), 2))
    with pytest.raises(cl.ClosureError):
        cl.GeneratorSet(2, "plain", duality_from_matrix([[1, 0], [0, 2]]))
    with pytest.raises(cl.ClosureError):
        cl.GeneratorSet(2, "projective", realize(pc.pairpart(), 2), (realize(pc.fork(), 2),))


def test_empty_generators_small_bound():
    res = cl.close(_plain(2), 2)
    assert res.saturated and res.dim(1, 1) == 1 and res.dim(0, 0) == 1


@pytest.mark.parametrize("n", [2, 3])
def test_plain_o_plus_matches_nc_pairings(n):
    res = cl.close(_plain(n, [realize(pc.pairpart(), n)]), 8 if n == 2 else 6)
    assert res.saturated
    for (k, l), d in res.dims().items():
        expected = oracles.catalan((k + l) // 2) if (k + l) % 2 == 0 else 0
        assert d == expected


def test_dims_monotone_in_rounds():
    res = cl.close(_plain(2, [realize(pc.pairpart(), 2)]), 6)
    for before, after in zip(res.history, res.history[1:]):
        assert all(after[m] >= before[m] for m in before)


def test_contains_generators_and_adjoint():
    res = cl.close(_plain(2, [realize(pc.fork(), 2)]), 6)
    assert res.contains(realize(pc.fork(), 2))
    assert res.contains(realize(pc.involute(pc.fork()), 2))
    assert res.contains(realize(pc.identity(2), 2))


def test_max_rounds_gives_unsaturated():
    res = cl.close(_plain(2, [realize(pc.pairpart(), 2)]), 8, max_rounds=1)
    assert not res.saturated and res.rounds == 1


def test_closure_errors():
    with pytest.raises(cl.ClosureError):
        cl.close(_plain(2), 0)
    res = cl.close(_plain(2), 4)
    with pytest.raises(cl.ClosureError):
        res.dim(3, 3)


def test_half_rotate_nested_pairing():
    R = realize(pc.pairpart(), 2)
    nested = SetPartition(0, 4, ((1, 4), (2, 3)))
    assert cl.half_rotate(realize(nested, 2), R) == realize(pc.cyclic_rotate(nested), 2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_half_rotate_full_turn(m):
    R = realize(pc.pairpart(), 2)
    for p in pc.enumerate_nc_partitions(0, 2 * m):
        T = realize(p, 2)
        X = T
        for _ in range(2 * m):
            X = cl.half_rotate(X, R)
        assert X == T


def test_half_rotate_errors():
    R = realize(pc.pairpart(), 2)
    with pytest.raises(OperatorError):
        cl.half_rotate(SparseOperator.scalar(2), R)
    with pytest.raises(OperatorError):
        cl.half_rotate(realize(pc.fork(), 2), R)
    with pytest.raises(OperatorError):
        cl.half_rotate(realize(SetPartition(0, 3, ((1, 2, 3),)), 2), R)


@pytest.mark.parametrize("n, max_legs", [(2, 8), (3, 6)])
def test_theorem_t_o_plus(n, max_legs):
    rep = cl.verify_theorem_T(n, "o-plus", max_legs)
    assert rep.saturated and not rep.mismatches and not rep.failed_checks
    assert rep.status == "pass"
    assert rep.dims["0,0"] == 1


def test_theorem_t_s_plus():
    rep = cl.verify_theorem_T(2, "s-plus", 6)
    assert rep.status == "pass"


def test_exploratory_without_sandwich_records_outcome():
    rep = cl.verify_theorem_T(2, "o-plus", 8, with_sandwich=False)
    assert rep.exploratory and rep.saturated
    assert rep.status == "pass"
    d = rep.to_dict()
    assert d["strictly_smaller"] is rep.strictly_smaller


def test_twisted_matches_untwisted():
    rep = cl.compare_twisted(2, 6)
    assert rep.status == "pass"
    assert rep.dims["0,0"] == 1


def test_plain_orthogonal_is_brauer():
    rep = cl.verify_plain(2, "o", 6)
    assert rep.status == "pass"
    assert rep.dims["0,6"] == span_dimension(realize(p, 2) for p in pc.enumerate_pairings(0, 6))


def test_pu_po_small():
    rep = cl.verify_pu_po(2, max_legs=6, max_points=8)
    assert rep.status == "pass" and rep.pairings_checked > 0
    assert pc.color_compatible(cl.alternating_pairings(0, 4)[0])
    assert all(pc.color_compatible(p) for p in cl.alternating_pairings(0, 4))


def test_report_status_rules():
    base = dict(kind="x", mode="projective", n=2, max_legs=4, slack=4, preset="o-plus",
                dims={"0,4": 2}, reference_dims={"0,4": 2}, saturated=True, rounds=1, mismatches=[])
    assert cl.ClosureReport(**base).status == "pass"
    assert cl.ClosureReport(**{**base, "saturated": False}).status == "inconclusive"
    assert cl.ClosureReport(**{**base, "dims": {"0,4": 3}, "mismatches": ["x"]}).status == "mismatch"
    assert cl.ClosureReport(**{**base, "checks": {"c": {"failures": 1}}}).status == "mismatch"
    unsat = {**base, "saturated": False, "checks": {"sandwich": {"failures": 1}}}
    assert cl.ClosureReport(**unsat).status == "inconclusive"
    unsound = {**unsat, "checks": {"orthogonal_invariance": {"failures": 1}}}
    assert cl.ClosureReport(**unsound).status == "mismatch"
    # below the reference without saturation stays inconclusive
    low = {**base, "dims": {"0,4": 1}, "mismatches": ["x"], "saturated": False}
    assert cl.ClosureReport(**low).status == "inconclusive"


def test_payload_roundtrip():
    G = _plain(2, [realize(pc.pairpart(), 2)])
    res = cl.close(G, 6)
    back = cl.ClosureResult.from_payload(G, res.to_payload())
    assert back.dims() == res.dims() and back.saturated == res.saturated
    assert all(back.spaces[m].pivots() == res.spaces[m].pivots() for m in res.spaces)


def test_unknown_preset():
    with pytest.raises(cl.ClosureError):
        cl.preset_generators("sp", 2)
