"""The outline bijection NCPart(k, l) -> NCPair(2k, 2l) and its scalar weights.

Every point is doubled into two consecutive boundary positions.  A block met
in boundary order as b_1, ..., b_m is outlined by the pairs
(second(b_j), first(b_j+1)) and (first(b_1), second(b_m)).  With the weight
prod_b n^(1 - |b|/2) this is the monoidal unitary functor
NCPart_{n^2} -> NCPair_n restricted to even objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import partition as pc
from .partition import PartitionError, SetPartition
from .scalars import HalfPowerScalar


@dataclass(frozen=True)
class FattenResult:
    pairing: SetPartition
    scalar: HalfPowerScalar


def half_exponent(p: SetPartition) -> int:
    return sum(2 - len(b) for b in p.blocks)


def fatten(p: SetPartition) -> FattenResult:
    if not pc.is_noncrossing(p):
        raise PartitionError(f"cannot fatten the crossing partition {p}")
    k, l = p.upper, p.lower
    pairs = []
    for block in p.blocks:
        pos = sorted(pc.boundary_position(x, k, l) for x in block)
        for a, b in zip(pos, pos[1:]):
            pairs.append((2 * a + 1, 2 * b))
        pairs.append((2 * pos[0], 2 * pos[-1] + 1))
    blocks = tuple(tuple(pc.point_at(q, 2 * k, 2 * l) for q in pair) for pair in pairs)
    return FattenResult(SetPartition(2 * k, 2 * l, blocks), HalfPowerScalar.power(half_exponent(p)))


def unfatten(w: SetPartition) -> SetPartition:
    """Inverse of the outline map on noncrossing pairings of doubled rows."""
    if w.upper % 2 or w.lower % 2:
        raise PartitionError(f"rows of {w} are not doubled")
    if not w.is_pairing() or not pc.is_noncrossing(w):
        raise PartitionError(f"{w} is not a noncrossing pairing")
    k, l = w.upper // 2, w.lower // 2
    parent = list(range(k + l))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in w.blocks:
        a, b = sorted(pc.boundary_position(x, 2 * k, 2 * l) for x in block)
        if a % 2 == b % 2:
            raise PartitionError(f"{w} is not in the image of the outline map")
        # the pair joins second(a//2) with first(b//2) or is a closing arc
        if a % 2 == 1:
            parent[find(a // 2)] = find(b // 2)
    groups: dict[int, list[int]] = {}
    for pos in range(k + l):
        groups.setdefault(find(pos), []).append(pc.point_at(pos, k, l))
    p = SetPartition(k, l, tuple(tuple(g) for g in groups.values()))
    if fatten(p).pairing != w:
        raise PartitionError(f"{w} is not in the image of the outline map")
    return p


# -- functoriality ------------------------------------------------------------

@dataclass(frozen=True)
class ComposeCheck:
    ok: bool
    partition: SetPartition
    loops: int
    pairing_loops: int
    lhs_half_exponent: int
    rhs_half_exponent: int

    def __bool__(self):
        return self.ok


def check_compose(q: SetPartition, p: SetPartition) -> ComposeCheck:
    """F(q) F(p) == F(q p), loop factors included (n^2 per partition loop, n per pairing loop)."""
    r, c = pc.compose(q, p)
    fq, fp, fr = fatten(q), fatten(p), fatten(r)
    w, c2 = pc.compose(fq.pairing, fp.pairing)
    lhs = fq.scalar * fp.scalar * HalfPowerScalar.power(2 * c2)
    rhs = HalfPowerScalar.power(4 * c) * fr.scalar
    ok = w == fr.pairing and lhs == rhs
    return ComposeCheck(ok, r, c, c2, lhs.half_exponent, rhs.half_exponent)


def functor_check_compose(q: SetPartition, p: SetPartition) -> bool:
    return check_compose(q, p).ok


def functor_check_tensor(p: SetPartition, q: SetPartition) -> bool:
    fp, fq, fpq = fatten(p), fatten(q), fatten(pc.tensor(p, q))
    return fpq.pairing == pc.tensor(fp.pairing, fq.pairing) and fpq.scalar == fp.scalar * fq.scalar


def functor_check_involution(p: SetPartition) -> bool:
    fp, fs = fatten(p), fatten(pc.involute(p))
    return fs.pairing == pc.involute(fp.pairing) and fs.scalar == fp.scalar


def cap(width: int, position: int) -> SetPartition:
    """Contraction of lower points ``position`` and ``position + 1`` of a width-``width`` row."""
    if not 1 <= position < width:
        raise PartitionError(f"no neighbouring points at {position} in a row of {width}")
    left, right = pc.identity(position - 1), pc.identity(width - position - 1)
    return pc.tensor_all([left, pc.uppairpart(), right])


def contraction_case(p: SetPartition, position: int) -> int:
    """Which of the four contraction situations applies at lower points ``position``, ``position + 1``.

    1: the two points form a block of size two; 2: two singletons; 3: both in
    one larger block; 4: two different blocks, not both singletons.
    """
    labels = p.block_labels()
    a, b = p.upper + position, p.upper + position + 1
    ba, bb = labels[a - 1], labels[b - 1]
    if ba == bb:
        return 1 if len(p.blocks[ba]) == 2 else 3
    if len(p.blocks[ba]) == 1 and len(p.blocks[bb]) == 1:
        return 2
    return 4


def contract(p: SetPartition, position: int) -> tuple[SetPartition, int]:
    return pc.compose(cap(p.lower, position), p)


# -- Gram matrices ----------------------------------------------------------

def scaled_gram(partitions: Sequence[SetPartition], n: int, method: str = "entrywise") -> list[list[Fraction]]:
    """Gram matrix of the weighted outlines, evaluated at dimension ``n``."""
    from .operators import gram_matrix

    fats = [fatten(p) for p in partitions]
    base = gram_matrix([f.pairing for f in fats], n, method=method)
    out = []
    for i, fi in enumerate(fats):
        row = []
        for j, fj in enumerate(fats):
            row.append((fi.scalar * fj.scalar).to_fraction(n) * base[i][j])
        out.append(row)
    return out


def gram_preservation(partitions: Iterable[SetPartition], n: int) -> bool:
    """Gram of the partitions at n^2 (join formula) equals Gram of weighted outlines at n (entrywise)."""
    from .operators import gram_matrix

    if n < 2:
        raise ValueError("gram_preservation needs n >= 2")
    parts = list(partitions)
    lhs = gram_matrix(parts, n * n, method="join")
    rhs = scaled_gram(parts, n, method="entrywise")
    return lhs == rhs
