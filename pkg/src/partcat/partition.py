"""Two-row set partitions and the category operations on them.

Points are numbered 1..k+l: the upper row left to right, then the lower row
left to right.  The boundary cyclic order used for crossing tests and
rotations walks the upper row left to right and then the lower row right to
left, so that a rotation is literally a cyclic shift of that order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

WHITE = "w"
BLACK = "b"
_INVERT = {WHITE: BLACK, BLACK: WHITE}


class PartitionError(ValueError):
    """Invalid partition data; ``point`` names the offending point when known."""

    def __init__(self, message: str, point: int | None = None):
        super().__init__(message)
        self.point = point


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class SetPartition:
    upper: int
    lower: int
    blocks: tuple[tuple[int, ...], ...]
    colors: tuple[str, str] | None = None

    def __post_init__(self):
        k, l = self.upper, self.lower
        if k < 0 or l < 0:
            raise PartitionError(f"negative row length ({k}, {l})")
        seen: set[int] = set()
        canon = []
        for raw in self.blocks:
            block = tuple(sorted(raw))
            if not block:
                raise PartitionError("empty block")
            for x in block:
                if not 1 <= x <= k + l:
                    raise PartitionError(f"point {x} out of range 1..{k + l}", x)
                if x in seen:
                    raise PartitionError(f"point {x} in two blocks", x)
                seen.add(x)
            canon.append(block)
        for x in range(1, k + l + 1):
            if x not in seen:
                raise PartitionError(f"point {x} is not covered by any block", x)
        canon.sort()
        object.__setattr__(self, "blocks", tuple(canon))
        if self.colors is not None:
            up, low = self.colors
            if len(up) != k or len(low) != l:
                raise PartitionError(f"color words {self.colors!r} do not match signature ({k}, {l})")
            if set(up + low) - {WHITE, BLACK}:
                raise PartitionError(f"color words must use 'w' and 'b', got {self.colors!r}")
            object.__setattr__(self, "colors", (up, low))

    @property
    def signature(self) -> tuple[int, int]:
        return self.upper, self.lower

    @property
    def size(self) -> int:
        return self.upper + self.lower

    def block_labels(self) -> list[int]:
        """Block index of every point, indexed by point - 1."""
        labels = [0] * self.size
        for b, block in enumerate(self.blocks):
            for x in block:
                labels[x - 1] = b
        return labels

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def uncolored(self) -> SetPartition:
        return SetPartition(self.upper, self.lower, self.blocks) if self.colors else self

    def with_colors(self, upper: str, lower: str) -> SetPartition:
        return SetPartition(self.upper, self.lower, self.blocks, (upper, lower))

    def __str__(self) -> str:
        return serialize(self)


def canonicalize(raw_blocks: Iterable[Iterable[int]], k: int, l: int, colors=None) -> SetPartition:
    return SetPartition(k, l, tuple(tuple(b) for b in raw_blocks), colors)


# -- named diagrams ---------------------------------------------------------

def identity(k: int = 1) -> SetPartition:
    return SetPartition(k, k, tuple((i, k + i) for i in range(1, k + 1)))


def pairpart() -> SetPartition:
    """The duality cup, signature (0, 2)."""
    return SetPartition(0, 2, ((1, 2),))


def uppairpart() -> SetPartition:
    return SetPartition(2, 0, ((1, 2),))


def singleton() -> SetPartition:
    return SetPartition(0, 1, ((1,),))


def fork() -> SetPartition:
    """One block joining two upper points and one lower point."""
    return SetPartition(2, 1, ((1, 2, 3),))


def crosspart() -> SetPartition:
    return SetPartition(2, 2, ((1, 4), (2, 3)))


def empty() -> SetPartition:
    return SetPartition(0, 0, ())


# -- boundary order ---------------------------------------------------------

def boundary_position(point: int, k: int, l: int) -> int:
    if point <= k:
        return point - 1
    return k + (l - (point - k))


def point_at(position: int, k: int, l: int) -> int:
    if position < k:
        return position + 1
    return k + l - (position - k)


def boundary_labels(p: SetPartition) -> list[int]:
    labels = p.block_labels()
    return [labels[point_at(pos, p.upper, p.lower) - 1] for pos in range(p.size)]


def _noncrossing_word(labels: Sequence[int]) -> bool:
    last = {}
    for i, b in enumerate(labels):
        last[b] = i
    stack: list[int] = []
    opened: set[int] = set()
    for i, b in enumerate(labels):
        if b in opened:
            if stack[-1] != b:
                return False
        else:
            opened.add(b)
            stack.append(b)
        if last[b] == i:
            stack.pop()
    return True


def is_noncrossing(p: SetPartition) -> bool:
    return _noncrossing_word(boundary_labels(p))


# -- category operations ----------------------------------------------------

def _concat_colors(p: SetPartition, q: SetPartition):
    if p.colors is None or q.colors is None:
        return None
    return p.colors[0] + q.colors[0], p.colors[1] + q.colors[1]


def tensor(p: SetPartition, q: SetPartition) -> SetPartition:
    k1, l1, k2, l2 = p.upper, p.lower, q.upper, q.lower
    k = k1 + k2

    def shift_p(x):
        return x if x <= k1 else x + k2

    def shift_q(x):
        return x + k1 if x <= k2 else x - k2 + k + l1

    blocks = [tuple(map(shift_p, b)) for b in p.blocks]
    blocks += [tuple(map(shift_q, b)) for b in q.blocks]
    return SetPartition(k, l1 + l2, tuple(blocks), _concat_colors(p, q))


def tensor_all(parts: Iterable[SetPartition]) -> SetPartition:
    result = empty()
    for q in parts:
        result = tensor(result, q)
    return result


def compose(q: SetPartition, p: SetPartition) -> tuple[SetPartition, int]:
    """Stack ``p`` on top of ``q``; return the diagram and the number of closed loops.

    The product in a partition category is ``N ** loops`` times the returned
    diagram.
    """
    if q.upper != p.lower:
        raise PartitionError(f"cannot compose: q has {q.upper} upper points, p has {p.lower} lower points")
    k, m, l = p.upper, p.lower, q.lower
    colors = None
    if p.colors is not None and q.colors is not None:
        if p.colors[1] != q.colors[0]:
            raise PartitionError(f"color mismatch in the middle row: {p.colors[1]!r} vs {q.colors[0]!r}")
        colors = (p.colors[0], q.colors[1])
    parent = list(range(k + m + l))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(nodes):
        root = find(nodes[0])
        for x in nodes[1:]:
            parent[find(x)] = root

    for block in p.blocks:
        union([x - 1 for x in block])
    for block in q.blocks:
        union([k + y - 1 for y in block])
    groups: dict[int, list[int]] = {}
    for node in range(k + m + l):
        groups.setdefault(find(node), []).append(node)
    blocks, loops = [], 0
    for nodes in groups.values():
        outer = [x + 1 if x < k else x - m + 1 for x in nodes if x < k or x >= k + m]
        if outer:
            blocks.append(tuple(outer))
        else:
            loops += 1
    return SetPartition(k, l, tuple(blocks), colors), loops


def involute(p: SetPartition) -> SetPartition:
    k, l = p.upper, p.lower

    def flip(x):
        return x + l if x <= k else x - k

    colors = None
    if p.colors is not None:
        up, low = p.colors
        colors = (_invert_word(low), _invert_word(up))
    return SetPartition(l, k, tuple(tuple(map(flip, b)) for b in p.blocks), colors)


def _invert_word(word: str) -> str:
    return "".join(_INVERT[c] for c in word)


def rotate(p: SetPartition, side: str = "left", direction: str = "down") -> SetPartition:
    """Move an outermost point between the rows (Frobenius reciprocity).

    ``down`` moves the leftmost (``side="left"``) or rightmost upper point to
    the same end of the lower row; ``up`` is the inverse.  A moved point
    changes its color.
    """
    if side not in ("left", "right") or direction not in ("up", "down"):
        raise ValueError(f"bad rotation {side!r}/{direction!r}")
    k, l = p.upper, p.lower
    up_word, low_word = p.colors if p.colors is not None else (None, None)
    if direction == "down":
        if k == 0:
            raise PartitionError("cannot rotate down: the upper row is empty")
        k2, l2 = k - 1, l + 1
        if side == "left":
            def relabel(x):
                if x == 1:
                    return k2 + 1
                return x - 1 if x <= k else k2 + (x - k) + 1
            if p.colors is not None:
                up_word, low_word = up_word[1:], _INVERT[up_word[0]] + low_word
        else:
            def relabel(x):
                if x == k:
                    return k2 + l2
                return x if x < k else k2 + (x - k)
            if p.colors is not None:
                up_word, low_word = up_word[:-1], low_word + _INVERT[up_word[-1]]
    else:
        if l == 0:
            raise PartitionError("cannot rotate up: the lower row is empty")
        k2, l2 = k + 1, l - 1
        if side == "left":
            def relabel(x):
                if x == k + 1:
                    return 1
                return x + 1 if x <= k else k2 + (x - k) - 1
            if p.colors is not None:
                up_word, low_word = _INVERT[low_word[0]] + up_word, low_word[1:]
        else:
            def relabel(x):
                if x == k + l:
                    return k2
                return x if x <= k else k2 + (x - k)
            if p.colors is not None:
                up_word, low_word = up_word + _INVERT[low_word[-1]], low_word[:-1]
    colors = (up_word, low_word) if p.colors is not None else None
    return SetPartition(k2, l2, tuple(tuple(map(relabel, b)) for b in p.blocks), colors)


def cyclic_rotate(p: SetPartition) -> SetPartition:
    """One-line rotation of a (0, k) diagram: the last point becomes the first."""
    if p.upper != 0:
        raise PartitionError("cyclic_rotate expects a diagram without upper points")
    k = p.lower
    if k == 0:
        raise PartitionError("cannot rotate the empty diagram")
    colors = None
    if p.colors is not None:
        colors = ("", p.colors[1][-1] + p.colors[1][:-1])
    return SetPartition(0, k, tuple(tuple(x % k + 1 for x in b) for b in p.blocks), colors)


def rotate_to_line(p: SetPartition) -> SetPartition:
    """Move every upper point down on the left, giving a (0, k+l) diagram."""
    while p.upper:
        p = rotate(p, "left", "down")
    return p


def join(p: SetPartition, q: SetPartition) -> int:
    """Number of blocks of the finest partition coarser than both ``p`` and ``q``."""
    if p.signature != q.signature:
        raise PartitionError("join needs equal signatures")
    parent = list(range(p.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in p.blocks + q.blocks:
        r = find(block[0] - 1)
        for x in block[1:]:
            parent[find(x - 1)] = r
    return len({find(x) for x in range(p.size)})


# -- enumeration ------------------------------------------------------------

def _nc_line(lo: int, hi: int, pairs: bool) -> Iterator[list[tuple[int, ...]]]:
    if lo >= hi:
        yield []
        return
    yield from _grow([lo], lo, hi, pairs)


def _grow(block, last, hi, pairs):
    if not pairs or len(block) == 2:
        for rest in _nc_line(last + 1, hi, pairs):
            yield [tuple(block)] + rest
    if pairs and len(block) == 2:
        return
    for j in range(last + 1, hi):
        if pairs and (j - last - 1) % 2:
            continue
        for inner in _nc_line(last + 1, j, pairs):
            for tail in _grow(block + [j], j, hi, pairs):
                yield inner + tail


@lru_cache(maxsize=None)
def _enumerate(k: int, l: int, pairs: bool) -> tuple[SetPartition, ...]:
    if k < 0 or l < 0:
        raise PartitionError(f"negative row length ({k}, {l})")
    if pairs and (k + l) % 2:
        return ()
    out = []
    for line_blocks in _nc_line(0, k + l, pairs):
        blocks = tuple(tuple(point_at(pos, k, l) for pos in b) for b in line_blocks)
        out.append(SetPartition(k, l, blocks))
    out.sort(key=lambda p: p.blocks)
    return tuple(out)


def enumerate_nc_partitions(k: int, l: int) -> list[SetPartition]:
    return list(_enumerate(k, l, False))


def enumerate_nc_pairings(k: int, l: int) -> list[SetPartition]:
    return list(_enumerate(k, l, True))


def enumerate_pairings(k: int, l: int) -> list[SetPartition]:
    """All pairings, crossing ones included (the Brauer diagrams)."""
    n = k + l
    if n % 2:
        return []

    def rec(points):
        if not points:
            yield []
            return
        first, rest = points[0], points[1:]
        for i, other in enumerate(rest):
            for tail in rec(rest[:i] + rest[i + 1:]):
                yield [(first, other)] + tail

    out = [SetPartition(k, l, tuple(b)) for b in rec(tuple(range(1, n + 1)))]
    out.sort(key=lambda p: p.blocks)
    return out


# -- colors -----------------------------------------------------------------

def color_compatible(p: SetPartition, colors: tuple[str, str] | None = None) -> bool:
    """Same-row pairs must join opposite colors, cross-row pairs equal colors."""
    if not p.is_pairing():
        raise PartitionError("color compatibility is defined for pairings only")
    if colors is None:
        colors = p.colors
    if colors is None:
        raise PartitionError("no color assignment given")
    up, low = colors
    if len(up) != p.upper or len(low) != p.lower:
        raise PartitionError(f"color words {colors!r} do not match signature {p.signature}")
    word = up + low
    for a, b in p.blocks:
        same_row = (a <= p.upper) == (b <= p.upper)
        if (word[a - 1] == word[b - 1]) == same_row:
            return False
    return True


def alternating_word(objects: int) -> str:
    """Color word of ``objects`` copies of the doubled object u (x) conj(u)."""
    return (WHITE + BLACK) * objects


# -- text and JSON ----------------------------------------------------------

def serialize(p: SetPartition) -> str:
    text = f"{p.upper}|{p.lower} : " + "".join("[" + ",".join(map(str, b)) + "]" for b in p.blocks)
    if p.colors is not None:
        text += f"; colors={p.colors[0]}|{p.colors[1]}"
    return text


_HEADER = re.compile(r"\s*(\d+)\s*\|\s*(\d+)\s*:\s*")
_BLOCK = re.compile(r"\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*")
_COLORS = re.compile(r";\s*colors=([wb]*)\|([wb]*)\s*$")


def parse(text: str) -> SetPartition:
    m = _HEADER.match(text)
    if not m:
        raise ParseError("expected '<k>|<l> :'", 0)
    k, l = int(m.group(1)), int(m.group(2))
    pos = m.end()
    blocks = []
    while pos < len(text) and text[pos] == "[":
        b = _BLOCK.match(text, pos)
        if not b:
            raise ParseError("malformed block", pos)
        blocks.append(tuple(int(x) for x in b.group(1).split(",")))
        pos = b.end()
    colors = None
    if pos < len(text):
        c = _COLORS.match(text, pos)
        if not c:
            raise ParseError(f"unexpected text {text[pos:pos + 10]!r}", pos)
        colors = (c.group(1), c.group(2))
    try:
        return SetPartition(k, l, tuple(blocks), colors)
    except PartitionError as exc:
        raise ParseError(str(exc), pos) from exc


def to_json(p: SetPartition) -> dict:
    return {
        "k": p.upper,
        "l": p.lower,
        "blocks": [list(b) for b in p.blocks],
        "colors": list(p.colors) if p.colors is not None else None,
    }


def from_json(data: dict | str) -> SetPartition:
    if isinstance(data, str):
        data = json.loads(data)
    colors = data.get("colors")
    return SetPartition(
        int(data["k"]),
        int(data["l"]),
        tuple(tuple(b) for b in data["blocks"]),
        tuple(colors) if colors is not None else None,
    )
