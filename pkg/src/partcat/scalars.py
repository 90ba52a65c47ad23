"""Exact scalars ``c * n**(e/2)`` in a formal dimension ``n``, and formal
linear combinations of diagrams with such coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Mapping

from . import partition as pc
from .partition import SetPartition


@dataclass(frozen=True)
class HalfPowerScalar:
    coefficient: Fraction = Fraction(1)
    half_exponent: int = 0

    def __post_init__(self):
        c = Fraction(self.coefficient)
        object.__setattr__(self, "coefficient", c)
        if c == 0:
            object.__setattr__(self, "half_exponent", 0)

    @classmethod
    def power(cls, half_exponent: int) -> HalfPowerScalar:
        return cls(Fraction(1), half_exponent)

    @classmethod
    def zero(cls) -> HalfPowerScalar:
        return cls(Fraction(0), 0)

    def is_zero(self) -> bool:
        return self.coefficient == 0

    def __mul__(self, other):
        if isinstance(other, HalfPowerScalar):
            return HalfPowerScalar(self.coefficient * other.coefficient, self.half_exponent + other.half_exponent)
        return HalfPowerScalar(self.coefficient * Fraction(other), self.half_exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return HalfPowerScalar(-self.coefficient, self.half_exponent)

    def __add__(self, other: HalfPowerScalar) -> HalfPowerScalar:
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.half_exponent != other.half_exponent:
            raise ValueError(f"cannot add n^({self.half_exponent}/2) and n^({other.half_exponent}/2) terms exactly")
        return HalfPowerScalar(self.coefficient + other.coefficient, self.half_exponent)

    def __sub__(self, other: HalfPowerScalar) -> HalfPowerScalar:
        return self + (-other)

    def evaluate(self, n: int) -> tuple[Fraction, bool]:
        """Value at dimension ``n`` as ``(r, has_sqrt)`` meaning ``r * sqrt(n)`` if ``has_sqrt``."""
        if n < 1:
            raise ValueError("dimension must be at least 1")
        e = self.half_exponent
        if e % 2 == 0:
            return self.coefficient * Fraction(n) ** (e // 2), False
        root = isqrt(n)
        base = self.coefficient * Fraction(n) ** ((e - 1) // 2)
        if root * root == n:
            return base * root, False
        return base, True

    def to_fraction(self, n: int) -> Fraction:
        value, irrational = self.evaluate(n)
        if irrational:
            raise ValueError(f"{self} is irrational at n={n}")
        return value

    def __str__(self) -> str:
        if self.half_exponent == 0:
            return str(self.coefficient)
        e = self.half_exponent
        power = f"n^{e // 2}" if e % 2 == 0 else f"n^({e}/2)"
        return power if self.coefficient == 1 else f"{self.coefficient}*{power}"


ONE = HalfPowerScalar()


class DiagramCombination:
    """Formal linear combination of partitions sharing one signature."""

    def __init__(self, signature: tuple[int, int], terms: Mapping[SetPartition, HalfPowerScalar] | None = None):
        self.signature = tuple(signature)
        self.terms: dict[SetPartition, HalfPowerScalar] = {}
        for p, c in (terms or {}).items():
            self._accumulate(p, c)

    @classmethod
    def of(cls, p: SetPartition, coefficient: HalfPowerScalar = ONE) -> DiagramCombination:
        return cls(p.signature, {p: coefficient})

    def _accumulate(self, p: SetPartition, c: HalfPowerScalar):
        if p.signature != self.signature:
            raise ValueError(f"term {p} does not have signature {self.signature}")
        total = self.terms.get(p, HalfPowerScalar.zero()) + c
        if total.is_zero():
            self.terms.pop(p, None)
        else:
            self.terms[p] = total

    def __iter__(self) -> Iterator[tuple[SetPartition, HalfPowerScalar]]:
        return iter(sorted(self.terms.items(), key=lambda t: t[0].blocks))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, DiagramCombination) and self.signature == other.signature and self.terms == other.terms

    def __add__(self, other: DiagramCombination) -> DiagramCombination:
        out = DiagramCombination(self.signature, self.terms)
        for p, c in other.terms.items():
            out._accumulate(p, c)
        return out

    def scale(self, c) -> DiagramCombination:
        return DiagramCombination(self.signature, {p: v * c for p, v in self.terms.items()})

    def tensor(self, other: DiagramCombination) -> DiagramCombination:
        sig = (self.signature[0] + other.signature[0], self.signature[1] + other.signature[1])
        out = DiagramCombination(sig)
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                out._accumulate(pc.tensor(p, q), a * b)
        return out

    def compose(self, other: DiagramCombination, loop_weight: HalfPowerScalar) -> DiagramCombination:
        """``self`` after ``other``; every closed loop contributes ``loop_weight``."""
        out = DiagramCombination((other.signature[0], self.signature[1]))
        for q, a in self.terms.items():
            for p, b in other.terms.items():
                r, loops = pc.compose(q, p)
                c = a * b
                for _ in range(loops):
                    c = c * loop_weight
                out._accumulate(r, c)
        return out

    def involute(self) -> DiagramCombination:
        return DiagramCombination(
            (self.signature[1], self.signature[0]),
            {pc.involute(p): c for p, c in self.terms.items()},
        )

    def __repr__(self):
        inner = " + ".join(f"{c}*<{p}>" for p, c in self) or "0"
        return f"DiagramCombination{self.signature}({inner})"
