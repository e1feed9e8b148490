"""Residue cubes: the localization domains all integrals are paired against.

A cube is the set {y in Z_p^n : y_i = base_i mod p^(k_i)}.  These are the
indicator supports of a basis of Schwartz functions on Z_p^n, so "evaluate
a distribution against a cube at a frequency" is the single pairing
primitive used everywhere.  Levels are held per coordinate; the common
case of one level for all coordinates broadcasts.  Level 0 in a coordinate
means the full Z_p line there, and the Haar volume of a cube is
p^(-sum k_i), normalized so vol(Z_p^n) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .padic import PrimeContext


@dataclass(frozen=True)
class ResidueCube:
    context: PrimeContext
    base: tuple[int, ...]
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.base) != len(self.levels):
            raise ValueError("base and levels length mismatch")
        if any(k < 0 for k in self.levels):
            raise ValueError("cube levels must be >= 0")
        p = self.context.p
        reduced = tuple(b % p**k if k > 0 else 0 for b, k in zip(self.base, self.levels))
        object.__setattr__(self, "base", reduced)

    @classmethod
    def make(
        cls,
        context: PrimeContext,
        base: Sequence[int],
        level: Union[int, Sequence[int]],
    ) -> "ResidueCube":
        n = len(base)
        levels = (level,) * n if isinstance(level, int) else tuple(level)
        return cls(context, tuple(base), levels)

    @classmethod
    def zp(cls, context: PrimeContext, n: int) -> "ResidueCube":
        """The full cube Z_p^n."""
        return cls(context, (0,) * n, (0,) * n)

    @property
    def dim(self) -> int:
        return len(self.base)

    def volume(self) -> Fraction:
        return Fraction(1, self.context.p ** sum(self.levels))

    def contains_residue(self, y: Sequence[int], level: Sequence[int]) -> bool:
        """Whether the residue class (y mod p^level) refines this cube."""
        p = self.context.p
        return all(
            kl >= k and (yi - bi) % p**k == 0 if k > 0 else True
            for yi, kl, bi, k in zip(y, level, self.base, self.levels)
        )

    def refine(self, levels: Sequence[int]) -> Iterable["ResidueCube"]:
        """All subcubes of this cube at the given (pointwise >=) levels."""
        p = self.context.p
        targets = tuple(levels)
        if any(t < k for t, k in zip(targets, self.levels)):
            raise ValueError("refinement levels must dominate cube levels")

        def coords(i: int) -> list[int]:
            step = p ** self.levels[i]
            count = p ** (targets[i] - self.levels[i])
            return [self.base[i] + step * t for t in range(count)]

        def rec(i: int, acc: list[int]):
            if i == self.dim:
                yield ResidueCube(self.context, tuple(acc), targets)
                return
            for c in coords(i):
                acc.append(c)
                yield from rec(i + 1, acc)
                acc.pop()

        yield from rec(0, [])

    def subcube_at(self, y: Sequence[int], levels: Sequence[int]) -> "ResidueCube":
        return ResidueCube(self.context, tuple(y), tuple(levels))
