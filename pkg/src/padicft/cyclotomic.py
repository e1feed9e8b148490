"""Exact arithmetic in the cyclotomic fields Q(zeta_{p^m}), m <= max_level.

Values are stored as sparse rational coefficient vectors over the power
basis {zeta^j : 0 <= j < (p-1)*p^(m-1)} of Q(zeta_{p^m}), where
zeta = exp(2*pi*i/p^m).  Canonical form does two things:

* applies the relation  sum_{k=0}^{p-1} zeta^(j + k*p^(m-1)) = 0  to clear
  every coefficient with index >= (p-1)*p^(m-1);
* lowers the level while all surviving indices are divisible by p, using
  zeta_{p^m}^(p*j) = zeta_{p^(m-1)}^j.

The canonical form is unique, so equality is plain structural comparison
and exact equality of character sums is decidable.  Addition, scaling and
multiplication are exact; ``to_complex`` is a lossy double-precision
render for reporting only and never feeds back into the core path.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Dict, Iterable

from .errors import LevelExceeded
from .padic import PrimeContext, Rational


def _reduce(p: int, level: int, coeffs: Dict[int, Fraction]) -> tuple[int, Dict[int, Fraction]]:
    """Bring a raw (level, coefficient dict) pair to canonical form."""
    coeffs = {j: c for j, c in coeffs.items() if c != 0}
    while True:
        if level == 0:
            return 0, coeffs
        block = (p - 1) * p ** (level - 1)
        step = p ** (level - 1)
        # clear indices in the non-basis range [block, p^level)
        for t in [j for j in coeffs if j >= block]:
            c = coeffs.pop(t)
            base = t - block
            for k in range(p - 1):
                idx = base + k * step
                new = coeffs.get(idx, Fraction(0)) - c
                if new == 0:
                    coeffs.pop(idx, None)
                else:
                    coeffs[idx] = new
        if not coeffs:
            return 0, {}
        if all(j % p == 0 for j in coeffs):
            level -= 1
            coeffs = {j // p: c for j, c in coeffs.items()}
            continue
        return level, coeffs


class CyclotomicValue:
    """An exact element of Q(zeta_{p^max_level}), in canonical form."""

    __slots__ = ("context", "level", "coeffs")

    def __init__(self, context: PrimeContext, level: int, coeffs: Dict[int, Fraction]):
        if level > context.max_level:
            raise LevelExceeded(
                f"level {level} exceeds max_level {context.max_level}"
            )
        lvl, red = _reduce(context.p, level, dict(coeffs))
        self.context = context
        self.level = lvl
        self.coeffs = red

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, context: PrimeContext) -> "CyclotomicValue":
        return cls(context, 0, {})

    @classmethod
    def one(cls, context: PrimeContext) -> "CyclotomicValue":
        return cls(context, 0, {0: Fraction(1)})

    @classmethod
    def from_rational(cls, context: PrimeContext, q: Rational) -> "CyclotomicValue":
        return cls(context, 0, {0: Fraction(q)})

    @classmethod
    def root_of_unity(cls, context: PrimeContext, level: int, j: int) -> "CyclotomicValue":
        """zeta_{p^level}^j, canonicalized."""
        if level > context.max_level:
            raise LevelExceeded(
                f"root of unity of conductor p^{level} exceeds max_level"
            )
        if level == 0:
            return cls.one(context)
        return cls(context, level, {j % context.p**level: Fraction(1)})

    # -- ring operations ----------------------------------------------------

    def _require_same_context(self, other: "CyclotomicValue") -> None:
        if self.context != other.context:
            raise ValueError("operands do not share a PrimeContext")

    def _lifted(self, level: int) -> Dict[int, Fraction]:
        shift = self.context.p ** (level - self.level)
        return {j * shift: c for j, c in self.coeffs.items()}

    def __add__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        self._require_same_context(other)
        level = max(self.level, other.level)
        out = self._lifted(level)
        for j, c in other._lifted(level).items():
            out[j] = out.get(j, Fraction(0)) + c
        return CyclotomicValue(self.context, level, out)

    def __neg__(self) -> "CyclotomicValue":
        return CyclotomicValue(
            self.context, self.level, {j: -c for j, c in self.coeffs.items()}
        )

    def __sub__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        return self + (-other)

    def scale(self, q: Rational) -> "CyclotomicValue":
        q = Fraction(q)
        return CyclotomicValue(
            self.context, self.level, {j: c * q for j, c in self.coeffs.items()}
        )

    def __mul__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        self._require_same_context(other)
        level = max(self.level, other.level)
        mod = self.context.p**level
        a = self._lifted(level)
        b = other._lifted(level)
        out: Dict[int, Fraction] = {}
        for j, c in a.items():
            for k, d in b.items():
                idx = (j + k) % mod
                out[idx] = out.get(idx, Fraction(0)) + c * d
        return CyclotomicValue(self.context, level, out)

    def conjugate(self) -> "CyclotomicValue":
        """Complex conjugation: zeta -> zeta^(-1)."""
        mod = self.context.p**self.level
        return CyclotomicValue(
            self.context,
            self.level,
            {(-j) % mod: c for j, c in self.coeffs.items()},
        )

    # -- predicates and rendering -------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclotomicValue):
            return NotImplemented
        return (
            self.context.p == other.context.p
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.context.p, self.level, tuple(sorted(self.coeffs.items()))))

    def as_rational(self) -> Fraction:
        """The value as a rational; raises if it is not one."""
        if self.level != 0:
            raise ValueError("value is not rational")
        return self.coeffs.get(0, Fraction(0))

    def to_complex(self) -> complex:
        """Double-precision render, for reporting only."""
        mod = self.context.p**self.level if self.level else 1
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * j / mod) for j, c in self.coeffs.items()),
            0j,
        )

    def terms(self) -> Iterable[tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def __repr__(self) -> str:
        if self.is_zero():
            return "CyclotomicValue(0)"
        mod = self.context.p**self.level
        parts = [
            f"{c}" if j == 0 else f"{c}*z{mod}^{j}" for j, c in self.terms()
        ]
        return "CyclotomicValue(" + " + ".join(parts) + ")"


# Functional aliases matching the operation-level contract.

def cyclo_add(a: CyclotomicValue, b: CyclotomicValue) -> CyclotomicValue:
    return a + b


def cyclo_scale(a: CyclotomicValue, q: Rational) -> CyclotomicValue:
    return a.scale(q)


def cyclo_eq(a: CyclotomicValue, b: CyclotomicValue) -> bool:
    return a == b


def cyclo_to_complex(a: CyclotomicValue) -> complex:
    return a.to_complex()
