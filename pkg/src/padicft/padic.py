"""Exact p-adic scalar arithmetic over F = Q_p.

Scalars are represented by elements of Z[1/p] subset Q_p: exact rationals
whose denominator is a power of p.  Every sum computed downstream depends
only on residues modulo a finite power of p, so dense representatives lose
nothing.  The normalized absolute value is |x| = p^(-v_p(x)), and the fixed
additive character is

    psi(x) = exp(2*pi*i*{x}_p),

where {x}_p is the p-adic fractional part.  psi takes values in p-power
roots of unity, so character sums live in the exact cyclotomic ring of
:mod:`padicft.cyclotomic`.  Twisted characters psi_t(x) = psi(t*x) are
obtained by scaling arguments; no second convention is needed.

All types here are immutable values and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import LevelExceeded, NotAUnit

Rational = Union[int, Fraction]

#: Marker returned by :func:`valuation` at zero.
INFINITY = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def int_valuation(n: int, p: int) -> int:
    """Largest k with p^k | n, for n != 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    """The prime p, the character convention, and the conductor cap.

    ``max_level`` caps the conductor p^M of any root of unity the context
    will produce; evaluations that would need a finer character raise
    :class:`LevelExceeded` instead of silently losing exactness.
    """

    p: int
    max_level: int = 8

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")

    # -- valuation and absolute value ------------------------------------

    def valuation(self, x: Rational) -> float:
        """v_p(x); returns INFINITY for x = 0."""
        x = Fraction(x)
        if x == 0:
            return INFINITY
        return int_valuation(x.numerator, self.p) - int_valuation(
            x.denominator, self.p
        )

    def abs_norm(self, x: Rational) -> Fraction:
        """Normalized absolute value |x| = p^(-v_p(x)); |0| = 0."""
        x = Fraction(x)
        if x == 0:
            return Fraction(0)
        v = self.valuation(x)
        return Fraction(self.p) ** int(-v)

    # -- modular arithmetic ----------------------------------------------

    def unit_inverse_mod(self, u: int, k: int) -> int:
        """Inverse of u modulo p^k; raises NotAUnit if p | u."""
        if k < 0:
            raise ValueError("level must be >= 0")
        if u % self.p == 0:
            raise NotAUnit(f"{u} is divisible by p = {self.p}")
        if k == 0:
            return 0
        return pow(u, -1, self.p**k)

    def fractional_index(self, x: Rational) -> tuple[int, int]:
        """Return (m, j) with {x}_p = j / p^m, 0 <= j < p^m, j a unit or 0.

        m is the exact p-power in the denominator of x; the remaining
        denominator part is a p-adic unit and gets inverted mod p^m.
        """
        x = Fraction(x)
        if x == 0:
            return 0, 0
        m = int_valuation(x.denominator, self.p)
        if m == 0:
            return 0, 0
        pm = self.p**m
        c = x.denominator // pm
        j = (x.numerator * pow(c, -1, pm)) % pm
        return m, j

    def psi(self, x: "Rational | PAdicScalar"):
        """The additive character value psi(x) as an exact cyclotomic number.

        psi(x) = 1 exactly when v_p(x) >= 0.  Raises LevelExceeded when the
        denominator of x needs a conductor beyond max_level.
        """
        from .cyclotomic import CyclotomicValue

        if isinstance(x, PAdicScalar):
            x = x.value
        m, j = self.fractional_index(x)
        if m > self.max_level:
            raise LevelExceeded(
                f"psi needs conductor p^{m} > p^{self.max_level}"
            )
        return CyclotomicValue.root_of_unity(self, m, j)


@dataclass(frozen=True)
class PAdicScalar:
    """An exact element of Z[1/p]: a rational with p-power denominator."""

    value: Fraction
    context: PrimeContext

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        den = self.value.denominator
        p = self.context.p
        while den % p == 0:
            den //= p
        if den != 1:
            raise ValueError(
                f"{self.value} has a denominator not a power of p = {p}"
            )

    def valuation(self) -> float:
        return self.context.valuation(self.value)

    def abs_norm(self) -> Fraction:
        return self.context.abs_norm(self.value)


def as_rational(x: "Rational | PAdicScalar") -> Fraction:
    if isinstance(x, PAdicScalar):
        return x.value
    return Fraction(x)


def valuation(x: "Rational | PAdicScalar", context: PrimeContext | None = None) -> float:
    """v_p(x) for a scalar; +infinity marker for zero."""
    if isinstance(x, PAdicScalar):
        return x.valuation()
    if context is None:
        raise ValueError("context required for bare rationals")
    return context.valuation(x)


def abs_norm(x: "Rational | PAdicScalar", context: PrimeContext | None = None) -> Fraction:
    """Normalized absolute value of a scalar."""
    if isinstance(x, PAdicScalar):
        return x.abs_norm()
    if context is None:
        raise ValueError("context required for bare rationals")
    return context.abs_norm(x)
