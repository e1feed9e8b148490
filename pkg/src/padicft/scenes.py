"""Scene data: the integrands whose localized Fourier transforms we evaluate.

Two scene families cover everything in scope:

* :class:`MonomialScene` -- the inverse-monomial local model.  The chart
  map sends y to 1/(y_1^(l_1) ... y_n^(l_n)) into a one-dimensional W, and
  the weight is |y_1|^(r_1) ... |y_n|^(r_n).  Convergence near the divisor
  requires r_i >= 0 wherever l_i = 0.

* :class:`PolynomialScene` -- a polynomial map phi: chart -> W with
  p-integral coefficients, a monomial weight with r_i >= 0, and an optional
  polynomial twist q entering through the character as psi(t*q(y)).

Frequencies are points of the dual space W*, optionally carrying the twist
scale t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .padic import PrimeContext, Rational, int_valuation


@dataclass(frozen=True)
class Polynomial:
    """Sparse multivariate polynomial over Q: {exponent tuple: coefficient}."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def from_dict(cls, nvars: int, d: dict) -> "Polynomial":
        items = []
        for exps, c in d.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent arity mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = Fraction(c)
            if c != 0:
                items.append((exps, c))
        items.sort()
        return cls(nvars, tuple(items))

    @classmethod
    def constant(cls, nvars: int, c: Rational) -> "Polynomial":
        return cls.from_dict(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def coordinate(cls, nvars: int, i: int, power: int = 1) -> "Polynomial":
        exps = [0] * nvars
        exps[i] = power
        return cls.from_dict(nvars, {tuple(exps): 1})

    def eval(self, point: Sequence[Rational]) -> Fraction:
        total = Fraction(0)
        for exps, c in self.terms:
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def scale(self, q: Rational) -> "Polynomial":
        q = Fraction(q)
        return Polynomial.from_dict(self.nvars, {e: c * q for e, c in self.terms})

    def add(self, other: "Polynomial") -> "Polynomial":
        d = {e: c for e, c in self.terms}
        for e, c in other.terms:
            d[e] = d.get(e, Fraction(0)) + c
        return Polynomial.from_dict(self.nvars, d)

    def min_coeff_valuation(self, p: int) -> Optional[int]:
        """min v_p over coefficients; None for the zero polynomial."""
        vals = []
        for _, c in self.terms:
            vals.append(
                int_valuation(c.numerator, p) - int_valuation(c.denominator, p)
            )
        return min(vals) if vals else None

    def is_p_integral(self, p: int) -> bool:
        v = self.min_coeff_valuation(p)
        return v is None or v >= 0

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)


@dataclass(frozen=True)
class MonomialScene:
    """Inverse-monomial model: pole exponents l, weight exponents r."""

    n: int
    l: tuple[int, ...]
    r: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.l) != self.n or len(self.r) != self.n:
            raise ValueError("l and r must have length n")
        if any(li < 0 for li in self.l):
            raise ValueError("pole exponents l_i must be >= 0")
        for li, ri in zip(self.l, self.r):
            if li == 0 and ri < 0:
                raise ValueError(
                    "convergence requires r_i >= 0 wherever l_i = 0"
                )


@dataclass(frozen=True)
class PolynomialScene:
    """Direct-phase model: phi into W, monomial weight, optional twist."""

    n: int
    d: int
    phi: tuple[Polynomial, ...]
    r: tuple[int, ...]
    twist: Optional[Polynomial] = None

    def __post_init__(self) -> None:
        if len(self.phi) != self.d:
            raise ValueError("phi must have d components")
        if len(self.r) != self.n:
            raise ValueError("r must have length n")
        if any(ri < 0 for ri in self.r):
            raise ValueError("direct-phase weight exponents must be >= 0")
        for f in self.phi:
            if f.nvars != self.n:
                raise ValueError("phi component arity mismatch")
        if self.twist is not None and self.twist.nvars != self.n:
            raise ValueError("twist arity mismatch")

    def check_p_integral(self, context: PrimeContext) -> None:
        for f in self.phi:
            if not f.is_p_integral(context.p):
                raise ValueError("phi coefficients must be p-integral")
        if self.twist is not None and not self.twist.is_p_integral(context.p):
            raise ValueError("twist coefficients must be p-integral")


@dataclass(frozen=True)
class FrequencyPoint:
    """A point xi of W*, with an optional scale for the twist character."""

    xi: tuple[Fraction, ...]
    twist_scale: Optional[Fraction] = None

    @classmethod
    def make(
        cls, xi: Sequence[Rational], twist_scale: Optional[Rational] = None
    ) -> "FrequencyPoint":
        return cls(
            tuple(Fraction(x) for x in xi),
            None if twist_scale is None else Fraction(twist_scale),
        )

    @property
    def d(self) -> int:
        return len(self.xi)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.xi)
