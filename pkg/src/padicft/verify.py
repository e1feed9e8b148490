"""Verification harness: probes, identity suites, and coverage checks.

Smoothness probes realize the finite-level wave-front test: localize with
a cube indicator, evaluate the transform along a frequency ray at growing
depth, and watch for eventual exact vanishing.  Over a p-adic field,
"vanishes asymptotically" means the localized transform is eventually
exactly zero along the ray, so every probe value is exact and a vanished
tail is a genuine witness.  A non-vanishing tail within budget is
finite-level evidence only, never a verdict.

One-sidedness is enforced structurally: the coverage check may assert
"probe-singular implies inside the bound" and has no code path asserting
the converse (the bound is an upper bound for the wave front set).

Suites are deterministic: seeded integer-arithmetic randomness, reports
ordered by probe id, no floating point anywhere in a verdict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .charsums import (
    direct_ft,
    inverse_ft,
    inverse_ft_oracle,
    scaled_eval,
)
from .cubes import ResidueCube
from .cyclotomic import CyclotomicValue
from .geometry import ConicSetDescriptor, membership
from .padic import PrimeContext, Rational
from .scenes import FrequencyPoint, MonomialScene, PolynomialScene

Scene = Union[MonomialScene, PolynomialScene]
Direction = Union[Fraction, tuple[Fraction, ...]]


@dataclass(frozen=True)
class ProbeOutcome:
    kind: str  # "vanished" | "stabilized" | "not_stabilized"
    level: int

    def is_singular_candidate(self) -> bool:
        """Vanished tails witness smoothness; anything else is a candidate."""
        return self.kind != "vanished"


@dataclass(frozen=True)
class ProbeReport:
    scene_ref: str
    cube: ResidueCube
    direction: Direction
    levels_tested: int
    outcome: ProbeOutcome
    values: tuple[CyclotomicValue, ...]


def _ray_value(ctx: PrimeContext, scene: Scene, cube: ResidueCube, direction, k: int):
    lam = Fraction(1, ctx.p**k)
    if isinstance(scene, MonomialScene):
        return inverse_ft(ctx, scene, cube, lam * Fraction(direction))
    xi = tuple(lam * x for x in direction.xi)
    ts = None if direction.twist_scale is None else direction.twist_scale
    return direct_ft(ctx, scene, cube, FrequencyPoint(xi, ts))


def smoothness_probe(
    ctx: PrimeContext,
    scene: Scene,
    cube: ResidueCube,
    direction: Direction,
    k_max: int,
    scene_ref: str = "",
) -> ProbeReport:
    """Scan the frequency ray lambda * direction at v(lambda) = -1..-k_max.

    Classification: the longest constant tail of the value sequence (at
    least two levels long) gives VanishedAt(k) when the common value is 0
    and StabilizedAt(k) otherwise; no such tail is NotStabilized(k_max).
    Outcomes on a shared prefix are deterministic, and a vanished tail is
    exact evidence of smoothness in that direction.
    """
    if k_max < 2:
        raise ValueError("probes need k_max >= 2 to witness a tail")
    if isinstance(scene, MonomialScene):
        if Fraction(direction) == 0:
            raise ValueError("probe direction must be nonzero")
    else:
        direction = (
            direction
            if isinstance(direction, FrequencyPoint)
            else FrequencyPoint.make(direction)
        )
        if direction.is_zero():
            raise ValueError("probe direction must be nonzero")
    values = tuple(
        _ray_value(ctx, scene, cube, direction, k) for k in range(1, k_max + 1)
    )
    outcome = _classify(values)
    return ProbeReport(scene_ref, cube, direction, k_max, outcome, values)


def _classify(values: Sequence[CyclotomicValue]) -> ProbeOutcome:
    k_max = len(values)
    start = k_max - 1
    while start >= 1 and values[start - 1] == values[-1]:
        start -= 1
    tail_len = k_max - start
    if tail_len >= 2:
        if values[-1].is_zero():
            return ProbeOutcome("vanished", start + 1)
        return ProbeOutcome("stabilized", start + 1)
    return ProbeOutcome("not_stabilized", k_max)


def local_constancy_probe(
    ctx: PrimeContext,
    scene: Scene,
    cube: ResidueCube,
    xi: Union[Rational, FrequencyPoint],
    refine_max: int,
) -> Optional[int]:
    """Least j with the transform constant on the j-th refinement around xi.

    Compares the value at xi against xi*(1 + p^j u) for unit perturbations
    u and against additive basis perturbations xi + p^j e_k; returns the
    least j where all agree exactly, or None when no tested j works.
    """
    p = ctx.p
    if isinstance(scene, MonomialScene):
        xi = Fraction(xi)
        if xi == 0:
            raise ValueError("local constancy probes need xi != 0")
        base = inverse_ft(ctx, scene, cube, xi)
        for j in range(1, refine_max + 1):
            pj = Fraction(p) ** j
            perturbed = [xi * (1 + pj * u) for u in range(1, p)]
            perturbed.append(xi + pj)
            if all(inverse_ft(ctx, scene, cube, x) == base for x in perturbed):
                return j
        return None
    freq = xi if isinstance(xi, FrequencyPoint) else FrequencyPoint.make(xi)
    if freq.is_zero():
        raise ValueError("local constancy probes need xi != 0")
    base = direct_ft(ctx, scene, cube, freq)
    for j in range(1, refine_max + 1):
        pj = Fraction(p) ** j
        trials = []
        for u in range(1, p):
            trials.append(FrequencyPoint(tuple(x * (1 + pj * u) for x in freq.xi), freq.twist_scale))
        for k in range(freq.d):
            shifted = list(freq.xi)
            shifted[k] += pj
            trials.append(FrequencyPoint(tuple(shifted), freq.twist_scale))
        if all(direct_ft(ctx, scene, cube, t) == base for t in trials):
            return j
    return None


# ---------------------------------------------------------------------------
# identity suites


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    trials: int
    seed: int
    failures: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def homogeneity_suite(
    ctx: PrimeContext,
    scene: MonomialScene,
    trials: int,
    seed: int,
) -> SuiteReport:
    """Exact torus-homogeneity identity on seeded random instances.

    For random (alpha, cube, xi) the transported evaluation must equal
    prod |alpha_i|^(1+r_i) times the plain evaluation, as exact cyclotomic
    numbers.  Failures carry a replayable counterexample payload.
    """
    rng = random.Random(seed)
    p = ctx.p
    failures = []
    for t in range(trials):
        alpha = []
        for _ in range(scene.n):
            u = rng.randrange(1, p)
            e = rng.choice([0, 0, 1])
            alpha.append(Fraction(u * p**e))
        levels = [rng.choice([0, 1, 2]) for _ in range(scene.n)]
        base = [rng.randrange(p**k) if k else 0 for k in levels]
        cube = ResidueCube.make(ctx, base, levels)
        num = rng.randrange(1, p * p)
        while num % p == 0:
            num = rng.randrange(1, p * p)
        xi = Fraction(num, p ** rng.choice([0, 1, 2]))
        lhs = scaled_eval(ctx, scene, alpha, cube, xi)
        factor = Fraction(1)
        for a, ri in zip(alpha, scene.r):
            factor *= ctx.abs_norm(a) ** (1 + ri)
        rhs = inverse_ft(ctx, scene, cube, xi).scale(factor)
        if lhs != rhs:
            failures.append(
                {
                    "trial": t,
                    "alpha": [str(a) for a in alpha],
                    "cube_base": list(cube.base),
                    "cube_levels": list(cube.levels),
                    "xi": str(xi),
                    "lhs": repr(lhs),
                    "rhs": repr(rhs),
                }
            )
    return SuiteReport("homogeneity", trials, seed, tuple(failures))


def reduction_identity_check(
    ctx: PrimeContext,
    a: Sequence[Rational],
    scene: MonomialScene,
    cube: ResidueCube,
    xi: Sequence[Rational],
    depth: int = 4,
) -> bool:
    """Constant-direction reduction to one frequency dimension.

    With phi = a / p(y) for a constant nonzero vector a, evaluating the
    transform at xi must agree with the one-dimensional inverse model at
    the scalar frequency <xi, a>.  The right side is recomputed by the
    independent stratum oracle with one character per coordinate (the
    factors psi(xi_k a_k / p(y)) multiplied), so the two paths share no
    evaluation logic.
    """
    a = [Fraction(x) for x in a]
    if all(x == 0 for x in a):
        raise ValueError("reduction requires a nonzero constant direction")
    xi = [Fraction(x) for x in xi]
    if len(xi) != len(a):
        raise ValueError("frequency/direction arity mismatch")
    scalar = sum(x * y for x, y in zip(xi, a))
    lhs = inverse_ft(ctx, scene, cube, scalar)
    factors = [x * y for x, y in zip(xi, a)]
    rhs = inverse_ft_oracle(ctx, scene, cube, scalar, depth, freq_factors=factors)
    return lhs == rhs


# ---------------------------------------------------------------------------
# wave-front coverage


@dataclass(frozen=True)
class ProbePlanEntry:
    """One (cube, direction) probe plus its membership query point.

    ``base``/``covector`` locate the candidate singular point in the
    ambient of the bound descriptor, T*(Y x W*): base = (y, xi-direction),
    covector = (dy-part, dw-part).  The probe itself only determines the
    ray, so the query point is part of the plan.
    """

    probe_id: str
    scene: Scene
    cube: ResidueCube
    direction: Direction
    k_max: int
    base: Optional[tuple[Fraction, ...]] = None
    covector: Optional[tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class CoverReport:
    entries: tuple[dict, ...]
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def wavefront_cover_check(
    ctx: PrimeContext,
    bound: ConicSetDescriptor,
    plan: Sequence[ProbePlanEntry],
) -> CoverReport:
    """Assert: every probe-singular direction lies inside the bound.

    Probes whose tails vanish witness smoothness and are never checked
    against the bound (the bound is one-sided).  Candidates without a
    membership point in the plan are reported as violations rather than
    guessed.
    """
    entries = []
    violations = []
    for entry in sorted(plan, key=lambda e: e.probe_id):
        report = smoothness_probe(
            ctx, entry.scene, entry.cube, entry.direction, entry.k_max,
            scene_ref=entry.probe_id,
        )
        record = {
            "probe_id": entry.probe_id,
            "outcome": report.outcome.kind,
            "outcome_level": report.outcome.level,
            "member": None,
        }
        if report.outcome.is_singular_candidate():
            if entry.base is None or entry.covector is None:
                violations.append(
                    f"{entry.probe_id}: candidate without membership point"
                )
            else:
                ok = membership(bound, entry.base, entry.covector)
                record["member"] = ok
                if not ok:
                    violations.append(
                        f"{entry.probe_id}: singular candidate outside the bound"
                    )
        entries.append(record)
    return CoverReport(tuple(entries), tuple(violations))
