"""The explicit isotropic bound and the smooth locus, from chart data.

Resolutions are *input*: the user supplies monomial charts (divisor
exponents l, weight exponents r, pole flags marking components lying over
infinity) for a resolved model of the map into Y x W-bar.  This module
assembles, per chart,

    (chart x 0)  u  (divisor strata x 0)  u  (pole strata x taut-line),

takes the critical locus of its map to chart x W, swaps to the dual
ambient T*(Y x W*), and pushes forward along the chart-to-Y coordinate
projection.  The union over charts is a conic isotropic descriptor that
bounds the wave front set of the transformed measure; it consumes no
prime, so it is literally identical across ground fields.

For the smooth locus: a frequency direction is smooth whenever the map
from the pole divisor to the projective space of frequency directions is
transversal to the corresponding hyperplane.  For one-parameter pole
components the failure locus (pairs: point, tangent hyperplane) is
eliminated exactly by a resultant in the parameter; for higher-dimensional
sources a seeded sampling fallback produces a point cloud instead.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .errors import (
    BudgetExceeded,
    DegenerateParametrization,
    DegreeTooHigh,
    MalformedStratum,
    UnsupportedMap,
    ZeroFrequency,
)
from .geometry import (
    AmbientSpec,
    ConicSetDescriptor,
    Subspace,
    conormal_of,
    is_conic,
    is_homothety_stable,
    isotropic_check,
    pushforward_coordinate,
    symplectic_swap,
)
from .scenes import Polynomial

MAX_CURVE_COMPONENTS = 4
MAX_CURVE_DEGREE = 8


# ---------------------------------------------------------------------------
# chart data and the bound


@dataclass(frozen=True)
class ResolutionChart:
    """One monomial chart of a resolved model.

    ``pole_flags[i]`` marks the divisor component {y_i = 0} as lying over
    infinity (it requires l_i > 0).  ``y_coords`` lists the chart
    coordinates that map to Y; the chart-to-Y map must be a coordinate
    projection.  ``w_direction`` is the constant frequency-space line cut
    out by the pole components (needed only when dim W >= 2; for a line
    the tautological bundle is the whole space).  Charts are verified
    independently; gluing is the caller's responsibility (see ``glue``).
    """

    chart_id: str
    n: int
    l: tuple[int, ...]
    r: tuple[int, ...]
    pole_flags: tuple[bool, ...]
    y_coords: tuple[int, ...] = ()
    w_direction: Optional[tuple[Fraction, ...]] = None
    glue: Optional[str] = None

    def __post_init__(self) -> None:
        if not (len(self.l) == len(self.r) == len(self.pole_flags) == self.n):
            raise MalformedStratum("chart vectors must have length n")
        if any(li < 0 for li in self.l):
            raise MalformedStratum("pole exponents must be >= 0")
        for li, fl in zip(self.l, self.pole_flags):
            if fl and li == 0:
                raise MalformedStratum("pole flag requires l_i > 0")
        if any(i < 0 or i >= self.n for i in self.y_coords):
            raise MalformedStratum("y_coords outside the chart")
        if len(set(self.y_coords)) != len(self.y_coords):
            raise MalformedStratum("y_coords must be distinct")

    def divisor_support(self) -> list[int]:
        return [i for i in range(self.n) if self.l[i] > 0 or self.r[i] != 0]


def build_wavefront_bound(
    charts: Sequence[ResolutionChart], d: int, q: int
) -> ConicSetDescriptor:
    """Assemble the isotropic bound in T*(Y x W*) from chart data.

    The output is conic, isotropic, stable under frequency homotheties,
    and independent of any prime.  Raises UnsupportedMap when a chart's
    map to Y is not a coordinate projection of the declared dimension.
    """
    ambient_out = AmbientSpec(q, d, w_dual=True)
    comps = []
    for chart in charts:
        if len(chart.y_coords) != q:
            raise UnsupportedMap(
                f"chart {chart.chart_id!r} does not project onto Y (dim {q})"
            )
        if d == 1:
            taut = Subspace.full(1)
        elif chart.w_direction is not None:
            if len(chart.w_direction) != d:
                raise MalformedStratum("w_direction length must be dim W")
            taut = Subspace.span(d, [chart.w_direction])
            if taut.dim == 0:
                raise MalformedStratum("w_direction must be nonzero")
        else:
            taut = None
        amb = AmbientSpec(chart.n, d, w_dual=False)
        local = [conormal_of(amb, (), Subspace.zero(d))]
        support = chart.divisor_support()
        for k in range(1, len(support) + 1):
            for s in itertools.combinations(support, k):
                local.append(conormal_of(amb, s, Subspace.zero(d)))
                if any(chart.pole_flags[i] for i in s):
                    if taut is None:
                        raise MalformedStratum(
                            "charts with pole components need w_direction "
                            "when dim W >= 2"
                        )
                    local.append(conormal_of(amb, s, taut))
        desc = ConicSetDescriptor.make(amb, local)
        desc = symplectic_swap(desc)
        desc = pushforward_coordinate(desc, sorted(chart.y_coords))
        comps.extend(desc.components)
    out = ConicSetDescriptor.make(ambient_out, comps)
    assert is_conic(out) and isotropic_check(out) and is_homothety_stable(out)
    return out


# ---------------------------------------------------------------------------
# tangency locus of one-parameter pole components


@dataclass(frozen=True)
class CurveScene:
    """A one-parameter pole component mapped to frequency directions.

    ``param`` holds the homogeneous coordinates of the map as univariate
    polynomials (ascending coefficient lists).  Scaling all components by
    a common factor does not change the map, so the gcd is required to be
    1; identically zero maps are rejected.
    """

    param: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def make(cls, coeff_lists: Sequence[Sequence]) -> "CurveScene":
        comps = []
        for coeffs in coeff_lists:
            row = [Fraction(c) for c in coeffs]
            while row and row[-1] == 0:
                row.pop()
            comps.append(tuple(row))
        if all(not row for row in comps):
            raise DegenerateParametrization("parametrization is identically zero")
        return cls(tuple(comps))

    @property
    def ncomponents(self) -> int:
        return len(self.param)

    def degree(self) -> int:
        return max((len(row) - 1 for row in self.param if row), default=0)


@dataclass(frozen=True)
class TransversalityReport:
    """Defining data for the tangency locus and the smooth-locus test.

    Exact mode carries polynomial equations in the dual coordinates; the
    smooth locus is where none of them vanish.  Sampled mode carries a
    point cloud and a distance heuristic, and is never used by exact
    verification.
    """

    nvars: int
    method: str  # "exact" | "sampled"
    equations: tuple[Polynomial, ...] = ()
    samples: tuple[tuple[Fraction, ...], ...] = ()
    whole_space: bool = False

    def u_membership(self, xi: Sequence) -> bool:
        xi = [Fraction(x) for x in xi]
        if len(xi) != self.nvars:
            raise ZeroFrequency(f"expected {self.nvars} dual coordinates")
        if all(x == 0 for x in xi):
            raise ZeroFrequency("smooth locus is a subset of W* - 0")
        if self.whole_space:
            return False
        if self.method == "exact":
            return all(eq.eval(xi) != 0 for eq in self.equations)
        return self._far_from_cloud(xi)

    def _far_from_cloud(self, xi, tol: float = 1e-6) -> bool:
        if not self.samples:
            return True
        v = [float(x) for x in xi]
        nv = math.sqrt(sum(a * a for a in v))
        for pt in self.samples:
            w = [float(x) for x in pt]
            nw = math.sqrt(sum(a * a for a in w))
            if nw == 0:
                continue
            dot = sum(a * b for a, b in zip(v, w))
            # projective sine distance
            sin2 = max(0.0, 1.0 - (dot / (nv * nw)) ** 2)
            if sin2 < tol:
                return False
        return True


def _sympy_to_polynomial(expr, symbols) -> Polynomial:
    poly = sympy.Poly(expr, *symbols)
    terms = {}
    for exps, coeff in poly.terms():
        c = sympy.Rational(coeff)
        terms[tuple(int(e) for e in exps)] = Fraction(int(c.p), int(c.q))
    return Polynomial.from_dict(len(symbols), terms)


def _normalize_sign(poly: Polynomial) -> Polynomial:
    if not poly.terms:
        return poly
    lead = poly.terms[-1][1]
    if lead < 0:
        return poly.scale(-1)
    return poly


def hyperplane_tangency_exact(scene: CurveScene) -> TransversalityReport:
    """Exact tangency locus of a one-parameter component, by elimination.

    A hyperplane (dual vector ell) fails transversality at parameter s
    exactly when <ell, param(s)> = 0 = <ell, param'(s)>; the resultant in
    s eliminates the parameter.  For degree >= 2 the raw resultant factors
    as (leading coefficient) x (tangency equation) and the spurious factor
    is divided out; the result is primitive with positive leading
    coefficient, so equality up to a nonzero rational unit is canonical.
    """
    N = scene.ncomponents
    if N > MAX_CURVE_COMPONENTS:
        raise DegreeTooHigh(f"more than {MAX_CURVE_COMPONENTS} homogeneous components")
    if scene.degree() > MAX_CURVE_DEGREE:
        raise DegreeTooHigh(f"degree above {MAX_CURVE_DEGREE}")

    if scene.degree() == 0:
        # constant point z: the non-transversal hyperplanes pass through z
        terms = {}
        for i, row in enumerate(scene.param):
            if row and row[0] != 0:
                e = [0] * N
                e[i] = 1
                terms[tuple(e)] = row[0]
        eq = _normalize_sign(Polynomial.from_dict(N, terms))
        return TransversalityReport(nvars=N, method="exact", equations=(eq,))

    s = sympy.Symbol("s")
    ell = sympy.symbols(f"l0:{N}")
    f = sympy.Integer(0)
    for i, row in enumerate(scene.param):
        comp = sum(
            sympy.Rational(c.numerator, c.denominator) * s**k
            for k, c in enumerate(row)
        )
        f += ell[i] * comp
    g = sympy.diff(f, s)
    res = sympy.expand(sympy.resultant(f, g, s))
    if res == 0:
        return TransversalityReport(
            nvars=N, method="exact", equations=(Polynomial.from_dict(N, {}),),
            whole_space=True,
        )
    deg = scene.degree()
    if deg >= 2:
        lead = sympy.expand(f.coeff(s, deg))
        quotient, remainder = sympy.div(res, lead, *ell)
        if remainder == 0 and quotient != 0:
            res = sympy.expand(quotient)
    poly = _sympy_to_polynomial(res, ell)
    # primitive part: divide by gcd of numerators over lcm of denominators
    nums = [c.numerator for _, c in poly.terms]
    dens = [c.denominator for _, c in poly.terms]
    g_num = 0
    for a in nums:
        g_num = math.gcd(g_num, a)
    l_den = 1
    for b in dens:
        l_den = l_den * b // math.gcd(l_den, b)
    if g_num:
        poly = poly.scale(Fraction(l_den, g_num))
    return TransversalityReport(
        nvars=N, method="exact", equations=(_normalize_sign(poly),)
    )


def hyperplane_tangency_sampled(
    pi_hat: Sequence[Polynomial],
    sample_budget: int,
    seed: int,
) -> TransversalityReport:
    """Sampling fallback for pole components of source dimension >= 2.

    At each sampled source point the hyperplanes killing both the image
    point and the image of the differential form an exact linear system;
    the cloud collects rational basis vectors of the solution spaces.
    Deterministic for a fixed seed.
    """
    if not pi_hat:
        return TransversalityReport(nvars=0, method="sampled", samples=())
    N = len(pi_hat)
    k = pi_hat[0].nvars
    if any(p.nvars != k for p in pi_hat):
        raise ValueError("component arity mismatch")
    if sample_budget < 1:
        raise BudgetExceeded("sample budget must be >= 1")
    rng = random.Random(seed)
    derivs = [[_partial(p, j) for j in range(k)] for p in pi_hat]
    cloud: list[tuple[Fraction, ...]] = []
    found = False
    for _ in range(sample_budget):
        pt = [Fraction(rng.randint(-9, 9), rng.choice([1, 2, 3])) for _ in range(k)]
        image = [p.eval(pt) for p in pi_hat]
        if all(x == 0 for x in image):
            continue
        rows = [image]
        for j in range(k):
            rows.append([derivs[i][j].eval(pt) for i in range(N)])
        sol = Subspace.span(N, rows).orthogonal_complement()
        if sol.dim == 0:
            continue
        found = True
        for vec in sol.rows:
            cloud.append(vec)
        # one random combination for cloud coverage
        combo = [Fraction(0)] * N
        for vec in sol.rows:
            c = Fraction(rng.randint(1, 5))
            combo = [a + c * b for a, b in zip(combo, vec)]
        if any(a != 0 for a in combo):
            cloud.append(tuple(combo))
    if not found:
        raise BudgetExceeded("no tangency samples found within budget")
    uniq = sorted(set(cloud))
    return TransversalityReport(nvars=N, method="sampled", samples=tuple(uniq))


def _partial(poly: Polynomial, j: int) -> Polynomial:
    terms = {}
    for exps, c in poly.terms:
        if exps[j] == 0:
            continue
        e = list(exps)
        e[j] -= 1
        e = tuple(e)
        terms[e] = terms.get(e, Fraction(0)) + c * exps[j]
    return Polynomial.from_dict(poly.nvars, terms)


def smooth_locus_membership(report: TransversalityReport, xi: Sequence) -> bool:
    """True when the transform is guaranteed smooth (locally constant) at xi.

    Exact mode: no tangency equation vanishes at xi.  Raises ZeroFrequency
    at the origin, which is never in the smooth locus's ambient W* - 0.
    """
    return report.u_membership(xi)
