"""Exact localized Fourier transforms of algebraic measures as character sums.

The single primitive is "pair the transform with (indicator of a residue
cube, frequency point)".  Distributions are never materialized; every
operation returns an exact :class:`CyclotomicValue`.

Direct phase
    ``direct_ft`` integrates psi(<xi, phi(y)> + t*q(y)) * prod |y_i|^r_i
    over a cube.  Because phi and q have p-integral coefficients, the phase
    only depends on y mod p^m where m is the worst coefficient valuation of
    the affine phase, so the integral collapses to a finite sum over
    residue vectors -- the precision step that makes everything exact.
    Non-integral scenes must be rescaled by the caller (rescaling xi
    compensates).

Inverse phase
    ``inverse_ft`` integrates psi(xi * prod y_i^(-l_i)) * prod |y_i|^r_i,
    the generalized function realizing the transform of the inverse-
    monomial model.  Valuation strata y_i = p^(v_i)*u_i are split into a
    finite trivial-phase corner (closed-form weight tails), a finite band
    of honest unit sums, and a cofinite region whose strata vanish exactly
    by full character-sum cancellation (see ``unit_sum_vanishing_level``).

``brute_force_ft`` is the independent Riemann-sum oracle, and
``inverse_ft_oracle`` the independent truncated-stratum oracle; both stay
separate from the production paths they check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence

from . import _kernels
from .cubes import ResidueCube
from .cyclotomic import CyclotomicValue
from .errors import BudgetExceeded, Divergent, DivisorTouched, LevelExceeded
from .padic import PrimeContext, Rational, int_valuation
from .scenes import FrequencyPoint, MonomialScene, Polynomial, PolynomialScene

MAX_ENUMERATION = 4_000_000


class _Accumulator:
    """Raw character-sum accumulator: one dict, one final canonicalization.

    Entries are (conductor level, index) pairs with rational coefficients;
    lifting to the common level happens once at the end, which keeps long
    accumulation loops linear.
    """

    def __init__(self, ctx: PrimeContext):
        self.ctx = ctx
        self.entries: dict[tuple[int, int], Fraction] = {}

    def add_root(self, level: int, index: int, coeff: Fraction) -> None:
        key = (level, index)
        self.entries[key] = self.entries.get(key, Fraction(0)) + coeff

    def to_value(self) -> CyclotomicValue:
        if not self.entries:
            return CyclotomicValue.zero(self.ctx)
        p = self.ctx.p
        level = max(m for m, _ in self.entries)
        raw: dict[int, Fraction] = {}
        for (m, j), c in self.entries.items():
            idx = j * p ** (level - m)
            raw[idx] = raw.get(idx, Fraction(0)) + c
        return CyclotomicValue(self.ctx, level, raw)


# ---------------------------------------------------------------------------
# weight integrals


def _tail_weight(p: int, k: int, r: int) -> Fraction:
    """Exact integral of |y|^r over the zero class {v(y) >= k}."""
    if r <= -1:
        raise Divergent(f"weight |y|^{r} diverges on the divisor")
    pk1 = Fraction(1, p)
    return (
        Fraction(1, p ** (k * (r + 1)))
        * (1 - pk1)
        / (1 - Fraction(1, p ** (r + 1)))
    )


def weight_cube_integral(cube: ResidueCube, r: Sequence[int]) -> Fraction:
    """Exact integral of prod |y_i|^(r_i) over the cube.

    Coordinates whose class misses 0 contribute p^(-k) * |base|^r; zero
    classes use the closed-form geometric tail.  Divergent raises for
    r_i <= -1 with 0 in the slice.
    """
    if len(r) != cube.dim:
        raise ValueError("weight exponent arity mismatch")
    p = cube.context.p
    total = Fraction(1)
    for b, k, ri in zip(cube.base, cube.levels, r):
        if k > 0 and b % p**k != 0:
            v = int_valuation(b, p)
            total *= Fraction(1, p**k) * Fraction(p) ** (-v * ri)
        else:
            total *= _tail_weight(p, k, ri)
    return total


# ---------------------------------------------------------------------------
# shared helpers


def _to_int_mod(x: Fraction, mod: int, p: int) -> int:
    """Residue of a p-integral rational modulo p^level (mod = p^level)."""
    if mod == 1:
        return 0
    den = x.denominator
    if den % p == 0:
        raise ValueError("rational is not p-integral")
    return (x.numerator * pow(den, -1, mod)) % mod


def _validate_frequency(ctx: PrimeContext, freq: FrequencyPoint) -> None:
    for x in freq.xi:
        den = x.denominator
        while den % ctx.p == 0:
            den //= ctx.p
        if den != 1:
            raise ValueError("frequency coordinates must lie in Z[1/p]")
    if freq.twist_scale is not None:
        den = freq.twist_scale.denominator
        while den % ctx.p == 0:
            den //= ctx.p
        if den != 1:
            raise ValueError("twist scale must lie in Z[1/p]")


def _phase_polynomial(scene: PolynomialScene, freq: FrequencyPoint) -> Polynomial:
    if freq.d != scene.d:
        raise ValueError("frequency dimension does not match scene")
    total = Polynomial.from_dict(scene.n, {})
    for k in range(scene.d):
        if freq.xi[k] != 0:
            total = total.add(scene.phi[k].scale(freq.xi[k]))
    if scene.twist is not None:
        t = Fraction(1) if freq.twist_scale is None else freq.twist_scale
        if t != 0:
            total = total.add(scene.twist.scale(t))
    return total


def _phase_level(ctx: PrimeContext, phase: Polynomial) -> int:
    mv = phase.min_coeff_valuation(ctx.p)
    m = 0 if mv is None else max(0, -mv)
    if m > ctx.max_level:
        raise LevelExceeded(f"phase needs conductor p^{m} > p^{ctx.max_level}")
    return m


def _coordinate_candidates(cube: ResidueCube, enum_levels: Sequence[int]):
    """Residue representatives per coordinate at the enumeration levels."""
    p = cube.context.p
    out = []
    for b, k, K in zip(cube.base, cube.levels, enum_levels):
        step = p**k
        out.append([b + step * t for t in range(p ** (K - k))])
    return out


# ---------------------------------------------------------------------------
# direct phase


def direct_ft(
    ctx: PrimeContext,
    scene: PolynomialScene,
    cube: ResidueCube,
    freq: FrequencyPoint,
) -> CyclotomicValue:
    """Exact localized Fourier transform of a direct-phase scene."""
    if cube.dim != scene.n:
        raise ValueError("cube dimension does not match scene")
    scene.check_p_integral(ctx)
    _validate_frequency(ctx, freq)
    phase = _phase_polynomial(scene, freq)
    m = _phase_level(ctx, phase)
    return _direct_sum(ctx, scene, cube, phase, m, enum_level=m)


def _direct_sum(
    ctx: PrimeContext,
    scene: PolynomialScene,
    cube: ResidueCube,
    phase: Polynomial,
    m: int,
    enum_level: int,
) -> CyclotomicValue:
    p = ctx.p
    levels = tuple(max(enum_level, k) for k in cube.levels)
    npoints = p ** sum(K - k for K, k in zip(levels, cube.levels))
    if npoints > MAX_ENUMERATION:
        raise BudgetExceeded(f"enumeration of {npoints} residue vectors refused")
    mod = p**m if m > 0 else 1
    pm_scale = Fraction(p) ** m
    coeffs = []
    exps = []
    for e, c in phase.terms:
        coeffs.append(_to_int_mod(c * pm_scale, mod, p))
        exps.append(e)
    if not coeffs:
        coeffs, exps = [0], [(0,) * scene.n]

    cands = _coordinate_candidates(cube, levels)
    vals, avals, tails = [], [], []
    max_a = 0
    for i, ys in enumerate(cands):
        vi, ai, ti = [], [], []
        for y in ys:
            vi.append(y % mod)
            if y == 0:
                ai.append(0)
                ti.append(1)
            else:
                ai.append(int_valuation(y, p) * scene.r[i])
                ti.append(0)
        max_a += max(ai) if ai else 0
        vals.append(vi)
        avals.append(ai)
        tails.append(ti)
    a_span = max_a + 1

    keys = _kernels.direct_keys(coeffs, exps, vals, avals, tails, mod, a_span)
    pairs = _kernels.aggregate_keys(keys)

    cell = [Fraction(1, p**K) for K in levels]
    tail_int = [_tail_weight(p, K, ri) for K, ri in zip(levels, scene.r)]
    raw: dict[int, Fraction] = {}
    for key, count in pairs:
        j = key % mod
        rest = key // mod
        a = rest % a_span
        mask = rest // a_span
        w = Fraction(count, p**a)
        for i in range(scene.n):
            w *= tail_int[i] if (mask >> i) & 1 else cell[i]
        raw[j] = raw.get(j, Fraction(0)) + w
    return CyclotomicValue(ctx, m, raw)


# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_ft(
    ctx: PrimeContext,
    scene,
    cube: ResidueCube,
    freq,
    K: int,
) -> CyclotomicValue:
    """Plain Riemann sum at level K.  Independent oracle path.

    Direct phase: exact for K >= phase level (weights use exact one-dim
    cell integrals, so divisor cells carry their true mass).  Inverse
    phase: the cube must avoid the divisor to depth K.
    """
    if isinstance(scene, PolynomialScene):
        return _brute_direct(ctx, scene, cube, freq, K)
    if isinstance(scene, MonomialScene):
        return _brute_inverse(ctx, scene, cube, freq, K)
    raise TypeError("unknown scene type")


def _brute_direct(ctx, scene, cube, freq, K):
    if cube.dim != scene.n:
        raise ValueError("cube dimension does not match scene")
    scene.check_p_integral(ctx)
    _validate_frequency(ctx, freq)
    p = ctx.p
    phase = _phase_polynomial(scene, freq)
    m = _phase_level(ctx, phase)
    if K < m:
        raise ValueError(f"oracle level K={K} below phase level m={m}")
    levels = tuple(max(K, k) for k in cube.levels)
    npoints = p ** sum(Ki - k for Ki, k in zip(levels, cube.levels))
    if npoints > MAX_ENUMERATION:
        raise BudgetExceeded(f"enumeration of {npoints} residue vectors refused")
    mod = p**m if m > 0 else 1
    pm_scale = Fraction(p) ** m
    terms = [(e, _to_int_mod(c * pm_scale, mod, p)) for e, c in phase.terms]
    cands = _coordinate_candidates(cube, levels)
    raw: dict[int, Fraction] = {}
    for y in itertools.product(*cands):
        j = 0
        for e, c in terms:
            term = c
            for yi, ei in zip(y, e):
                for _ in range(ei):
                    term = (term * yi) % mod
            j = (j + term) % mod
        w = Fraction(1)
        for yi, Ki, ri in zip(y, levels, scene.r):
            if yi == 0:
                w *= _tail_weight(p, Ki, ri)
            else:
                w *= Fraction(1, p**Ki) * Fraction(p) ** (-int_valuation(yi, p) * ri)
        raw[j] = raw.get(j, Fraction(0)) + w
    return CyclotomicValue(ctx, m, raw)


def _brute_inverse(ctx, scene, cube, xi, K):
    if cube.dim != scene.n:
        raise ValueError("cube dimension does not match scene")
    p = ctx.p
    if K < max(cube.levels, default=0):
        raise ValueError("oracle level K below cube level")
    for b, k in zip(cube.base, cube.levels):
        if k == 0 or b % p ** min(k, K) == 0:
            raise DivisorTouched(
                "inverse-phase Riemann sum over a cube meeting the divisor"
            )
    xi = Fraction(xi)
    npoints = p ** sum(K - k for k in cube.levels)
    if npoints > MAX_ENUMERATION:
        raise BudgetExceeded(f"enumeration of {npoints} residue vectors refused")
    cands = _coordinate_candidates(cube, (K,) * scene.n)
    acc = _Accumulator(ctx)
    cell = Fraction(1, p ** (K * scene.n))
    for y in itertools.product(*cands):
        if any(yi == 0 or int_valuation(yi, p) >= K for yi in y):
            raise DivisorTouched("representative touches the divisor")
        arg = xi
        w = cell
        for yi, li, ri in zip(y, scene.l, scene.r):
            if li:
                arg *= Fraction(1, yi**li)
            if ri:
                w *= Fraction(p) ** (-int_valuation(yi, p) * ri)
        mm, j = ctx.fractional_index(arg)
        if mm > ctx.max_level:
            raise LevelExceeded("Riemann-sum phase exceeds max_level")
        acc.add_root(mm, j, w)
    return acc.to_value()


# ---------------------------------------------------------------------------
# inverse phase, stratified exact evaluation


def unit_sum_vanishing_level(p: int, l: int) -> int:
    """Least c* with sum_{u unit mod p^c} zeta^(A u^l) = 0 for all c >= c*.

    With e = v_p(l): 2e+2 for odd p, max(2e+2, e+3) for p = 2.  Writing
    u = w + p^(c-1-e) s, the l-th power linearizes mod p^c and the inner
    s-sum is a full nontrivial character sum over Z/p.
    """
    if l <= 0:
        raise ValueError("vanishing level needs a pole exponent l >= 1")
    e = int_valuation(l, p)
    if p == 2:
        return max(2 * e + 2, e + 3)
    return 2 * e + 2


def _units_in_class(p: int, c: int, ucls: int, kmod: int):
    """Units mod p^c congruent to ucls mod p^min(c,kmod), with measures.

    Returns (reps, per_rep_measure_exponent_base) where each rep carries
    measure p^(-meas_exp) inside a class of total measure p^(-kmod).
    """
    if c <= kmod:
        # any representative of the class works: the phase is determined
        # mod p^c and the weight does not depend on the unit part
        return [ucls % p**c if c > 0 else ucls], kmod
    reps = [ucls + p**kmod * t for t in range(p ** (c - kmod))]
    return reps, c


def inverse_ft(
    ctx: PrimeContext,
    scene: MonomialScene,
    cube: ResidueCube,
    xi: Rational,
) -> CyclotomicValue:
    """Exact localized transform of the inverse-monomial model.

    Stratifies y_i = p^(v_i) u_i.  The phase psi(xi * prod y_i^(-l_i)) has
    conductor max(0, m0 + sum l_i v_i) on a stratum, m0 = -v(xi) plus the
    fixed-coordinate pole contribution, so only a bounded corner (trivial
    phase) and a bounded band (conductor below the vanishing threshold)
    contribute; everything deeper cancels exactly.
    """
    if cube.dim != scene.n:
        raise ValueError("cube dimension does not match scene")
    p = ctx.p
    xi = Fraction(xi)
    if xi == 0:
        return CyclotomicValue.from_rational(ctx, weight_cube_integral(cube, scene.r))
    m = -int(ctx.valuation(xi))
    if m > ctx.max_level:
        raise LevelExceeded(f"frequency needs conductor p^{m} > p^{ctx.max_level}")

    fixed = []  # (i, b_i, ucls_i, kmod_i)
    fplus = []  # (i, k_i)
    w0 = Fraction(1)
    for i in range(scene.n):
        b, k = cube.base[i], cube.levels[i]
        if k > 0 and b % p**k != 0:
            bv = int_valuation(b, p)
            fixed.append((i, bv, b // p**bv, k - bv))
        elif scene.l[i] > 0:
            fplus.append((i, k))
        else:
            w0 *= _tail_weight(p, k, scene.r[i])

    m0 = m + sum(scene.l[i] * bv for i, bv, _, _ in fixed)
    fixed_weight = Fraction(1)
    for i, bv, _, _ in fixed:
        fixed_weight *= Fraction(p) ** (-bv * scene.r[i])
    fixed_triv = Fraction(1)
    for _i, bv, _u, kmod in fixed:
        fixed_triv *= Fraction(1, p ** (bv + kmod))

    def stratum_value(c: int, fplus_vals: dict[int, int]) -> CyclotomicValue:
        """Unit sum over one stratum at conductor c (> 0)."""
        if c > ctx.max_level:
            raise LevelExceeded(
                f"stratum needs conductor p^{c} > p^{ctx.max_level}"
            )
        coords = []  # (i, v_i, reps, measure_exp)
        for i, bv, ucls, kmod in fixed:
            reps, mexp = _units_in_class(p, c, ucls, kmod)
            coords.append((i, bv, reps, bv + mexp))
        for i, _k in fplus:
            v = fplus_vals[i]
            reps = [u for u in range(1, p**c) if u % p != 0]
            coords.append((i, v, reps, v + c))
        npts = 1
        for _, _, reps, _ in coords:
            npts *= len(reps)
        if npts > MAX_ENUMERATION:
            raise BudgetExceeded(f"stratum enumeration of {npts} units refused")
        acc: dict[int, Fraction] = {}
        base_w = Fraction(1)
        for i, v, _, mexp in coords:
            base_w *= Fraction(p) ** (-v * scene.r[i]) * Fraction(1, p**mexp)
        for combo in itertools.product(*(reps for _, _, reps, _ in coords)):
            arg = xi
            for (i, v, _, _), u in zip(coords, combo):
                if scene.l[i]:
                    arg *= Fraction(1, (p**v * u) ** scene.l[i])
            mm, j = ctx.fractional_index(arg)
            if mm > ctx.max_level:
                raise LevelExceeded("stratum phase exceeds max_level")
            shift = p ** (c - mm) if mm < c else 1
            acc[j * shift % (p**c)] = acc.get(j * shift % (p**c), Fraction(0)) + base_w
        return CyclotomicValue(ctx, c, acc)

    if not fplus:
        c = max(0, m0)
        if c == 0:
            return CyclotomicValue.from_rational(ctx, w0 * fixed_weight * fixed_triv)
        return stratum_value(c, {}).scale(w0)

    # free pole coordinates: corner + band over valuation offsets w_i >= 0
    ls = [scene.l[i] for i, _ in fplus]
    ks = [k for _, k in fplus]
    base_shift = sum(li * ki for li, ki in zip(ls, ks))
    corner_bound = -m0 - base_shift  # strata with sum l_i w_i <= this are trivial
    cstar = min(unit_sum_vanishing_level(p, li) for li in ls)
    band_hi = cstar - m0 - base_shift  # sum l_i w_i < this is the honest band

    total = CyclotomicValue.zero(ctx)

    def stratum_weight(ws) -> Fraction:
        w = Fraction(1)
        for (i, k), wi in zip(fplus, ws):
            v = k + wi
            w *= (1 - Fraction(1, p)) * Fraction(p) ** (-v * (1 + scene.r[i]))
        return w

    def enum_offsets(bound):
        """All nonnegative offset vectors with sum l_i w_i <= bound."""
        if bound < 0:
            return
        def rec(idx, left, acc):
            if idx == len(ls):
                yield tuple(acc)
                return
            for wi in range(left // ls[idx] + 1):
                acc.append(wi)
                yield from rec(idx + 1, left - ls[idx] * wi, acc)
                acc.pop()
        yield from rec(0, bound, [])

    corner = Fraction(0)
    for ws in enum_offsets(corner_bound):
        corner += stratum_weight(ws)
    if corner:
        total = total + CyclotomicValue.from_rational(
            ctx, corner * fixed_triv * fixed_weight
        )

    for ws in enum_offsets(band_hi - 1):
        s = sum(li * wi for li, wi in zip(ls, ws))
        c = m0 + base_shift + s
        if c <= 0:
            continue  # trivial corner, handled above
        fvals = {i: k + wi for (i, k), wi in zip(fplus, ws)}
        total = total + stratum_value(c, fvals)

    return total.scale(w0)


def inverse_ft_oracle(
    ctx: PrimeContext,
    scene: MonomialScene,
    cube: ResidueCube,
    xi: Rational,
    depth: int,
    freq_factors: Optional[Sequence[Rational]] = None,
) -> CyclotomicValue:
    """Independent truncated-stratum oracle for the inverse model.

    Enumerates every valuation vector with offsets <= depth and sums each
    stratum by direct unit enumeration at its own conductor; weight tails
    for poleless coordinates are closed-form.  When ``freq_factors`` is
    given, the phase is evaluated as the product of one character per
    factor (the factors must sum to xi), exercising multiplicativity.
    """
    if cube.dim != scene.n:
        raise ValueError("cube dimension does not match scene")
    p = ctx.p
    xi = Fraction(xi)
    factors = (
        [Fraction(f) for f in freq_factors] if freq_factors is not None else [xi]
    )
    if sum(factors, Fraction(0)) != xi:
        raise ValueError("phase factors must sum to the frequency")
    if xi == 0 and all(f == 0 for f in factors):
        return CyclotomicValue.from_rational(ctx, weight_cube_integral(cube, scene.r))
    # deep strata need conductors beyond the caller's cap; the oracle works
    # in a widened context (values canonicalize back down, and equality of
    # cyclotomic values does not depend on max_level)
    worst = max(
        (0 if f == 0 else -int(ctx.valuation(f))) for f in factors
    ) + sum(
        li * (ki + depth) for li, ki in zip(scene.l, cube.levels)
    )
    if worst > ctx.max_level:
        ctx = PrimeContext(p, max_level=worst)

    w0 = Fraction(1)
    varying = []  # (i, is_free, fixed_v or None, ucls, kmod, k)
    for i in range(scene.n):
        b, k = cube.base[i], cube.levels[i]
        if k > 0 and b % p**k != 0:
            bv = int_valuation(b, p)
            varying.append((i, False, bv, b // p**bv, k - bv))
        elif scene.l[i] > 0:
            varying.append((i, True, k, 0, 0))
        else:
            w0 *= _tail_weight(p, k, scene.r[i])

    free_idx = [t for t in varying if t[1]]
    acc = _Accumulator(ctx)
    offsets_ranges = [range(depth + 1) for _ in free_idx]
    for offs in itertools.product(*offsets_ranges):
        vmap = {}
        for (i, _, k, _, _), w in zip(free_idx, offs):
            vmap[i] = k + w
        # conductor of the phase on this stratum
        pole = sum(
            scene.l[i] * (vmap[i] if isfree else bv)
            for i, isfree, bv, _, _ in varying
        )
        margs = [ctx.valuation(f) - pole if f != 0 else None for f in factors]
        c = max(
            [0] + [int(-va) for va in margs if va is not None and va < 0]
        )
        coords = []
        for i, isfree, bv, ucls, kmod in varying:
            if isfree:
                v = vmap[i]
                reps = [u for u in range(1, p**c) if u % p != 0] if c > 0 else [1]
                mexp = v + c if c > 0 else v
                dens = (1 - Fraction(1, p)) if c == 0 else Fraction(1)
                coords.append((i, v, reps, mexp, dens))
            else:
                reps, mexp0 = _units_in_class(p, c, ucls, kmod)
                coords.append((i, bv, reps, bv + mexp0, Fraction(1)))
        npts = 1
        for _, _, reps, _, _ in coords:
            npts *= len(reps)
        if npts > MAX_ENUMERATION:
            raise BudgetExceeded("oracle stratum enumeration refused")
        base_w = Fraction(1)
        for i, v, _, mexp, dens in coords:
            base_w *= Fraction(p) ** (-v * scene.r[i]) * Fraction(1, p**mexp) * dens
        for combo in itertools.product(*(reps for _, _, reps, _, _ in coords)):
            mono = Fraction(1)
            for (i, v, _, _, _), u in zip(coords, combo):
                if scene.l[i]:
                    mono *= Fraction(1, (p**v * u) ** scene.l[i])
            # one character per factor; the root-of-unity indices add at
            # the common conductor, which is exactly psi-multiplicativity
            lvl, idx = 0, 0
            for f in factors:
                if f != 0:
                    mm, j = ctx.fractional_index(f * mono)
                    lvl2 = max(lvl, mm)
                    idx = idx * p ** (lvl2 - lvl) + j * p ** (lvl2 - mm)
                    lvl = lvl2
            acc.add_root(lvl, idx % p**lvl if lvl else 0, base_w)
    return acc.to_value().scale(w0)


# ---------------------------------------------------------------------------
# torus scaling


def scaled_eval(
    ctx: PrimeContext,
    scene: MonomialScene,
    alpha: Sequence[Rational],
    cube: ResidueCube,
    xi: Rational,
) -> CyclotomicValue:
    """Evaluate the transform of the torus-transported data.

    Transport: cube -> alpha * cube, frequency -> xi * prod alpha_i^(l_i).
    The homogeneity identity then reads

        scaled_eval(scene, alpha, cube, xi)
            = prod |alpha_i|^(1 + r_i) * inverse_ft(scene, cube, xi),

    exactly, which is what the verification suite asserts.
    """
    alpha = [Fraction(a) for a in alpha]
    if len(alpha) != scene.n:
        raise ValueError("alpha arity mismatch")
    if any(a == 0 for a in alpha):
        raise ValueError("torus scaling requires nonzero alpha")
    p = ctx.p
    new_base, new_levels = [], []
    for a, b, k in zip(alpha, cube.base, cube.levels):
        va = int(ctx.valuation(a))
        nk = k + va
        if nk < 0:
            raise ValueError("transported cube leaves Z_p^n")
        nb = a * b
        if nb != 0 and ctx.valuation(nb) < 0:
            raise ValueError("transported cube base leaves Z_p")
        new_levels.append(nk)
        new_base.append(_to_int_mod(nb, p**nk, p) if nk > 0 else 0)
    new_xi = Fraction(xi)
    for a, li in zip(alpha, scene.l):
        new_xi *= a**li
    return inverse_ft(
        ctx, scene, ResidueCube(ctx, tuple(new_base), tuple(new_levels)), new_xi
    )
