#!/usr/bin/env python3
"""Benchmark the direct-phase enumeration kernel: numba JIT vs numpy.

Both paths emit identical packed keys (checked below), so the exact
results do not depend on which one runs; this script only measures time.
Set PADICFT_NO_NUMBA=1 to force the numpy fallback in normal use.
"""

import os
import time
from fractions import Fraction

import numpy as np


def build_problem(p=5, n=2, m=5):
    """A chunky phase enumeration: p^(n*m) residue vectors."""
    from padicft import FrequencyPoint, Polynomial, PolynomialScene, PrimeContext, ResidueCube
    from padicft.charsums import _phase_level, _phase_polynomial, _to_int_mod, _coordinate_candidates
    from padicft.padic import int_valuation

    ctx = PrimeContext(p, max_level=8)
    scene = PolynomialScene(
        n,
        2,
        (
            Polynomial.from_dict(n, {tuple(2 if i == 0 else 1 for i in range(n)): Fraction(1)}),
            Polynomial.from_dict(n, {tuple(0 if i == 0 else 3 for i in range(n)): Fraction(2)}),
        ),
        tuple(1 for _ in range(n)),
    )
    freq = FrequencyPoint.make([Fraction(1, p**m), Fraction(2, p ** (m - 1))])
    cube = ResidueCube.zp(ctx, n)
    phase = _phase_polynomial(scene, freq)
    lvl = _phase_level(ctx, phase)
    mod = p**lvl
    scale = Fraction(p) ** lvl
    coeffs = [_to_int_mod(c * scale, mod, p) for _, c in phase.terms]
    exps = [e for e, _ in phase.terms]
    cands = _coordinate_candidates(cube, (lvl,) * n)
    vals, avals, tails = [], [], []
    amax = 0
    for i, ys in enumerate(cands):
        vi = [y % mod for y in ys]
        ai = [0 if y == 0 else int_valuation(y, p) * scene.r[i] for y in ys]
        ti = [1 if y == 0 else 0 for y in ys]
        amax += max(ai)
        vals.append(vi)
        avals.append(ai)
        tails.append(ti)
    return coeffs, exps, vals, avals, tails, mod, amax + 1


def time_path(label, fn, args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        keys = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, keys


def main():
    from padicft import _kernels

    coeffs, exps, vals, avals, tails, mod, a_span = build_problem()
    total = 1
    for v in vals:
        total *= len(v)
    print(f"enumeration size: {total} residue vectors, phase modulus {mod}")
    print(f"numba available: {_kernels.HAS_NUMBA}")

    args = (coeffs, exps, vals, avals, tails, mod, a_span)

    os.environ["PADICFT_NO_NUMBA"] = "1"
    t_np, keys_np = time_path("numpy", _kernels.direct_keys, args)
    print(f"numpy fallback:  {t_np * 1e3:9.2f} ms")

    os.environ.pop("PADICFT_NO_NUMBA", None)
    if _kernels.HAS_NUMBA and _kernels.using_numba():
        _kernels.direct_keys(*args)  # JIT warmup
        t_nb, keys_nb = time_path("numba", _kernels.direct_keys, args)
        print(f"numba kernel:    {t_nb * 1e3:9.2f} ms   (speedup x{t_np / t_nb:.2f})")
        same = np.array_equal(np.sort(keys_np), np.sort(keys_nb))
        print(f"paths identical: {same}")
        if not same:
            raise SystemExit("kernel paths disagree")
    else:
        print("numba not active; fallback only")


if __name__ == "__main__":
    main()
