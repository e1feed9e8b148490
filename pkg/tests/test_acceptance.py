"""Acceptance gate: one test per criterion, every tolerance exact.

Each test prints a PASS line (visible with -s; under plain pytest the
test name itself is the per-criterion verdict line).  No criterion uses
floating point in a verdict; "equality" always means exact equality of
cyclotomic values, rationals, or canonical descriptors.
"""

import json
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from padicft import (
    CyclotomicValue,
    FrequencyPoint,
    MonomialScene,
    Polynomial,
    PolynomialScene,
    PrimeContext,
    ResidueCube,
    brute_force_ft,
    direct_ft,
)
from padicft.bound import CurveScene, ResolutionChart, build_wavefront_bound, hyperplane_tangency_exact
from padicft.charsums import _phase_level, _phase_polynomial
from padicft.geometry import (
    is_conic,
    is_homothety_stable,
    isotropic_check,
    pushforward_coordinate,
    symplectic_swap,
)
from padicft.scenefile import parse_scene_data
from padicft.verify import (
    ProbePlanEntry,
    homogeneity_suite,
    local_constancy_probe,
    wavefront_cover_check,
)

from test_charsums import _random_direct_instance
from test_geometry import random_descriptor

F = Fraction
PKG_ROOT = Path(__file__).resolve().parents[1]
SCENES = PKG_ROOT / "scenes"
GOLDEN = Path(__file__).resolve().parent / "golden"


def report(n, text):
    print(f"ACCEPTANCE {n:02d}: PASS -- {text}")


def power_scene(k):
    return PolynomialScene(1, 1, (Polynomial.coordinate(1, 0, k),), (0,))


def test_c01_oracle_equivalence():
    """>= 500 randomized direct-phase instances, exact oracle equality."""
    rng = random.Random(42)
    ctxs = {p: PrimeContext(p, max_level=8) for p in (2, 3, 5)}
    failures = 0
    total = 0
    for _ in range(500):
        p = rng.choice([2, 3, 5])
        scene, cube, freq = _random_direct_instance(rng, p)
        ctx = ctxs[p]
        a = direct_ft(ctx, scene, cube, freq)
        m = _phase_level(ctx, _phase_polynomial(scene, freq))
        K = m if rng.random() < 0.8 else m + 1
        b = brute_force_ft(ctx, scene, cube, freq, K)
        total += 1
        if a != b:
            failures += 1
    assert total >= 500 and failures == 0
    report(1, f"direct_ft == brute_force_ft on {total} instances, 0 failures")


def test_c02_character_sum_floor():
    """Haar integral of psi(xi y): 1 for v(xi) >= 0, 0 for v(xi) <= -1."""
    for p in (2, 3, 5, 7):
        ctx = PrimeContext(p, max_level=8)
        scene = PolynomialScene(1, 1, (Polynomial.coordinate(1, 0),), (0,))
        cube = ResidueCube.zp(ctx, 1)
        for v in range(0, 4):
            for u in (1, p - 1):
                xi = FrequencyPoint.make([F(u * p**v)])
                assert direct_ft(ctx, scene, cube, xi).as_rational() == 1
        for m in range(1, 7):
            for u in (1, max(1, p - 2)):
                if u % p == 0:
                    continue
                xi = FrequencyPoint.make([F(u, p**m)])
                assert direct_ft(ctx, scene, cube, xi).is_zero()
    report(2, "character-sum floor exact for p in {2,3,5,7}, m <= 6")


def _tate_stratum_oracle(ctx, r, xi, depth=20):
    """Independent valuation-stratum oracle with exact geometric tail."""
    p = ctx.p
    m = max(0, -int(ctx.valuation(xi)))
    total = CyclotomicValue.zero(ctx)
    for v in range(depth + 1):
        c = max(0, m - v)
        weight = F(1, p ** (v * (r + 1)))
        if c == 0:
            total = total + CyclotomicValue.from_rational(
                ctx, weight * (1 - F(1, p))
            )
            continue
        acc = CyclotomicValue.zero(ctx)
        for u in range(1, p**c):
            if u % p:
                acc = acc + ctx.psi(xi * p**v * u)
        total = total + acc.scale(weight * F(1, p**c))
    tail = F(1, p ** ((depth + 1) * (r + 1)))
    tail *= (1 - F(1, p)) / (1 - F(1, p ** (r + 1)))
    return total + CyclotomicValue.from_rational(ctx, tail)


def test_c03_tate_type_integral():
    """Weighted integrals match the depth-20 stratum oracle exactly."""
    for p in (2, 3, 5, 7):
        ctx = PrimeContext(p, max_level=8)
        cube = ResidueCube.zp(ctx, 1)
        for r in (0, 1, 2):
            scene = PolynomialScene(1, 1, (Polynomial.coordinate(1, 0),), (r,))
            for m in (1, 2, 3, 4):
                xi = F(1, p**m)
                got = direct_ft(ctx, scene, cube, FrequencyPoint.make([xi]))
                assert got == _tate_stratum_oracle(ctx, r, xi)
    report(3, "Tate-type integrals equal the independent stratum oracle")


def test_c04_gauss_sum_magnitude():
    """|transform of psi(xi y^2)|^2 = p^(-2k) at v(xi) = -2k, symbolically."""
    for p in (3, 5, 7):
        ctx = PrimeContext(p, max_level=8)
        cube = ResidueCube.zp(ctx, 1)
        for k in (1, 2):
            xi = FrequencyPoint.make([F(1, p ** (2 * k))])
            val = direct_ft(ctx, power_scene(2), cube, xi)
            mag = val * val.conjugate()
            assert mag.as_rational() == F(1, p ** (2 * k))
    report(4, "Gauss-sum squared modulus p^(-2k) via exact conjugation")


def test_c05_homogeneity_identity():
    """200 seeded torus-scaling trials per prime, exact equality."""
    scenes = [
        MonomialScene(1, (1,), (0,)),
        MonomialScene(2, (1, 1), (0, 1)),
        MonomialScene(2, (2, 0), (1, 2)),
    ]
    for p in (3, 5):
        ctx = PrimeContext(p, max_level=8)
        trials = 0
        for i, scene in enumerate(scenes):
            rep = homogeneity_suite(ctx, scene, trials=67, seed=1000 + i)
            assert rep.passed, rep.failures[:1]
            trials += rep.trials
        assert trials >= 200
    report(5, "homogeneity identity exact on 201 trials per p in {3,5}")


def test_c06_local_constancy_on_smooth_locus():
    """Squares and cubes: constancy at level <= m+2 on a 30-frequency grid."""
    ctx = PrimeContext(3, max_level=8)
    cube = ResidueCube.zp(ctx, 1)
    grid = []
    for m in range(0, 5):
        for u in (1, 2, 4, 5, 7, 8):
            grid.append((m, F(u, 3**m)))
    assert len(grid) == 30
    for scene in (power_scene(2), power_scene(3)):
        for m, xi in grid:
            j = local_constancy_probe(ctx, scene, cube, FrequencyPoint.make([xi]), m + 2)
            assert j is not None and j <= m + 2, (scene, xi, j)
    report(6, "local constancy stabilized at j <= m+2 on all 30 frequencies")


def _up_to_unit(eq, expect):
    if len(eq.terms) != len(expect.terms):
        return False
    ratio = None
    for (e1, c1), (e2, c2) in zip(eq.terms, expect.terms):
        if e1 != e2:
            return False
        if ratio is None:
            ratio = c1 / c2
        if c1 != ratio * c2:
            return False
    return ratio is not None and ratio != 0


def test_c07_tangency_locus_exactness():
    """Parabola -> discriminant, line -> l1, point -> <l, z>, up to units."""
    par = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1], [0, 0, 1]]))
    disc = Polynomial.from_dict(3, {(0, 2, 0): F(1), (1, 0, 1): F(-4)})
    assert _up_to_unit(par.equations[0], disc)
    line = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1]]))
    assert _up_to_unit(line.equations[0], Polynomial.from_dict(2, {(0, 1): F(1)}))
    point = hyperplane_tangency_exact(CurveScene.make([[2], [3]]))
    pairing = Polynomial.from_dict(2, {(1, 0): F(2), (0, 1): F(3)})
    assert _up_to_unit(point.equations[0], pairing)
    report(7, "tangency equations exact up to nonzero rational units")


def test_c08_wavefront_coverage():
    """Probe-singular directions land inside the assembled bound."""
    ctx = PrimeContext(3, max_level=8)
    sq_bound = build_wavefront_bound(
        [ResolutionChart("sq", 1, (0,), (0,), (False,))], d=1, q=0
    )
    sq = power_scene(2)
    plan = [
        ProbePlanEntry(
            "sq-critical", sq, ResidueCube.zp(ctx, 1), FrequencyPoint.make([1]), 6,
            base=(F(1),), covector=(F(0),),
        ),
        ProbePlanEntry(
            "sq-critical-neg", sq, ResidueCube.zp(ctx, 1), FrequencyPoint.make([-1]), 6,
            base=(F(-1),), covector=(F(0),),
        ),
        ProbePlanEntry(
            "sq-units", sq, ResidueCube.make(ctx, [1], 1), FrequencyPoint.make([1]), 6,
        ),
    ]
    rep = wavefront_cover_check(ctx, sq_bound, plan)
    assert rep.passed, rep.violations

    inv_bound = build_wavefront_bound(
        [ResolutionChart("inv", 1, (1,), (0,), (True,))], d=1, q=0
    )
    mono = MonomialScene(1, (1,), (0,))
    plan2 = [
        ProbePlanEntry(
            "inv-divisor", mono, ResidueCube.zp(ctx, 1), F(1), 5,
            base=(F(0),), covector=(F(1),),
        ),
        ProbePlanEntry(
            "inv-units", mono, ResidueCube.make(ctx, [2], 1), F(1), 5,
        ),
    ]
    rep2 = wavefront_cover_check(ctx, inv_bound, plan2)
    assert rep2.passed, rep2.violations
    report(8, "zero coverage violations on square and inverse-monomial scenes")


CHARTS_SCENE = {
    "format_version": 1,
    "max_level": 8,
    "scene": {
        "kind": "charts",
        "d": 1,
        "q": 1,
        "charts": [
            {
                "id": "a",
                "n": 2,
                "l": [1, 1],
                "r": [0, 1],
                "pole_flags": [True, False],
                "y_coords": [0],
            },
            {
                "id": "b",
                "n": 2,
                "l": [2, 0],
                "r": [0, 0],
                "pole_flags": [True, False],
                "y_coords": [1],
            },
        ],
    },
}


def test_c09_structural_bound_properties():
    """Bounds are conic, isotropic, homothety-stable, and prime-free."""
    descriptors = []
    for p in (2, 3, 5, 7):
        data = dict(CHARTS_SCENE, prime=p)
        sf = parse_scene_data(data)
        desc = build_wavefront_bound(sf.charts, d=sf.w_dim, q=sf.y_dim)
        assert is_conic(desc) and isotropic_check(desc) and is_homothety_stable(desc)
        descriptors.append(desc)
    assert all(d == descriptors[0] for d in descriptors)
    report(9, "bound descriptors equal across p in {2,3,5,7}")


def test_c10_swap_involution_and_pushforward():
    """100 random descriptors: swap is an involution; 100 pushforwards
    preserve the isotropic check."""
    rng = random.Random(77)
    for _ in range(100):
        desc = random_descriptor(rng, q=2, d=2)
        assert symplectic_swap(symplectic_swap(desc)) == desc
    rng2 = random.Random(78)
    for _ in range(100):
        desc = random_descriptor(rng2, q=3, d=2)
        keep = sorted(i for i in range(3) if rng2.random() < 0.6)
        assert isotropic_check(pushforward_coordinate(desc, keep))
    report(10, "swap involution and isotropy-preserving pushforward, 0 failures")


def _run_cli(*args):
    import os

    env = os.environ.copy()
    env["PYTHONPATH"] = os.pathsep.join(
        filter(None, [str(PKG_ROOT / "src"), env.get("PYTHONPATH", "")])
    )
    return subprocess.run(
        [sys.executable, "-m", "padicft", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_c11_cli_contract():
    """Golden byte equality and strict-parser negative tests."""
    cases = [
        (("bound", SCENES / "inverse_chart.toml"), GOLDEN / "bound_inverse_chart.json"),
        (("bound", SCENES / "square_chart.toml"), GOLDEN / "bound_square_chart.json"),
        (("pcrit", SCENES / "parabola.toml"), GOLDEN / "pcrit_parabola.json"),
    ]
    for args, golden in cases:
        res = _run_cli(*(str(a) for a in args))
        assert res.returncode == 0, res.stderr
        assert res.stdout == golden.read_text(), f"golden drift for {args}"

    scene_text = (SCENES / "inverse_monomial.toml").read_text()
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        bad_float = Path(tmp) / "float.toml"
        bad_float.write_text(scene_text.replace('"1/3"', "0.5"), encoding="utf-8")
        assert _run_cli("eval", str(bad_float)).returncode == 2
        bad_key = Path(tmp) / "key.toml"
        bad_key.write_text(scene_text + "\nunexpected = 1\n", encoding="utf-8")
        assert _run_cli("eval", str(bad_key)).returncode == 2
    report(11, "golden files byte-stable; float literals and unknown keys rejected")
