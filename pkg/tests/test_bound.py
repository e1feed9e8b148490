from fractions import Fraction

import pytest

from padicft.bound import (
    CurveScene,
    ResolutionChart,
    build_wavefront_bound,
    hyperplane_tangency_exact,
    hyperplane_tangency_sampled,
    smooth_locus_membership,
)
from padicft.errors import (
    DegenerateParametrization,
    DegreeTooHigh,
    MalformedStratum,
    UnsupportedMap,
    ZeroFrequency,
)
from padicft.geometry import (
    Subspace,
    is_conic,
    is_homothety_stable,
    isotropic_check,
    membership,
)
from padicft.scenes import Polynomial

F = Fraction


def inverse_chart(q):
    return ResolutionChart(
        "inv", 1, (1,), (0,), (True,), y_coords=(0,) if q else ()
    )


def test_chart_validation():
    with pytest.raises(MalformedStratum):
        ResolutionChart("bad", 1, (0,), (0,), (True,))
    with pytest.raises(MalformedStratum):
        ResolutionChart("bad", 2, (1,), (0,), (True,))
    with pytest.raises(MalformedStratum):
        ResolutionChart("bad", 1, (1,), (0,), (True,), y_coords=(2,))


def test_build_inverse_model_point_base():
    # the model x -> 1/x over a point: zero section plus the fiber over 0
    L = build_wavefront_bound([inverse_chart(0)], d=1, q=0)
    assert len(L.components) == 2
    assert membership(L, [F(2)], [F(0)])      # zero section
    assert membership(L, [F(0)], [F(5)])      # full fiber over xi = 0
    assert not membership(L, [F(2)], [F(5)])


def test_build_inverse_model_chart_base():
    # keeping the chart coordinate: zero section, CN(divisor x W*),
    # CN(divisor x 0)
    L = build_wavefront_bound([inverse_chart(1)], d=1, q=1)
    assert len(L.components) == 3
    assert is_conic(L) and isotropic_check(L) and is_homothety_stable(L)


def test_build_no_divisor_chart():
    chart = ResolutionChart("flat", 1, (0,), (0,), (False,), y_coords=(0,))
    L = build_wavefront_bound([chart], d=1, q=1)
    # only the zero section survives
    assert len(L.components) == 1
    comp = L.components[0]
    assert comp.base_zero == frozenset() and comp.w_covector.is_zero()


def test_build_weight_divisor_only():
    # no poles: the divisor strata appear with full frequency fibers
    chart = ResolutionChart("wt", 1, (0,), (1,), (False,), y_coords=(0,))
    L = build_wavefront_bound([chart], d=1, q=1)
    assert len(L.components) == 2
    assert all(c.w_covector.is_zero() for c in L.components)


def test_build_empty_chart_list():
    L = build_wavefront_bound([], d=2, q=1)
    assert L.components == ()


def test_build_requires_y_projection():
    with pytest.raises(UnsupportedMap):
        build_wavefront_bound([inverse_chart(0)], d=1, q=1)


def test_build_d2_needs_direction():
    chart = ResolutionChart("pole2", 2, (1, 0), (0, 0), (True, False))
    with pytest.raises(MalformedStratum):
        build_wavefront_bound([chart], d=2, q=0)
    chart_ok = ResolutionChart(
        "pole2", 2, (1, 0), (0, 0), (True, False), w_direction=(F(1), F(2))
    )
    L = build_wavefront_bound([chart_ok], d=2, q=0)
    assert isotropic_check(L) and is_homothety_stable(L)
    # the pole stratum contributes the conormal of the orthogonal hyperplane
    assert any(
        c.w_stratum == Subspace.span(2, [[F(-2), F(1)]]) for c in L.components
    )


def test_build_matches_dual_side_formula():
    # the swap-and-project assembly must reproduce the directly written
    # dual-side critical locus: zero section, conormal of (divisor x W*),
    # conormal of (divisor x 0)
    from padicft.geometry import AmbientSpec, ConicSetDescriptor, conormal_of

    L = build_wavefront_bound([inverse_chart(1)], d=1, q=1)
    amb = AmbientSpec(1, 1, w_dual=True)
    expected = ConicSetDescriptor.make(
        amb,
        [
            conormal_of(amb, (), Subspace.full(1)),
            conormal_of(amb, (0,), Subspace.full(1)),
            conormal_of(amb, (0,), Subspace.zero(1)),
        ],
    )
    assert L == expected


def test_build_is_prime_free_and_deterministic():
    charts = [
        ResolutionChart("a", 2, (1, 1), (0, 1), (True, False), y_coords=(0, 1)),
        ResolutionChart("b", 2, (2, 0), (0, 0), (True, False), y_coords=(0, 1)),
    ]
    runs = [build_wavefront_bound(charts, d=1, q=2) for _ in range(4)]
    assert all(r == runs[0] for r in runs)


# ---------------------------------------------------------------------------
# tangency loci


def test_parabola_discriminant():
    rep = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1], [0, 0, 1]]))
    assert rep.method == "exact" and len(rep.equations) == 1
    eq = rep.equations[0]
    # l_1^2 - 4 l_0 l_2 up to a nonzero rational unit
    disc = Polynomial.from_dict(3, {(0, 2, 0): F(1), (1, 0, 1): F(-4)})
    ratio = None
    assert len(eq.terms) == len(disc.terms)
    for (e1, c1), (e2, c2) in zip(eq.terms, disc.terms):
        assert e1 == e2
        if ratio is None:
            ratio = c1 / c2
        assert c1 == ratio * c2
    assert ratio != 0


def test_line_locus():
    rep = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1]]))
    assert rep.equations[0].terms == (((0, 1), F(1)),)


def test_point_locus():
    rep = hyperplane_tangency_exact(CurveScene.make([[2], [3]]))
    eq = rep.equations[0]
    assert eq.eval([F(3), F(-2)]) == 0
    assert eq.eval([F(1), F(1)]) != 0


def test_degree_guards():
    with pytest.raises(DegreeTooHigh):
        hyperplane_tangency_exact(CurveScene.make([[1], [0] * 9 + [1]]))
    with pytest.raises(DegreeTooHigh):
        hyperplane_tangency_exact(CurveScene.make([[1]] * 5))


def test_zero_parametrization_rejected():
    with pytest.raises(DegenerateParametrization):
        CurveScene.make([[0], [0]])


def test_smooth_locus_membership_examples():
    rep = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1], [0, 0, 1]]))
    assert smooth_locus_membership(rep, [F(1), F(0), F(1)])
    assert not smooth_locus_membership(rep, [F(0), F(0), F(1)])
    with pytest.raises(ZeroFrequency):
        smooth_locus_membership(rep, [F(0), F(0), F(0)])
    # empty locus: always smooth
    empty = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1]]))
    assert smooth_locus_membership(empty, [F(1), F(2)])


def test_sampled_cross_validation():
    # pi(s, t) = (1 : s : s^2): cloud must satisfy the exact discriminant
    exact = hyperplane_tangency_exact(CurveScene.make([[1], [0, 1], [0, 0, 1]]))
    pi = [
        Polynomial.constant(2, 1),
        Polynomial.coordinate(2, 0),
        Polynomial.from_dict(2, {(2, 0): F(1)}),
    ]
    rep = hyperplane_tangency_sampled(pi, sample_budget=60, seed=4)
    assert rep.method == "sampled"
    assert rep.samples
    for pt in rep.samples:
        assert exact.equations[0].eval(list(pt)) == 0
    assert rep.u_membership([F(1), F(0), F(1)])


def test_sampled_deterministic():
    pi = [
        Polynomial.constant(2, 1),
        Polynomial.coordinate(2, 0),
        Polynomial.from_dict(2, {(2, 0): F(1)}),
    ]
    a = hyperplane_tangency_sampled(pi, sample_budget=30, seed=9)
    b = hyperplane_tangency_sampled(pi, sample_budget=30, seed=9)
    assert a.samples == b.samples


def test_sampled_constant_map():
    # constant map: every sampled point gives hyperplanes through the image
    pi = [Polynomial.constant(2, 2), Polynomial.constant(2, 3)]
    rep = hyperplane_tangency_sampled(pi, sample_budget=10, seed=1)
    for pt in rep.samples:
        assert 2 * pt[0] + 3 * pt[1] == 0


def test_sampled_empty_source():
    rep = hyperplane_tangency_sampled([], sample_budget=5, seed=0)
    assert rep.samples == ()


def test_poleless_scene_everywhere_smooth():
    # no pole components: the tangency locus is empty, the smooth locus is
    # all of W* - 0, and a constancy probe stabilizes at every tested xi
    from padicft import PrimeContext, ResidueCube
    from padicft.bound import TransversalityReport
    from padicft.scenes import FrequencyPoint, Polynomial, PolynomialScene
    from padicft.verify import local_constancy_probe

    empty = TransversalityReport(nvars=1, method="exact", equations=())
    assert smooth_locus_membership(empty, [F(5)])
    ctx = PrimeContext(3, max_level=8)
    scene = PolynomialScene(1, 1, (Polynomial.coordinate(1, 0, 2),), (0,))
    for m in (0, 1, 2):
        xi = FrequencyPoint.make([F(1, 3**m)])
        j = local_constancy_probe(ctx, scene, ResidueCube.zp(ctx, 1), xi, m + 2)
        assert j is not None
