"""Exact computation with Fourier transforms of p-adic algebraic measures.

Character sums take exact values in cyclotomic fields Q(zeta_{p^m});
localized transforms are evaluated against residue cubes; conic isotropic
subsets of cotangent bundles are manipulated combinatorially; and the
explicit wave-front bound, tangency loci, and smoothness probes tie the
two sides together.
"""

from .padic import INFINITY, PAdicScalar, PrimeContext, abs_norm, valuation
from .cyclotomic import (
    CyclotomicValue,
    cyclo_add,
    cyclo_eq,
    cyclo_scale,
    cyclo_to_complex,
)
from .cubes import ResidueCube
from .scenes import FrequencyPoint, MonomialScene, Polynomial, PolynomialScene
from .charsums import (
    brute_force_ft,
    direct_ft,
    inverse_ft,
    inverse_ft_oracle,
    scaled_eval,
    unit_sum_vanishing_level,
    weight_cube_integral,
)
from .geometry import (
    AmbientSpec,
    ConicSetDescriptor,
    ConormalComponent,
    Subspace,
    conormal_of,
    critical_locus_of_strata,
    descriptor_from_dict,
    descriptor_to_dict,
    is_conic,
    is_homothety_stable,
    isotropic_check,
    membership,
    pushforward_coordinate,
    symplectic_swap,
)
from .bound import (
    CurveScene,
    ResolutionChart,
    TransversalityReport,
    build_wavefront_bound,
    hyperplane_tangency_exact,
    hyperplane_tangency_sampled,
    smooth_locus_membership,
)
from .verify import (
    CoverReport,
    ProbePlanEntry,
    ProbeReport,
    SuiteReport,
    homogeneity_suite,
    local_constancy_probe,
    reduction_identity_check,
    smoothness_probe,
    wavefront_cover_check,
)

__version__ = "0.1.0"
