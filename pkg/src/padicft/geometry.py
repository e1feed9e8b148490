"""Combinatorial calculus of conic subsets of cotangent bundles.

A described set lives in T*(Y x W) (or T*(Y x W*)) with Y a coordinate
chart of dimension q and W a d-dimensional vector space.  It is a finite
union of conormal-type components: each component is the product of

* a base stratum  {y_i = 0 for i in base_zero} x E,  E a linear subspace
  of the W-block (full fiber, zero section, or an explicit span), and
* a covector fiber  span{dy_i : i in covector_support} x E',

with E' = orthogonal complement of E for honest conormal bundles.  The
class is closed under the operations needed here: the symplectic swap
CN_E^(YxW) = CN_(E-perp)^(YxW*) under (w, phi) -> (phi, -w), and exact
pushforward along coordinate projections.  Components store both sides so
that corrupted (non-Lagrangian) data is representable and detectable by
``isotropic_check``.

Strata are taken closed ({y_S = 0} with no inequations): unions of such
conormals are what every bound constructed downstream looks like, and
membership against the closed version is the conservative choice for an
upper bound on a wave front set.

Subspaces are kept in reduced row echelon form, so descriptor equality is
structural; components are sorted and deduplicated, making equality
canonical across runs and primes (the calculus never consumes a prime).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, MalformedStratum, UnsupportedMap

Vector = tuple[Fraction, ...]


def _rref(rows: Iterable[Sequence[Fraction]], width: int) -> tuple[Vector, ...]:
    mat = [list(map(Fraction, r)) for r in rows]
    for r in mat:
        if len(r) != width:
            raise DimensionMismatch("vector width mismatch")
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in mat:
        row = row[:]
        for prow, pcol in zip(out, pivots):
            if row[pcol] != 0:
                f = row[pcol]
                row = [a - f * b for a, b in zip(row, prow)]
        lead = next((i for i, a in enumerate(row) if a != 0), None)
        if lead is None:
            continue
        inv = row[lead]
        row = [a / inv for a in row]
        for prow, pcol in zip(out, pivots):
            if prow[lead] != 0:
                f = prow[lead]
                prow[:] = [a - f * b for a, b in zip(prow, row)]
        out.append(row)
        pivots.append(lead)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return tuple(tuple(out[i]) for i in order)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^d in reduced row echelon form."""

    d: int
    rows: tuple[Vector, ...]

    @classmethod
    def span(cls, d: int, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        return cls(d, _rref(vectors, d))

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "Subspace":
        basis = []
        for i in range(d):
            v = [Fraction(0)] * d
            v[i] = Fraction(1)
            basis.append(v)
        return cls(d, tuple(tuple(v) for v in basis))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_full(self) -> bool:
        return self.dim == self.d

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains_vector(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.d:
            raise DimensionMismatch("vector width mismatch")
        residual = list(map(Fraction, v))
        for row in self.rows:
            lead = next(i for i, a in enumerate(row) if a != 0)
            if residual[lead] != 0:
                f = residual[lead]
                residual = [a - f * b for a, b in zip(residual, row)]
        return all(a == 0 for a in residual)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def orthogonal_complement(self) -> "Subspace":
        """Annihilator under the standard pairing of Q^d with its dual."""
        if self.dim == 0:
            return Subspace.full(self.d)
        pivots = [next(i for i, a in enumerate(row) if a != 0) for row in self.rows]
        free = [i for i in range(self.d) if i not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.d
            v[f] = Fraction(1)
            for row, piv in zip(self.rows, pivots):
                v[piv] = -row[f]
            basis.append(v)
        return Subspace.span(self.d, basis)

    def sort_key(self):
        return (self.dim, self.rows)


@dataclass(frozen=True)
class AmbientSpec:
    """Base space Y x W (w_dual False) or Y x W* (w_dual True)."""

    y_dim: int
    w_dim: int
    w_dual: bool = False

    def __post_init__(self) -> None:
        if self.y_dim < 0 or self.w_dim < 0:
            raise ValueError("dimensions must be >= 0")

    @property
    def base_dim(self) -> int:
        return self.y_dim + self.w_dim


@dataclass(frozen=True)
class ConormalComponent:
    """One conormal-type component; see the module docstring."""

    base_zero: frozenset[int]
    w_stratum: Subspace
    covector_support: frozenset[int]
    w_covector: Subspace

    def sort_key(self):
        return (
            tuple(sorted(self.base_zero)),
            self.w_stratum.sort_key(),
            tuple(sorted(self.covector_support)),
            self.w_covector.sort_key(),
        )

    def contained_in(self, other: "ConormalComponent") -> bool:
        return (
            self.base_zero >= other.base_zero
            and other.w_stratum.contains(self.w_stratum)
            and self.covector_support <= other.covector_support
            and other.w_covector.contains(self.w_covector)
        )


def conormal_of(ambient: AmbientSpec, zero_set: Iterable[int], w_rule: Subspace) -> ConormalComponent:
    """The conormal bundle of {y_i = 0, i in zero_set} x E in the ambient."""
    s = frozenset(zero_set)
    if any(i < 0 or i >= ambient.y_dim for i in s):
        raise MalformedStratum("stratum index outside the Y-block")
    if w_rule.d != ambient.w_dim:
        raise MalformedStratum("W-rule dimension mismatch")
    return ConormalComponent(s, w_rule, s, w_rule.orthogonal_complement())


@dataclass(frozen=True)
class ConicSetDescriptor:
    ambient: AmbientSpec
    components: tuple[ConormalComponent, ...]

    @classmethod
    def make(
        cls, ambient: AmbientSpec, components: Iterable[ConormalComponent]
    ) -> "ConicSetDescriptor":
        comps = list(components)
        for c in comps:
            if c.w_stratum.d != ambient.w_dim or c.w_covector.d != ambient.w_dim:
                raise MalformedStratum("component does not fit ambient")
            if any(i >= ambient.y_dim for i in c.base_zero | c.covector_support):
                raise MalformedStratum("component index outside the Y-block")
        kept: list[ConormalComponent] = []
        for c in sorted(comps, key=ConormalComponent.sort_key):
            if any(c.contained_in(k) for k in kept):
                continue
            kept = [k for k in kept if not k.contained_in(c)]
            kept.append(c)
        kept.sort(key=ConormalComponent.sort_key)
        return cls(ambient, tuple(kept))

    def zero_section(self) -> ConormalComponent:
        return conormal_of(self.ambient, (), Subspace.full(self.ambient.w_dim))


# ---------------------------------------------------------------------------
# constructions


def critical_locus_of_strata(
    ambient: AmbientSpec, strata: Sequence[tuple[Iterable[int], Subspace]]
) -> ConicSetDescriptor:
    """Union of the conormals of the given strata, plus the zero section.

    This is the critical locus of the tautological map from the disjoint
    union of the strata (and the whole space) into the ambient base: a
    covector survives exactly when it annihilates one of the pieces.
    """
    comps = [conormal_of(ambient, (), Subspace.full(ambient.w_dim))]
    for zero_set, rule in strata:
        comps.append(conormal_of(ambient, zero_set, rule))
    return ConicSetDescriptor.make(ambient, comps)


def symplectic_swap(desc: ConicSetDescriptor) -> ConicSetDescriptor:
    """Present the same set in the dual ambient, W <-> W*.

    Under (w, phi) -> (phi, -w) the conormal of {y_S = 0} x E goes to the
    conormal of {y_S = 0} x E-perp; on general components the W-stratum
    and W-covector subspaces trade places.  Involution by construction.
    """
    amb = AmbientSpec(desc.ambient.y_dim, desc.ambient.w_dim, not desc.ambient.w_dual)
    comps = [
        ConormalComponent(c.base_zero, c.w_covector, c.covector_support, c.w_stratum)
        for c in desc.components
    ]
    return ConicSetDescriptor.make(amb, comps)


def pushforward_coordinate(
    desc: ConicSetDescriptor, keep: Sequence[int]
) -> ConicSetDescriptor:
    """Exact pushforward along the projection dropping Y-coordinates.

    ``keep`` lists the retained Y-block coordinates (the W-block always
    survives).  On conormal components of coordinate strata the cotangent
    correspondence has the closed form: intersect both index sets with the
    kept coordinates and relabel.
    """
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(
        i < 0 or i >= desc.ambient.y_dim for i in keep
    ):
        raise UnsupportedMap("projection spec must be a subset of Y-coordinates")
    if sorted(keep) != keep:
        raise UnsupportedMap("projection spec must be sorted (no permutations)")
    relabel = {old: new for new, old in enumerate(keep)}
    amb = AmbientSpec(len(keep), desc.ambient.w_dim, desc.ambient.w_dual)
    comps = []
    for c in desc.components:
        comps.append(
            ConormalComponent(
                frozenset(relabel[i] for i in c.base_zero if i in relabel),
                c.w_stratum,
                frozenset(relabel[i] for i in c.covector_support if i in relabel),
                c.w_covector,
            )
        )
    return ConicSetDescriptor.make(amb, comps)


# ---------------------------------------------------------------------------
# structural predicates


def is_conic(desc: ConicSetDescriptor) -> bool:
    """Covector fibers are linear subspaces, hence stable under scaling."""
    return all(
        c.w_covector.d == desc.ambient.w_dim for c in desc.components
    )


def is_homothety_stable(desc: ConicSetDescriptor) -> bool:
    """Stability under scaling the W-block of the base (and its covectors).

    Every representable rule is a linear subspace, so descriptors in this
    class are stable by construction; the predicate re-checks the shape.
    """
    return all(
        c.w_stratum.d == desc.ambient.w_dim
        and c.w_covector.d == desc.ambient.w_dim
        for c in desc.components
    )


def isotropic_check(desc: ConicSetDescriptor) -> bool:
    """Each component is the conormal of its stratum (hence Lagrangian).

    Checks that covectors annihilate the stratum tangent space
    (covector_support inside base_zero, W-covector inside E-perp) and the
    Lagrangian dimension count dim(stratum) + dim(fiber) = base dim.
    A union of such components is an isotropic conic set.
    """
    q, d = desc.ambient.y_dim, desc.ambient.w_dim
    for c in desc.components:
        if not c.covector_support <= c.base_zero:
            return False
        if not c.w_stratum.orthogonal_complement().contains(c.w_covector):
            return False
        stratum_dim = (q - len(c.base_zero)) + c.w_stratum.dim
        fiber_dim = len(c.covector_support) + c.w_covector.dim
        if stratum_dim + fiber_dim != q + d:
            return False
    return True


def membership(
    desc: ConicSetDescriptor,
    base: Sequence[Fraction],
    covector: Sequence[Fraction],
) -> bool:
    """Exact test: does (base, covector) lie in some component?"""
    q, d = desc.ambient.y_dim, desc.ambient.w_dim
    base = [Fraction(x) for x in base]
    covector = [Fraction(x) for x in covector]
    if len(base) != q + d or len(covector) != q + d:
        raise DimensionMismatch("point does not match the ambient")
    by, bw = base[:q], base[q:]
    cy, cw = covector[:q], covector[q:]
    for c in desc.components:
        if any(by[i] != 0 for i in c.base_zero):
            continue
        if not c.w_stratum.contains_vector(bw):
            continue
        if any(cy[i] != 0 for i in range(q) if i not in c.covector_support):
            continue
        if not c.w_covector.contains_vector(cw):
            continue
        return True
    return False


# ---------------------------------------------------------------------------
# serialization


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _subspace_to_dict(s: Subspace) -> dict:
    if s.is_full():
        return {"kind": "full"}
    if s.is_zero():
        return {"kind": "zero"}
    return {
        "kind": "span",
        "basis": [[_frac_str(a) for a in row] for row in s.rows],
    }


def _subspace_from_dict(d: int, data: dict) -> Subspace:
    kind = data.get("kind")
    if kind == "full":
        return Subspace.full(d)
    if kind == "zero":
        return Subspace.zero(d)
    if kind == "span":
        return Subspace.span(d, [[Fraction(a) for a in row] for row in data["basis"]])
    raise ValueError(f"unknown subspace kind {kind!r}")


def descriptor_to_dict(desc: ConicSetDescriptor) -> dict:
    return {
        "ambient": {
            "y_dim": desc.ambient.y_dim,
            "w_dim": desc.ambient.w_dim,
            "w_dual": desc.ambient.w_dual,
        },
        "components": [
            {
                "base_zero": sorted(c.base_zero),
                "w_stratum": _subspace_to_dict(c.w_stratum),
                "covector_support": sorted(c.covector_support),
                "w_covector": _subspace_to_dict(c.w_covector),
            }
            for c in desc.components
        ],
    }


def descriptor_from_dict(data: dict) -> ConicSetDescriptor:
    amb = AmbientSpec(
        int(data["ambient"]["y_dim"]),
        int(data["ambient"]["w_dim"]),
        bool(data["ambient"]["w_dual"]),
    )
    comps = []
    for c in data["components"]:
        comps.append(
            ConormalComponent(
                frozenset(int(i) for i in c["base_zero"]),
                _subspace_from_dict(amb.w_dim, c["w_stratum"]),
                frozenset(int(i) for i in c["covector_support"]),
                _subspace_from_dict(amb.w_dim, c["w_covector"]),
            )
        )
    return ConicSetDescriptor.make(amb, comps)
