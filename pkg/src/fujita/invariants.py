"""Headline invariants on a generic variety model.

A `VarietyModel` packages a Neron-Severi rank, a canonical class, and a
strict finitely generated effective cone.  On top of that this module
computes the two geometric constants of the asymptotic point-count
formalism: the least multiple `a` such that a*L + K lands in the effective
cone, and the codimension `b` of the minimal supported face containing that
adjoint boundary class; plus rigidity bookkeeping and the lexicographic
balanced-verdict comparison against subvariety data.

Subvariety data (the subvariety's own model and the restricted bundle) is
explicit user input: computing restriction maps between Neron-Severi
lattices is a case-by-case geometric task, so fixtures carry the restricted
classes with them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .cones import ConeQ, Containment, FaceQ
from .errors import (
    BigFailureOnY,
    IncompatibleModels,
    InvalidModel,
    KPseudoEffective,
    NotBig,
    NotPseudoEffective,
    RigidityUndecidable,
)
from .qlinalg import MatQ, VecQ, inertia

DivisorClass = VecQ


# -- provenance tags -----------------------------------------------------------

@dataclass(frozen=True)
class Raw:
    """No extra structure beyond the lattice data."""


@dataclass(frozen=True)
class DelPezzo:
    degree: int
    quadric: bool = False


@dataclass(frozen=True)
class Toric:
    fan: object  # toric.Fan; typed loosely to avoid an import cycle


@dataclass(frozen=True)
class VarietyModel:
    """Rank, canonical class, effective cone, optional intersection form."""

    name: str
    ns_rank: int
    canonical: DivisorClass
    eff_cone: ConeQ
    intersection_form: MatQ | None = None
    provenance: object = Raw()

    def __post_init__(self):
        if self.canonical.dim != self.ns_rank:
            raise InvalidModel("canonical class dimension does not match rank")
        if self.eff_cone.ambient_dim != self.ns_rank:
            raise InvalidModel("effective cone ambient dimension does not match rank")
        if not self.eff_cone.is_strict():
            raise InvalidModel("effective cone must be strict (no lines)")
        form = self.intersection_form
        if form is not None:
            if form.rows != self.ns_rank or form.cols != self.ns_rank:
                raise InvalidModel("intersection form size does not match rank")
            if not form.is_symmetric():
                raise InvalidModel("intersection form must be symmetric")
            if inertia(form) != (1, self.ns_rank - 1, 0):
                raise InvalidModel("intersection form must have signature (1, rank-1)")

    def pair(self, u: DivisorClass, v: DivisorClass) -> Fraction:
        """Intersection product, when the model carries a form."""
        if self.intersection_form is None:
            raise InvalidModel(f"model {self.name!r} has no intersection form")
        return u.dot(self.intersection_form.apply(v))

    def is_big(self, d: DivisorClass) -> bool:
        return self.eff_cone.contains(d) is Containment.INSIDE

    def is_pseudo_effective(self, d: DivisorClass) -> bool:
        return self.eff_cone.contains(d) is not Containment.OUTSIDE


@dataclass(frozen=True)
class FujitaResult:
    a: Fraction
    boundary_class: DivisorClass          # a*L + K, on the cone boundary
    witness: tuple[Fraction, ...]         # nonnegative combination in the generators


@dataclass(frozen=True)
class BInvariantResult:
    b: int
    face: FaceQ
    face_generators: tuple[DivisorClass, ...]


@dataclass(frozen=True)
class SubvarietyDatum:
    """A subvariety with its own model and the user-supplied restricted
    bundle, expressed in the subvariety's basis."""

    name: str
    model: VarietyModel
    restricted_bundle: DivisorClass

    def __post_init__(self):
        if self.restricted_bundle.dim != self.model.ns_rank:
            raise InvalidModel("restricted bundle dimension does not match model")
        if not self.model.is_big(self.restricted_bundle):
            raise BigFailureOnY(
                f"restricted bundle on {self.name!r} is not big"
            )


class BalancedClass(Enum):
    BALANCED = "balanced"
    WEAKLY_BALANCED_NOT_BALANCED = "weakly_balanced_not_balanced"
    NOT_WEAKLY_BALANCED = "not_weakly_balanced"


@dataclass(frozen=True)
class BalancedVerdict:
    pair_x: tuple[Fraction, int]
    pair_y: tuple[Fraction, int]
    classification: BalancedClass


# -- operations ---------------------------------------------------------------

def fujita(m: VarietyModel, bundle: DivisorClass) -> FujitaResult:
    """Least rational a with a*bundle + K in the effective cone.

    Requires the bundle to be big; a <= 0 (canonical class pseudo-effective)
    is reported as an error because every verdict downstream assumes the
    uniruled setting.
    """
    if not m.is_big(bundle):
        raise NotBig(f"bundle is not big on {m.name!r}")
    a, witness = m.eff_cone.min_a_with_witness(m.canonical, bundle)
    if a <= 0:
        raise KPseudoEffective(
            f"canonical class of {m.name!r} is pseudo-effective along the ray (a={a})"
        )
    boundary = a * bundle + m.canonical
    return FujitaResult(a, boundary, witness)


def b_invariant(m: VarietyModel, bundle: DivisorClass) -> BInvariantResult:
    """Codimension of the minimal supported face containing a*L + K."""
    fr = fujita(m, bundle)
    face = m.eff_cone.minimal_face(fr.boundary_class)
    b = m.ns_rank - face.span_dim
    return BInvariantResult(b, face, face.generator_vectors())


def invariant_pair(m: VarietyModel, bundle: DivisorClass) -> tuple[Fraction, int]:
    """(a, b) in one call."""
    fr = fujita(m, bundle)
    face = m.eff_cone.minimal_face(fr.boundary_class)
    return fr.a, m.ns_rank - face.span_dim


def is_rigid_class(m: VarietyModel, d: DivisorClass) -> bool:
    """Rigidity of a pseudo-effective class, dispatched by provenance.

    Surfaces with negative-curve data use the Zariski route (rigid iff the
    positive part vanishes); toric models use the divisor polytope (rigid
    iff dimension zero); a raw model without an intersection form has no
    rigidity oracle.
    """
    if m.eff_cone.contains(d) is Containment.OUTSIDE:
        raise NotPseudoEffective(f"class is not pseudo-effective on {m.name!r}")
    prov = m.provenance
    if isinstance(prov, Toric):
        from . import toric

        return toric.class_is_rigid(prov.fan, d)
    if isinstance(prov, DelPezzo) or m.intersection_form is not None:
        from . import delpezzo

        return delpezzo.zariski_for_variety(m, d).positive.is_zero()
    raise RigidityUndecidable(
        f"model {m.name!r} carries neither surface nor toric rigidity data"
    )


def balanced_verdict(
    m: VarietyModel, bundle: DivisorClass, y: SubvarietyDatum
) -> BalancedVerdict:
    """Lexicographic comparison of the (a, b) pairs of the ambient model and
    a subvariety datum."""
    if not y.model.is_big(y.restricted_bundle):
        raise BigFailureOnY(f"restricted bundle on {y.name!r} is not big")
    pair_x = invariant_pair(m, bundle)
    pair_y = invariant_pair(y.model, y.restricted_bundle)
    if pair_y > pair_x:
        cls = BalancedClass.NOT_WEAKLY_BALANCED
    elif pair_y == pair_x:
        cls = BalancedClass.WEAKLY_BALANCED_NOT_BALANCED
    else:
        cls = BalancedClass.BALANCED
    return BalancedVerdict(pair_x, pair_y, cls)


def check_birational_invariance(
    m: VarietyModel,
    blowup: VarietyModel,
    pullback: MatQ,
    bundle: DivisorClass,
) -> bool:
    """True iff (a, b) agree between (m, L) and (blowup, pullback L).

    Used as a property test across blow-up model pairs, not as a production
    feature.
    """
    if pullback.cols != m.ns_rank or pullback.rows != blowup.ns_rank:
        raise IncompatibleModels(
            f"pullback is {pullback.rows}x{pullback.cols}, expected "
            f"{blowup.ns_rank}x{m.ns_rank}"
        )
    return invariant_pair(m, bundle) == invariant_pair(blowup, pullback.apply(bundle))
