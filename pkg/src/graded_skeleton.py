"""Skeletons of tame division algebras and their maximal subfields.

A skeleton keeps only the finite data of a tame D over a Henselian F: the
grade groups Gamma_F in Gamma_D, the center Z0 of the residue algebra, the
map theta: Gamma_D/Gamma_F -> Gal(Z0/F0) and the class of the residue
algebra. The same data describes gr(D), so no separate graded object is
modelled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import isqrt, lcm
from typing import Any

from sympy import divisors

from src.abelian_ext import AbelianExtQ, QPlace, ZPlace, compositum, contains, galois_group
from src.advanced.covers import DemandMode, NotFoundWithinBound, cover_search
from src.advanced.location import Fiber, FiberStatus, residue_class_certificate
from src.brauer_q import BrauerClass, index, is_split_by, local_index
from src.config import Config
from src.errors import (NonMaximalError, SkeletonValidationError, StructuralError,
                        TameAlgebraError)
from src.finite_abelian import FiniteAbelianGroup
from src.qlattice import GradeGroup, Vector, intermediate_groups, lattice_index, lattice_intersect, lattice_sum
from src.run_logger import setup_logger
from src.validator import InputValidator

logger = setup_logger(__name__)


class ResidueTag(Enum):
    GLOBAL_Q = "GlobalQ"
    FINITE = "Finite"
    REAL_CLOSED = "RealClosed"
    CD_LE_ONE = "CdLeOne"
    LOCAL_FIELD = "LocalField"


CROSSED_REASONS = {
    ResidueTag.FINITE: ("finite-residue-field", "finite residue field"),
    ResidueTag.REAL_CLOSED: ("real-closed-residue-field", "real closed residue field"),
    ResidueTag.CD_LE_ONE: ("cd-le-one-residue-field", "residue field of cohomological dimension <= 1"),
    ResidueTag.LOCAL_FIELD: ("local-residue-field", "local residue field"),
}


@dataclass(frozen=True)
class ResidueKind:
    tag: ResidueTag
    q: int | None = None
    p: int | None = None
    f: int | None = None

    def check(self) -> None:
        if self.tag is ResidueTag.FINITE and not InputValidator.validate_prime_power(self.q):
            raise TameAlgebraError(f"Finite residue field needs a prime power q, got {self.q}")
        if self.tag is ResidueTag.LOCAL_FIELD:
            if not InputValidator.validate_prime(self.p):
                raise TameAlgebraError(f"LocalField needs a prime p, got {self.p}")
            if not isinstance(self.f, int) or self.f < 1:
                raise TameAlgebraError(f"LocalField needs a residue degree f >= 1, got {self.f}")

    @property
    def is_global(self) -> bool:
        return self.tag is ResidueTag.GLOBAL_Q

    def to_document(self) -> dict:
        document: dict[str, Any] = {"kind": self.tag.value}
        for name in ("q", "p", "f"):
            if getattr(self, name) is not None:
                document[name] = getattr(self, name)
        return document


class UnitQuotient:
    """Gal(Z0/Q) as (Z/nZ)^x / H; each element is named by its smallest unit."""

    def __init__(self, center: AbelianExtQ):
        self.field = center
        self.modulus = center.conductor
        self.representatives = galois_group(center).representatives
        self._names = {(r * h) % self.modulus: r for r in self.representatives for h in center.subgroup}

    @property
    def order(self) -> int:
        return len(self.representatives)

    @property
    def is_cyclic(self) -> bool:
        return self.field.is_cyclic

    @property
    def identity(self) -> int:
        return self.canonical(1)

    def canonical(self, element) -> int:
        if isinstance(element, bool) or not isinstance(element, int):
            raise TameAlgebraError(f"Galois elements of {self.field} are units, got {element!r}")
        try:
            return self._names[element % self.modulus]
        except KeyError:
            raise TameAlgebraError(f"{element} is not a unit modulo {self.modulus}") from None

    def compose(self, a: int, b: int) -> int:
        return self.canonical(a * b)

    def elements(self) -> list[int]:
        return list(self.representatives)


class CyclicProduct:
    """Gal(Z0/F0) given abstractly as Z/d1 + ... + Z/dk."""

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_cyclic(self) -> bool:
        return self.group.shape().is_cyclic

    @property
    def identity(self) -> tuple[int, ...]:
        return self.group.zero

    def canonical(self, element) -> tuple[int, ...]:
        values = tuple(element) if isinstance(element, (list, tuple)) else (element,)
        if len(values) != len(self.group.moduli) or not all(isinstance(x, int) for x in values):
            raise TameAlgebraError(f"{element!r} is not an element of Z/{self.group.moduli}")
        return tuple(x % m for x, m in zip(values, self.group.moduli))

    def compose(self, a, b) -> tuple[int, ...]:
        return self.group.add(a, b)

    def elements(self) -> list[tuple[int, ...]]:
        return self.group.elements()


@dataclass(frozen=True)
class DivAlgSkeleton:
    residue: ResidueKind
    gamma_F: GradeGroup
    gamma_D: GradeGroup
    center: AbelianExtQ | FiniteAbelianGroup
    theta: tuple[tuple[Vector, Any], ...]
    residue_class: BrauerClass | None = None
    residue_degree: int | None = None
    pairing: tuple[tuple[Fraction, ...], ...] | None = None

    @cached_property
    def center_group(self) -> UnitQuotient | CyclicProduct:
        if isinstance(self.center, AbelianExtQ):
            return UnitQuotient(self.center)
        return CyclicProduct(self.center)

    @property
    def center_degree(self) -> int:
        return self.center_group.order

    @property
    def deg_residue(self) -> int:
        if self.residue_class is not None:
            return index(self.residue_class)
        return self.residue_degree or 1

    def pair(self, x: Vector, y: Vector) -> Fraction:
        """omega(x, y) = x^T P y mod 1."""
        total = sum((x[i] * self.pairing[i][j] * y[j]
                     for i in range(len(x)) for j in range(len(y))), Fraction(0))
        return total % 1


@dataclass(frozen=True)
class Violation:
    identity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    deg_D: int | None = None
    deg_residue: int | None = None
    image_order: int | None = None
    deg_C: int | None = None
    center_degree: int | None = None
    kernel: GradeGroup | None = None

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        document = {"valid": self.valid,
                    "violations": [{"identity": v.identity, "message": v.message} for v in self.violations]}
        if self.valid:
            document.update({"deg_D": self.deg_D, "deg_residue": self.deg_residue,
                             "image_order": self.image_order, "deg_C": self.deg_C,
                             "center_degree": self.center_degree,
                             "kernel": self.kernel.to_document()})
        return document


def theta_table(skeleton: DivAlgSkeleton) -> tuple[dict[Vector, Any], list[Violation]]:
    """theta on every coset of Gamma_D/Gamma_F, built from its values on generators."""
    gamma_F, center = skeleton.gamma_F, skeleton.center_group
    problems = []
    images = []
    for vector, element in skeleton.theta:
        if not skeleton.gamma_D.contains_vector(vector):
            problems.append(Violation("theta-domain", f"{tuple(map(str, vector))} is not in Gamma_D"))
            continue
        try:
            images.append((gamma_F.reduce(vector), center.canonical(element)))
        except TameAlgebraError as e:
            problems.append(Violation("theta-codomain", str(e)))
    if problems:
        return {}, problems

    zero = gamma_F.reduce([0] * gamma_F.rank)
    table = {zero: center.identity}
    frontier = [zero]
    while frontier:
        following = []
        for x in frontier:
            for vector, value in images:
                y = gamma_F.reduce(tuple(a + b for a, b in zip(x, vector)))
                image = center.compose(table[x], value)
                if y not in table:
                    table[y] = image
                    following.append(y)
                elif table[y] != image:
                    problems.append(Violation(
                        "theta-well-defined", f"theta is not a homomorphism at {tuple(map(str, y))}"))
                    return table, problems
        frontier = following
    return table, problems


def validate(skeleton: DivAlgSkeleton) -> ValidationReport:
    problems: list[Violation] = []
    try:
        skeleton.residue.check()
    except TameAlgebraError as e:
        problems.append(Violation("residue-kind", str(e)))

    if skeleton.residue.is_global:
        if not isinstance(skeleton.center, AbelianExtQ):
            problems.append(Violation("center-kind", "a rational residue field needs an abelian center Z0"))
        elif skeleton.residue_class is None or skeleton.residue_class.base != skeleton.center:
            problems.append(Violation("residue-class-base", "the residue class must be a class over Z0"))
    else:
        if not isinstance(skeleton.center, FiniteAbelianGroup):
            problems.append(Violation("center-kind", "abstract residue fields carry Gal(Z0/F0) as a finite group"))
        if not skeleton.residue_degree or skeleton.residue_degree < 1:
            problems.append(Violation("residue-degree", "abstract residue algebras need a degree >= 1"))
    if problems:
        return ValidationReport(tuple(problems))

    gamma_F, gamma_D = skeleton.gamma_F, skeleton.gamma_D
    if gamma_F.rank != gamma_D.rank or not gamma_D.contains(gamma_F):
        return ValidationReport((Violation("grade-containment", "Gamma_F must be contained in Gamma_D"),))

    table, problems = theta_table(skeleton)
    if problems:
        return ValidationReport(tuple(problems))
    quotient_order = lattice_index(gamma_F, gamma_D)
    if len(table) != quotient_order:
        return ValidationReport((Violation(
            "theta-generates", f"theta is given on {len(table)} of {quotient_order} cosets"),))

    center = skeleton.center_group
    identity = center.identity
    kernel = GradeGroup.from_generators(
        list(gamma_F.generators) + [x for x, value in table.items() if value == identity], gamma_F.rank)
    image_order = len(set(table.values()))
    c = center.order
    if image_order != c:
        problems.append(Violation("theta-surjective", f"image of theta has order {image_order}, not [Z0:F0] = {c}"))
    if lattice_index(kernel, gamma_D) != c:
        problems.append(Violation("double-centralizer", "|Gamma_D : ker theta| differs from [Z0:F0]"))

    kernel_index = lattice_index(gamma_F, kernel)
    deg_C = isqrt(kernel_index)
    if deg_C * deg_C != kernel_index:
        problems.append(Violation("perfect-square", f"|ker theta : Gamma_F| = {kernel_index} is not a square"))

    deg_residue = skeleton.deg_residue
    deg_D = deg_residue * image_order * deg_C
    if deg_residue ** 2 * c * quotient_order != deg_D ** 2:
        problems.append(Violation(
            "fundamental-equality", f"[D:F] = {deg_residue ** 2 * c * quotient_order} is not deg D squared"))

    if skeleton.pairing is not None:
        problems.extend(_pairing_violations(skeleton, kernel))

    report = ValidationReport(tuple(problems), deg_D, deg_residue, image_order, deg_C, c, kernel)
    logger.debug(f"Validated skeleton: valid={report.valid}, deg D={deg_D}")
    return report


def _pairing_violations(skeleton: DivAlgSkeleton, kernel: GradeGroup) -> list[Violation]:
    rank = skeleton.gamma_F.rank
    if len(skeleton.pairing) != rank or any(len(row) != rank for row in skeleton.pairing):
        return [Violation("pairing-shape", f"the pairing must be a {rank}x{rank} matrix")]
    problems = []
    generators = kernel.generators
    for x in generators:
        if skeleton.pair(x, x):
            problems.append(Violation("pairing-alternating", f"omega(x, x) != 0 for x = {tuple(map(str, x))}"))
        for y in generators:
            if (skeleton.pair(x, y) + skeleton.pair(y, x)) % 1:
                problems.append(Violation("pairing-alternating", "omega is not antisymmetric"))
        for f in skeleton.gamma_F.generators:
            if skeleton.pair(f, x):
                problems.append(Violation("pairing-well-defined", "omega does not vanish on Gamma_F"))
    return problems[:1] if problems else []


def require_valid(skeleton: DivAlgSkeleton) -> ValidationReport:
    report = validate(skeleton)
    if not report.valid:
        raise SkeletonValidationError(report)
    return report


@dataclass(frozen=True)
class ResiduePart:
    """The residue field M0 of a subfield, as far as the skeleton knows it."""

    degree: int
    field: AbelianExtQ | None = None
    galois: bool = True
    normal: bool = True
    contains_center: bool = True

    @classmethod
    def from_field(cls, residue_field: AbelianExtQ, center: AbelianExtQ) -> ResiduePart:
        # abelian over Q, hence Galois and normal
        return cls(residue_field.degree, residue_field, True, True, contains(residue_field, center))

    def to_document(self) -> dict:
        document = {"degree": self.degree, "galois": self.galois, "normal": self.normal,
                    "contains_center": self.contains_center}
        if self.field is not None:
            document["field"] = self.field.to_document()
        return document


@dataclass(frozen=True)
class SubfieldSkeleton:
    residue_part: ResiduePart
    gamma: GradeGroup
    tame: bool = True
    normal: bool = True
    galois: bool = True
    assumed_realizable: bool = False

    def degree(self, gamma_F: GradeGroup) -> int:
        """[M:F] = [M0:F0] |Gamma_M : Gamma_F|."""
        return self.residue_part.degree * lattice_index(gamma_F, self.gamma)

    def to_document(self) -> dict:
        return {"residue": self.residue_part.to_document(), "gamma": self.gamma.to_document(),
                "tame": self.tame, "normal": self.normal, "galois": self.galois,
                "assumed_realizable": self.assumed_realizable}


@dataclass(frozen=True)
class CanonicalPiece:
    name: str
    gamma: GradeGroup
    residue: str
    dimension: int

    def to_document(self) -> dict:
        return {"name": self.name, "gamma": self.gamma.to_document(),
                "residue": self.residue, "dimension": self.dimension}


@dataclass(frozen=True)
class CanonicalTower:
    U: CanonicalPiece
    Z: CanonicalPiece
    C: CanonicalPiece
    E: CanonicalPiece
    deg_C: int
    index_D_over_E: int

    def to_document(self) -> dict:
        return {"U": self.U.to_document(), "Z": self.Z.to_document(), "C": self.C.to_document(),
                "E": self.E.to_document(), "deg_C": self.deg_C, "index_D_over_E": self.index_D_over_E}


def canonical_tower(skeleton: DivAlgSkeleton) -> CanonicalTower:
    """U (maximal inertial), Z = Z(U), C = C_D(U) and E = C_D(Z) = U (x)_Z C."""
    return _tower(skeleton, require_valid(skeleton))


def _tower(skeleton: DivAlgSkeleton, report: ValidationReport) -> CanonicalTower:
    c, deg_residue, deg_C = report.center_degree, report.deg_residue, report.deg_C
    gamma_F, kernel = skeleton.gamma_F, report.kernel
    index_D_over_E = lattice_index(kernel, skeleton.gamma_D)
    if index_D_over_E != c:
        raise StructuralError(f"[D:E] = {index_D_over_E} differs from [Z0:F0] = {c}")
    return CanonicalTower(
        U=CanonicalPiece("U", gamma_F, "residue algebra", c * deg_residue ** 2),
        Z=CanonicalPiece("Z", gamma_F, "Z0", c),
        C=CanonicalPiece("C", kernel, "Z0", c * deg_C ** 2),
        E=CanonicalPiece("E", kernel, "residue algebra", c * deg_residue ** 2 * deg_C ** 2),
        deg_C=deg_C,
        index_D_over_E=index_D_over_E,
    )


def degree_three_ways(skeleton: DivAlgSkeleton) -> tuple[int, int, int]:
    """deg D from the fundamental equality, the canonical tower and the theta formula."""
    report = require_valid(skeleton)
    tower = _tower(skeleton, report)
    dimension = report.deg_residue ** 2 * report.center_degree * lattice_index(skeleton.gamma_F, skeleton.gamma_D)
    fundamental = isqrt(dimension)
    through_tower = tower.index_D_over_E * report.deg_residue * tower.deg_C
    return fundamental, through_tower, report.deg_D


def _center_residue(skeleton: DivAlgSkeleton) -> ResiduePart:
    field_ = skeleton.center if isinstance(skeleton.center, AbelianExtQ) else None
    return ResiduePart(skeleton.center_degree, field_, True, True, True)


def _isotropic(skeleton: DivAlgSkeleton, group: GradeGroup) -> bool:
    return all(not skeleton.pair(x, y) for x in group.generators for y in group.generators)


def maximal_subfield_of_C(skeleton: DivAlgSkeleton) -> SubfieldSkeleton:
    """A maximal graded subfield T of C containing Z, Galois over F.

    Gamma_T is the first subgroup (canonical order) of index deg C over
    Gamma_F inside ker theta; with a pairing it must also be isotropic.
    """
    report = require_valid(skeleton)
    residue = _center_residue(skeleton)
    if report.deg_C == 1:
        return SubfieldSkeleton(residue, skeleton.gamma_F)

    candidates = intermediate_groups(skeleton.gamma_F, report.kernel, report.deg_C)
    if skeleton.pairing is not None:
        candidates = [group for group in candidates if _isotropic(skeleton, group)]
        if not candidates:
            raise StructuralError(f"no isotropic subgroup of index {report.deg_C} in ker theta / Gamma_F")
    return SubfieldSkeleton(residue, candidates[0], assumed_realizable=skeleton.pairing is None)


def _check_subfield(skeleton: DivAlgSkeleton, subfield: SubfieldSkeleton) -> None:
    gamma = subfield.gamma
    if gamma.rank != skeleton.gamma_F.rank or not gamma.contains(skeleton.gamma_F) \
            or not skeleton.gamma_D.contains(gamma):
        raise StructuralError("a subfield needs Gamma_F <= Gamma_M <= Gamma_D")


def residue_maximality_test(skeleton: DivAlgSkeleton, subfield: SubfieldSkeleton) -> bool:
    """M0 is maximal in the residue algebra iff M contains Z and |Gamma_M : Gamma_Z| = deg C."""
    report = require_valid(skeleton)
    _check_subfield(skeleton, subfield)
    if not subfield.residue_part.contains_center:
        return False
    return lattice_index(skeleton.gamma_F, subfield.gamma) == report.deg_C


def lift_residue_subfield(skeleton: DivAlgSkeleton, residue: ResiduePart,
                          t: SubfieldSkeleton) -> SubfieldSkeleton:
    """M = (M0 (x) F) T for a maximal subfield M0 of the residue algebra."""
    report = require_valid(skeleton)
    if not residue.contains_center or residue.degree != report.center_degree * report.deg_residue:
        raise NonMaximalError(f"a residue subfield of degree {residue.degree} is not maximal "
                              f"(needs Z0 inside and degree {report.center_degree * report.deg_residue})")
    lifted = SubfieldSkeleton(residue, t.gamma, tame=True,
                              normal=residue.normal or residue.galois, galois=residue.galois,
                              assumed_realizable=t.assumed_realizable)
    if lifted.degree(skeleton.gamma_F) != report.deg_D:
        raise NonMaximalError(f"[M:F] = {lifted.degree(skeleton.gamma_F)} differs from deg D = {report.deg_D}")
    return lifted


def entwine(skeleton: DivAlgSkeleton, m: SubfieldSkeleton, t: SubfieldSkeleton,
            require_maximal: bool = True) -> SubfieldSkeleton:
    """M' = (M n C_D(T)) T, a subfield whose residue part is maximal.

    Gamma_{M'} = (Gamma_M n Gamma_T) + Gamma_T = Gamma_T. The residue part
    M'0 contains M0 Z0 and has degree deg D / |Gamma_T : Gamma_F| for
    maximal M; it keeps the field M0 Z0 only when that field already has
    this degree. With require_maximal=False the residue degree is the
    smallest admissible one giving [M':F] >= [M:F].
    """
    report = require_valid(skeleton)
    _check_subfield(skeleton, m)
    degree_M = m.degree(skeleton.gamma_F)
    if require_maximal and degree_M != report.deg_D:
        raise NonMaximalError(f"[M:F] = {degree_M} differs from deg D = {report.deg_D}")

    gamma = lattice_sum(lattice_intersect(m.gamma, t.gamma), t.gamma)
    assumed = m.assumed_realizable or t.assumed_realizable
    part = m.residue_part
    center = skeleton.center
    if isinstance(center, AbelianExtQ) and part.field is not None:
        known = compositum(part.field, center)
        known_degree = known.degree
    elif part.contains_center:
        known, known_degree = None, part.degree
    else:
        known, known_degree = None, part.degree * report.center_degree
        assumed = True

    spread = lattice_index(skeleton.gamma_F, gamma)
    if report.deg_D % spread or (report.deg_D // spread) % known_degree:
        raise StructuralError(f"M0 Z0 of degree {known_degree} does not fit in a residue part of degree "
                              f"deg D / |Gamma_T : Gamma_F| = {report.deg_D}/{spread}")
    ceiling = report.deg_D // spread
    if require_maximal:
        residue_degree = ceiling
    else:
        residue_degree = next(r for r in divisors(ceiling) if r % known_degree == 0 and r * spread >= degree_M)
    if residue_degree != known_degree:
        known = None
    residue = ResiduePart(residue_degree, known, part.galois, part.normal, True)

    entwined = SubfieldSkeleton(residue, gamma, tame=True, normal=m.normal or m.galois, galois=m.galois,
                                assumed_realizable=assumed)
    degree = entwined.degree(skeleton.gamma_F)
    if require_maximal and degree != report.deg_D:
        raise NonMaximalError(f"entwined subfield has degree {degree}, expected {report.deg_D}")
    if degree < degree_M:
        raise StructuralError(f"entwining lowered the degree from {degree_M} to {degree}")
    if require_maximal and not residue_maximality_test(skeleton, entwined):
        raise NonMaximalError("the entwined subfield does not have a maximal residue part")
    logger.debug(f"Entwined subfield of degree {degree} with Gamma = {gamma}")
    return entwined


class CrossedStatus(Enum):
    CROSSED = "Crossed"
    NONCROSSED = "Noncrossed"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CrossedVerdict:
    status: CrossedStatus
    rationale: str
    message: str
    cover: AbelianExtQ | None = None
    subfield: SubfieldSkeleton | None = None
    galois: bool = False
    normal: bool = False
    bound: int | None = None
    trace: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def to_document(self) -> dict:
        document: dict[str, Any] = {"status": self.status.value, "rationale": self.rationale,
                                    "message": self.message, "galois": self.galois, "normal": self.normal,
                                    "trace": [{"step": s, "detail": d} for s, d in self.trace]}
        if self.cover is not None:
            document["cover"] = self.cover.to_document()
        if self.subfield is not None:
            document["subfield"] = self.subfield.to_document()
        if self.bound is not None:
            document["bound"] = self.bound
        return document


def splitting_demands(beta: BrauerClass) -> list[tuple[QPlace, int]]:
    """Per place of Q, the lcm of local indices of beta above it."""
    demands: dict[QPlace, int] = {}
    for place, _ in beta.invariants:
        base = place.base if isinstance(place, ZPlace) else place
        demands[base] = lcm(demands.get(base, 1), local_index(beta, place))
    return sorted(demands.items(), key=lambda item: item[0].sort_key())


def crossed_product_test(skeleton: DivAlgSkeleton, conductor_bound: int | None = None) -> CrossedVerdict:
    """Decide whether D has a maximal subfield Galois over F.

    D is a crossed product exactly when its residue algebra has a maximal
    subfield Galois over F0. Over Q this means a splitting cover of Z0 of
    degree deg D0 that is Galois over Q.
    """
    require_valid(skeleton)
    bound = Config.CONDUCTOR_BOUND if conductor_bound is None else conductor_bound
    tag = skeleton.residue.tag
    if tag is not ResidueTag.GLOBAL_Q:
        reason, words = CROSSED_REASONS[tag]
        return CrossedVerdict(CrossedStatus.CROSSED, reason, f"Crossed ({words})", galois=True, normal=True,
                              trace=(("residue-field-shortcut", words),))

    center: AbelianExtQ = skeleton.center
    beta = skeleton.residue_class
    m = index(beta)
    t = maximal_subfield_of_C(skeleton)
    trace = [("reduce-to-residue-class", f"deg D0 = {m} over Z0 = {center}")]

    if m == 1:
        subfield = lift_residue_subfield(skeleton, ResiduePart.from_field(center, center), t)
        trace.append(("lift-residue-subfield", "the residue algebra is the field Z0"))
        return CrossedVerdict(CrossedStatus.CROSSED, "residue-field-is-center", "Crossed (split residue class)",
                              center, subfield, True, True, trace=tuple(trace))

    if m <= Config.SEARCH_DEGREE_LIMIT:
        demands = splitting_demands(beta)
        found = cover_search(center, m, demands, bound, mode=DemandMode.DIVISIBLE)
        trace.append(("search-splitting-cover", "not found" if isinstance(found, NotFoundWithinBound)
                      else f"conductor {found.conductor}"))
        if not isinstance(found, NotFoundWithinBound) and is_split_by(beta, found):
            subfield = lift_residue_subfield(skeleton, ResiduePart.from_field(found, center), t)
            trace.append(("lift-residue-subfield", f"M0 = {found}"))
            return CrossedVerdict(CrossedStatus.CROSSED, "galois-splitting-cover",
                                  "Crossed (abelian splitting cover)", found, subfield, True, True,
                                  trace=tuple(trace))
    else:
        trace.append(("search-splitting-cover", f"skipped: degree {m} above {Config.SEARCH_DEGREE_LIMIT}"))

    status, detail = residue_class_certificate(Fiber(center, BrauerClass.zero(center), 1), beta)
    trace.append(("classify-fiber", detail))
    if status is FiberStatus.ALL_CROSSED:
        return CrossedVerdict(CrossedStatus.CROSSED, "fiber-all-crossed", "Crossed (fiber of crossed products)",
                              galois=True, normal=True, trace=tuple(trace))
    if status is FiberStatus.NONCROSSED_EXIST:
        return CrossedVerdict(CrossedStatus.NONCROSSED, "certified-noncrossed-witness", "Noncrossed",
                              trace=tuple(trace))
    logger.warning(f"Crossed-product test undecided for deg D0 = {m} over {center}")
    return CrossedVerdict(CrossedStatus.UNKNOWN, "bound-limited", f"Unknown (conductor bound {bound})",
                          bound=bound, trace=tuple(trace))
