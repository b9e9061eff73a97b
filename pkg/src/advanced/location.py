"""Locating noncrossed products in fibers of the tame Brauer group over Q.

A fiber is described by the center Z of its residue algebras, a base
residue class beta0 over Z and the fiber-constant ratio ind c / ind c0.
Its residue classes are the alpha^Z + beta0 with alpha in Br(Q). The fiber
consists of crossed products exactly when Z/Q is cyclic of infinite
height; otherwise witnesses of noncrossed classes are built explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, islice, product
from math import gcd, lcm
from typing import Iterable, Sequence

from sympy import factorint, multiplicity, primerange

from src.abelian_ext import (INFINITY, AbelianExtQ, Height, HeightReport, QPlace, galois_group,
                             infinite_height, local_degree, primes_above, r2, roots_of_unity_exponent)
from src.advanced.covers import DemandMode, NotFoundWithinBound, cover_search
from src.brauer_q import HALF, BrauerClass, add, index, local_index, prescribe_class, restrict
from src.config import Config
from src.errors import BoundError, PreconditionError, TameAlgebraError
from src.run_logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Fiber:
    z: AbelianExtQ
    beta0: BrauerClass
    ratio: int = 1

    def check(self) -> None:
        if self.beta0.base != self.z:
            raise TameAlgebraError(f"the base residue class must live over {self.z}")
        if self.ratio < 1:
            raise TameAlgebraError(f"the index ratio must be positive, got {self.ratio}")

    def to_document(self) -> dict:
        return {"Z": self.z.to_document(), "beta0": self.beta0.to_document(), "ratio": self.ratio}


class FiberStatus(Enum):
    ALL_CROSSED = "AllCrossed"
    NONCROSSED_EXIST = "NoncrossedExist"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class NpBound:
    p: int
    n_p: int | None
    case: str
    ingredients: tuple[tuple[str, int], ...] = ()
    provenance: str = ""

    def to_document(self) -> dict:
        return {"p": self.p, "n_p": self.n_p, "case": self.case,
                "ingredients": dict(self.ingredients), "provenance": self.provenance}


@dataclass(frozen=True)
class Witness:
    m: int
    gamma: BrauerClass
    alpha: BrauerClass
    avoid: tuple[QPlace, ...]
    support: tuple[QPlace, ...]
    deficient: tuple[QPlace, ...]
    trace: tuple[tuple[str, str], ...]

    def to_document(self) -> dict:
        return {"m": self.m, "gamma": self.gamma.to_document(), "alpha": self.alpha.to_document(),
                "T": [str(v) for v in self.avoid], "S": [str(v) for v in self.support],
                "S_prime": [str(v) for v in self.deficient],
                "trace": [{"step": s, "detail": d} for s, d in self.trace]}


@dataclass(frozen=True)
class FiberVerdict:
    status: FiberStatus
    witness: Witness | None = None
    bounds: dict = field(default_factory=dict)
    height: HeightReport | None = None
    bound: int | None = None
    trace: tuple[tuple[str, str], ...] = ()

    def to_document(self) -> dict:
        document = {"status": self.status.value,
                    "bounds": {str(p): b.to_document() for p, b in sorted(self.bounds.items())},
                    "trace": [{"step": s, "detail": d} for s, d in self.trace]}
        if self.witness is not None:
            document["witness"] = self.witness.to_document()
        if self.height is not None:
            document["height"] = self.height.to_document()
        if self.bound is not None:
            document["bound"] = self.bound
        return document


class ConditionStatus(Enum):
    HOLDS = "Holds"
    FAILS = "FailsWithinBound"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ConditionB:
    status: ConditionStatus
    cover: AbelianExtQ | None = None
    bound: int | None = None

    def to_document(self) -> dict:
        document = {"status": self.status.value, "bound": self.bound}
        if self.cover is not None:
            document["cover"] = self.cover.to_document()
        return document


def d_value(m: int, v: QPlace, z: AbelianExtQ) -> int:
    """Full local degree: m at finite primes, gcd(m, 2) at the real place if Z is real, else 1."""
    if not v.is_real:
        return m
    return gcd(m, 2) if z.is_real else 1


def residue_classes_sample(fiber: Fiber, m: int, count: int, support_bound: int | None = None) -> list[BrauerClass]:
    """Classes alpha^Z + beta0 of index exactly m, alpha running over small supports.

    alpha has invariants in (1/N)Z with N = m [Z:Q] on at most support_bound
    places drawn from a small pool: the real place (invariant 1/2, only
    when N is even) and the first primes unramified in Z. The last finite
    invariant is fixed by the sum-zero condition.
    """
    if m < 1:
        raise PreconditionError(f"index must be positive, got {m}")
    support_bound = Config.SUPPORT_BOUND if support_bound is None else support_bound
    z, denominator = fiber.z, m * fiber.z.degree
    unramified = (QPlace(p) for p in primerange(2, Config.PRIME_SCAN_BOUND + 1) if z.conductor % p)
    pool = ([INFINITY] if denominator % 2 == 0 else []) + list(islice(unramified, support_bound + 2))
    found: list[BrauerClass] = []
    seen = set()
    if index(fiber.beta0) == m:
        found.append(fiber.beta0)
        seen.add(fiber.beta0)
        if len(found) == count:
            return found
    for size in range(1, support_bound + 1):
        for support in combinations(pool, size):
            finite = [v for v in support if not v.is_real]
            if not finite:
                continue
            fixed = [HALF] * (size - len(finite))
            for numerators in product(range(1, denominator), repeat=len(finite) - 1):
                invariants = fixed + [Fraction(a, denominator) for a in numerators]
                closing = (-sum(invariants, Fraction(0))) % 1
                if not closing:
                    continue
                alpha = BrauerClass.make(AbelianExtQ.rational(), zip(support, invariants + [closing]))
                gamma = add(restrict(alpha, z), fiber.beta0)
                if index(gamma) == m and gamma not in seen:
                    seen.add(gamma)
                    found.append(gamma)
                    if len(found) == count:
                        return found
    if not found:
        logger.warning(f"No class of index {m} in the fiber over {z} with support <= {support_bound}")
    return found


def condition_B(fiber: Fiber, m: int, places: Sequence[QPlace], bound: int | None = None,
                require_cyclic: bool = False) -> ConditionB:
    """Look for an m-cover of Z with full local degree at every given place."""
    bound = Config.CONDUCTOR_BOUND if bound is None else bound
    if m > Config.SEARCH_DEGREE_LIMIT and not require_cyclic:
        return ConditionB(ConditionStatus.UNKNOWN, bound=bound)
    demands = [(v, d_value(m, v, fiber.z)) for v in places]
    found = cover_search(fiber.z, m, demands, bound, require_cyclic=require_cyclic)
    if isinstance(found, NotFoundWithinBound):
        return ConditionB(ConditionStatus.FAILS, bound=bound)
    return ConditionB(ConditionStatus.HOLDS, cover=found, bound=bound)


def compute_T(fiber: Fiber, m: int, prime_scan_bound: int | None = None) -> list[QPlace]:
    """For each p | m, the two primes heading the enumeration by descending p-part of the local degree."""
    if m < 2:
        raise PreconditionError(f"T is only needed for m >= 2, got {m}")
    scan = Config.PRIME_SCAN_BOUND if prime_scan_bound is None else prime_scan_bound
    primes = list(primerange(2, scan + 1))
    if len(primes) < 2:
        raise BoundError(f"fewer than two primes below the scan bound {scan}")
    degrees = {q: local_degree(fiber.z, QPlace(q)) for q in primes}
    chosen = set()
    for p in sorted(factorint(m)):
        ordered = sorted(primes, key=lambda q: -multiplicity(p, degrees[q]))
        chosen.update(ordered[:2])
    return [QPlace(q) for q in sorted(chosen)]


@lru_cache(maxsize=256)
def _height(z: AbelianExtQ, bound: int, crosscheck: int) -> HeightReport:
    return infinite_height(z)


def height_of(z: AbelianExtQ) -> HeightReport:
    return _height(z, Config.CONDUCTOR_BOUND, Config.HEIGHT_CROSSCHECK)


def _sylow_is_cyclic(z: AbelianExtQ, p: int) -> bool:
    factors = galois_group(z).shape.invariant_factors
    return sum(1 for d in factors if d % p == 0) <= 1


def np_bound(fiber: Fiber, p: int) -> NpBound:
    """A p-power exponent n_p such that every index divisible by p^n_p hosts noncrossed classes."""
    z = fiber.z
    s_p = roots_of_unity_exponent(z, p)
    if not _sylow_is_cyclic(z, p):
        if p == 2:
            r_2 = r2(z)
            return NpBound(2, 2 * (r_2 + 2) + 1, "noncyclic-2", (("r2", r_2),),
                           f"2-Sylow of Gal(Z/Q) noncyclic; 2^r2 = {2 ** r_2} roots of unity in Z(sqrt -1)")
        return NpBound(p, 2 * s_p + 1, "noncyclic-odd", (("s_p", s_p),),
                       f"{p}-Sylow of Gal(Z/Q) noncyclic; {p}^s_p = {p ** s_p} roots of unity in Z")
    if not z.is_cyclic:
        raise PreconditionError(f"Gal(Z/Q) is noncyclic but its {p}-Sylow subgroup is cyclic")
    report = height_of(z)
    if report.verdict is Height.UNKNOWN:
        return NpBound(p, None, "undetermined", (("s_p", s_p),), report.rationale)
    k_p = report.obstruction(p)
    if k_p is None:
        raise PreconditionError(f"the {p}-part of {z} has infinite height; no bound exists")
    return NpBound(p, k_p + s_p + 2, "cyclic-finite-height", (("k_p", k_p), ("s_p", s_p)),
                   f"no cyclic {p}^{k_p}-cover of Z")


def _fiber_bounds(fiber: Fiber) -> tuple[FiberStatus, dict[int, NpBound], HeightReport | None]:
    z = fiber.z
    group = galois_group(z)
    if group.is_cyclic:
        report = height_of(z)
        if report.verdict is Height.YES:
            return FiberStatus.ALL_CROSSED, {}, report
        if report.verdict is Height.UNKNOWN:
            return FiberStatus.UNKNOWN, {}, report
        return FiberStatus.NONCROSSED_EXIST, {p: np_bound(fiber, p) for p, _ in report.obstructions}, report
    primes = [p for p in sorted(factorint(group.order)) if not _sylow_is_cyclic(z, p)]
    return FiberStatus.NONCROSSED_EXIST, {p: np_bound(fiber, p) for p in primes}, None


def classify(fiber: Fiber, conductor_bound: int | None = None) -> FiberVerdict:
    """AllCrossed iff Z/Q is cyclic of infinite height; otherwise a certified noncrossed witness."""
    fiber.check()
    bound = Config.CONDUCTOR_BOUND if conductor_bound is None else conductor_bound
    status, bounds, report = _fiber_bounds(fiber)
    trace = [("classify-center", f"Gal(Z/Q) {'cyclic' if galois_group(fiber.z).is_cyclic else 'noncyclic'}")]
    if report is not None:
        trace.append(("height", f"{report.verdict.value}: {report.rationale}"))
    if status is not FiberStatus.NONCROSSED_EXIST:
        return FiberVerdict(status, bounds=bounds, height=report,
                            bound=bound if status is FiberStatus.UNKNOWN else None, trace=tuple(trace))

    p, chosen = min(bounds.items())
    m = lcm(index(fiber.beta0), p ** chosen.n_p)
    trace.append(("choose-index", f"m = lcm(ind beta0, {p}^{chosen.n_p}) = {m}"))
    try:
        witness = _build_witness(fiber, m, (), bound)
    except TameAlgebraError as e:
        logger.error(f"Witness construction failed for {fiber.z}: {e}")
        trace.append(("witness-failed", str(e)))
        return FiberVerdict(FiberStatus.UNKNOWN, bounds=bounds, height=report, bound=bound, trace=tuple(trace))
    logger.info(f"Fiber over {fiber.z}: noncrossed products exist in index {m}")
    return FiberVerdict(status, witness, bounds, report, trace=tuple(trace))


def witness_noncrossed(fiber: Fiber, m: int, support_size: int | None = None,
                       exclude: Iterable[QPlace] = (), conductor_bound: int | None = None) -> Witness:
    """A residue class of index m in the fiber that is not split by any Galois m-cover.

    `exclude` keeps the new support away from earlier witnesses, so repeated
    calls produce classes with disjoint supports.
    """
    fiber.check()
    status, bounds, _ = _fiber_bounds(fiber)
    if status is not FiberStatus.NONCROSSED_EXIST:
        raise PreconditionError(f"the fiber over {fiber.z} is {status.value}; no noncrossed witness")
    if not any(b.n_p is not None and m % (p ** b.n_p) == 0 for p, b in bounds.items()):
        needed = ", ".join(f"{p}^{b.n_p}" for p, b in bounds.items() if b.n_p is not None)
        raise PreconditionError(f"m = {m} is not divisible by a certified bound ({needed})")
    if m % index(fiber.beta0):
        raise PreconditionError(f"m = {m} is not a multiple of ind beta0 = {index(fiber.beta0)}")
    bound = Config.CONDUCTOR_BOUND if conductor_bound is None else conductor_bound
    return _build_witness(fiber, m, tuple(exclude), bound, support_size)


def _build_witness(fiber: Fiber, m: int, exclude: tuple[QPlace, ...], bound: int,
                   support_size: int | None = None) -> Witness:
    z, beta0 = fiber.z, fiber.beta0
    size = Config.WITNESS_SUPPORT if support_size is None else support_size
    excluded = set(exclude)
    trace = []

    t_set = compute_T(fiber, m)
    trace.append(("choose-avoid-set", ", ".join(map(str, t_set))))

    blocked = set(t_set) | excluded
    candidates = [QPlace(p) for p in primerange(2, Config.PRIME_SCAN_BOUND + 1) if QPlace(p) not in blocked]
    start = 0
    while True:
        support = candidates[start:start + size]
        if len(support) < size:
            raise BoundError(f"no support of {size} primes below {Config.PRIME_SCAN_BOUND} "
                             f"without a full-degree {m}-cover")
        if m > Config.SEARCH_DEGREE_LIMIT:
            trace.append(("check-support", f"skipped: m = {m} above {Config.SEARCH_DEGREE_LIMIT}"))
            break
        check = condition_B(fiber, m, support, bound)
        if check.status is ConditionStatus.FAILS:
            trace.append(("check-support", f"no {m}-cover with full local degree above S up to conductor {bound}"))
            break
        trace.append(("reject-support", f"{', '.join(map(str, support))}: full local degree in "
                                        f"{check.cover.to_document()}"))
        logger.debug(f"Support {', '.join(map(str, support))} rejected for m={m} over {z}")
        start += 1
    trace.append(("choose-support", ", ".join(map(str, support))))

    deficient = [v for v in support
                 if all(local_index(beta0, P) < d_value(m, v, z) for P in _places_above(z, v))]
    trace.append(("select-deficient-places", ", ".join(map(str, deficient)) or "none"))

    avoid = set(t_set) | excluded | (set(support) - set(deficient))
    alpha = prescribe_class(z, m, [(v, d_value(m, v, z)) for v in deficient], avoid)
    trace.append(("prescribe-base-class", str(alpha)))

    gamma = add(restrict(alpha, z), beta0)
    trace.append(("twist-residue-class", str(gamma)))

    if index(gamma) != m:
        raise BoundError(f"the twisted class has index {index(gamma)}, not {m}")
    trace.append(("verify-index", f"ind gamma = {m}"))
    for v in support:
        indices = [local_index(gamma, P) for P in _places_above(z, v)]
        full = d_value(m, v, z)
        if (v in deficient and any(k != full for k in indices)) or full not in indices:
            raise BoundError(f"gamma misses the full local index {full} above {v}")
    if alpha.base_support & set(t_set):
        raise BoundError("the base class meets the avoided set")
    trace.append(("verify-local-indices", f"full local index {m} above every support prime"))

    if m <= Config.SEARCH_DEGREE_LIMIT:
        demands = [(v, lcm(*(local_index(gamma, P) for P in _places_above(z, v))))
                   for v in sorted(gamma.base_support)]
        found = cover_search(z, m, demands, bound, mode=DemandMode.DIVISIBLE)
        if not isinstance(found, NotFoundWithinBound):
            raise BoundError(f"gamma is split by the Galois {m}-cover {found.to_document()}")
        trace.append(("bounded-refutation", f"no splitting {m}-cover up to conductor {bound}"))
    else:
        trace.append(("bounded-refutation", f"skipped: m = {m} above {Config.SEARCH_DEGREE_LIMIT}"))
    if z.is_cyclic:
        trace.append(("sharper-bound-note", "a smaller exponent n_p + s_p + 1 may suffice for non-exceptional Z"))

    logger.info(f"Noncrossed witness of index {m} over {z} supported above {', '.join(map(str, support))}")
    return Witness(m, gamma, alpha, tuple(t_set), tuple(support), tuple(deficient), tuple(trace))


def _places_above(z: AbelianExtQ, v: QPlace) -> list:
    return [v] if z.is_rational else primes_above(z, v)


def residue_class_certificate(fiber: Fiber, beta: BrauerClass) -> tuple[FiberStatus | None, str]:
    """Certify beta as crossed (whole fiber crossed) or noncrossed (it is the fiber's witness)."""
    status, bounds, report = _fiber_bounds(fiber)
    if status is FiberStatus.ALL_CROSSED:
        return status, f"Z cyclic of infinite height ({report.rationale})"
    if status is FiberStatus.UNKNOWN:
        return None, f"height undetermined ({report.rationale})"
    m = index(beta)
    for p, bound in sorted(bounds.items()):
        if bound.n_p is None or m % p ** bound.n_p:
            continue
        try:
            witness = witness_noncrossed(fiber, m)
        except TameAlgebraError as e:
            return None, f"no witness of index {m}: {e}"
        if witness.gamma == beta:
            return status, f"residue class is the noncrossed witness of index {m} ({p}^{bound.n_p} | m)"
    return None, f"index {m} is not covered by a certified witness"
