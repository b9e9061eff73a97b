"""Abelian extensions of Q through the conductor-subgroup correspondence.

An abelian field is the fixed field of a subgroup H of (Z/nZ)^x inside the
n-th cyclotomic field. Fields are kept with minimal conductor and H listed
by smallest nonnegative residues, so equal fields compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import gcd, lcm
from typing import Iterable

from sympy import factorint, multiplicity, totient

from src.config import Config
from src.cyclotomic import unit_group
from src.errors import FieldContainmentError, PreconditionError, TameAlgebraError
from src.finite_abelian import shape_from_orders
from src.qlattice import QuotientShape
from src.run_logger import setup_logger

logger = setup_logger(__name__)


def _units(n: int) -> list[int]:
    return [u for u in range(n) if gcd(u, n) == 1]


def _closure(n: int, generators: Iterable[int]) -> frozenset[int]:
    identity = 1 % n
    group = {identity}
    frontier = [identity]
    generators = [g % n for g in generators]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = (x * g) % n
                if y not in group:
                    group.add(y)
                    new.append(y)
        frontier = new
    return frozenset(group)


def _minimize(n: int, subgroup: frozenset[int]) -> tuple[int, frozenset[int]]:
    changed = True
    while changed:
        changed = False
        for p in sorted(factorint(n)):
            smaller = n // p
            kernel = (u for u in _units(n) if u % smaller == 1 % smaller)
            if all(u in subgroup for u in kernel):
                n, subgroup = smaller, frozenset(h % smaller for h in subgroup)
                changed = True
                break
    return n, subgroup


@dataclass(frozen=True)
class QPlace:
    """A place of Q: a prime, or the real place when `prime` is None."""

    prime: int | None = None

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def sort_key(self) -> tuple[int, int]:
        return (1, 0) if self.prime is None else (0, self.prime)

    def __lt__(self, other: QPlace) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    @classmethod
    def parse(cls, text: str) -> QPlace:
        return cls(None) if text == "inf" else cls(int(text))


INFINITY = QPlace(None)


@dataclass(frozen=True)
class ZPlace:
    """The `index`-th place of a field above `base` (see primes_above)."""

    base: QPlace
    index: int = 0

    def sort_key(self) -> tuple:
        return self.base.sort_key() + (self.index,)

    def __lt__(self, other: ZPlace) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.base}#{self.index}"


@dataclass(frozen=True)
class GaloisGroup:
    shape: QuotientShape
    representatives: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.representatives)

    @property
    def is_cyclic(self) -> bool:
        return self.shape.is_cyclic


@dataclass(frozen=True)
class AbelianExtQ:
    conductor: int
    subgroup: tuple[int, ...]

    @classmethod
    def from_subgroup(cls, n: int, generators: Iterable[int]) -> AbelianExtQ:
        """Field fixed by the subgroup of (Z/nZ)^x generated by `generators`."""
        if n < 1:
            raise TameAlgebraError(f"conductor must be positive, got {n}")
        generators = list(generators)
        for g in generators:
            if gcd(g, n) != 1 and n > 1:
                raise TameAlgebraError(f"{g} is not a unit modulo {n}")
        n, subgroup = _minimize(n, _closure(n, generators))
        return cls(n, tuple(sorted(subgroup)))

    @classmethod
    def rational(cls) -> AbelianExtQ:
        return cls(1, (0,))

    @classmethod
    def cyclotomic(cls, n: int) -> AbelianExtQ:
        return cls.from_subgroup(n, [1])

    @classmethod
    def real_cyclotomic(cls, n: int) -> AbelianExtQ:
        return cls.from_subgroup(n, [n - 1])

    def check(self) -> None:
        """Raise unless this is a canonical (closed, minimal-conductor) field."""
        n = self.conductor
        members = frozenset(self.subgroup)
        if any(gcd(h, n) != 1 for h in members) and n > 1:
            raise TameAlgebraError(f"subgroup contains non-units modulo {n}")
        if _closure(n, members) != members:
            raise TameAlgebraError(f"{sorted(members)} is not a subgroup of (Z/{n})^x")
        if _minimize(n, members)[0] != n:
            raise TameAlgebraError(f"conductor {n} is not minimal for this subgroup")
        if list(self.subgroup) != sorted(members):
            raise TameAlgebraError("subgroup representatives must be sorted and distinct")

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.subgroup)

    @property
    def degree(self) -> int:
        units = int(totient(self.conductor)) if self.conductor > 1 else 1
        return units // len(self.subgroup)

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    @property
    def is_real(self) -> bool:
        return (self.conductor - 1) % self.conductor in self.members

    @property
    def is_cyclic(self) -> bool:
        return galois_group(self).is_cyclic

    def lift(self, n: int) -> frozenset[int]:
        """The subgroup of (Z/nZ)^x fixing this field, for n a multiple of the conductor."""
        if n % self.conductor:
            raise FieldContainmentError(f"{n} is not a multiple of the conductor {self.conductor}")
        return frozenset(u for u in _units(n) if u % self.conductor in self.members)

    def coset_order(self, unit: int) -> int:
        n = self.conductor
        x, k = unit % n, 1
        while x not in self.members:
            x, k = (x * unit) % n, k + 1
        return k

    def to_document(self) -> dict:
        return {"conductor": self.conductor, "subgroup": list(self.subgroup)}

    def __str__(self) -> str:
        if self.is_rational:
            return "Q"
        if len(self.subgroup) == 1:
            return f"Q(zeta_{self.conductor})"
        return f"({self.conductor}, H of order {len(self.subgroup)})"


def contains(big: AbelianExtQ, small: AbelianExtQ) -> bool:
    """True when `small` is a subfield of `big`."""
    if big.conductor % small.conductor:
        return False
    return all(h % small.conductor in small.members for h in big.subgroup)


def compositum(a: AbelianExtQ, b: AbelianExtQ) -> AbelianExtQ:
    n = lcm(a.conductor, b.conductor)
    return AbelianExtQ.from_subgroup(n, a.lift(n) & b.lift(n))


def galois_group(z: AbelianExtQ) -> GaloisGroup:
    """(Z/nZ)^x / H with the smallest unit of each coset as representative."""
    n = z.conductor
    seen: set[int] = set()
    representatives = []
    for u in _units(n) if n > 1 else [0]:
        if u in seen:
            continue
        representatives.append(u)
        seen.update((u * h) % n for h in z.subgroup)
    shape = shape_from_orders(z.coset_order(u) for u in representatives)
    return GaloisGroup(shape, tuple(representatives))


def _decomposition_subgroup(z: AbelianExtQ, v: QPlace) -> frozenset[int]:
    """Decomposition group of v in (Z/nZ)^x, enlarged by H."""
    n = z.conductor
    if n == 1:
        return frozenset({0})
    return _closure(n, list(z.subgroup) + unit_group(n).decomposition_generators(v.prime))


def local_degree(z: AbelianExtQ, v: QPlace) -> int:
    """[Z_P : Q_v] for any place P of z above v."""
    return len(_decomposition_subgroup(z, v)) // len(z.subgroup)


def relative_local_degree(big: AbelianExtQ, small: AbelianExtQ, v: QPlace) -> int:
    if not contains(big, small):
        raise FieldContainmentError(f"{small} is not a subfield of {big}")
    return local_degree(big, v) // local_degree(small, v)


def primes_above(z: AbelianExtQ, v: QPlace) -> list[ZPlace]:
    """Places of z above v, indexed by cosets of the decomposition group.

    The cosets are ordered by their smallest unit representative, which
    gives every place a stable index.
    """
    n = z.conductor
    decomposition = _decomposition_subgroup(z, v)
    seen: set[int] = set()
    count = 0
    for u in _units(n) if n > 1 else [0]:
        if u in seen:
            continue
        seen.update((u * d) % n for d in decomposition)
        count += 1
    return [ZPlace(v, k) for k in range(count)]


def roots_of_unity_exponent(z: AbelianExtQ, p: int) -> int:
    """Largest k with Q(zeta_{p^k}) inside z (so s_2 >= 1 always)."""
    k = 0
    while contains(z, AbelianExtQ.cyclotomic(p ** (k + 1))):
        k += 1
    return k


def r2(z: AbelianExtQ) -> int:
    return roots_of_unity_exponent(compositum(z, AbelianExtQ.cyclotomic(4)), 2)


def primary_part(z: AbelianExtQ, p: int) -> AbelianExtQ:
    """The subfield whose Galois group is the p-Sylow quotient of Gal(z/Q)."""
    n = z.conductor
    if n == 1:
        return z
    prime_to_p = [u for u in _units(n) if z.coset_order(u) % p]
    return AbelianExtQ.from_subgroup(n, list(z.subgroup) + prime_to_p)


def ramification_index(z: AbelianExtQ, ell: int) -> int:
    """Ramification index of the prime ell in z."""
    n = z.conductor
    if n % ell:
        return 1
    rest = n // ell ** multiplicity(ell, n)
    inertia = [u for u in _units(n) if (u - 1) % rest == 0]
    return len(_closure(n, list(z.subgroup) + inertia)) // len(z.subgroup)


def cyclotomic_layer(p: int, k: int) -> AbelianExtQ:
    """The cyclic field of degree p^k unramified outside p (real when p = 2)."""
    if k == 0:
        return AbelianExtQ.rational()
    if p == 2:
        return AbelianExtQ.real_cyclotomic(2 ** (k + 2))
    return primary_part(AbelianExtQ.cyclotomic(p ** (k + 1)), p)


class Height(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "UnknownBeyondBound"


@dataclass(frozen=True)
class HeightReport:
    verdict: Height
    rationale: str
    evidence: tuple[str, ...] = field(default_factory=tuple)
    # (p, k): no cyclic cover of relative degree p^k exists
    obstructions: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def obstruction(self, p: int) -> int | None:
        return dict(self.obstructions).get(p)

    def to_document(self) -> dict:
        return {"verdict": self.verdict.value, "rationale": self.rationale,
                "evidence": list(self.evidence),
                "obstructions": {str(p): k for p, k in self.obstructions}}


def quadratic_radicand(z: AbelianExtQ) -> int:
    """The squarefree d with z = Q(sqrt d)."""
    if z.degree != 2:
        raise PreconditionError(f"{z} is not quadratic")
    discriminant = z.conductor if z.is_real else -z.conductor
    return discriminant // 4 if discriminant % 4 == 0 else discriminant


def is_sum_of_two_squares(d: int) -> bool:
    if d <= 0:
        return False
    return all(e % 2 == 0 for q, e in factorint(d).items() if q % 4 == 3)


def height_obstruction(z: AbelianExtQ, p: int) -> tuple[int, str] | None:
    """A k such that z has no cyclic cover of relative degree p^k, or None.

    None means the p-part of z is a cyclotomic layer, which embeds in every
    larger layer. Otherwise either the 2-part is imaginary (complex
    conjugation would have to be the involution of a cyclic 2-power
    cover) or a prime ell != p ramifies in the p-part. In the second case
    the inertia group of ell in a cyclic cover L has order e * p^k, and it
    is tame, so e * p^k divides ell - 1.
    """
    part = primary_part(z, p)
    if part.is_rational:
        return None
    if p == 2 and not part.is_real:
        return 1, f"2-part {part} is imaginary"
    found = None
    for ell in sorted(factorint(part.conductor)):
        if ell == p:
            continue
        e = ramification_index(part, ell)
        k = multiplicity(p, ell - 1) - multiplicity(p, e) + 1
        if found is None or k < found[0]:
            found = (k, f"{ell} ramifies in the {p}-part with index {e}, "
                        f"and {p}^{multiplicity(p, ell - 1)} exactly divides {ell} - 1")
    return found


def _two_part_search(part: AbelianExtQ, verdict_k: int | None, evidence: list[str]) -> str | None:
    """Cross-check the 2-part against cyclic cover searches; returns a disagreement, if any."""
    from src.advanced.covers import NotFoundWithinBound, cover_search

    bound = Config.CONDUCTOR_BOUND
    a = multiplicity(2, part.degree)
    for k in range(1, Config.HEIGHT_CROSSCHECK + 1):
        found = cover_search(part, 2 ** k, [], bound, require_cyclic=True)
        if isinstance(found, NotFoundWithinBound):
            evidence.append(f"no cyclic 2^{k}-cover up to conductor {bound}")
            if verdict_k is None and 2 ** (a + k + 2) <= bound:
                return f"cyclotomic layer of conductor {2 ** (a + k + 2)} missed by the search at k={k}"
            continue
        evidence.append(f"cyclic 2^{k}-cover {found.to_document()}")
        if verdict_k is not None and k >= verdict_k:
            return f"search found a cyclic 2^{k}-cover beyond the obstruction at k={verdict_k}"
    return None


def confirming_cover(z: AbelianExtQ, p: int, k: int) -> AbelianExtQ:
    """A cyclic cover of z with relative degree p^k, for z whose p-part has infinite height."""
    layer = cyclotomic_layer(p, multiplicity(p, z.degree) + k)
    cover = compositum(z, layer)
    if cover.degree != z.degree * p ** k or not cover.is_cyclic or not contains(cover, z):
        raise TameAlgebraError(f"cyclotomic layer {layer} does not give a cyclic {p}^{k}-cover of {z}")
    return cover


def infinite_height(z: AbelianExtQ) -> HeightReport:
    """Decide whether the cyclic field z embeds in cyclic fields of every relative degree.

    z has infinite height exactly when each primary part is a cyclotomic
    layer. Yes answers carry explicit cyclic covers; the 2-part is also
    cross-checked by cover search for k <= HEIGHT_CROSSCHECK.
    """
    if not z.is_cyclic:
        raise PreconditionError(f"{z} is not cyclic over Q")
    if z.is_rational:
        return HeightReport(Height.YES, "Q lies in cyclic cyclotomic fields of every degree",
                            tuple(f"constructed cyclic {p}^1-cover {confirming_cover(z, p, 1).to_document()}"
                                  for p in (2, 3)))

    obstructions = []
    reasons = []
    for p in sorted(factorint(z.degree)):
        blocked = height_obstruction(z, p)
        if blocked is not None:
            obstructions.append((p, blocked[0]))
            reasons.append(f"no cyclic {p}^{blocked[0]}-cover: {blocked[1]}")

    evidence = []
    two_part = primary_part(z, 2)
    if two_part.degree == 2:
        d = quadratic_radicand(two_part)
        quartic = is_sum_of_two_squares(d)
        evidence.append(f"cyclic quartic over Q(sqrt {d}) {'exists' if quartic else 'does not exist'}")
        if quartic != (dict(obstructions).get(2, 2) > 1):
            logger.error(f"Sum-of-two-squares test disagrees with the ramification test for Q(sqrt {d})")
            return HeightReport(Height.UNKNOWN, f"quadratic criteria disagree for Q(sqrt {d})", tuple(evidence))
    disagreement = _two_part_search(two_part, dict(obstructions).get(2), evidence)
    if disagreement:
        logger.error(f"Height cross-check failed for {z}: {disagreement}")
        return HeightReport(Height.UNKNOWN, disagreement, tuple(evidence), tuple(obstructions))

    if obstructions:
        logger.info(f"{z} has finite height: {'; '.join(reasons)}")
        return HeightReport(Height.NO, "; ".join(reasons), tuple(evidence), tuple(obstructions))

    for p in sorted(set(factorint(z.degree)) | {2, 3}):
        evidence.append(f"constructed cyclic {p}^1-cover {confirming_cover(z, p, 1).to_document()}")
    return HeightReport(Height.YES, "every primary part is a cyclotomic layer", tuple(evidence))
