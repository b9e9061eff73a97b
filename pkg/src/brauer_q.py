"""Brauer classes over Q and over abelian fields, described by local invariants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from sympy import nextprime

from src.abelian_ext import (AbelianExtQ, QPlace, ZPlace, contains, local_degree,
                             primes_above, relative_local_degree)
from src.config import Config
from src.errors import FieldContainmentError, InfeasibleTargetError, PreconditionError, TameAlgebraError
from src.run_logger import setup_logger

logger = setup_logger(__name__)

Place = Union[QPlace, ZPlace]
HALF = Fraction(1, 2)


@lru_cache(maxsize=4096)
def _place_count(z: AbelianExtQ, v: QPlace) -> int:
    return len(primes_above(z, v))


def _base_place(place: Place) -> QPlace:
    return place.base if isinstance(place, ZPlace) else place


@dataclass(frozen=True)
class BrauerClass:
    """A class in Br(base): nonzero local invariants, sorted by place."""

    base: AbelianExtQ
    invariants: tuple[tuple[Place, Fraction], ...]

    @classmethod
    def make(cls, base: AbelianExtQ, invariants: Mapping[Place, Fraction] | Iterable[tuple[Place, Fraction]]):
        items = invariants.items() if isinstance(invariants, Mapping) else invariants
        merged: dict[Place, Fraction] = {}
        for place, value in items:
            merged[place] = (merged.get(place, Fraction(0)) + Fraction(value)) % 1
        kept = tuple(sorted(((p, v) for p, v in merged.items() if v), key=lambda item: item[0].sort_key()))
        brauer_class = cls(base, kept)
        brauer_class.check()
        return brauer_class

    @classmethod
    def zero(cls, base: AbelianExtQ | None = None) -> BrauerClass:
        return cls(base or AbelianExtQ.rational(), ())

    def check(self) -> None:
        total = Fraction(0)
        for place, value in self.invariants:
            self._check_place(place)
            if not 0 <= value < 1:
                raise TameAlgebraError(f"invariant at {place} must lie in [0, 1), got {value}")
            base_place = _base_place(place)
            if base_place.is_real:
                if not self.base.is_real:
                    raise TameAlgebraError(f"complex place {place} must carry invariant 0")
                if value != HALF:
                    raise TameAlgebraError(f"real place {place} carries {value}, not 0 or 1/2")
            total += value
        if total % 1:
            raise TameAlgebraError(f"invariants sum to {total % 1}, not 0 mod 1")

    def _check_place(self, place: Place) -> None:
        if self.base.is_rational:
            if not isinstance(place, QPlace):
                raise TameAlgebraError(f"classes over Q are keyed by places of Q, got {place}")
            return
        if not isinstance(place, ZPlace):
            raise TameAlgebraError(f"classes over {self.base} are keyed by places of the field, got {place}")
        if not 0 <= place.index < _place_count(self.base, place.base):
            raise TameAlgebraError(f"{place}: no such place of {self.base} above {place.base}")

    def as_dict(self) -> dict[Place, Fraction]:
        return dict(self.invariants)

    def invariant(self, place: Place) -> Fraction:
        return self.as_dict().get(place, Fraction(0))

    @property
    def support(self) -> tuple[Place, ...]:
        return tuple(place for place, _ in self.invariants)

    @property
    def base_support(self) -> frozenset[QPlace]:
        return frozenset(_base_place(place) for place in self.support)

    @property
    def is_zero(self) -> bool:
        return not self.invariants

    def to_document(self) -> dict:
        def place_document(place: Place):
            if isinstance(place, ZPlace):
                return {"base": str(place.base), "index": place.index}
            return str(place)
        return {"base": self.base.to_document(),
                "inv": [[place_document(p), str(v)] for p, v in self.invariants]}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return "{" + ", ".join(f"{p}: {v}" for p, v in self.invariants) + "}"


def restrict(alpha: BrauerClass, z: AbelianExtQ) -> BrauerClass:
    """alpha^Z: each place above p gets [Z_P : Q_p] * inv_p(alpha)."""
    if not alpha.base.is_rational:
        raise PreconditionError("restriction is defined for classes over Q")
    if z.is_rational:
        return alpha
    invariants = {}
    for place, value in alpha.invariants:
        scaled = (local_degree(z, place) * value) % 1
        for above in primes_above(z, place):
            invariants[above] = scaled
    return BrauerClass.make(z, invariants)


def add(a: BrauerClass, b: BrauerClass) -> BrauerClass:
    if a.base != b.base:
        raise PreconditionError(f"cannot add classes over {a.base} and {b.base}")
    return BrauerClass.make(a.base, list(a.invariants) + list(b.invariants))


def local_index(beta: BrauerClass, place: Place) -> int:
    return beta.invariant(place).denominator


def index(beta: BrauerClass) -> int:
    return lcm(1, *(value.denominator for _, value in beta.invariants))


def is_split_by(beta: BrauerClass, cover: AbelianExtQ) -> bool:
    """Local index divides the local degree of cover/base at every place."""
    if not contains(cover, beta.base):
        raise FieldContainmentError(f"{beta.base} is not a subfield of {cover}")
    for place, value in beta.invariants:
        if relative_local_degree(cover, beta.base, _base_place(place)) % value.denominator:
            return False
    return True


def _next_admissible_prime(excluded: set[QPlace], admissible) -> QPlace | None:
    p = 2
    while p <= Config.PRIME_SCAN_BOUND:
        place = QPlace(p)
        if place not in excluded and admissible(place):
            return place
        p = nextprime(p)
    return None


def prescribe_class(z: AbelianExtQ, m: int, targets: Sequence[tuple[Place, int]],
                    avoid: Iterable[QPlace] = ()) -> BrauerClass:
    """A class alpha over Q with ind alpha^Z = m and the given local indices.

    Targets at places of Z are met by inv_p(alpha) = 1/(f_p t). When the
    targets do not reach index m, the smallest free prime q receives
    1/(f_q m); a last free prime restores the sum-zero condition without
    raising the index.
    """
    if m < 1:
        raise PreconditionError(f"index must be positive, got {m}")
    avoid = set(avoid)
    invariants: dict[QPlace, Fraction] = {}
    wanted: dict[QPlace, int] = {}

    for place, target in targets:
        base_place = _base_place(place)
        if base_place in avoid:
            raise InfeasibleTargetError(place, "place lies in the avoided set")
        if target < 1 or m % target:
            raise InfeasibleTargetError(place, f"local index {target} does not divide {m}")
        if wanted.setdefault(base_place, target) != target:
            raise InfeasibleTargetError(place, "conflicting targets above the same place of Q")
        if target == 1:
            continue
        f = local_degree(z, base_place)
        if base_place.is_real:
            if target != 2 or f != 1:
                raise InfeasibleTargetError(place, f"local index {target} impossible at a place with degree {f}")
            invariants[base_place] = HALF
        else:
            invariants[base_place] = Fraction(1, f * target)

    used = avoid | set(wanted)
    if lcm(1, *wanted.values()) != m:
        full = _next_admissible_prime(used, lambda q: True)
        if full is None:
            raise InfeasibleTargetError("auxiliary", "no free prime within the scan bound")
        invariants[full] = Fraction(1, local_degree(z, full) * m)
        used.add(full)
        logger.debug(f"Auxiliary prime {full} carries the full index {m}")

    total = sum(invariants.values(), Fraction(0)) % 1
    if total:
        denominator = total.denominator
        closing = _next_admissible_prime(
            used, lambda q: (local_degree(z, q) * m) % denominator == 0)
        if closing is None:
            raise InfeasibleTargetError("auxiliary", f"no free prime closes the sum {total}")
        invariants[closing] = (-total) % 1
        logger.debug(f"Auxiliary prime {closing} restores the sum-zero condition")

    alpha = BrauerClass.make(AbelianExtQ.rational(), invariants)
    _verify_prescription(alpha, z, m, wanted, avoid)
    return alpha


def _verify_prescription(alpha: BrauerClass, z: AbelianExtQ, m: int, wanted: dict[QPlace, int],
                         avoid: set[QPlace]) -> None:
    restricted = restrict(alpha, z)
    if index(restricted) != m:
        raise InfeasibleTargetError("index", f"restriction has index {index(restricted)}, expected {m}")
    for place, target in wanted.items():
        for above in (primes_above(z, place) if not z.is_rational else [place]):
            if local_index(restricted, above) != target:
                raise InfeasibleTargetError(above, f"local index {local_index(restricted, above)}, expected {target}")
    clash = alpha.base_support & avoid
    if clash:
        raise InfeasibleTargetError(min(clash), "support meets the avoided set")
