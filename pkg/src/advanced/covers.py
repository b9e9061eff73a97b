"""Search for abelian covers of an abelian field with prescribed local degrees.

Every abelian field of conductor dividing n corresponds to a group X of
Dirichlet characters modulo n. Covers L of Z with [L:Z] = m are the
groups X containing X_Z with |X : X_Z| = m; all of them lie inside
W = {psi : m psi in X_Z}. Conductors are scanned in ascending order, so the
first hit has minimal conductor.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Sequence

from src.abelian_ext import (AbelianExtQ, QPlace, contains, galois_group, local_degree,
                             relative_local_degree)
from src.config import Config
from src.cyclotomic import Character, character_order, image_order, scale_character, span, unit_group
from src.errors import PreconditionError
from src.run_logger import setup_logger

logger = setup_logger(__name__)

Demand = tuple[QPlace, int]


class DemandMode(Enum):
    EXACT = "exact"
    DIVISIBLE = "divisible"


@dataclass(frozen=True)
class NotFoundWithinBound:
    bound: int
    reason: str = ""

    def to_document(self) -> dict:
        return {"found": False, "bound": self.bound, "reason": self.reason}


def _meets(relative: int, required: int, mode: DemandMode) -> bool:
    if mode is DemandMode.EXACT:
        return relative == required
    return relative % required == 0


def _unsatisfiable(z: AbelianExtQ, m: int, demands: Sequence[Demand]) -> str | None:
    for place, required in demands:
        if required < 1 or m % required:
            return f"local degree {required} at {place} cannot divide [L:Z] = {m}"
        if place.is_real and required > (2 if z.is_real else 1):
            return f"archimedean local degree {required} is impossible over {z}"
    return None


def _candidate_pool(n: int, base: frozenset[Character], m: int) -> list[Character]:
    """W = characters psi mod n with m psi in the base group."""
    group = unit_group(n)
    exponent = lcm(1, *(character_order(chi) for chi in base))
    levels = [gcd(e, m * exponent) for e in group.orders]
    pool = []
    for values in product(*([Fraction(k, g) for k in range(g)] for g in levels)):
        if scale_character(values, m) in base:
            pool.append(values)
    return pool


def _cyclic_candidates(pool, base, m):
    target = m * len(base)
    for psi in pool:
        if character_order(psi) == target:
            yield [psi]


def _general_candidates(pool, base, m, length):
    target = m * len(base)
    base_list = sorted(base)
    frontier = {frozenset(base): []}
    seen = set(frontier)
    while frontier:
        following = {}
        for members, added in frontier.items():
            for psi in pool:
                if psi in members:
                    continue
                generators = added + [psi]
                bigger = span(base_list + generators, length)
                if target % len(bigger) or bigger in seen:
                    continue
                seen.add(bigger)
                if len(bigger) == target:
                    yield generators
                else:
                    following[bigger] = generators
        frontier = following


def _materialize(n: int, generators: list[Character]) -> AbelianExtQ:
    group = unit_group(n)
    return AbelianExtQ.from_subgroup(n, group.kernel(generators))


def _verified(cover: AbelianExtQ, z: AbelianExtQ, m: int, demands, require_cyclic: bool,
              mode: DemandMode) -> bool:
    if not contains(cover, z) or cover.degree != m * z.degree:
        return False
    if require_cyclic and not galois_group(cover).is_cyclic:
        return False
    return all(_meets(relative_local_degree(cover, z, v), d, mode) for v, d in demands)


def cover_search(z: AbelianExtQ, m: int, demands: Sequence[Demand], conductor_bound: int | None = None,
                 require_cyclic: bool = False,
                 mode: DemandMode = DemandMode.EXACT) -> AbelianExtQ | NotFoundWithinBound:
    """Find the abelian L containing z with [L:z] = m and the demanded local degrees.

    The result has minimal conductor; ties go to the smallest sorted subgroup.
    Failure is returned as NotFoundWithinBound, never raised.
    """
    if m < 1:
        raise PreconditionError(f"cover degree must be positive, got {m}")
    bound = Config.CONDUCTOR_BOUND if conductor_bound is None else conductor_bound
    demands = list(demands)

    reason = _unsatisfiable(z, m, demands)
    if reason:
        logger.info(f"Cover search skipped: {reason}")
        return NotFoundWithinBound(bound, reason)
    if require_cyclic and not z.is_cyclic:
        return NotFoundWithinBound(bound, f"{z} is not cyclic, so no cyclic cover contains it")
    if m == 1:
        if all(_meets(1, d, mode) for _, d in demands) and (not require_cyclic or z.is_cyclic):
            return z
        return NotFoundWithinBound(bound, "m = 1 admits only the field itself")

    lower = unit_group(z.conductor)
    base_characters = lower.annihilator(z.subgroup)
    base_degrees = {v: local_degree(z, v) for v, _ in demands}
    logger.debug(f"Cover search over {z}: m={m}, demands={[(str(v), d) for v, d in demands]}, bound={bound}")

    for n in range(z.conductor, bound + 1, z.conductor):
        if n % 4 == 2:
            continue
        group = unit_group(n)
        base = frozenset(group.lift_character(chi, lower) for chi in base_characters)
        pool = _candidate_pool(n, base, m)
        length = len(group.orders)
        candidates = (_cyclic_candidates(pool, base, m) if require_cyclic
                      else _general_candidates(pool, base, m, length))

        found = []
        for added in candidates:
            if lcm(z.conductor, *(group.conductor(psi) for psi in added)) != n:
                continue
            generators = sorted(base) + added
            if not all(_meets(_local(group, generators, v) // base_degrees[v], d, mode) for v, d in demands):
                continue
            cover = _materialize(n, generators)
            if _verified(cover, z, m, demands, require_cyclic, mode):
                found.append(cover)
            else:
                logger.error(f"Discarding cover {cover.to_document()} that failed re-verification")
        if found:
            best = min(found, key=lambda cover: cover.subgroup)
            logger.info(f"Cover of {z} with m={m} found at conductor {n}")
            return best

    logger.warning(f"No cover of {z} with m={m} up to conductor {bound}")
    return NotFoundWithinBound(bound, f"no admissible cover with conductor <= {bound}")


def _local(group, generators: list[Character], v: QPlace) -> int:
    return image_order(group, generators, group.decomposition_generators(v.prime))
