"""Finite abelian groups: invariant factors from element orders, torsion, coprime complements."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, lcm, prod
from typing import Iterable

from sympy import factorint, multiplicity

from src.errors import ContainmentError, CoprimalityError
from src.qlattice import QuotientShape

Element = tuple[int, ...]


def shape_from_orders(orders: Iterable[int]) -> QuotientShape:
    """Invariant factors of the abelian group whose element orders are `orders`.

    A finite abelian group is determined by how many elements are killed by
    each prime power: |G[p^k]| = p^(sum_i min(k, e_i)).
    """
    orders = list(orders)
    per_prime: dict[int, list[int]] = {}
    for p, total in factorint(len(orders)).items():
        at_least = []
        previous = 0
        k = 0
        while previous < total:
            k += 1
            killed = sum(1 for o in orders if (p ** k) % o == 0)
            current = multiplicity(p, killed)
            at_least.append(current - previous)
            previous = current
        exponents = []
        for k, count in enumerate(at_least, start=1):
            following = at_least[k] if k < len(at_least) else 0
            exponents.extend([k] * (count - following))
        per_prime[p] = sorted(exponents, reverse=True)

    length = max((len(e) for e in per_prime.values()), default=0)
    factors = [prod(p ** e[j] for p, e in per_prime.items() if j < len(e)) for j in range(length)]
    return QuotientShape(tuple(sorted(factors)))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/m1 + ... + Z/mk written additively on tuples."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(m < 1 for m in self.moduli):
            raise ValueError(f"moduli must be positive: {self.moduli}")

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def zero(self) -> Element:
        return tuple(0 for _ in self.moduli)

    def elements(self) -> list[Element]:
        return list(product(*(range(m) for m in self.moduli)))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def order_of(self, x: Element) -> int:
        return lcm(1, *(m // gcd(a, m) for a, m in zip(x, self.moduli)))

    def torsion(self, d: int) -> frozenset[Element]:
        """Elements killed by d."""
        return frozenset(x for x in self.elements() if d % self.order_of(x) == 0)

    def is_subgroup(self, subset: frozenset[Element]) -> bool:
        if self.zero not in subset:
            return False
        return all(self.add(x, y) in subset for x in subset for y in subset)

    def shape(self, subset: Iterable[Element] | None = None) -> QuotientShape:
        members = self.elements() if subset is None else list(subset)
        return shape_from_orders(self.order_of(x) for x in members)


def primary_complement(group: FiniteAbelianGroup, b: frozenset[Element]) -> frozenset[Element]:
    """The unique A with group = A + B when |B| is coprime to the index of B."""
    if not group.is_subgroup(b):
        raise ContainmentError("B is not a subgroup of G")
    if gcd(len(b), group.order // len(b)) != 1:
        raise CoprimalityError(f"|B| = {len(b)} is not coprime to |G:B| = {group.order // len(b)}")

    complement = frozenset(x for x in group.elements() if gcd(group.order_of(x), len(b)) == 1)
    if len(complement) * len(b) != group.order or complement & b != {group.zero}:
        raise CoprimalityError("coprime splitting failed")
    return complement
