"""Structure of (Z/nZ)^x and its Dirichlet characters.

The unit group is split by the Chinese remainder theorem into its
prime-power parts, each cyclic (odd p, or 2^a with a <= 2) or a product
<-1> x <5> (2^a, a >= 3). A character is stored as the tuple of its values
on these standard generators, exact rationals in [0, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterable, Sequence

from sympy import factorint, primitive_root, totient
from sympy.ntheory import discrete_log
from sympy.ntheory.modular import crt

Character = tuple[Fraction, ...]


@dataclass(frozen=True)
class PrimePowerPart:
    prime: int
    exponent: int
    modulus: int
    local_generators: tuple[int, ...]
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    indices: tuple[int, ...]

    def local_coordinates(self, unit: int) -> tuple[int, ...]:
        q = self.modulus
        u = unit % q
        if self.prime != 2:
            return (int(discrete_log(q, u, self.local_generators[0])),)
        if self.exponent == 1:
            return ()
        sign = 0 if u % 4 == 1 else 1
        if self.exponent == 2:
            return (sign,)
        positive = u if sign == 0 else (-u) % q
        return sign, int(discrete_log(q, positive, 5))

    def conductor(self, values: Sequence[Fraction]) -> int:
        """Conductor contribution p^b of a character with these generator values."""
        p, a = self.prime, self.exponent
        if p != 2:
            e = self.orders[0]
            c = int(values[0] * e)
            for b in range(a + 1):
                if (c * (1 if b == 0 else int(totient(p ** b)))) % e == 0:
                    return p ** b
            return self.modulus
        if a == 1:
            return 1
        sign = int(values[0] * 2)
        c = int(values[1] * self.orders[1]) if a >= 3 else 0
        if c == 0:
            return 4 if sign else 1
        for b in range(3, a + 1):
            if (c * 2 ** (b - 2)) % 2 ** (a - 2) == 0:
                return 2 ** b
        return self.modulus


class UnitGroup:
    """(Z/nZ)^x with standard generators, coordinates and characters."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        self.n = n
        parts = []
        generators: list[int] = []
        orders: list[int] = []
        for p, a in sorted(factorint(n).items()):
            q = p ** a
            rest = n // q
            if p != 2:
                local = [(int(primitive_root(q)), int(totient(q)))]
            elif a == 1:
                local = []
            elif a == 2:
                local = [(3, 2)]
            else:
                local = [(q - 1, 2), (5, 2 ** (a - 2))]
            start = len(generators)
            for g, e in local:
                generators.append(self._lift(g, q, rest))
                orders.append(e)
            parts.append(PrimePowerPart(
                prime=p, exponent=a, modulus=q,
                local_generators=tuple(g for g, _ in local),
                generators=tuple(generators[start:]),
                orders=tuple(orders[start:]),
                indices=tuple(range(start, len(generators))),
            ))
        self.parts = tuple(parts)
        self.generators = tuple(generators)
        self.orders = tuple(orders)
        self._coordinates: dict[int, tuple[int, ...]] = {}

    @staticmethod
    def _lift(value: int, modulus: int, rest: int) -> int:
        if rest == 1:
            return value % modulus
        return int(crt([modulus, rest], [value, 1])[0])

    @property
    def order(self) -> int:
        return int(totient(self.n)) if self.n > 1 else 1

    def units(self) -> list[int]:
        return [u for u in range(self.n) if gcd(u, self.n) == 1]

    def part(self, p: int) -> PrimePowerPart | None:
        for part in self.parts:
            if part.prime == p:
                return part
        return None

    def coordinates(self, unit: int) -> tuple[int, ...]:
        unit %= self.n
        if unit not in self._coordinates:
            self._coordinates[unit] = tuple(x for part in self.parts for x in part.local_coordinates(unit))
        return self._coordinates[unit]

    # characters

    def characters(self) -> Iterable[Character]:
        return product(*([Fraction(k, e) for k in range(e)] for e in self.orders))

    def evaluate(self, chi: Character, unit: int) -> Fraction:
        return sum((c * x for c, x in zip(chi, self.coordinates(unit))), Fraction(0)) % 1

    def conductor(self, chi: Character) -> int:
        result = 1
        for part in self.parts:
            result *= part.conductor([chi[i] for i in part.indices])
        return result

    def lift_character(self, chi: Character, lower: UnitGroup) -> Character:
        """The character of this group obtained by composing chi with reduction to `lower`."""
        return tuple(lower.evaluate(chi, g) for g in self.generators)

    def annihilator(self, units: Iterable[int]) -> list[Character]:
        """Characters trivial on every given unit."""
        units = list(units)
        return [chi for chi in self.characters() if all(self.evaluate(chi, u) == 0 for u in units)]

    def kernel(self, characters: Sequence[Character]) -> frozenset[int]:
        return frozenset(u for u in self.units() if all(self.evaluate(chi, u) == 0 for chi in characters))

    def decomposition_generators(self, p: int | None) -> list[int]:
        """Generators of the decomposition group of the place p (None = real place)."""
        n = self.n
        if p is None:
            return [(n - 1) % n] if n > 1 else [0]
        part = self.part(p)
        if part is None:
            return [p % n]
        rest = n // part.modulus
        frobenius = self._lift(1, part.modulus, 1) if rest == 1 else int(crt([part.modulus, rest], [1, p % rest])[0])
        return list(part.generators) + [frobenius]


@lru_cache(maxsize=4096)
def unit_group(n: int) -> UnitGroup:
    return UnitGroup(n)


def add_characters(chi: Character, psi: Character) -> Character:
    return tuple((a + b) % 1 for a, b in zip(chi, psi))


def scale_character(chi: Character, k: int) -> Character:
    return tuple((a * k) % 1 for a in chi)


def character_order(chi: Character) -> int:
    return lcm(1, *(a.denominator for a in chi))


def span(characters: Iterable[Character], length: int) -> frozenset[Character]:
    """Subgroup generated by the given characters (all of the given length)."""
    zero = tuple(Fraction(0) for _ in range(length))
    group = {zero}
    frontier = [zero]
    generators = list(characters)
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = add_characters(x, g)
                if y not in group:
                    group.add(y)
                    new.append(y)
        frontier = new
    return frozenset(group)


def image_order(group: UnitGroup, characters: Sequence[Character], units: Iterable[int]) -> int:
    """Order of the image of <units> in the dual of <characters>."""
    vectors = [tuple(group.evaluate(chi, u) for chi in characters) for u in units]
    return len(span(vectors, len(characters)))
