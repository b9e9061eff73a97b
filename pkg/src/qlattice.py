"""Exact arithmetic on finitely generated full-rank subgroups of Q^r.

Grade groups are stored by a canonical basis: the columns of the Hermite
normal form of the generator matrix (scaled to integers by a common
denominator). The basis is upper triangular with positive diagonal and
off-diagonal entries reduced modulo the diagonal, so two generator sets
span the same group exactly when their canonical bases agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm, prod
from typing import Iterable, Sequence

from sympy import ZZ, Matrix, Rational
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

from src.config import Config
from src.errors import ContainmentError, DimensionError, RankError

Vector = tuple[Fraction, ...]


def _vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def _to_sympy(columns: Sequence[Vector]) -> Matrix:
    rank = len(columns[0])
    return Matrix(rank, len(columns),
                  lambda i, j: Rational(columns[j][i].numerator, columns[j][i].denominator))


def _integer_matrix(matrix: Matrix) -> Matrix:
    return Matrix(matrix.rows, matrix.cols, lambda i, j: int(matrix[i, j]))


def _from_sympy(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class QuotientShape:
    """A finite abelian group Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, all > 1."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        if any(d <= 1 for d in self.invariant_factors):
            raise ValueError(f"invariant factors must exceed 1: {self.invariant_factors}")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.invariant_factors}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def to_document(self) -> list[int]:
        return list(self.invariant_factors)


@dataclass(frozen=True)
class GradeGroup:
    """A full-rank finitely generated subgroup of Q^rank, in canonical form."""

    rank: int
    generators: tuple[Vector, ...]

    @classmethod
    def from_generators(cls, generators: Iterable[Iterable], rank: int | None = None) -> GradeGroup:
        vectors = [_vector(g) for g in generators]
        if rank is None:
            if not vectors:
                raise RankError("cannot infer the ambient rank of an empty generator list")
            rank = len(vectors[0])
        if rank < 1 or rank > Config.MAX_AMBIENT_RANK:
            raise DimensionError(f"ambient rank {rank} outside 1..{Config.MAX_AMBIENT_RANK}")
        if any(len(v) != rank for v in vectors):
            raise DimensionError(f"generator lengths differ from ambient rank {rank}")
        if len(vectors) < rank:
            raise RankError(f"{len(vectors)} generators cannot span a rank-{rank} group")

        denominator = lcm(*(x.denominator for v in vectors for x in v))
        scaled = Matrix(rank, len(vectors), lambda i, j: int(vectors[j][i] * denominator))
        hnf = hermite_normal_form(scaled)
        if hnf.shape != (rank, rank) or any(hnf[i, i] == 0 for i in range(rank)):
            raise RankError("generators do not span a full-rank subgroup")

        basis = tuple(
            tuple(Fraction(int(hnf[i, j]), denominator) for i in range(rank))
            for j in range(rank)
        )
        return cls(rank=rank, generators=basis)

    @classmethod
    def standard(cls, rank: int, scale: Fraction | int = 1) -> GradeGroup:
        """scale * Z^rank."""
        scale = Fraction(scale)
        return cls.from_generators(
            [tuple(scale if i == j else Fraction(0) for i in range(rank)) for j in range(rank)], rank)

    @classmethod
    def diagonal(cls, *scales) -> GradeGroup:
        """(s1)Z + (s2)Z + ... ; handy for the split lattices used everywhere."""
        rank = len(scales)
        return cls.from_generators(
            [tuple(Fraction(s) if i == j else Fraction(0) for i in range(rank)) for j, s in enumerate(scales)],
            rank)

    @property
    def basis(self) -> tuple[Vector, ...]:
        return self.generators

    def sort_key(self) -> tuple[Fraction, ...]:
        return tuple(x for v in self.generators for x in v)

    def reduce(self, vector: Iterable) -> Vector:
        """Canonical representative of vector + self (each coordinate in [0, diagonal))."""
        v = list(_vector(vector))
        if len(v) != self.rank:
            raise DimensionError(f"vector of length {len(v)} in rank-{self.rank} ambient")
        for j in range(self.rank - 1, -1, -1):
            column = self.generators[j]
            q = v[j] // column[j]
            if q:
                for i in range(j + 1):
                    v[i] -= q * column[i]
        return tuple(v)

    def contains_vector(self, vector: Iterable) -> bool:
        return not any(self.reduce(vector))

    def contains(self, other: GradeGroup) -> bool:
        _check_rank(self, other)
        return all(self.contains_vector(v) for v in other.generators)

    def covolume(self) -> Fraction:
        return prod((v[i] for i, v in enumerate(self.generators)), start=Fraction(1))

    def dual(self) -> GradeGroup:
        """{x : <x, y> in Z for all y in self}."""
        inverse = _to_sympy(self.generators).inv().T
        columns = [[_from_sympy(inverse[i, j]) for i in range(self.rank)] for j in range(self.rank)]
        return GradeGroup.from_generators(columns, self.rank)

    def to_document(self) -> dict:
        return {"rank": self.rank,
                "generators": [[str(x) for x in v] for v in self.generators]}

    def __str__(self) -> str:
        body = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.generators)
        return f"<{body}>"


def _check_rank(a: GradeGroup, b: GradeGroup) -> None:
    if a.rank != b.rank:
        raise DimensionError(f"rank mismatch: {a.rank} vs {b.rank}")


def lattice_sum(a: GradeGroup, b: GradeGroup) -> GradeGroup:
    _check_rank(a, b)
    return GradeGroup.from_generators(a.generators + b.generators, a.rank)


def lattice_intersect(a: GradeGroup, b: GradeGroup) -> GradeGroup:
    # (A n B)^dual = A^dual + B^dual for full-rank lattices
    _check_rank(a, b)
    if a.contains(b):
        return b
    if b.contains(a):
        return a
    return lattice_sum(a.dual(), b.dual()).dual()


def transition_matrix(sub: GradeGroup, sup: GradeGroup) -> Matrix:
    """Integer matrix T with sub.basis = sup.basis * T (columns)."""
    _check_rank(sub, sup)
    coordinates = _to_sympy(sup.generators).upper_triangular_solve(_to_sympy(sub.generators))
    if any(not entry.is_integer for entry in coordinates):
        raise ContainmentError(f"{sub} is not contained in {sup}")
    return coordinates


def lattice_index(sub: GradeGroup, sup: GradeGroup) -> int:
    return abs(int(transition_matrix(sub, sup).det()))


def quotient_invariants(sub: GradeGroup, sup: GradeGroup) -> QuotientShape:
    factors = invariant_factors(_integer_matrix(transition_matrix(sub, sup)), domain=ZZ)
    return QuotientShape(tuple(abs(int(d)) for d in factors if abs(int(d)) > 1))


def _add_reduced(sub: GradeGroup, x: Vector, y: Vector) -> Vector:
    return sub.reduce(tuple(a + b for a, b in zip(x, y)))


def quotient_elements(sub: GradeGroup, sup: GradeGroup) -> list[Vector]:
    """Canonical representatives (reduced modulo sub) of every coset of sup/sub, sorted."""
    coordinates = transition_matrix(sub, sup)
    box = hermite_normal_form(_integer_matrix(coordinates))
    ranges = [range(int(box[i, i])) for i in range(sup.rank)]
    elements = set()
    for x in product(*ranges):
        point = tuple(sum((c * v[i] for c, v in zip(x, sup.generators)), Fraction(0))
                      for i in range(sup.rank))
        elements.add(sub.reduce(point))
    return sorted(elements)


def _closure(sub: GradeGroup, generators: Sequence[Vector]) -> frozenset[Vector]:
    zero = tuple(Fraction(0) for _ in range(sub.rank))
    group = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = _add_reduced(sub, x, g)
                if y not in group:
                    group.add(y)
                    new.append(y)
        frontier = new
    return frozenset(group)


def intermediate_groups(sub: GradeGroup, sup: GradeGroup, index: int | None = None) -> list[GradeGroup]:
    """All groups G with sub <= G <= sup (optionally |G : sub| == index), in canonical order."""
    elements = [e for e in quotient_elements(sub, sup) if any(e)]
    max_generators = len(quotient_invariants(sub, sup).invariant_factors)
    subgroups = {frozenset([tuple(Fraction(0) for _ in range(sub.rank))])}
    for k in range(1, max_generators + 1):
        for chosen in combinations(elements, k):
            subgroups.add(_closure(sub, chosen))
    groups = []
    for members in subgroups:
        if index is not None and len(members) != index:
            continue
        groups.append(GradeGroup.from_generators(list(sub.generators) + sorted(members), sub.rank))
    return sorted(groups, key=GradeGroup.sort_key)
