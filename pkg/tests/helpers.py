from copy import deepcopy
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt

from src.abelian_ext import AbelianExtQ, QPlace, galois_group
from src.brauer_q import BrauerClass
from src.finite_abelian import FiniteAbelianGroup
from src.graded_skeleton import DivAlgSkeleton, ResidueKind, ResidueTag
from src.qlattice import GradeGroup
from tests import oracle

Q_DOC = {"conductor": 1, "subgroup": [0]}
GAUSSIAN_DOC = {"conductor": 4, "subgroup": [1]}


def place(text) -> QPlace:
    return QPlace.parse(str(text))


def q_class(mapping) -> BrauerClass:
    """A class over Q from {prime or 'inf': 'a/b'}."""
    return BrauerClass.make(AbelianExtQ.rational(), {place(p): Fraction(v) for p, v in mapping.items()})


def lattice(*vectors):
    return {"rank": len(vectors[0]), "generators": [list(v) for v in vectors]}


SEMIRAMIFIED = {
    "residue": {"kind": "GlobalQ"},
    "gammaF": lattice(["1"]),
    "gammaD": lattice(["1/2"]),
    "Z0": GAUSSIAN_DOC,
    "theta": [[["1/2"], 3]],
    "residue_class": {"base": GAUSSIAN_DOC, "inv": []},
}

TOTALLY_RAMIFIED = {
    "residue": {"kind": "GlobalQ"},
    "gammaF": lattice(["1", "0"], ["0", "1"]),
    "gammaD": lattice(["1/2", "0"], ["0", "1/2"]),
    "Z0": Q_DOC,
    "theta": [[["1/2", "0"], 1], [["0", "1/2"], 1]],
    "residue_class": {"base": Q_DOC, "inv": []},
    "pairing": [["0", "2"], ["-2", "0"]],
}

MIXED = {
    "residue": {"kind": "GlobalQ"},
    "gammaF": lattice(["1", "0"], ["0", "1"]),
    "gammaD": lattice(["1/2", "0"], ["0", "1/4"]),
    "Z0": GAUSSIAN_DOC,
    "theta": [[["1/2", "0"], 1], [["0", "1/4"], 3]],
    "residue_class": {"base": GAUSSIAN_DOC, "inv": []},
}

NOT_A_SQUARE = {
    "residue": {"kind": "GlobalQ"},
    "gammaF": lattice(["1"]),
    "gammaD": lattice(["1/4"]),
    "Z0": GAUSSIAN_DOC,
    "theta": [[["1/4"], 3]],
    "residue_class": {"base": GAUSSIAN_DOC, "inv": []},
}

NINE_UNPAIRED = {
    "residue": {"kind": "GlobalQ"},
    "gammaF": lattice(["1", "0"], ["0", "1"]),
    "gammaD": lattice(["1/3", "0"], ["0", "1/3"]),
    "Z0": Q_DOC,
    "theta": [[["1/3", "0"], 1], [["0", "1/3"], 1]],
    "residue_class": {"base": Q_DOC, "inv": []},
}


def abstract_skeleton(kind: dict) -> dict:
    return {
        "residue": kind,
        "gammaF": lattice(["1"]),
        "gammaD": lattice(["1/2"]),
        "Z0": {"galois": [2]},
        "theta": [[["1/2"], [1]]],
        "residue_degree": 1,
    }


ABSTRACT_KINDS = [
    ({"kind": "Finite", "q": 4}, "finite-residue-field"),
    ({"kind": "RealClosed"}, "real-closed-residue-field"),
    ({"kind": "CdLeOne"}, "cd-le-one-residue-field"),
    ({"kind": "LocalField", "p": 3, "f": 2}, "local-residue-field"),
]


def without_pairing(document: dict) -> dict:
    copy = deepcopy(document)
    copy.pop("pairing", None)
    return copy


def fiber_doc(field_doc: dict, ratio: int = 1) -> dict:
    return {"Z": field_doc, "beta0": {"base": field_doc, "inv": []}, "ratio": ratio}


def grade_shapes(max_index: int):
    """Gamma_D above Z^r (r = 1, 2) of index <= max_index, with the orders of its generators mod Z^r.

    Rank two lattices come plain, (1/a)Z + (1/b)Z, and sheared by [[1, 1], [0, 1]].
    """
    for a in range(1, max_index + 1):
        yield ((Fraction(1, a),),), (a,)
    for a in range(1, max_index + 1):
        for b in range(1, max_index // a + 1):
            yield ((Fraction(1, a), Fraction(0)), (Fraction(0), Fraction(1, b))), (a, b)
            yield ((Fraction(1, a), Fraction(0)), (Fraction(1, b), Fraction(1, b))), (a, b)


def abelian_fields(max_conductor: int) -> list[AbelianExtQ]:
    fields = set()
    for n in range(1, max_conductor + 1):
        if n % 4 == 2:
            continue
        for subgroup in oracle.subgroup_enumeration(n):
            fields.add(AbelianExtQ.from_subgroup(n, subgroup))
    return sorted(fields, key=lambda z: (z.conductor, z.subgroup))


def _field_thetas(z: AbelianExtQ, orders: tuple[int, ...]):
    n = z.conductor
    everything = len(oracle.units(n))
    for values in product(galois_group(z).representatives, repeat=len(orders)):
        if any(a % z.coset_order(u) for u, a in zip(values, orders)):
            continue
        if len(oracle.closure(n, list(z.subgroup) + list(values))) == everything:
            yield values


def _span(group: FiniteAbelianGroup, generators) -> int:
    members = {group.zero}
    frontier = [group.zero]
    while frontier:
        frontier = [y for y in {group.add(x, g) for x in frontier for g in generators} if y not in members]
        members.update(frontier)
    return len(members)


def _group_thetas(group: FiniteAbelianGroup, orders: tuple[int, ...]):
    for values in product(group.elements(), repeat=len(orders)):
        if any(a % group.order_of(x) for x, a in zip(values, orders)):
            continue
        if _span(group, values) == group.order:
            yield values


ABSTRACT_GALOIS = [(1,), (2,), (3,), (4,), (2, 2)]


@lru_cache(maxsize=None)
def skeleton_family(max_conductor: int = 24, max_index: int = 16) -> tuple[tuple[DivAlgSkeleton, bool], ...]:
    """Skeletons for every surjective theta on every small grade shape.

    Centers are all abelian fields up to max_conductor (residue class 0) and
    the groups in ABSTRACT_GALOIS (residue degrees 1 to 3). The flag says
    whether |ker theta : Gamma_F| is a square, i.e. whether the skeleton is valid.
    """
    shapes = list(grade_shapes(max_index))
    family = []
    for z in abelian_fields(max_conductor):
        for generators, orders in shapes:
            gamma_F, gamma_D = GradeGroup.standard(len(orders)), GradeGroup.from_generators(generators)
            for values in _field_thetas(z, orders):
                skeleton = DivAlgSkeleton(ResidueKind(ResidueTag.GLOBAL_Q), gamma_F, gamma_D, z,
                                          tuple(zip(generators, values)), BrauerClass.zero(z))
                family.append((skeleton, _is_square(orders, z.degree)))
    for moduli in ABSTRACT_GALOIS:
        group = FiniteAbelianGroup(moduli)
        for generators, orders in shapes:
            gamma_F, gamma_D = GradeGroup.standard(len(orders)), GradeGroup.from_generators(generators)
            for values in _group_thetas(group, orders):
                for residue_degree in (1, 2, 3):
                    skeleton = DivAlgSkeleton(ResidueKind(ResidueTag.CD_LE_ONE), gamma_F, gamma_D, group,
                                              tuple(zip(generators, values)), residue_degree=residue_degree)
                    family.append((skeleton, _is_square(orders, group.order)))
    return tuple(family)


def _is_square(orders: tuple[int, ...], center_degree: int) -> bool:
    kernel_index = 1
    for a in orders:
        kernel_index *= a
    kernel_index //= center_degree
    return isqrt(kernel_index) ** 2 == kernel_index


def sheared_lattices(max_denominator: int) -> list[GradeGroup]:
    """Every lattice above Z^2 with Hermite basis (1/a, 0), (j/ab, 1/b), for a, b <= max_denominator."""
    return [GradeGroup.from_generators([(Fraction(1, a), Fraction(0)), (Fraction(j, a * b), Fraction(1, b))], 2)
            for a in range(1, max_denominator + 1) for b in range(1, max_denominator + 1) for j in range(b)]
