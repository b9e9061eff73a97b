"""JSON documents for grade groups, fields, classes, skeletons and fibers.

Rationals travel as lowest-terms strings "a/b", places of Q as "p" or
"inf". Every parser reports problems with the JSON path of the offending
value; syntax errors carry line:column.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from src.abelian_ext import AbelianExtQ, QPlace, ZPlace
from src.brauer_q import BrauerClass
from src.errors import DocumentError, TameAlgebraError
from src.finite_abelian import FiniteAbelianGroup
from src.graded_skeleton import DivAlgSkeleton, ResidueKind, ResidueTag
from src.advanced.location import Fiber
from src.qlattice import GradeGroup
from src.validator import InputValidator


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{e.lineno}:{e.colno}", e.msg) from None


def load_file(path: str) -> Any:
    with open(path, encoding="utf-8") as handle:
        return loads(handle.read())


def dumps(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False)


def _require(document: Any, key: str, path: str) -> Any:
    if not isinstance(document, dict):
        raise DocumentError(path, "expected an object")
    if key not in document:
        raise DocumentError(f"{path}.{key}", "missing field")
    return document[key]


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, f"expected an integer, got {value!r}")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(path, f"expected an array, got {type(value).__name__}")
    return value


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not InputValidator.validate_rational(value):
        raise DocumentError(path, f"expected a rational string \"a/b\", got {value!r}")
    if not InputValidator.validate_lowest_terms(value):
        raise DocumentError(path, f"rational {value!r} is not in lowest terms")
    return Fraction(value)


def parse_grade_group(document: Any, path: str = "$") -> GradeGroup:
    rank = _integer(_require(document, "rank", path), f"{path}.rank")
    generators = _list(_require(document, "generators", path), f"{path}.generators")
    vectors = []
    for i, vector in enumerate(generators):
        entries = _list(vector, f"{path}.generators[{i}]")
        vectors.append(tuple(parse_rational(x, f"{path}.generators[{i}][{j}]") for j, x in enumerate(entries)))
    try:
        return GradeGroup.from_generators(vectors, rank)
    except TameAlgebraError as e:
        raise DocumentError(path, str(e)) from None


def parse_field(document: Any, path: str = "$") -> AbelianExtQ:
    conductor = _integer(_require(document, "conductor", path), f"{path}.conductor")
    subgroup = _list(_require(document, "subgroup", path), f"{path}.subgroup")
    units = [_integer(u, f"{path}.subgroup[{i}]") for i, u in enumerate(subgroup)]
    try:
        return AbelianExtQ.from_subgroup(conductor, units)
    except TameAlgebraError as e:
        raise DocumentError(path, str(e)) from None


def parse_place(value: Any, path: str) -> QPlace:
    if not InputValidator.validate_place(value):
        raise DocumentError(path, f"expected a prime or \"inf\", got {value!r}")
    return QPlace.parse(value)


def parse_zplace(value: Any, path: str) -> ZPlace:
    base = parse_place(_require(value, "base", path), f"{path}.base")
    return ZPlace(base, _integer(_require(value, "index", path), f"{path}.index"))


def parse_class(document: Any, path: str = "$") -> BrauerClass:
    base = parse_field(_require(document, "base", path), f"{path}.base")
    entries = _list(_require(document, "inv", path), f"{path}.inv")
    invariants = []
    for i, entry in enumerate(entries):
        where = f"{path}.inv[{i}]"
        pair = _list(entry, where)
        if len(pair) != 2:
            raise DocumentError(where, "expected [place, invariant]")
        place = parse_place(pair[0], f"{where}[0]") if base.is_rational else parse_zplace(pair[0], f"{where}[0]")
        invariants.append((place, parse_rational(pair[1], f"{where}[1]")))
    try:
        return BrauerClass.make(base, invariants)
    except TameAlgebraError as e:
        raise DocumentError(path, str(e)) from None


def parse_residue(document: Any, path: str = "$") -> ResidueKind:
    kind = _require(document, "kind", path)
    try:
        tag = ResidueTag(kind)
    except ValueError:
        raise DocumentError(f"{path}.kind", f"unknown residue kind {kind!r}") from None
    residue = ResidueKind(tag, document.get("q"), document.get("p"), document.get("f"))
    try:
        residue.check()
    except TameAlgebraError as e:
        raise DocumentError(path, str(e)) from None
    return residue


def _parse_vector(value: Any, path: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(x, f"{path}[{j}]") for j, x in enumerate(_list(value, path)))


def parse_skeleton(document: Any, path: str = "$") -> DivAlgSkeleton:
    residue = parse_residue(_require(document, "residue", path), f"{path}.residue")
    gamma_F = parse_grade_group(_require(document, "gammaF", path), f"{path}.gammaF")
    gamma_D = parse_grade_group(_require(document, "gammaD", path), f"{path}.gammaD")
    center_document = _require(document, "Z0", path)

    residue_class = None
    residue_degree = None
    if residue.is_global:
        center = parse_field(center_document, f"{path}.Z0")
        residue_class = parse_class(_require(document, "residue_class", path), f"{path}.residue_class")
    else:
        moduli = _list(_require(center_document, "galois", f"{path}.Z0"), f"{path}.Z0.galois")
        center = FiniteAbelianGroup(tuple(_integer(d, f"{path}.Z0.galois[{i}]") for i, d in enumerate(moduli)))
        residue_degree = _integer(_require(document, "residue_degree", path), f"{path}.residue_degree")

    theta = []
    for i, entry in enumerate(_list(_require(document, "theta", path), f"{path}.theta")):
        where = f"{path}.theta[{i}]"
        pair = _list(entry, where)
        if len(pair) != 2:
            raise DocumentError(where, "expected [vector, Galois element]")
        vector = _parse_vector(pair[0], f"{where}[0]")
        if residue.is_global:
            element = _integer(pair[1], f"{where}[1]")
        else:
            element = tuple(_integer(x, f"{where}[1][{j}]") for j, x in enumerate(_list(pair[1], f"{where}[1]")))
        theta.append((vector, element))

    pairing = None
    if document.get("pairing") is not None:
        rows = _list(document["pairing"], f"{path}.pairing")
        pairing = tuple(_parse_vector(row, f"{path}.pairing[{i}]") for i, row in enumerate(rows))

    return DivAlgSkeleton(residue, gamma_F, gamma_D, center, tuple(theta), residue_class, residue_degree, pairing)


def skeleton_document(skeleton: DivAlgSkeleton) -> dict:
    global_q = skeleton.residue.is_global
    document = {
        "residue": skeleton.residue.to_document(),
        "gammaF": skeleton.gamma_F.to_document(),
        "gammaD": skeleton.gamma_D.to_document(),
        "Z0": skeleton.center.to_document() if global_q else {"galois": list(skeleton.center.moduli)},
        "theta": [[[str(x) for x in vector], element if global_q else list(element)]
                  for vector, element in skeleton.theta],
    }
    if global_q:
        document["residue_class"] = skeleton.residue_class.to_document()
    else:
        document["residue_degree"] = skeleton.residue_degree
    if skeleton.pairing is not None:
        document["pairing"] = [[str(x) for x in row] for row in skeleton.pairing]
    return document


def parse_fiber(document: Any, path: str = "$") -> Fiber:
    z = parse_field(_require(document, "Z", path), f"{path}.Z")
    beta0 = parse_class(_require(document, "beta0", path), f"{path}.beta0")
    ratio = _integer(document.get("ratio", 1), f"{path}.ratio")
    fiber = Fiber(z, beta0, ratio)
    try:
        fiber.check()
    except TameAlgebraError as e:
        raise DocumentError(path, str(e)) from None
    return fiber


def parse_demands(document: Any, path: str = "$") -> list[tuple[QPlace, int]]:
    demands = []
    for i, entry in enumerate(_list(document, path)):
        pair = _list(entry, f"{path}[{i}]")
        if len(pair) != 2:
            raise DocumentError(f"{path}[{i}]", "expected [place, local degree]")
        demands.append((parse_place(pair[0], f"{path}[{i}][0]"), _integer(pair[1], f"{path}[{i}][1]")))
    return demands
