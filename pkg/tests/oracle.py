"""Brute-force counterparts of the library operations, used only by the tests.

Everything here works on plain data (vectors of Fractions, integers, sets
of units) and imports nothing from src except the error type, so the
tests compare two independent computations.
"""
from fractions import Fraction
from itertools import product
from math import gcd

from src.errors import OracleBoundError

ORACLE_BOUND = 512


# lattices

def _solve(columns, target):
    """Coefficients c with sum c_j columns_j = target (square, invertible system)."""
    r = len(target)
    rows = [[Fraction(columns[j][i]) for j in range(r)] + [Fraction(target[i])] for i in range(r)]
    for col in range(r):
        pivot = next(i for i in range(col, r) if rows[i][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for i in range(r):
            if i != col and rows[i][col] != 0:
                factor = rows[i][col] / rows[col][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[col])]
    return [rows[i][r] / rows[i][i] for i in range(r)]


def in_lattice(columns, vector) -> bool:
    return all(c.denominator == 1 for c in _solve(columns, vector))


def _coset_key(sub, point):
    # two points lie in one coset exactly when their sub-coordinates differ by integers
    return tuple(c - (c.numerator // c.denominator) for c in _solve(sub, point))


def _points(sup, box):
    for coefficients in product(range(box), repeat=len(sup)):
        yield [sum((c * Fraction(v[i]) for c, v in zip(coefficients, sup)), Fraction(0))
               for i in range(len(sup))]


def _count_cosets(sub, sup, box):
    return len({_coset_key(sub, point) for point in _points(sup, box)})


def coset_count(sub, sup, box: int) -> int:
    """Number of cosets of sub met by sup-points with coefficients below box."""
    small, large = _count_cosets(sub, sup, box), _count_cosets(sub, sup, 2 * box)
    if small != large:
        raise OracleBoundError(f"box {box} too small: {small} cosets, {large} at twice the box")
    return small


def rank_one_intersection(a: Fraction, b: Fraction, bound: int = 1000) -> Fraction:
    """Generator of aZ n bZ, found among the first `bound` multiples of a."""
    for k in range(1, bound + 1):
        if (k * a / b).denominator == 1:
            return k * a
    raise OracleBoundError(f"no common multiple of {a} and {b} below {bound} steps")


def element_orders(sub, sup, box: int) -> list[int]:
    """Orders of the cosets of sup/sub, found by repeated addition."""
    representatives = {}
    for point in _points(sup, box):
        representatives.setdefault(_coset_key(sub, point), point)
    orders = []
    for point in representatives.values():
        k = 1
        while not in_lattice(sub, [k * x for x in point]):
            k += 1
        orders.append(k)
    return orders


# unit groups

def _check(n: int) -> None:
    if n > ORACLE_BOUND:
        raise OracleBoundError(f"modulus {n} above the oracle bound {ORACLE_BOUND}")


def units(n: int) -> list[int]:
    return [u for u in range(n) if gcd(u, n) == 1]


def unit_group_table(n: int) -> dict[tuple[int, int], int]:
    _check(n)
    group = units(n)
    return {(a, b): (a * b) % n for a in group for b in group}


def closure(n: int, generators) -> frozenset[int]:
    members = {1 % n}
    changed = True
    while changed:
        changed = False
        for x in list(members):
            for g in generators:
                y = (x * g) % n
                if y not in members:
                    members.add(y)
                    changed = True
    return frozenset(members)


def subgroup_enumeration(n: int) -> list[frozenset[int]]:
    _check(n)
    group = units(n)
    found = {frozenset({1 % n})}
    frontier = list(found)
    while frontier:
        following = []
        for subgroup in frontier:
            for g in group:
                if g in subgroup:
                    continue
                bigger = closure(n, list(subgroup) + [g])
                if bigger not in found:
                    found.add(bigger)
                    following.append(bigger)
        frontier = following
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def multiplicative_order(u: int, n: int) -> int:
    k, x = 1, u % n
    while x != 1 % n:
        x, k = (x * u) % n, k + 1
    return k


def _decomposition(n: int, place) -> frozenset[int]:
    if n == 1:
        return frozenset({0})
    if place is None:
        return closure(n, [n - 1])
    p = place
    if n % p:
        return closure(n, [p % n])
    q = 1
    while n % (q * p) == 0:
        q *= p
    rest = n // q
    inertia = [u for u in units(n) if u % rest == 1 % rest]
    frobenius = next(u for u in units(n) if u % q == 1 % q and u % rest == p % rest)
    return closure(n, inertia + [frobenius])


def local_degree(n: int, subgroup, place) -> int:
    """[Z_P : Q_v] for the fixed field of `subgroup` in Q(zeta_n); place None is the real place."""
    _check(n)
    subgroup = frozenset(subgroup)
    joined = closure(n, list(subgroup) + list(_decomposition(n, place)))
    return len(joined) // len(subgroup)


def contains_cyclotomic(n: int, subgroup, k: int) -> bool:
    """Is Q(zeta_k) inside the fixed field of `subgroup` mod n?"""
    if k <= 2:
        return True
    if n % k:
        return False
    return all(h % k == 1 for h in subgroup)


def _minimal(n: int, subgroup: frozenset[int]) -> bool:
    for p in {p for p in range(2, n + 1) if n % p == 0 and all(p % d for d in range(2, p))}:
        smaller = n // p
        kernel = [u for u in units(n) if u % smaller == 1 % smaller]
        if all(u in subgroup for u in kernel):
            return False
    return True


def _quotient_is_cyclic(n: int, subgroup: frozenset[int]) -> bool:
    index = len(units(n)) // len(subgroup)
    for u in units(n):
        k, x = 1, u % n
        while x not in subgroup:
            x, k = (x * u) % n, k + 1
        if k == index:
            return True
    return False


def _between(n: int, lower: frozenset[int], upper: list[int], order: int) -> list[frozenset[int]]:
    found = {lower}
    frontier = [lower]
    while frontier:
        following = []
        for subgroup in frontier:
            for g in upper:
                if g in subgroup:
                    continue
                bigger = closure(n, list(subgroup) + [g])
                if order % len(bigger) == 0 and bigger not in found:
                    found.add(bigger)
                    following.append(bigger)
        frontier = following
    return [s for s in found if len(s) == order]


def exhaustive_cover_check(z_conductor: int, z_subgroup, m: int, demands, conductor_bound: int,
                           cyclic: bool = False, divisible: bool = False) -> list[tuple[int, tuple[int, ...]]]:
    """Every abelian L containing Z with [L:Z] = m meeting the demands, as (conductor, subgroup).

    demands are (prime or None, degree) pairs; the list is sorted, so its
    head is the minimal-conductor answer.
    """
    _check(conductor_bound)
    z_subgroup = frozenset(z_subgroup)
    base_degrees = {v: local_degree(z_conductor, z_subgroup, v) for v, _ in demands}
    found = []
    for n in range(1, conductor_bound + 1):
        if n % z_conductor:
            continue
        lift = [u for u in units(n) if u % z_conductor in z_subgroup] if n > 1 else [0]
        if len(lift) % m:
            continue
        order = len(lift) // m
        powers = closure(n, [pow(g, m, n) for g in lift]) if n > 1 else frozenset({0})
        for subgroup in _between(n, powers, lift, order) if n > 1 else [frozenset({0})]:
            if n > 1 and not _minimal(n, subgroup):
                continue
            if n == 1 and m != 1:
                continue
            if cyclic and n > 1 and not _quotient_is_cyclic(n, subgroup):
                continue
            ok = True
            for v, d in demands:
                relative = local_degree(n, subgroup, v) // base_degrees[v]
                if (relative % d if divisible else relative != d):
                    ok = False
                    break
            if ok:
                found.append((n, tuple(sorted(subgroup))))
    return sorted(found)
