from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.abelian_ext import AbelianExtQ, QPlace, ZPlace, compositum, contains
from src.brauer_q import BrauerClass, add, index, is_split_by, local_index, prescribe_class, restrict
from src.errors import FieldContainmentError, InfeasibleTargetError, PreconditionError, TameAlgebraError
from tests.helpers import abelian_fields, place, q_class

F = Fraction

SMALL_FIELDS = abelian_fields(24)
SMALL_CLASSES = [q_class({p: a, q: 1 - a}) for p, q in combinations([2, 3, 5, 7, 11, 13], 2)
                 for a in (F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 4), F(1, 6))] + \
                [q_class({"inf": F(1, 2), p: F(1, 2)}) for p in (2, 3, 5, 7, 11, 13)]


class TestClasses:
    def test_invariants_must_sum_to_zero(self):
        with pytest.raises(TameAlgebraError):
            q_class({5: "1/2"})

    def test_real_place_carries_half(self):
        alpha = q_class({"inf": "1/2", 3: "1/2"})
        assert alpha.invariant(place("inf")) == F(1, 2)
        with pytest.raises(TameAlgebraError):
            q_class({"inf": "1/3", 3: "2/3"})

    def test_complex_place_is_zero(self, gaussian):
        with pytest.raises(TameAlgebraError):
            BrauerClass.make(gaussian, {ZPlace(QPlace(None), 0): F(1, 2), ZPlace(QPlace(3), 0): F(1, 2)})

    def test_unknown_place_index(self, gaussian):
        with pytest.raises(TameAlgebraError):
            BrauerClass.make(gaussian, {ZPlace(QPlace(3), 1): F(1, 2), ZPlace(QPlace(2), 0): F(1, 2)})

    def test_zero_invariants_dropped(self):
        alpha = q_class({3: "1/2", 5: "1/2", 7: "0"})
        assert alpha.support == (place(3), place(5))
        assert str(alpha) == "{3: 1/2, 5: 1/2}"

    def test_document(self):
        alpha = q_class({3: "1/3", 7: "2/3"})
        assert alpha.to_document() == {"base": {"conductor": 1, "subgroup": [0]},
                                       "inv": [["3", "1/3"], ["7", "2/3"]]}


class TestArithmetic:
    def test_add_and_index(self):
        a = q_class({2: "1/4", 3: "3/4"})
        b = q_class({2: "1/4", 5: "3/4"})
        total = add(a, b)
        assert total.as_dict() == {place(2): F(1, 2), place(3): F(3, 4), place(5): F(3, 4)}
        assert index(total) == 4
        assert local_index(total, place(2)) == 2
        assert local_index(total, place(7)) == 1

    def test_add_needs_common_base(self, gaussian):
        with pytest.raises(PreconditionError):
            add(q_class({}), BrauerClass.zero(gaussian))

    def test_zero(self):
        assert index(BrauerClass.zero()) == 1
        assert BrauerClass.zero().is_zero


class TestRestriction:
    def test_inert_prime_dies(self, gaussian):
        assert restrict(q_class({3: "1/2", 7: "1/2"}), gaussian).is_zero

    def test_split_prime_doubles_places(self, gaussian):
        restricted = restrict(q_class({5: "1/2", "inf": "1/2"}), gaussian)
        assert restricted.as_dict() == {ZPlace(QPlace(5), 0): F(1, 2), ZPlace(QPlace(5), 1): F(1, 2)}

    def test_ramified_prime_scales(self, gaussian):
        restricted = restrict(q_class({2: "1/4", 5: "3/4"}), gaussian)
        assert restricted.invariant(ZPlace(QPlace(2), 0)) == F(1, 2)
        assert index(restricted) == 4

    def test_over_rational_is_identity(self, rational):
        alpha = q_class({3: "1/3", 7: "2/3"})
        assert restrict(alpha, rational) == alpha

    def test_only_from_rational(self, gaussian, zeta8):
        with pytest.raises(PreconditionError):
            restrict(BrauerClass.zero(gaussian), zeta8)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13]), min_size=2, max_size=4, unique=True),
           st.lists(st.integers(1, 11), min_size=4, max_size=4))
    def test_restriction_is_additive(self, primes, numerators):
        values = [F(a, 12) for a in numerators[:len(primes) - 1]]
        a = q_class(dict(zip(primes, values + [(-sum(values)) % 1])))
        b = q_class({primes[0]: "1/2", primes[-1]: "1/2"})
        z = AbelianExtQ.cyclotomic(12)
        assert restrict(add(a, b), z) == add(restrict(a, z), restrict(b, z))


class TestSplitting:
    def test_split_by_local_degree(self, rational):
        beta = q_class({3: "1/2", 5: "1/2"})
        # 3 ramifies and 5 is inert in Q(sqrt -3); 5 splits in Q(i)
        assert is_split_by(beta, AbelianExtQ.cyclotomic(3))
        assert not is_split_by(beta, AbelianExtQ.cyclotomic(4))

    def test_split_over_a_field(self, gaussian, zeta8):
        beta = restrict(q_class({5: "1/2", "inf": "1/2"}), gaussian)
        assert is_split_by(beta, zeta8)
        # 5 splits in Q(sqrt -11)
        assert not is_split_by(beta, compositum(gaussian, AbelianExtQ.from_subgroup(11, [3])))

    def test_cover_must_contain_base(self, gaussian, sqrt2):
        with pytest.raises(FieldContainmentError):
            is_split_by(BrauerClass.zero(gaussian), sqrt2)

    def test_split_iff_restriction_vanishes(self):
        pairs = list(product(SMALL_CLASSES, SMALL_FIELDS))[::11]
        assert len(pairs) >= 500
        for alpha, cover in pairs:
            assert is_split_by(alpha, cover) == restrict(alpha, cover).is_zero

    def test_split_over_a_field_iff_restriction_vanishes(self, gaussian):
        covers = [z for z in SMALL_FIELDS if contains(z, gaussian)]
        for alpha in SMALL_CLASSES[::4]:
            beta = restrict(alpha, gaussian)
            for cover in covers:
                assert is_split_by(beta, cover) == restrict(alpha, cover).is_zero

    def test_larger_covers_still_split(self):
        for alpha in SMALL_CLASSES[::3]:
            splitting = {z for z in SMALL_FIELDS if is_split_by(alpha, z)}
            for small, big in product(splitting, SMALL_FIELDS):
                if contains(big, small):
                    assert big in splitting, (alpha, small, big)


class TestPrescription:
    def test_quadratic_over_rational(self, rational):
        alpha = prescribe_class(rational, 2, [(place(3), 2)])
        assert alpha.as_dict() == {place(2): F(1, 2), place(3): F(1, 2)}

    def test_inert_target_over_gaussian_field(self, gaussian):
        alpha = prescribe_class(gaussian, 2, [(ZPlace(QPlace(3), 0), 2)])
        assert alpha.invariant(place(3)) == F(1, 4)
        assert alpha.as_dict() == {place(2): F(3, 4), place(3): F(1, 4)}
        restricted = restrict(alpha, gaussian)
        assert index(restricted) == 2
        assert local_index(restricted, ZPlace(QPlace(3), 0)) == 2

    def test_auxiliary_prime_reaches_full_index(self, rational):
        alpha = prescribe_class(rational, 6, [(place(5), 2)])
        assert index(alpha) == 6
        assert local_index(alpha, place(5)) == 2
        assert local_index(alpha, place(2)) == 6

    def test_avoided_places_are_skipped(self, rational):
        alpha = prescribe_class(rational, 3, [], avoid=[place(2), place(3)])
        assert alpha.support == (place(5), place(7))
        assert index(alpha) == 3

    def test_target_in_avoided_set(self, rational):
        with pytest.raises(InfeasibleTargetError):
            prescribe_class(rational, 2, [(place(3), 2)], avoid=[place(3)])

    def test_target_must_divide_index(self, rational):
        with pytest.raises(InfeasibleTargetError):
            prescribe_class(rational, 4, [(place(3), 3)])

    def test_real_target_over_complex_field(self, gaussian):
        with pytest.raises(InfeasibleTargetError):
            prescribe_class(gaussian, 2, [(ZPlace(QPlace(None), 0), 2)])

    def test_real_target_over_rational(self, rational):
        alpha = prescribe_class(rational, 2, [(place("inf"), 2)])
        assert alpha.invariant(place("inf")) == F(1, 2)
        assert index(alpha) == 2
