"""Systems, character tuples, the correlation oracle, and splitting."""

from fractions import Fraction

import pytest

from mixlab.ideals import IdealPresentation
from mixlab.numfield import NumberField
from mixlab.ring import GF, DomainError, LaurentPoly
from mixlab.systems import (
    AlgebraicSystem,
    CharacterTuple,
    CharPModule,
    EvaluationModule,
    GroupDescriptor,
    InvalidTupleError,
    RationalDualModule,
    character_correlation,
    find_nonmixing_element,
    free_abelian,
    level_embed,
    positive_rationals,
    rational_vector,
    split_action,
)

F2 = GF(2)


def p2(text, d=2):
    return LaurentPoly.parse(text, d, F2)


@pytest.fixture(scope="module")
def three_dot():
    ideal = IdealPresentation([p2("1 + u1 + u2")], 2)
    return AlgebraicSystem(free_abelian(2), CharPModule(ideal), name="three-dot")


@pytest.fixture(scope="module")
def solenoid_23():
    K = NumberField([-1, 1])
    module = EvaluationModule.make(
        K, {0: K.from_rational(2), 1: K.from_rational(3)}
    )
    return AlgebraicSystem(free_abelian(2), module, name="times2-times3")


@pytest.fixture(scope="module")
def rational_dual():
    return AlgebraicSystem(
        positive_rationals([2, 3, 5]), RationalDualModule(), name="rational-dual"
    )


class TestGroups:
    def test_rank(self):
        assert free_abelian(3).rank == 3
        assert rational_vector(2).rank == 2
        assert positive_rationals([2, 3, 5]).rank == 3

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError):
            GroupDescriptor("cyclic", d=1)


class TestCharacterTuples:
    def test_repeated_shift_rejected(self, three_dot):
        tup = CharacterTuple([((0, 0), p2("1")), ((0, 0), p2("u1"))])
        with pytest.raises(InvalidTupleError):
            tup.validate(three_dot)

    def test_zero_coefficient_rejected(self, three_dot):
        tup = CharacterTuple([((0, 0), p2("1 + u1 + u2"))])
        with pytest.raises(InvalidTupleError):
            tup.validate(three_dot)

    def test_fraction_and_tuple_shifts_compared_exactly(self, three_dot):
        tup = CharacterTuple(
            [((Fraction(0), Fraction(0)), p2("1")), ((0, 0), p2("u1"))]
        )
        with pytest.raises(InvalidTupleError):
            tup.validate(three_dot)


class TestCorrelationCharP:
    def test_generator_relation_vanishes(self, three_dot):
        one = p2("1")
        tup = CharacterTuple([((0, 0), one), ((1, 0), one), ((0, 1), one)])
        assert character_correlation(three_dot, tup) == 1

    def test_frobenius_dilates(self, three_dot):
        one = p2("1")
        for n in (2, 4, 8, 16):
            tup = CharacterTuple([((0, 0), one), ((n, 0), one), ((0, n), one)])
            assert character_correlation(three_dot, tup) == 1

    def test_non_power_dilation_fails(self, three_dot):
        one = p2("1")
        tup = CharacterTuple([((0, 0), one), ((3, 0), one), ((0, 3), one)])
        assert character_correlation(three_dot, tup) == 0

    def test_module_coefficients_matter(self, three_dot):
        tup = CharacterTuple([((0, 0), p2("1 + u1")), ((1, 0), p2("u2 * u1^-1"))])
        # (1 + u1) + u1 * u2/u1 = 1 + u1 + u2, which is in the ideal.
        assert character_correlation(three_dot, tup) == 1


class TestCorrelationEvaluation:
    def test_vanishing_combination(self, solenoid_23):
        K = solenoid_23.module.field
        tup = CharacterTuple(
            [((1, 0), K.from_rational(3)), ((0, 1), K.from_rational(-2))]
        )
        # 3*2 - 2*3 = 0.
        assert character_correlation(solenoid_23, tup) == 1

    def test_generic_combination(self, solenoid_23):
        K = solenoid_23.module.field
        tup = CharacterTuple(
            [((1, 0), K.from_rational(1)), ((0, 1), K.from_rational(1))]
        )
        assert character_correlation(solenoid_23, tup) == 0

    def test_rational_coefficients_coerced(self, solenoid_23):
        tup = CharacterTuple([((1, 0), Fraction(3)), ((0, 1), Fraction(-2))])
        assert character_correlation(solenoid_23, tup) == 1

    def test_level_semantics(self):
        K = NumberField([-1, 1])
        module = EvaluationModule.make(K, {0: K.from_rational(2)}, level=2)
        system = AlgebraicSystem(free_abelian(1), module)
        # u1^(1/2) maps to the level generator w = 2, so u1 itself maps to 4.
        tup = CharacterTuple(
            [((Fraction(1, 2),), Fraction(1)), ((0,), Fraction(-2))]
        )
        assert character_correlation(system, tup) == 1

    def test_unsupported_fractional_exponent(self):
        K = NumberField([-1, 1])
        module = EvaluationModule.make(K, {0: K.from_rational(2)}, level=1)
        system = AlgebraicSystem(free_abelian(1), module)
        tup = CharacterTuple([((Fraction(1, 2),), Fraction(1))])
        with pytest.raises(ValueError):
            character_correlation(system, tup)


class TestCorrelationRationalDual:
    def test_consecutive_family(self, rational_dual):
        for n in (3, 10, 101):
            tup = CharacterTuple(
                [
                    (Fraction(1), Fraction(1)),
                    (Fraction(n), Fraction(-1)),
                    (Fraction(n - 1), Fraction(1)),
                ]
            )
            assert character_correlation(rational_dual, tup) == 1

    def test_generic_pair(self, rational_dual):
        tup = CharacterTuple([(Fraction(1), Fraction(1)), (Fraction(2), Fraction(1))])
        assert character_correlation(rational_dual, tup) == 0


class TestLevelEmbed:
    def test_clears_denominators(self):
        L, shape = level_embed([(Fraction(1, 2), 1), (Fraction(1, 3), 0)])
        assert L == 6
        assert shape == [(3, 6), (2, 0)]

    def test_integer_shape_unchanged(self):
        L, shape = level_embed([(1, 2), (0, 0)])
        assert L == 1 and shape == [(1, 2), (0, 0)]

    def test_empty_shape_rejected(self):
        with pytest.raises(DomainError):
            level_embed([])


class TestNonMixingElements:
    def test_torsion_direction_found(self):
        ideal = IdealPresentation([p2("1 + u1", 1)], 2, d=1)
        system = AlgebraicSystem(free_abelian(1), CharPModule(ideal))
        # Every nonzero shift fixes the module; the scan finds the first one.
        assert find_nonmixing_element(system, [(-3, 3)]) == (-3,)

    def test_three_dot_has_none_in_small_box(self, three_dot):
        assert find_nonmixing_element(three_dot, [(-3, 3), (-3, 3)]) is None

    def test_evaluation_root_of_unity(self):
        K = NumberField([1, 0, 1])  # x^2 + 1: u1 -> i is a 4-torsion unit
        module = EvaluationModule.make(K, {0: K.gen})
        system = AlgebraicSystem(free_abelian(1), module)
        assert find_nonmixing_element(system, [(-4, 4)]) == (-4,)

    def test_rational_dual_has_none(self, rational_dual):
        assert find_nonmixing_element(rational_dual, [(-5, 5)]) is None


@pytest.fixture(scope="module")
def split_system():
    ideal = IdealPresentation([LaurentPoly.parse("1 + u2 + u3", 4, F2)], 2, d=4)
    system = AlgebraicSystem(positive_rationals([2, 3, 5, 7]), CharPModule(ideal))
    return system, split_action(system)


class TestSplitAction:
    def test_inner_variables_inferred(self, split_system):
        _, split = split_system
        assert split.inner_vars == (1, 2)
        assert split.shift_primes == (2, 7)

    def test_projections(self, split_system):
        _, split = split_system
        assert split.project_inner((4, 1, 2, 3)) == (1, 2)
        assert split.project_shift((4, 1, 2, 3)) == (4, 3)

    def test_correlation_agrees_with_direct(self, split_system):
        system, split = split_system
        one = LaurentPoly.one(4, F2)
        same_fiber = CharacterTuple(
            [((1, 0, 0, 2), one), ((1, 1, 0, 2), one), ((1, 0, 1, 2), one)]
        )
        crossed = CharacterTuple(
            [((1, 0, 0, 2), one), ((0, 1, 0, 2), one), ((1, 0, 1, 2), one)]
        )
        for tup in (same_fiber, crossed):
            assert split.correlation(tup) == character_correlation(system, tup)
        assert split.correlation(same_fiber) == 1
        assert split.correlation(crossed) == 0

    def test_explicit_split_must_cover_generators(self, split_system):
        system, _ = split_system
        with pytest.raises(DomainError):
            split_action(system, inner_vars=[1])

    def test_coefficient_support_restriction(self, split_system):
        _, split = split_system
        with pytest.raises(DomainError):
            split.restrict_coefficient(LaurentPoly.parse("u1", 4, F2))

    def test_needs_positive_rationals(self, three_dot):
        from mixlab.systems import UnsupportedOperationError

        with pytest.raises(UnsupportedOperationError):
            split_action(three_dot)
