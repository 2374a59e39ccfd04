"""Window configuration spaces, exact measures, and Monte Carlo estimates."""

from fractions import Fraction

import numpy as np
import pytest

from mixlab.ideals import IdealPresentation
from mixlab.ring import GF, DomainError, LaurentPoly
from mixlab.simulate import (
    CylinderSet,
    WindowConfigSpace,
    WindowError,
    correlation_estimate,
    correlation_exact,
    cylinder_measure,
    sample_uniform,
)
from mixlab.systems import (
    AlgebraicSystem,
    CharPModule,
    RationalDualModule,
    UnsupportedOperationError,
    free_abelian,
    positive_rationals,
)

F2 = GF(2)
WINDOW = [(0, 6), (0, 6)]


def p2(text, d=2):
    return LaurentPoly.parse(text, d, F2)


@pytest.fixture(scope="module")
def three_dot():
    ideal = IdealPresentation([p2("1 + u1 + u2")], 2)
    return AlgebraicSystem(free_abelian(2), CharPModule(ideal), name="three-dot")


@pytest.fixture(scope="module")
def full_shift():
    ideal = IdealPresentation([], 2, d=2)
    return AlgebraicSystem(free_abelian(2), CharPModule(ideal), name="full-shift")


class TestConfigSpace:
    def test_solution_dimension(self, three_dot):
        space = WindowConfigSpace(three_dot, WINDOW)
        # 49 sites, one constraint per fully contained translate (6x6).
        assert len(space.sites) == 49
        assert space.rank == 36
        assert space.solution_dimension == 13
        assert space.configuration_count() == 2 ** 13

    def test_full_shift_is_unconstrained(self, full_shift):
        space = WindowConfigSpace(full_shift, [(0, 2), (0, 2)])
        assert space.solution_dimension == 9

    def test_samples_satisfy_constraints(self, three_dot):
        space = WindowConfigSpace(three_dot, WINDOW)
        samples = sample_uniform(space, 50, seed=11)
        rows = np.array(space.rows) % 2
        assert ((rows @ samples.T) % 2 == 0).all()

    def test_sampling_is_deterministic(self, three_dot):
        space = WindowConfigSpace(three_dot, WINDOW)
        a = sample_uniform(space, 10, seed=3)
        b = sample_uniform(space, 10, seed=3)
        assert (a == b).all()

    def test_grid_text(self, three_dot):
        space = WindowConfigSpace(three_dot, [(0, 2), (0, 2)])
        text = space.grid_text(space.sample_uniform(1, seed=0)[0])
        assert len(text.splitlines()) == 3
        assert set(text) <= {"0", "1", "\n"}

    def test_dimension_mismatch(self, three_dot):
        with pytest.raises(WindowError):
            WindowConfigSpace(three_dot, [(0, 3)])

    def test_charp_only(self):
        system = AlgebraicSystem(positive_rationals([2]), RationalDualModule())
        with pytest.raises(UnsupportedOperationError):
            WindowConfigSpace(system, [(0, 3)])


class TestExactMeasures:
    def test_single_pin_measure(self, three_dot):
        result = cylinder_measure(three_dot, CylinderSet.make({(0, 0): 0}), WINDOW)
        assert result.value == Fraction(1, 2)
        assert result.stable

    def test_two_pin_measure(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0, (1, 0): 1})
        result = cylinder_measure(three_dot, cyl, WINDOW)
        assert result.value == Fraction(1, 4)

    def test_contradictory_pins_have_measure_zero(self, three_dot):
        # The three-dot relation forces the three corner values to sum to 0.
        cyl = CylinderSet.make({(0, 0): 0, (1, 0): 0, (0, 1): 1})
        result = cylinder_measure(three_dot, cyl, WINDOW)
        assert result.value == 0

    def test_correlation_collapse_at_powers_of_two(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        exact = correlation_exact(
            three_dot, [cyl] * 3, [(0, 0), (4, 0), (0, 4)], WINDOW
        )
        assert exact == Fraction(1, 4)

    def test_correlation_splits_at_generic_shifts(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        exact = correlation_exact(
            three_dot, [cyl] * 3, [(0, 0), (3, 0), (0, 3)], WINDOW
        )
        assert exact == Fraction(1, 8)

    def test_full_shift_measures_multiply(self, full_shift):
        cyl = CylinderSet.make({(0, 0): 1})
        exact = correlation_exact(
            full_shift, [cyl] * 2, [(0, 0), (2, 2)], [(0, 4), (0, 4)]
        )
        assert exact == Fraction(1, 4)

    def test_shift_outside_window_rejected(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        with pytest.raises(WindowError):
            correlation_exact(three_dot, [cyl], [(40, 0)], WINDOW)

    def test_mismatched_sets_and_shifts(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        with pytest.raises(DomainError):
            correlation_exact(three_dot, [cyl] * 2, [(0, 0)], WINDOW)

    def test_empty_cylinder_rejected(self):
        with pytest.raises(DomainError):
            CylinderSet.make({})


class TestEstimates:
    def test_estimate_matches_exact(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        est = correlation_estimate(
            three_dot, [cyl] * 3, [(0, 0), (4, 0), (0, 4)], WINDOW,
            samples=50_000, seed=5,
        )
        assert est.within_sigma(Fraction(1, 4), sigma=4.0)

    def test_thread_count_does_not_change_the_estimate(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        kwargs = dict(samples=45_000, seed=9)
        single = correlation_estimate(
            three_dot, [cyl], [(0, 0)], WINDOW, threads=1, **kwargs
        )
        pooled = correlation_estimate(
            three_dot, [cyl], [(0, 0)], WINDOW, threads=4, **kwargs
        )
        assert single.estimate == pooled.estimate

    def test_seed_changes_the_sample(self, three_dot):
        cyl = CylinderSet.make({(0, 0): 0})
        a = correlation_estimate(three_dot, [cyl], [(0, 0)], WINDOW, samples=10_000, seed=1)
        b = correlation_estimate(three_dot, [cyl], [(0, 0)], WINDOW, samples=10_000, seed=2)
        assert a.estimate != b.estimate
