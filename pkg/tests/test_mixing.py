"""Certificates, searches, subsum reduction, and the unit equation."""

from fractions import Fraction

import pytest

from mixlab.ideals import IdealPresentation
from mixlab.mixing import (
    BudgetExceededError,
    CertificateError,
    DilationFamily,
    IrreducibleCertificateError,
    NonMixingCertificate,
    UnitEquationProblem,
    consecutive_ratio_family,
    enumerate_unit_solutions,
    ess_bound_exponent,
    evaluation_shape_search,
    explicit_family,
    frobenius_certificate,
    mixing_order_report,
    prime_power_family,
    rational_dual_certificate,
    rational_dual_order2_search,
    reduce_witness,
    shape_search,
    solve_consecutive_ratio_coefficients,
    vanishing_subsums,
    verify_certificate,
)
from mixlab.numfield import NumberField
from mixlab.ring import GF, DomainError, LaurentPoly
from mixlab.systems import (
    AlgebraicSystem,
    CharPModule,
    EvaluationModule,
    RationalDualModule,
    free_abelian,
    positive_rationals,
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
    module = EvaluationModule.make(K, {0: K.from_rational(2), 1: K.from_rational(3)})
    return AlgebraicSystem(free_abelian(2), module, name="times2-times3")


@pytest.fixture(scope="module")
def rational_dual():
    return AlgebraicSystem(
        positive_rationals([2, 3]), RationalDualModule(), name="rational-dual"
    )


class TestFrobeniusCertificates:
    def test_generator_certificate(self, three_dot):
        cert = frobenius_certificate(three_dot, p2("1 + u1 + u2"), kmax=5)
        assert cert.order == 3
        assert cert.grade == "proof"
        assert set(cert.shape) == {(0, 0), (1, 0), (0, 1)}
        assert [n for n, _ in cert.transcript] == [2 ** k for k in range(6)]
        assert all(bit == 1 for _, bit in cert.transcript)

    def test_rejects_non_members(self, three_dot):
        with pytest.raises(CertificateError):
            frobenius_certificate(three_dot, p2("1 + u1"))

    def test_rejects_tiny_support(self, three_dot):
        with pytest.raises(CertificateError):
            frobenius_certificate(three_dot, LaurentPoly.zero(2, F2))

    def test_verification_replays(self, three_dot):
        cert = frobenius_certificate(three_dot, p2("1 + u1 + u2"))
        report = verify_certificate(three_dot, cert)
        assert report.ok
        assert report.first_failure is None
        assert report.separation_ok

    def test_tampered_certificate_fails(self, three_dot):
        cert = frobenius_certificate(three_dot, p2("1 + u1 + u2"))
        bad = NonMixingCertificate(
            order=cert.order,
            shape=((0, 0), (1, 1), (0, 1)),  # wrong shape
            coefficients=cert.coefficients,
            family=cert.family,
            transcript=cert.transcript,
            grade=cert.grade,
        )
        report = verify_certificate(three_dot, bad)
        assert not report.ok
        assert report.first_failure == 1


class TestShapeSearch:
    def test_order3_search_recovers_the_relation(self, three_dot):
        outcome = shape_search(
            three_dot, 3, [(0, 2)] * 2, [(0, 0)] * 2, (1, 2, 4)
        )
        shapes = {cert.shape for cert in outcome}
        assert ((0, 0), (0, 1), (1, 0)) in shapes

    def test_order2_search_is_empty(self, three_dot):
        outcome = shape_search(
            three_dot, 2, [(0, 3)] * 2, [(0, 2)] * 2, (1, 2, 4, 8)
        )
        assert len(outcome) == 0
        assert outcome.region["shapes_examined"] > 0

    def test_trivial_quotient_rejected(self):
        ideal = IdealPresentation([p2("1 + u1"), p2("u1")], 2)
        system = AlgebraicSystem(free_abelian(2), CharPModule(ideal))
        with pytest.raises(CertificateError):
            shape_search(system, 2, [(0, 1)] * 2, [(0, 1)] * 2, (1, 2))

    def test_order_below_two_rejected(self, three_dot):
        with pytest.raises(CertificateError):
            shape_search(three_dot, 1, [(0, 1)] * 2, [(0, 1)] * 2, (1,))


class TestDilationFamilies:
    def test_prime_power_shape(self):
        fam = prime_power_family(2)
        assert fam.shape_at(((0, 0), (1, 0)), 4) == (
            (Fraction(0), Fraction(0)),
            (Fraction(4), Fraction(0)),
        )

    def test_consecutive_ratio_shape(self):
        fam = consecutive_ratio_family()
        assert fam.shape_at(None, 5) == (Fraction(1), Fraction(5), Fraction(4))

    def test_explicit_family_records_dilations(self):
        fam = explicit_family([1, 2, 4])
        assert fam.dilations == (1, 2, 4)


class TestSubsums:
    def test_minimal_subsums(self):
        terms = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)]
        subs = vanishing_subsums(terms)
        assert (0, 1) in subs and (2, 3) in subs
        # The full set sums to zero but is not inclusion-minimal.
        assert (0, 1, 2, 3) not in subs

    def test_size_limits(self):
        with pytest.raises(DomainError):
            vanishing_subsums([Fraction(1)])

    def test_reduce_witness_splits_a_product_family(self, three_dot):
        # Shape = support of (1 + u^(2,2)) * (1 + u1 + u2): the two translated
        # triangles each vanish along powers of 2, so the union is reducible.
        shape = ((0, 0), (1, 0), (0, 1), (2, 2), (3, 2), (2, 3))
        one = p2("1")
        cert = NonMixingCertificate(
            order=6,
            shape=shape,
            coefficients=(one,) * 6,
            family=prime_power_family(2),
            transcript=tuple((2 ** k, 1) for k in range(4)),
            grade="proof",
        )
        assert verify_certificate(three_dot, cert).ok
        reduced = reduce_witness(three_dot, cert)
        assert reduced.order == 3
        assert set(reduced.shape) <= set(shape)
        assert verify_certificate(three_dot, reduced).ok

    def test_reduce_witness_irreducible(self, three_dot):
        cert = frobenius_certificate(three_dot, p2("1 + u1 + u2"))
        with pytest.raises(IrreducibleCertificateError):
            reduce_witness(three_dot, cert)


class TestEssBound:
    def test_pinned_values(self):
        assert ess_bound_exponent(1, 0) == 216
        assert ess_bound_exponent(1, 1) == 432
        assert ess_bound_exponent(2, 1) == 5_971_968

    def test_domain(self):
        with pytest.raises(DomainError):
            ess_bound_exponent(0, 0)


@pytest.fixture(scope="module")
def field():
    return NumberField([-1, 1])


class TestUnitEquation:
    def test_x_plus_y(self, field):
        problem = UnitEquationProblem.make(field, [1, 1], [2], box=5)
        result = enumerate_unit_solutions(problem)
        values = [
            tuple(Fraction(v.coeffs[0]) for v in s.values) for s in result.solutions
        ]
        assert values == [(Fraction(1, 2), Fraction(1, 2))]
        assert result.bound_ok

    def test_x_minus_y(self, field):
        problem = UnitEquationProblem.make(field, [1, -1], [2], box=5)
        result = enumerate_unit_solutions(problem)
        values = [
            tuple(Fraction(v.coeffs[0]) for v in s.values) for s in result.solutions
        ]
        assert values == [(Fraction(2), Fraction(1))]

    def test_budget_enforced(self, field):
        problem = UnitEquationProblem.make(field, [1, 1], [2, 3], box=5, budget=10)
        with pytest.raises(BudgetExceededError) as e:
            enumerate_unit_solutions(problem)
        assert e.value.region["box"] == 5

    def test_zero_coefficient_rejected(self, field):
        with pytest.raises(DomainError):
            UnitEquationProblem.make(field, [0, 1], [2], box=2)


class TestEvaluationSearch:
    def test_small_box_is_empty(self, solenoid_23):
        outcome = evaluation_shape_search(solenoid_23, 2, [(-3, 3)] * 2)
        assert len(outcome) == 0
        assert "bounded evidence" in outcome.region["note"]

    def test_underdetermined_dilations_rejected(self, solenoid_23):
        with pytest.raises(CertificateError):
            evaluation_shape_search(solenoid_23, 3, [(-2, 2)] * 2, dilations=(1, 2))

    def test_dependent_units_are_found(self):
        # u1 -> 2 and u2 -> 2 collide, so the pair (u1, u2) is visibly
        # dependent: c1*2^n + c2*2^n = 0 with c = (1, -1) for every n.
        K = NumberField([-1, 1])
        module = EvaluationModule.make(
            K, {0: K.from_rational(2), 1: K.from_rational(2)}
        )
        system = AlgebraicSystem(free_abelian(2), module)
        outcome = evaluation_shape_search(system, 2, [(-1, 1)] * 2)
        assert len(outcome) > 0
        cert = outcome.certificates[0]
        assert verify_certificate(system, cert).ok


class TestRationalDual:
    def test_solved_coefficients(self):
        a1, a2, a3 = solve_consecutive_ratio_coefficients()
        assert (a1, a2, a3) == (Fraction(1), Fraction(-1), Fraction(1))
        for n in (2, 3, 17):
            assert a1 * 1 + a2 * n + a3 * (n - 1) == 0

    def test_certificate_family(self, rational_dual):
        cert = rational_dual_certificate(rational_dual, n_max=50)
        assert cert.order == 3
        assert cert.family.kind == "consecutive_ratio"
        assert all(bit == 1 for _, bit in cert.transcript)
        assert verify_certificate(rational_dual, cert).ok

    def test_consecutive_ratio_is_irreducible(self, rational_dual):
        cert = rational_dual_certificate(rational_dual, n_max=10)
        with pytest.raises(IrreducibleCertificateError):
            reduce_witness(rational_dual, cert)

    def test_order2_search_empty(self, rational_dual):
        outcome = rational_dual_order2_search(
            rational_dual, coeff_height=8, shape_height=20
        )
        assert len(outcome) == 0
        assert outcome.region["constant_ratio_families"] > 0


class TestMixingReport:
    def test_charp_report(self, three_dot):
        from mixlab.mixing import SearchBudgets

        budgets = SearchBudgets(shape_box=2, coeff_window=1, dilations=(1, 2, 4))
        report = mixing_order_report(three_dot, rmax=3, budgets=budgets)
        assert report.least_certified_order == 3
        assert not report.entries[2].certificates
        assert any(c.grade == "proof" for c in report.entries[3].certificates)
        assert any("three-dot" in line for line in report.summary_lines())

    def test_rational_dual_report(self, rational_dual):
        from mixlab.mixing import SearchBudgets

        budgets = SearchBudgets(rational_coeff_height=5, rational_shape_height=10,
                                rational_dual_nmax=20)
        report = mixing_order_report(rational_dual, rmax=4, budgets=budgets)
        assert report.least_certified_order == 3
        assert report.entries[4].note.startswith("implied")
