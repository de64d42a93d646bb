"""Tests for the exact Laurent-polynomial layer and the group lattice analysis."""

import random
from fractions import Fraction

import pytest

from poisson_strata.exact_poly import (
    LaurentPoly,
    ReductionBudgetExceeded,
    ReductionRule,
    ReductionSystem,
    VarSpec,
    VarSpecMismatch,
    divide_exact,
    factor_rational,
    format_poly,
    group_analysis,
    monomial_key,
    reduce_poly,
    unfactor_rational,
)

VS2 = VarSpec(("y1", "x1", "y2", "x2"))
VS_L = VarSpec(("y1", "x1"), frozenset({"y1"}))


def random_poly(vs, rng, max_terms=4, max_degree=5):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = [0] * len(vs)
        for _ in range(rng.randint(0, max_degree)):
            mono[rng.randrange(len(vs))] += 1
        terms[tuple(mono)] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return LaurentPoly(vs, terms)


def test_difference_of_squares():
    y1 = LaurentPoly.variable(VS2, "y1")
    x1 = LaurentPoly.variable(VS2, "x1")
    assert (y1 + x1) * (y1 - x1) == y1 * y1 - x1 * x1


def test_laurent_derivative_power_rule():
    f = LaurentPoly.monomial(VS_L, {"y1": -1, "x1": 1})
    expected = LaurentPoly.monomial(VS_L, {"y1": -2, "x1": 1}, -1)
    assert f.derivative("y1") == expected


def test_coefficient_arithmetic_collapses():
    m = {"y2": -1, "y1": 1, "x1": 1}
    vs = VarSpec(("y1", "x1", "y2"), frozenset({"y2"}))
    f = LaurentPoly.monomial(vs, m, Fraction(3, 4)) + LaurentPoly.monomial(vs, m, Fraction(1, 4))
    assert f == LaurentPoly.monomial(vs, m, 1)


def test_ring_axioms_random():
    rng = random.Random(0)
    specs = [VarSpec(tuple(f"v{k}" for k in range(2 * n))) for n in (1, 2, 3)]
    for _ in range(200):
        vs = specs[rng.randrange(3)]
        f, g, h = (random_poly(vs, rng, max_degree=6) for _ in range(3))
        assert (f + g) + h == f + (g + h)
        assert f * g == g * f
        assert f * (g + h) == f * g + f * h


def test_canonical_form_drops_zeros():
    f = LaurentPoly(VS2, {(1, 0, 0, 0): Fraction(1), (0, 1, 0, 0): Fraction(0)})
    assert len(f.terms) == 1
    g = LaurentPoly.variable(VS2, "y1") - LaurentPoly.variable(VS2, "y1")
    assert g.is_zero() and g.terms == {}


def test_negative_exponent_rejected_without_flag():
    with pytest.raises(ValueError):
        LaurentPoly(VS2, {(-1, 0, 0, 0): Fraction(1)})


def test_varspec_mismatch_raises():
    other = VarSpec(("a", "b"))
    with pytest.raises(VarSpecMismatch):
        LaurentPoly.one(VS2) + LaurentPoly.one(other)
    with pytest.raises(KeyError):
        LaurentPoly.one(VS2).derivative("zz")


def test_monomial_order_prefers_late_variables():
    # On equal total degree the pair monomial of the latest index dominates,
    # so y2*x2 beats y1*x1 and leads any tail combination.
    assert monomial_key((0, 0, 1, 1)) > monomial_key((1, 1, 0, 0))
    omega2 = LaurentPoly(VS2, {(1, 1, 0, 0): Fraction(3), (0, 0, 1, 1): Fraction(4)})
    assert omega2.leading_monomial() == (0, 0, 1, 1)


def test_reduce_single_step():
    # rule y1x1 -> -3/4 applied inside y1*x1^2 leaves -3/4 * x1
    rule = ReductionRule((1, 1, 0, 0), LaurentPoly.constant(VS2, Fraction(-3, 4)))
    system = ReductionSystem(VS2, (rule,))
    f = LaurentPoly.monomial(VS2, {"y1": 1, "x1": 2})
    assert reduce_poly(f, system) == LaurentPoly.monomial(VS2, {"x1": 1}, Fraction(-3, 4))


def test_reduce_no_rule_applies():
    rule = ReductionRule((1, 0, 0, 0), LaurentPoly.zero(VS2))
    system = ReductionSystem(VS2, (rule,))
    f = LaurentPoly.monomial(VS2, {"y2": 3})
    assert reduce_poly(f, system) == f


def test_reduce_kills_variable():
    rule = ReductionRule((0, 1, 0, 0), LaurentPoly.zero(VS2))
    system = ReductionSystem(VS2, (rule,))
    assert reduce_poly(LaurentPoly.variable(VS2, "x1"), system).is_zero()


def test_reduce_idempotent_random():
    rng = random.Random(1)
    rules = (
        ReductionRule((0, 0, 1, 1), LaurentPoly.monomial(VS2, {"y1": 1, "x1": 1}, Fraction(-3, 4))),
        ReductionRule((2, 0, 0, 0), LaurentPoly.variable(VS2, "x1")),
    )
    system = ReductionSystem(VS2, rules)
    for _ in range(200):
        f = random_poly(VS2, rng)
        once = reduce_poly(f, system)
        assert reduce_poly(once, system) == once


def test_reduce_budget_guard():
    rule = ReductionRule((0, 0, 1, 1), LaurentPoly.monomial(VS2, {"y1": 1, "x1": 1}))
    # replacement of the same degree in lower variables is legal; an absurdly
    # small budget must trip on a long chain
    system = ReductionSystem(VS2, (rule, ReductionRule((1, 1, 0, 0), LaurentPoly.zero(VS2))))
    f = LaurentPoly.monomial(VS2, {"y2": 3, "x2": 3})
    with pytest.raises(ReductionBudgetExceeded):
        reduce_poly(f, system, max_steps=1)


def test_rule_validation():
    with pytest.raises(ValueError):
        # replacement does not decrease the order
        ReductionSystem(
            VS2,
            (ReductionRule((1, 0, 0, 0), LaurentPoly.monomial(VS2, {"x1": 1, "y1": 1})),),
        )
    with pytest.raises(ValueError):
        ReductionSystem(
            VS2,
            (
                ReductionRule((1, 0, 0, 0), LaurentPoly.zero(VS2)),
                ReductionRule((1, 0, 0, 0), LaurentPoly.zero(VS2)),
            ),
        )


def test_divide_exact_roundtrip():
    rng = random.Random(2)
    for _ in range(100):
        f = random_poly(VS2, rng)
        g = random_poly(VS2, rng)
        if g.is_zero():
            continue
        assert divide_exact(f * g, g) == f


def test_divide_exact_detects_non_multiples():
    y1 = LaurentPoly.variable(VS2, "y1")
    x1 = LaurentPoly.variable(VS2, "x1")
    assert divide_exact(y1 * y1 + x1, y1 + x1) is None


def test_prime_factor_roundtrip():
    rng = random.Random(3)
    for _ in range(1000):
        value = Fraction(rng.randint(-400, 400), rng.randint(1, 400))
        if value == 0:
            continue
        sign, exps = factor_rational(value)
        assert unfactor_rational(sign, exps) == value
        assert all(e != 0 for e in exps.values())


def test_group_analysis_powers_of_two():
    result = group_analysis([Fraction(2), Fraction(8), Fraction(4), Fraction(32), Fraction(2)])
    assert result.lattice_rank == 1
    assert result.contains_minus_one is False


def test_group_analysis_independent_primes():
    result = group_analysis([Fraction(2), Fraction(3), Fraction(5), Fraction(7)])
    assert result.lattice_rank == 4
    assert result.contains_minus_one is False


def test_group_analysis_minus_one_via_quotient():
    result = group_analysis([Fraction(-2), Fraction(2)])
    assert result.lattice_rank == 1
    assert result.contains_minus_one is True


def test_group_analysis_sign_parity_is_arithmetic():
    # (-8)^a 4^b = -1 needs 3a + 2b = 0 with a odd, which has no solution,
    # while (-8)^1 2^-3 = -1 does exist.
    assert group_analysis([Fraction(-8), Fraction(4)]).contains_minus_one is False
    assert group_analysis([Fraction(-8), Fraction(2)]).contains_minus_one is True
    assert group_analysis([Fraction(-1)]).contains_minus_one is True
    with pytest.raises(ValueError):
        group_analysis([Fraction(0)])


def test_format_poly_stable():
    f = LaurentPoly(VS2, {(1, 1, 0, 0): Fraction(3), (0, 0, 1, 1): Fraction(-1, 2)})
    assert format_poly(f) == "-1/2*y2*x2 + 3*y1*x1"
    assert format_poly(LaurentPoly.zero(VS2)) == "0"
