"""Tests for the stratum maps, the parameter-group character, and the report."""

from fractions import Fraction

import pytest

from poisson_strata.admissible import AdmissibleSet, derived_sets, enumerate_admissible
from poisson_strata.algebra_kn import QuantumParams
from poisson_strata.correspondence import (
    GroupContainsMinusOne,
    MapCase,
    default_weights,
    dispatch_case,
    group_character,
    nested_congruence_check,
    poisson_stratum_map,
    quantum_stratum_map,
    stratification_report,
    verify_poisson_stratum_map,
    verify_quantum_stratum_map,
)
from poisson_strata.exact_poly import LaurentPoly
from poisson_strata.samples import (
    quantum_sample,
    quantum_sample_image,
    sample_weights,
)


def empty_set(n):
    return AdmissibleSet.from_names(n, [])


def full_set(n):
    names = []
    for i in range(1, n + 1):
        names += [f"y{i}", f"x{i}", f"Omega{i}"]
    return AdmissibleSet.from_names(n, names)


def test_poisson_images_empty_set():
    params = quantum_sample_image()  # p=(1,3), q=(2,5)
    gmap = poisson_stratum_map(params, empty_set(2))
    vs = gmap.target.varspec
    assert gmap.images["y1"] == LaurentPoly.variable(vs, "Y1")
    assert gmap.images["y2"] == LaurentPoly.variable(vs, "Y2")
    assert gmap.images["x1"] == LaurentPoly.variable(vs, "X1")
    # weight (q2-p2)^-1 (q1-p1) = 1/2 on the correction term
    expected = LaurentPoly.variable(vs, "X2") + LaurentPoly.monomial(
        vs, {"Y2": -1, "Y1": 1, "X1": 1}, Fraction(-1, 2)
    )
    assert gmap.images["x2"] == expected


def test_poisson_image_previous_tail_in_set():
    params = quantum_sample_image()
    gmap = poisson_stratum_map(params, AdmissibleSet.from_names(2, ["y1", "Omega1"]))
    vs = gmap.target.varspec
    assert gmap.images["x2"] == LaurentPoly.variable(vs, "X2")
    assert gmap.images["y1"].is_zero()  # Y1 is killed in the target


def test_poisson_image_own_tail_in_set():
    params = quantum_sample_image()
    gmap = poisson_stratum_map(params, AdmissibleSet.from_names(2, ["Omega2"]))
    vs = gmap.target.varspec
    assert "X2" not in vs.names  # killed
    assert gmap.images["x2"] == LaurentPoly.monomial(
        vs, {"Y2": -1, "Y1": 1, "X1": 1}, Fraction(-1, 2)
    )


def test_dispatch_cases():
    t_set = AdmissibleSet.from_names(2, ["Omega2"])
    assert dispatch_case(t_set, "y2") is MapCase.Y_GEN
    assert dispatch_case(t_set, "x1") is MapCase.X_FIRST
    assert dispatch_case(t_set, "x2") is MapCase.X_TAIL
    t2 = AdmissibleSet.from_names(2, ["y1", "Omega1"])
    assert dispatch_case(t2, "x2") is MapCase.X_PLAIN
    assert dispatch_case(empty_set(2), "x2") is MapCase.X_FULL


def test_both_maps_use_the_same_cases():
    pparams = quantum_sample_image()
    qparams = quantum_sample()
    for t_set in enumerate_admissible(2):
        pmap = poisson_stratum_map(pparams, t_set)
        qmap = quantum_stratum_map(qparams, t_set)
        assert pmap.cases == qmap.cases


def test_verify_poisson_all_strata_small_n():
    for n in (1, 2):
        params = quantum_sample_image(n)
        for t_set in enumerate_admissible(n):
            report = verify_poisson_stratum_map(params, t_set)
            assert report["ok"], (t_set.member_names(), report["failures"])


def test_verify_poisson_spot_checks_n3():
    params = quantum_sample_image(3)
    for t_set in (empty_set(3), full_set(3)):
        assert verify_poisson_stratum_map(params, t_set)["ok"]


def test_poisson_tail_images():
    from poisson_strata.algebra_an import omega
    from poisson_strata.correspondence import apply_poisson_map

    params = quantum_sample_image()
    gmap = poisson_stratum_map(params, empty_set(2))
    vs = gmap.target.varspec
    image = apply_poisson_map(gmap, omega(params, 2))
    assert image == LaurentPoly.monomial(vs, {"Y2": 1, "X2": 1}, 2)  # (q2 - p2) Y2 X2


def test_nested_congruence_all_pairs():
    for n in (1, 2):
        params = quantum_sample_image(n)
        sets = enumerate_admissible(n)
        pairs = 0
        for small in sets:
            for large in sets:
                if small.members() <= large.members():
                    report = nested_congruence_check(params, small, large)
                    assert report["ok"], (small.member_names(), large.member_names())
                    pairs += 1
        assert pairs > len(sets)  # strict nesting actually occurred
    with pytest.raises(ValueError):
        nested_congruence_check(
            quantum_sample_image(1),
            AdmissibleSet.from_names(1, ["y1", "Omega1"]),
            empty_set(1),
        )


def test_quantum_images_empty_set():
    params = quantum_sample()
    gmap = quantum_stratum_map(params, empty_set(2))
    torus = gmap.target
    # weight (q2-p2)^-1 (q1-p1) = 2/24 = 1/12 sits on the ordered product
    # Y2^-1 Y1 X1; normal-ordering it crosses Y1 and X1 past Y2^-1, which
    # contributes gamma12 * p2/gamma12 = 8, so the standard-monomial
    # coefficient is -8/12 = -2/3.
    expected = torus.generator("X2") + torus.monomial(
        {"Y2": -1, "Y1": 1, "X1": 1}, Fraction(-2, 3)
    )
    assert gmap.images["x2"] == expected
    ordered = (
        torus.generator("Y2") ** (-1) * torus.generator("Y1") * torus.generator("X1")
    )
    assert gmap.images["x2"] == torus.generator("X2") + ordered.scale(Fraction(-1, 12))
    assert gmap.images["y1"] == torus.generator("Y1")


def test_quantum_full_set_collapses():
    params = quantum_sample()
    gmap = quantum_stratum_map(params, full_set(2))
    assert all(image.is_zero() for image in gmap.images.values())
    assert verify_quantum_stratum_map(params, full_set(2))["ok"]


def test_verify_quantum_all_strata_small_n():
    for n in (1, 2):
        params = quantum_sample(n)
        for t_set in enumerate_admissible(n):
            report = verify_quantum_stratum_map(params, t_set)
            assert report["ok"], (t_set.member_names(), report["failures"])


def test_character_transports_the_sample():
    character = group_character(quantum_sample(), sample_weights())
    assert character.image_p == (1, 3)
    assert character.image_q == (2, 5)
    assert character.image_gamma[0][1] == 1
    assert character.injective_on_group is True
    assert character.minus_one_in_group is False
    assert character.induced == quantum_sample_image()


def test_character_turns_commutation_into_log_canonical_matrix():
    # Entrywise, the additive matrix attached to the induced parameters is
    # the character image of the multiplicative matrix.
    from poisson_strata.algebra_an import log_canonical_matrix
    from poisson_strata.algebra_kn import commutation_matrix

    for n in (1, 2, 3):
        character = group_character(quantum_sample(n), sample_weights())
        additive = log_canonical_matrix(character.induced)
        multiplicative = commutation_matrix(quantum_sample(n))
        for a in range(2 * n):
            for b in range(2 * n):
                assert additive[a][b] == character.apply(multiplicative[a][b])


def test_character_is_additive_on_products():
    character = group_character(quantum_sample(), sample_weights())
    import random

    rng = random.Random(16)
    gens = [Fraction(2), Fraction(8), Fraction(4), Fraction(32)]
    for _ in range(1000):
        a = Fraction(1)
        b = Fraction(1)
        for g in gens:
            a *= g ** rng.randint(-2, 2)
            b *= g ** rng.randint(-2, 2)
        assert character.apply(a * b) == character.apply(a) + character.apply(b)


def test_character_mixed_primes_not_injective():
    params = QuantumParams.make(2, [[1, 1], [1, 1]], [2, 5], [3, 7])
    weights = {2: Fraction(1), 3: Fraction(2), 5: Fraction(3), 7: Fraction(5)}
    character = group_character(params, weights)
    assert character.group.lattice_rank == 4
    assert character.injective_on_group is False


def test_character_rejects_minus_one():
    params = QuantumParams.make(2, [[1, -2], [Fraction(-1, 2), 1]], [2, 4], [8, 16])
    with pytest.raises(GroupContainsMinusOne) as err:
        group_character(params, {2: Fraction(1)})
    assert err.value.analysis.contains_minus_one is True


def test_character_requires_all_primes():
    params = QuantumParams.make(1, [[1]], [2], [3])
    with pytest.raises(ValueError):
        group_character(params, {2: Fraction(1)})


def test_character_rejects_collapsing_weights():
    params = QuantumParams.make(1, [[1]], [2], [3])
    with pytest.raises(ValueError):
        group_character(params, {2: Fraction(1), 3: Fraction(1)})


def test_default_weights():
    assert default_weights(quantum_sample()) == {2: Fraction(1)}
    mixed = QuantumParams.make(1, [[1]], [2], [3])
    with pytest.raises(ValueError):
        default_weights(mixed)


def test_stratification_report():
    report = stratification_report(quantum_sample(), sample_weights())
    assert report["n"] == 2
    assert report["grade"] == "homeomorphism"
    assert len(report["strata"]) == 14
    assert all(s["psi_ok"] and s["upsilon_ok"] for s in report["strata"])
    for stratum in report["strata"]:
        assert stratum["gk_dim"] == 4 - stratum["length"]

    small = stratification_report(quantum_sample(1))
    assert len(small["strata"]) == 4


def test_report_eta_matches_derived_sets():
    report = stratification_report(quantum_sample(), sample_weights())
    by_members = {tuple(s["members"]): s for s in report["strata"]}
    for t_set in enumerate_admissible(2):
        record = by_members[t_set.member_names()]
        assert tuple(record["eta"]) == derived_sets(t_set).eta
