import random

import pytest

from src.conjugacy import (
    Mode,
    Verdict,
    brute_force_elementwise_witnesses,
    conjecture_6_1_check,
    conjugates_into,
    elementwise_witnesses,
    find_global_conjugators,
    is_elementwise_conjugate,
    is_globally_conjugate,
    property_p,
    property_p_check,
    theorem_1_4_check,
)
from src.errors import DepthError
from src.subgroups import (
    closure,
    conjugate_subgroup,
    enumerate_all_subgroups,
    is_cyclic,
    random_subgroup,
)
from src.tree_automorphisms import KnVector, all_elements, kn_elements, random_element

W2_SUBGROUPS = list(enumerate_all_subgroups(2))


def test_elementwise_example(group, a2):
    H, G = group("(1,3)(2,4)"), group("(1,4)(2,3)")
    cert = is_elementwise_conjugate(H, G)
    assert cert.verdict
    assert cert.mode == Mode.ELEMENTWISE
    assert cert.witnesses[a2] == KnVector(2, 0b10)
    assert str(cert.witnesses[a2]) == "01"
    assert cert.verify(H, G)


def test_global_example(group):
    H, G = group("(1,3)(2,4)"), group("(1,4)(2,3)")
    cert = is_globally_conjugate(H, G)
    assert cert.verdict
    assert cert.witness == KnVector(2, 0b01)
    assert str(cert.witness) == "10"
    assert cert.pruned
    assert cert.candidates_searched == 2
    assert cert.verify(H, G)


def test_failure_witness(group, cyc):
    H, G = group("(1,3)(2,4)"), group("(1,2)")
    cert = is_elementwise_conjugate(H, G)
    assert not cert.verdict
    assert cert.failure_witness == cyc("(1,3)(2,4)")
    assert cert.exhausted
    assert cert.verify(H, G)


def test_order_shortcut(w2, group):
    cert = is_globally_conjugate(w2, group("(1,3,2,4)"))
    assert not cert.verdict
    assert cert.reason == "order"
    assert cert.verify(w2, group("(1,3,2,4)"))


def test_depth_mismatch(w2, w3):
    with pytest.raises(DepthError):
        property_p(w2, w3)
    with pytest.raises(DepthError):
        elementwise_witnesses(random_element(3, random.Random(1)), w2)


@pytest.mark.parametrize("G", W2_SUBGROUPS, ids=lambda G: f"order{G.order}")
def test_deciders_match_brute_force_on_w2(G):
    for H in W2_SUBGROUPS:
        elementwise = is_elementwise_conjugate(H, G)
        expected = all(brute_force_elementwise_witnesses(h, G) for h in H.elements)
        assert elementwise.verdict == expected
        assert elementwise.verify(H, G)

        conjugators = find_global_conjugators(H, G)
        global_ = is_globally_conjugate(H, G)
        assert global_.verdict == bool(conjugators)
        if conjugators:
            assert global_.witness == min(conjugators, key=lambda b: b.bits)
        assert global_.verify(H, G)


def assert_witnesses_match(h, G):
    found = {u for coset in elementwise_witnesses(h, G) for u in coset.members_bits()}
    assert found == set(brute_force_elementwise_witnesses(h, G))


def test_witness_sets_match_brute_force():
    rng = random.Random(3)
    elements = all_elements(3)
    for _ in range(40):
        G = random_subgroup(3, 2, rng)
        for h in elements:
            assert_witnesses_match(h, G)


@pytest.mark.slow
def test_witness_sets_match_brute_force_on_all_of_w3():
    elements = all_elements(3)
    for G in enumerate_all_subgroups(3):
        for h in elements:
            assert_witnesses_match(h, G)


@pytest.mark.slow
def test_witness_sets_match_brute_force_on_sampled_w4():
    rng = random.Random(4)
    for _ in range(1000):
        G = random_subgroup(4, 2, rng)
        assert_witnesses_match(random_element(4, rng), G)


def test_cyclic_subgroups_have_property_p():
    for H in W2_SUBGROUPS:
        if not is_cyclic(H):
            continue
        for G in W2_SUBGROUPS:
            assert property_p(H, G).p_holds
    rng = random.Random(8)
    for _ in range(30):
        H = closure([random_element(3, rng)], 3)
        G = random_subgroup(3, 2, rng)
        assert property_p(H, G).p_holds


def test_verdicts_invariant_under_kn_conjugation():
    for H in W2_SUBGROUPS:
        for G in W2_SUBGROUPS:
            report = property_p(H, G)
            for k in kn_elements(2):
                moved = property_p(conjugate_subgroup(H, k), G)
                assert moved.elementwise.verdict == report.elementwise.verdict
                assert moved.global_.verdict == report.global_.verdict


def test_conjugates_into(group):
    H, G = group("(1,3)(2,4)"), group("(1,4)(2,3)")
    assert conjugates_into(H, G, KnVector(2, 0b01))
    assert not conjugates_into(H, G, KnVector(2, 0b00))


def test_theorem_check_filters(group, w2):
    H, G = group("(1,3)(2,4)"), group("(1,4)(2,3)")
    check = theorem_1_4_check(H, G)
    assert check.verdict == Verdict.P_HOLDS
    assert check.hypotheses.equal_order and check.hypotheses.trivial_kn_intersection
    assert theorem_1_4_check(H, w2).verdict == Verdict.VACUOUS
    assert theorem_1_4_check(w2, w2).verdict == Verdict.VACUOUS


def test_conjecture_check_filters(group, w2):
    assert conjecture_6_1_check(group("(1,3)(2,4)"), w2).verdict == Verdict.VACUOUS
    check = conjecture_6_1_check(group("(1,3,2,4)"), w2)
    assert check.verdict == Verdict.P_HOLDS
    assert check.hypotheses.transitive


def test_property_p_check_counts_every_pair(group):
    check = property_p_check(group("(1,3)(2,4)"), group("(1,2)"))
    assert check.verdict == Verdict.P_HOLDS
    assert not check.report.elementwise.verdict
    assert not check.report.global_.verdict


@pytest.mark.slow
def test_theorem_holds_on_all_equal_order_pairs_of_w2_and_w3():
    for n in (2, 3):
        subgroups = list(enumerate_all_subgroups(n))
        for H in subgroups:
            for G in subgroups:
                if H.order == G.order:
                    assert theorem_1_4_check(H, G).verdict != Verdict.COUNTEREXAMPLE
