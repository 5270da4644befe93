import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation

from src.errors import DepthError, EnumerationLimitError, NotInKernelError
from src.f2_linalg import F2Vector, permute_coordinates
from src.subgroups import closure
from src.tree_automorphisms import (
    KnVector,
    all_elements,
    commutator,
    commutes,
    conjugate,
    element_order,
    from_Kn_vector,
    from_portrait_bits,
    from_semidirect,
    identity,
    include,
    inverse,
    is_in_Kn,
    is_transitive,
    kn_elements,
    multiply,
    odometer,
    portrait_bits,
    power,
    project,
    random_element,
    random_transitive_element,
    standard_generator,
    standard_generators,
    to_Kn_vector,
    validate_depth,
)


def elements_of(n):
    return st.integers(min_value=0, max_value=(1 << ((1 << n) - 1)) - 1).map(
        lambda bits: from_portrait_bits(n, bits)
    )


depth_and_triple = st.sampled_from([2, 3, 4]).flatmap(
    lambda n: st.tuples(elements_of(n), elements_of(n), elements_of(n))
)


def test_action_convention(a1, a2, cyc):
    assert multiply(a1, a2) == cyc("(1,3,2,4)")
    assert odometer(2) == cyc("(1,3,2,4)")


def test_identity_and_projection():
    assert identity(1).perm == (0, 1)
    assert project(identity(3)) == identity(2)


@pytest.mark.parametrize("n, order", [(1, 2), (2, 8), (3, 128)])
def test_standard_generators_generate_w_n(n, order):
    assert closure(standard_generators(n), n).order == order


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kn_is_elementary_abelian(n):
    elements = [from_Kn_vector(u) for u in kn_elements(n)]
    assert len(elements) == 2 ** (2 ** (n - 1))
    assert all(is_in_Kn(k) for k in elements)
    assert all(element_order(k) == 2 for k in elements if not k.is_identity())


@settings(max_examples=300, derandomize=True)
@given(depth_and_triple)
def test_semidirect_law_matches_composition(triple):
    x, y, _ = triple
    v, s = x.semidirect
    w, t = y.semidirect
    assert multiply(x, y).semidirect == (v + permute_coordinates(s, w), multiply(s, t))


def assert_semidirect_law(x, y):
    v, s = x.semidirect
    w, t = y.semidirect
    xy = multiply(x, y)
    assert from_semidirect(v + permute_coordinates(s, w), multiply(s, t)) == xy
    # sympy compõe da esquerda para a direita: p*q aplica p primeiro
    assert list(xy.perm) == (Permutation(list(y.perm)) * Permutation(list(x.perm))).array_form


def test_semidirect_law_on_all_of_w2():
    elements = all_elements(2)
    for x in elements:
        for y in elements:
            assert_semidirect_law(x, y)
            for z in elements:
                assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@pytest.mark.parametrize("n", [3, 4])
def test_semidirect_law_on_random_triples(n):
    rng = random.Random(n)
    for _ in range(1000):
        x, y, z = (random_element(n, rng) for _ in range(3))
        assert_semidirect_law(x, y)
        assert_semidirect_law(y, z)
        assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@settings(max_examples=200, derandomize=True)
@given(depth_and_triple)
def test_group_axioms(triple):
    x, y, z = triple
    n = x.depth
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
    assert multiply(x, inverse(x)) == identity(n)
    assert multiply(identity(n), x) == x


@settings(max_examples=200, derandomize=True)
@given(depth_and_triple)
def test_projection_is_a_homomorphism(triple):
    x, y, _ = triple
    assert project(multiply(x, y)) == multiply(project(x), project(y))


@settings(max_examples=200, derandomize=True)
@given(depth_and_triple)
def test_semidirect_and_portrait_round_trip(triple):
    x = triple[0]
    assert from_semidirect(*x.semidirect) == x
    assert from_portrait_bits(x.depth, portrait_bits(x)) == x


@settings(max_examples=200, derandomize=True)
@given(depth_and_triple)
def test_order_matches_sympy(triple):
    x = triple[0]
    assert element_order(x) == Permutation(list(x.perm)).order()
    assert power(x, element_order(x)) == identity(x.depth)


@settings(max_examples=100, derandomize=True)
@given(depth_and_triple)
def test_conjugate_and_commutator(triple):
    x, g, _ = triple
    assert conjugate(x, g) == multiply(multiply(g, x), inverse(g))
    assert commutator(x, g).is_identity() == commutes(x, g)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_odometer_is_transitive(n):
    x = odometer(n)
    assert is_transitive(x)
    assert element_order(x) == 2 ** n


def test_standard_generator_bounds():
    assert standard_generator(1, 3).perm == (1, 0, 2, 3, 4, 5, 6, 7)
    with pytest.raises(DepthError):
        standard_generator(0, 2)
    with pytest.raises(DepthError):
        standard_generator(3, 2)


def test_depth_validation():
    with pytest.raises(DepthError):
        validate_depth(0)
    with pytest.raises(DepthError):
        validate_depth(99)
    with pytest.raises(DepthError):
        multiply(identity(2), identity(3))


def test_kn_vectors(a1, a2):
    u = to_Kn_vector(a1)
    assert u == KnVector(2, 0b01)
    assert str(u) == "10"
    assert from_Kn_vector(u) == a1
    assert (u + KnVector(2, 0b10)).bits == 0b11
    with pytest.raises(NotInKernelError):
        to_Kn_vector(a2)
    with pytest.raises(NotInKernelError):
        KnVector(2, 0b100)


def test_include_fixes_the_rest(cyc):
    x = include(cyc("(1,2)", 1), 3)
    assert x == cyc("(1,2)", 3)
    with pytest.raises(DepthError):
        include(identity(3), 2)


def test_all_elements():
    elements = all_elements(2)
    assert len(set(elements)) == 8
    assert elements == sorted(elements)
    with pytest.raises(EnumerationLimitError):
        all_elements(4)


def test_random_elements_are_deterministic():
    assert random_element(4, random.Random(7)) == random_element(4, random.Random(7))
    x = random_transitive_element(3, random.Random(3))
    assert is_transitive(x)


def test_semidirect_vector_convention(cyc):
    # (1,4)(2,3) = (v, s) com s a troca e v = 11
    v, s = cyc("(1,4)(2,3)").semidirect
    assert v == F2Vector(2, 0b11)
    assert s == cyc("(1,2)", 1)
