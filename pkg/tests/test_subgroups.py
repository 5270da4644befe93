import random

import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from src.config import Config
from src.errors import ClosureLimitError, EnumerationLimitError
from src.f2_linalg import F2Vector
from src.subgroups import (
    canonical_kn_class_key,
    centralizer_in_Kn,
    centralizer_space,
    closure,
    conjugate_subgroup,
    contains_transitive,
    enumerate_all_subgroups,
    extend,
    fibers,
    frattini,
    full_group,
    generates,
    has_trivial_Kn_intersection,
    intersect_with_Kn,
    intersection_of_maximals,
    is_cyclic,
    is_subgroup_of,
    maximal_subgroups,
    maximal_subgroups_by_enumeration,
    minimal_generating_set,
    project_subgroup,
    random_subgroup,
    trivial_group,
)
from src.tree_automorphisms import (
    KnVector,
    commutes,
    from_Kn_vector,
    kn_elements,
    odometer,
    standard_generator,
)


def sympy_order(G):
    if not G.generators:
        return 1
    return PermutationGroup([Permutation(list(g.perm)) for g in G.generators]).order()


def test_closure_orders(w2, w3, group):
    assert w2.order == 8
    assert w3.order == 128
    assert group("(1,3,2,4),(1,2)").order == 8
    assert group("(1,2)(3,4)").order == 2
    assert trivial_group(2).order == 1


def test_closure_matches_sympy():
    rng = random.Random(99)
    for n, count in ((2, 10), (3, 10), (4, 3)):
        for _ in range(count):
            G = random_subgroup(n, 3, rng)
            assert G.order == sympy_order(G)


def test_closure_limit(monkeypatch):
    monkeypatch.setattr(Config, "CLOSURE_LIMIT", 4)
    with pytest.raises(ClosureLimitError):
        closure([odometer(3)])


def test_extend_reuses_group(group, cyc):
    G = group("(1,2)")
    assert extend(G, [cyc("(3,4)")]).order == 4
    assert extend(G, [cyc("(1,2)")]) is G


def test_membership_and_equality(w2, group, cyc):
    V = group("(1,2),(3,4)")
    assert cyc("(1,2)(3,4)") in V
    assert cyc("(1,3)(2,4)") not in V
    assert V == group("(1,2)(3,4),(1,2)")
    assert is_subgroup_of(V, w2)
    assert not is_subgroup_of(w2, V)


def test_w2_subgroup_lattice(w2):
    subgroups = list(enumerate_all_subgroups(2))
    assert len(subgroups) == 10
    assert len({S.key for S in subgroups}) == 10
    assert sorted(S.order for S in subgroups) == [1, 2, 2, 2, 2, 2, 4, 4, 4, 8]


def test_enumeration_ceiling():
    with pytest.raises(EnumerationLimitError):
        list(enumerate_all_subgroups(4))


def test_frattini_of_w2(w2, group):
    data = frattini(w2)
    assert data.phi == group("(1,2)(3,4)")
    assert data.quotient_rank == 2
    assert len(data.basis) == 2
    assert data.coordinate(data.lift(0b11)) == 0b11
    for g in w2.elements:
        assert data.lift(data.coordinate(g)) in closure(list(data.phi.elements) + [g], 2)


def test_maximal_subgroups_of_w2(w2):
    maxes = maximal_subgroups(w2)
    assert len(maxes) == 3
    assert all(M.order == 4 for M in maxes)
    assert {M.key for M in maxes} == {M.key for M in maximal_subgroups_by_enumeration(w2)}


def test_frattini_is_intersection_of_maximals():
    for G in enumerate_all_subgroups(2):
        assert frattini(G).phi == intersection_of_maximals(G)


def test_frattini_on_random_w3_subgroups():
    rng = random.Random(5)
    for _ in range(20):
        G = random_subgroup(3, 2, rng)
        if G.order > 32:
            continue
        assert frattini(G).phi == intersection_of_maximals(G)


@pytest.mark.slow
def test_frattini_on_100_enumerated_w3_subgroups():
    subgroups = list(enumerate_all_subgroups(3))
    for G in random.Random(6).sample(subgroups, 100):
        assert frattini(G).phi == intersection_of_maximals(G)


def test_burnside_rank(w2, group):
    assert len(minimal_generating_set(w2)) == frattini(w2).quotient_rank == 2
    assert len(minimal_generating_set(group("(1,3,2,4)"))) == 1
    assert generates(w2, [odometer(2), standard_generator(1, 2)])
    assert not generates(w2, [odometer(2)])


def test_kn_intersection(w2, group):
    K = intersect_with_Kn(w2)
    assert K.order == 4
    assert not has_trivial_Kn_intersection(w2)
    assert has_trivial_Kn_intersection(group("(1,4)(2,3)"))
    assert not has_trivial_Kn_intersection(group("(1,3,2,4)"))


def test_centralizer(w2, group):
    assert centralizer_in_Kn(w2).order == 2
    assert centralizer_in_Kn(trivial_group(2)).order == 4
    H = group("(1,3)(2,4)")
    space = centralizer_space(H, 2)
    assert space.dimension == 1
    C = centralizer_in_Kn(H)
    for c in C.elements:
        assert all(commutes(c, h) for h in H.generators)
    for u in kn_elements(2):
        k = from_Kn_vector(u)
        assert (k in C) == all(commutes(k, h) for h in H.generators)


def test_projection_and_fibers(w2, group):
    assert project_subgroup(w2) == full_group(1)
    G = group("(1,3)(2,4)")
    fiber_map = fibers(G)
    assert len(fiber_map) == 2
    assert all(len(vs) == 1 for vs in fiber_map.values())
    assert all(isinstance(v, F2Vector) for vs in fiber_map.values() for v in vs)


def test_properties(w2, group):
    assert is_cyclic(group("(1,3,2,4)"))
    assert not is_cyclic(w2)
    assert contains_transitive(w2)
    assert not contains_transitive(group("(1,2),(3,4)"))


def test_kn_conjugation_classes(group):
    H = group("(1,3)(2,4)")
    conjugated = conjugate_subgroup(H, KnVector(2, 0b01))
    assert conjugated == group("(1,4)(2,3)")
    assert canonical_kn_class_key(H) == canonical_kn_class_key(conjugated)
    assert canonical_kn_class_key(H) != canonical_kn_class_key(group("(1,2)"))


def test_random_subgroup_is_deterministic():
    assert random_subgroup(3, 3, 11) == random_subgroup(3, 3, 11)
