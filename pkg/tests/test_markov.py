import pytest

from src.config import Config
from src.errors import DepthError
from src.formats import format_cycles
from src.markov import (
    contains_transitive,
    m_element,
    markov_generators,
    markov_group,
    projection_observation,
)
from src.subgroups import full_group, is_subgroup_of
from src.tree_automorphisms import identity, is_in_Kn, odometer, power, standard_generator


def test_small_markov_orders(markov_orders):
    for n, order in markov_orders.items():
        assert markov_group(n).order == order


def test_m_elements(cyc):
    assert m_element(1) == identity(1)
    assert m_element(2) == cyc("(1,2)")
    assert is_in_Kn(m_element(2))


def test_m_element_cycle_forms(markov_elements):
    for n, text in markov_elements.items():
        assert format_cycles(m_element(n)) == text
    # m_3 move a subárvore esquerda de T_3 sem trocar folhas irmãs
    assert not is_in_Kn(m_element(3))


def test_m4_squares_into_the_kernel():
    m4 = m_element(4)
    square = power(m4, 2)
    assert is_in_Kn(square)
    assert format_cycles(square) == "(1,2)(5,6)"


def test_generators():
    assert markov_generators(1) == [standard_generator(1, 1)]
    assert markov_generators(2) == [odometer(2), m_element(2)]
    assert len(markov_generators(4)) == 4


def test_m2_is_all_of_w2():
    assert markov_group(2).group == full_group(2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_markov_groups_are_transitive_2_groups(n):
    spec = markov_group(n)
    assert spec.group is not None
    assert spec.order & (spec.order - 1) == 0
    assert contains_transitive(spec)
    assert is_subgroup_of(spec.group, full_group(n))


def test_open_markov_group_falls_back_to_generators(monkeypatch):
    monkeypatch.setattr(Config, "CLOSURE_LIMIT", 16)
    spec = markov_group(3)
    assert spec.group is None
    assert spec.order is None
    assert contains_transitive(spec)


def test_projection_observation():
    observation = projection_observation(2)
    assert observation.equal
    assert observation.projected_order == observation.previous_order == 2
    assert projection_observation(3).projected_contained
    with pytest.raises(DepthError):
        projection_observation(1)
