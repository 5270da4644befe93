"""Grupos de Markov M_n para a família (x+a)^2 - a - 1, caso genérico a != ±b^2.

A variante de índice 2 (a = ±b^2) não é construída.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

from src.errors import ClosureLimitError, DepthError
from src.subgroups import Subgroup, closure, is_subgroup_of, project_subgroup
from src.subgroups import contains_transitive as group_contains_transitive
from src.tree_automorphisms import (
    TreeAutomorphism,
    identity,
    include,
    inverse,
    is_transitive,
    odometer,
    power,
    product,
    standard_generator,
    validate_depth,
)

logger = logging.getLogger(__name__)


@dataclass
class MarkovGroupSpec:
    """Geradores de M_n e, quando o fecho cabe no limite, o subgrupo."""

    depth: int
    generators: list[TreeAutomorphism]
    group: Optional[Subgroup] = None

    @property
    def order(self) -> Optional[int]:
        return self.group.order if self.group is not None else None


def m_element(n: int) -> TreeAutomorphism:
    """m_1 = id e m_{k+1} = x_k^2 m_k x_k^{-1}, tudo incluído em W_{k+1}."""
    validate_depth(n)
    m = identity(1)
    for k in range(1, n):
        x = odometer(k)
        m = product(
            k + 1,
            [include(power(x, 2), k + 1), include(m, k + 1), include(inverse(x), k + 1)],
        )
    return m


def markov_generators(n: int) -> list[TreeAutomorphism]:
    validate_depth(n)
    if n == 1:
        return [standard_generator(1, 1)]
    gens = [odometer(n), m_element(n)]
    for i in range(n - 1, 1, -1):
        gens.append(include(power(odometer(i), 2), n))
    return gens


def markov_group(n: int) -> MarkovGroupSpec:
    """M_1 = ⟨(1,2)⟩, M_2 = ⟨(1,3,2,4), (1,2)⟩ e M_n = ⟨x_n, m_n, x_{n-1}^2, ..., x_2^2⟩."""
    gens = markov_generators(n)
    try:
        group = closure(gens, n)
    except ClosureLimitError as e:
        logger.warning(f"Markov group M_{n} not closed: {e}")
        return MarkovGroupSpec(n, gens)
    logger.info(f"Markov group M_{n} has order {group.order}")
    return MarkovGroupSpec(n, gens, group)


def contains_transitive(spec: Union[MarkovGroupSpec, Subgroup]) -> bool:
    if isinstance(spec, Subgroup):
        return group_contains_transitive(spec)
    if spec.group is not None:
        return group_contains_transitive(spec.group)
    return any(is_transitive(g) for g in spec.generators)


@dataclass
class ProjectionObservation:
    """Comparação entre π_n(M_n) e M_{n-1}; apenas registrada."""

    depth: int
    projected_order: int
    previous_order: int
    previous_contained: bool
    projected_contained: bool

    @property
    def equal(self) -> bool:
        return self.previous_contained and self.projected_contained


def projection_observation(n: int) -> ProjectionObservation:
    validate_depth(n)
    if n < 2:
        raise DepthError("projection observation needs n >= 2")
    current = markov_group(n).group
    previous = markov_group(n - 1).group
    if current is None or previous is None:
        raise ClosureLimitError(f"Markov groups M_{n - 1}, M_{n} not both closed")
    projected = project_subgroup(current)
    observation = ProjectionObservation(
        depth=n,
        projected_order=projected.order,
        previous_order=previous.order,
        previous_contained=is_subgroup_of(previous, projected),
        projected_contained=is_subgroup_of(projected, previous),
    )
    logger.info(f"Projection of M_{n} vs M_{n - 1}: {observation}")
    return observation

