"""Subgrupos finitos de W_n: fecho, Frattini, maximais e centralizadores em K_n."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence, Union

from src.config import Config
from src.errors import ClosureLimitError, DepthError, EnumerationLimitError, WreathError
from src.f2_linalg import F2Subspace, F2Vector, fix_subspace_of_set, span
from src.tree_automorphisms import (
    KnVector,
    Perm,
    TreeAutomorphism,
    compose,
    conjugate,
    element_order,
    from_Kn_vector,
    identity,
    invert,
    is_in_Kn,
    is_transitive,
    project,
    random_element,
    standard_generators,
    validate_depth,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Subgrupo finito de W_n com todos os elementos enumerados."""

    depth: int
    generators: tuple[TreeAutomorphism, ...]
    elements: tuple[TreeAutomorphism, ...]

    @cached_property
    def key(self) -> tuple[Perm, ...]:
        """Identidade canônica: permutações ordenadas."""
        return tuple(g.perm for g in self.elements)

    @cached_property
    def perm_set(self) -> frozenset[Perm]:
        return frozenset(self.key)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def __contains__(self, x: TreeAutomorphism) -> bool:
        return x.depth == self.depth and x.perm in self.perm_set

    def __iter__(self) -> Iterator[TreeAutomorphism]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.depth == other.depth and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.depth, self.key))

    def __repr__(self) -> str:
        from src.formats import format_generator_list

        return f"Subgroup(n={self.depth}, order={self.order}, gens=[{format_generator_list(self.generators)}])"


@dataclass(frozen=True, eq=False)
class FrattiniData:
    """Φ(G), o posto m(G) e coordenadas de G/Φ(G) ≅ F_2^m."""

    group: Subgroup
    phi: Subgroup
    basis: tuple[TreeAutomorphism, ...]
    coordinates: dict[Perm, int] = field(repr=False)

    @property
    def quotient_rank(self) -> int:
        return len(self.basis)

    def coordinate(self, g: TreeAutomorphism) -> int:
        """Imagem de g em F_2^m; o bit k corresponde a basis[k]."""
        return self.coordinates[g.perm]

    def lift(self, w: int) -> TreeAutomorphism:
        """Produto dos b_k com bit k ligado em w."""
        result = identity(self.group.depth)
        for k, b in enumerate(self.basis):
            if (w >> k) & 1:
                result = result * b
        return result


def _limit() -> int:
    return Config.CLOSURE_LIMIT


def _extend(known: Sequence[Perm], members: set[Perm], gens: Sequence[Perm], limit: int) -> list[Perm]:
    """⟨S, gens⟩ como união de classes laterais tS; gens deve incluir os geradores de S."""
    elements = list(known)
    members = set(members)
    reps: list[Perm] = [tuple(range(len(known[0])))]
    for rep in reps:
        for x in gens:
            t = compose(x, rep)
            if t in members:
                continue
            coset = [compose(t, s) for s in known]
            members.update(coset)
            elements.extend(coset)
            reps.append(t)
            if len(elements) > limit:
                raise ClosureLimitError(f"closure exceeds CLOSURE_LIMIT={limit}")
    return elements


def _make(depth: int, gens: Iterable[TreeAutomorphism], perms: Iterable[Perm]) -> Subgroup:
    return Subgroup(
        depth,
        tuple(gens),
        tuple(TreeAutomorphism(depth, p) for p in sorted(perms)),
    )


def _common_depth(gens: Sequence[TreeAutomorphism], n: Optional[int]) -> int:
    depths = {g.depth for g in gens}
    if n is not None:
        depths.add(n)
    if not depths:
        raise DepthError("closure of an empty generator list needs an explicit depth")
    if len(depths) > 1:
        raise DepthError(f"generators of mixed depths: {sorted(depths)}")
    return depths.pop()


def closure(gens: Iterable[TreeAutomorphism], n: Optional[int] = None) -> Subgroup:
    """Subgrupo gerado, por busca em largura sobre classes laterais."""
    gens = list(gens)
    depth = _common_depth(gens, n)
    one = identity(depth).perm
    perms = _extend([one], {one}, [g.perm for g in gens], _limit())
    return _make(depth, gens, perms)


def extend(G: Subgroup, new: Iterable[TreeAutomorphism]) -> Subgroup:
    """⟨G, new⟩ reaproveitando os elementos de G."""
    new = [g for g in new if g not in G]
    if not new:
        return G
    _common_depth(new, G.depth)
    gens = list(G.generators) + new
    perms = _extend(G.key, set(G.key), [g.perm for g in gens], _limit())
    return _make(G.depth, gens, perms)


def trivial_group(n: int) -> Subgroup:
    return closure([], n)


@lru_cache(maxsize=8)
def full_group(n: int) -> Subgroup:
    """W_n como fecho dos geradores padrão."""
    validate_depth(n)
    return closure(standard_generators(n))


def from_elements(n: int, elements: Iterable[TreeAutomorphism], gens=None) -> Subgroup:
    """Subgrupo a partir de um conjunto de elementos já fechado."""
    elements = list(elements)
    return _make(n, gens if gens is not None else elements, (e.perm for e in elements))


def is_subgroup_of(H: Subgroup, G: Subgroup) -> bool:
    if H.depth != G.depth:
        raise DepthError(f"depth mismatch: {H.depth} != {G.depth}")
    return all(h.perm in G.perm_set for h in H.generators)


def is_cyclic(G: Subgroup) -> bool:
    return any(element_order(g) == G.order for g in G.elements)


def contains_transitive(G: Subgroup) -> bool:
    return any(is_transitive(g) for g in G.elements)


def conjugate_subgroup(G: Subgroup, k: Union[TreeAutomorphism, KnVector]) -> Subgroup:
    """k G k^{-1}."""
    if isinstance(k, KnVector):
        k = from_Kn_vector(k)
    gens = [conjugate(g, k) for g in G.generators]
    return _make(G.depth, gens, (conjugate(g, k).perm for g in G.elements))


def canonical_kn_class_key(G: Subgroup) -> tuple[Perm, ...]:
    """Menor chave entre os K_n-conjugados de G."""
    best = G.key
    for bits in range(1, 1 << (1 << (G.depth - 1))):
        # elementos de K_n são involuções
        k = from_Kn_vector(KnVector(G.depth, bits)).perm
        key = tuple(sorted(compose(k, compose(p, k)) for p in G.key))
        if key < best:
            best = key
    return best


def frattini(G: Subgroup) -> FrattiniData:
    """Φ(G) = ⟨quadrados e comutadores⟩ e uma base de G/Φ(G)."""
    squares = {compose(p, p) for p in G.key}
    gens = [g.perm for g in G.generators]
    for i, x in enumerate(gens):
        for y in gens[i + 1:]:
            squares.add(compose(invert(x), compose(invert(y), compose(x, y))))
    phi = closure((TreeAutomorphism(G.depth, p) for p in sorted(squares)), G.depth)

    labels: dict[Perm, int] = {p: 0 for p in phi.key}
    basis: list[TreeAutomorphism] = []
    for candidate in list(G.generators) + list(G.elements):
        if len(labels) == G.order:
            break
        if candidate.perm in labels:
            continue
        bit = 1 << len(basis)
        for p, label in list(labels.items()):
            labels[compose(p, candidate.perm)] = label | bit
        basis.append(candidate)

    if len(labels) != G.order:
        raise WreathError(f"quotient by Frattini subgroup is not elementary abelian for {G}")
    logger.debug(f"Frattini of order {phi.order} with quotient rank {len(basis)}")
    return FrattiniData(G, phi, tuple(basis), labels)


def _kernel_basis(functional: int, rank: int) -> list[int]:
    """Base do hiperplano {w : <functional, w> = 0} em F_2^rank."""
    pivot = (functional & -functional).bit_length() - 1
    basis = []
    for k in range(rank):
        if k == pivot:
            continue
        if (functional >> k) & 1:
            basis.append((1 << k) | (1 << pivot))
        else:
            basis.append(1 << k)
    return basis


def maximal_subgroups(G: Subgroup, data: Optional[FrattiniData] = None) -> list[Subgroup]:
    """Subgrupos de índice 2, um por funcional não nulo de G/Φ(G)."""
    if G.is_trivial():
        raise WreathError("the trivial group has no maximal subgroups")
    data = data or frattini(G)
    result = []
    for functional in range(1, 1 << data.quotient_rank):
        perms = [
            p for p, label in data.coordinates.items()
            if (label & functional).bit_count() % 2 == 0
        ]
        gens = list(data.phi.generators) + [
            data.lift(w) for w in _kernel_basis(functional, data.quotient_rank)
        ]
        result.append(_make(G.depth, gens, perms))
    return result


def intersect_with_Kn(G: Subgroup) -> Subgroup:
    members = [g for g in G.elements if is_in_Kn(g)]
    gens = [
        from_Kn_vector(KnVector(G.depth, row))
        for row in span(1 << (G.depth - 1), (g.semidirect[0] for g in members)).rows
    ]
    return from_elements(G.depth, members, gens)


def has_trivial_Kn_intersection(G: Subgroup) -> bool:
    return not any(is_in_Kn(g) and not g.is_identity() for g in G.elements)


def _as_elements(S: Union[Subgroup, Iterable[TreeAutomorphism]]) -> list[TreeAutomorphism]:
    if isinstance(S, Subgroup):
        return list(S.generators)
    return list(S)


def centralizer_space(S: Union[Subgroup, Iterable[TreeAutomorphism]], n: int) -> F2Subspace:
    """{u : (u,1) comuta com S} = Fix(π_n(S))."""
    validate_depth(n)
    return fix_subspace_of_set((project(x) for x in _as_elements(S)), 1 << (n - 1))


def centralizer_in_Kn(S: Union[Subgroup, Iterable[TreeAutomorphism]], n: Optional[int] = None) -> Subgroup:
    """C_{K_n}(S), calculado por Fix da projeção."""
    if n is None:
        if isinstance(S, Subgroup):
            n = S.depth
        else:
            S = list(S)
            n = _common_depth(S, None)
    space = centralizer_space(S, n)
    gens = [from_Kn_vector(KnVector(n, row)) for row in space.rows]
    members = (from_Kn_vector(KnVector(n, b)) for b in space.members_bits())
    return from_elements(n, members, gens)


def project_subgroup(G: Subgroup) -> Subgroup:
    """π_n(G)."""
    if G.depth < 1:
        raise DepthError("cannot project the trivial tree")
    gens = []
    seen = set()
    for g in G.generators:
        s = project(g)
        if s.perm not in seen:
            seen.add(s.perm)
            gens.append(s)
    return _make(G.depth - 1, gens, {project(g).perm for g in G.elements})


def fibers(G: Subgroup) -> dict[TreeAutomorphism, list[F2Vector]]:
    """Para cada s em π_n(G), os v com (v, s) em G."""
    out: dict[TreeAutomorphism, list[F2Vector]] = {}
    for g in G.elements:
        v, s = g.semidirect
        out.setdefault(s, []).append(v)
    return out


def random_subgroup(
    n: int,
    max_gens: int = 3,
    rng_seed: Union[int, random.Random, None] = None,
) -> Subgroup:
    """Subgrupo gerado por 1..max_gens elementos uniformes; determinístico por semente."""
    validate_depth(n)
    if isinstance(rng_seed, random.Random):
        rng = rng_seed
    else:
        rng = random.Random(Config.DEFAULT_SEED if rng_seed is None else rng_seed)
    count = rng.randint(1, max(1, max_gens))
    return closure([random_element(n, rng) for _ in range(count)], n)


def enumerate_subgroups_of(G: Subgroup) -> Iterator[Subgroup]:
    """Cada subgrupo de G exatamente uma vez, por extensão incremental."""
    trivial = trivial_group(G.depth)
    seen = {trivial.key}
    queue = [trivial]
    yield trivial
    for S in queue:
        done = set(S.key)
        for g in G.elements:
            if g.perm in done:
                continue
            T = extend(S, [g])
            for s in S.key:
                done.add(compose(s, g.perm))
                done.add(compose(g.perm, s))
            if T.key not in seen:
                seen.add(T.key)
                queue.append(T)
                yield T


@lru_cache(maxsize=4)
def _all_subgroups(n: int) -> tuple[Subgroup, ...]:
    subgroups = tuple(enumerate_subgroups_of(full_group(n)))
    logger.info(f"Enumerated {len(subgroups)} subgroups of W_{n}")
    return subgroups


def enumerate_all_subgroups(n: int) -> Iterator[Subgroup]:
    validate_depth(n)
    if n > Config.ENUMERATION_MAX_DEPTH:
        raise EnumerationLimitError(
            f"subgroup enumeration of W_{n} exceeds ENUMERATION_MAX_DEPTH={Config.ENUMERATION_MAX_DEPTH}"
        )
    return iter(_all_subgroups(n))


def maximal_subgroups_by_enumeration(G: Subgroup) -> list[Subgroup]:
    """Subgrupos de índice 2 achados por enumeração (verificação cruzada)."""
    return [S for S in enumerate_subgroups_of(G) if 2 * S.order == G.order]


def intersection_of_maximals(G: Subgroup) -> Subgroup:
    maximals = maximal_subgroups_by_enumeration(G)
    if not maximals:
        return G
    common = set(maximals[0].key)
    for M in maximals[1:]:
        common &= M.perm_set
    return _make(G.depth, [], common)


def generates(G: Subgroup, gens: Sequence[TreeAutomorphism]) -> bool:
    try:
        one = identity(G.depth).perm
        perms = _extend([one], {one}, [g.perm for g in gens], G.order)
    except ClosureLimitError:
        return False
    return len(perms) == G.order


def minimal_generating_set(G: Subgroup) -> list[TreeAutomorphism]:
    """Menor subconjunto gerador por força bruta (|G| limitado)."""
    if G.order > Config.MIN_GENERATORS_SEARCH_LIMIT:
        raise EnumerationLimitError(
            f"group of order {G.order} exceeds MIN_GENERATORS_SEARCH_LIMIT={Config.MIN_GENERATORS_SEARCH_LIMIT}"
        )
    candidates = [g for g in G.elements if not g.is_identity()]
    for size in range(len(candidates) + 1):
        for combo in combinations(candidates, size):
            if generates(G, combo):
                return list(combo)
    return candidates
