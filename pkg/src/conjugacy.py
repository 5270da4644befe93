"""Conjugação por K_n: decisores elemento a elemento e global, e a propriedade P(H, G)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from src.errors import DepthError
from src.f2_linalg import F2AffineSet, F2Vector, solve_twisted
from src.subgroups import (
    Subgroup,
    centralizer_space,
    contains_transitive,
    has_trivial_Kn_intersection,
    is_cyclic,
)
from src.tree_automorphisms import (
    KnVector,
    Perm,
    TreeAutomorphism,
    compose,
    conjugate,
    from_Kn_vector,
    kn_elements,
)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    """Classificação de um par ou de uma instância de lema."""

    P_HOLDS = "P_HOLDS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    VACUOUS = "VACUOUS"
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"


class Mode(str, Enum):
    ELEMENTWISE = "ELEMENTWISE"
    GLOBAL = "GLOBAL"


@dataclass
class ConjugacyCertificate:
    """Testemunhas de conjugação, ou o marcador de falha."""

    mode: Mode
    verdict: bool
    witnesses: dict[TreeAutomorphism, KnVector] = field(default_factory=dict)
    witness: Optional[KnVector] = None
    failure_witness: Optional[TreeAutomorphism] = None
    exhausted: bool = False
    candidates_searched: int = 0
    pruned: bool = False
    reason: Optional[str] = None

    def verify(self, H: Subgroup, G: Subgroup) -> bool:
        """Reconfere o certificado por conjugação direta."""
        if self.mode == Mode.ELEMENTWISE:
            if self.verdict:
                return len(self.witnesses) == H.order and all(
                    conjugate(h, from_Kn_vector(u)) in G for h, u in self.witnesses.items()
                ) and all(h in self.witnesses for h in H.elements)
            return (
                self.failure_witness is not None
                and self.failure_witness in H
                and not brute_force_elementwise_witnesses(self.failure_witness, G)
            )
        if self.verdict:
            return self.witness is not None and conjugates_into(H, G, self.witness)
        if self.reason == "order":
            return H.order > G.order
        return self.exhausted and not find_global_conjugators(H, G)


@dataclass
class HypothesisFlags:
    equal_order: bool
    trivial_kn_intersection: bool
    cyclic: bool
    transitive: bool

    @classmethod
    def of(cls, H: Subgroup, G: Subgroup) -> "HypothesisFlags":
        return cls(
            equal_order=H.order == G.order,
            trivial_kn_intersection=has_trivial_Kn_intersection(H),
            cyclic=is_cyclic(H),
            transitive=contains_transitive(H),
        )


@dataclass
class PropertyPReport:
    """Resultado dos dois decisores para um par (H, G)."""

    elementwise: ConjugacyCertificate
    global_: ConjugacyCertificate
    hypotheses: HypothesisFlags

    @property
    def p_holds(self) -> bool:
        return self.elementwise.verdict == self.global_.verdict


@dataclass
class PairCheck:
    """Veredito de um par numa varredura."""

    verdict: Verdict
    hypotheses: HypothesisFlags
    report: Optional[PropertyPReport] = None


def _check_depths(H: Subgroup, G: Subgroup):
    if H.depth != G.depth:
        raise DepthError(f"depth mismatch: {H.depth} != {G.depth}")


def _fiber_index(G: Subgroup) -> dict[Perm, list[int]]:
    """s ↦ bits de v para cada (v, s) em G."""
    index: dict[Perm, list[int]] = {}
    for g in G.elements:
        v, s = g.semidirect
        index.setdefault(s.perm, []).append(v.bits)
    return index


def _witness_cosets(h: TreeAutomorphism, index: dict[Perm, list[int]]) -> list[F2AffineSet]:
    w, t = h.semidirect
    cosets = {}
    for w_prime in index.get(t.perm, ()):
        coset = solve_twisted(t, F2Vector(w.length, w.bits ^ w_prime))
        if not coset.is_empty():
            cosets[coset.offset] = coset
    return [cosets[offset] for offset in sorted(cosets)]


def elementwise_witnesses(h: TreeAutomorphism, G: Subgroup) -> list[F2AffineSet]:
    """Os u com h^{(u,1)} em G, como união de classes laterais de Fix(t)."""
    if h.depth != G.depth:
        raise DepthError(f"depth mismatch: {h.depth} != {G.depth}")
    return _witness_cosets(h, _fiber_index(G))


def brute_force_elementwise_witnesses(h: TreeAutomorphism, G: Subgroup) -> list[int]:
    """Oráculo: percorre todo K_n."""
    return [
        u.bits for u in kn_elements(h.depth)
        if conjugate(h, from_Kn_vector(u)) in G
    ]


def is_elementwise_conjugate(H: Subgroup, G: Subgroup) -> ConjugacyCertificate:
    _check_depths(H, G)
    index = _fiber_index(G)
    witnesses: dict[TreeAutomorphism, KnVector] = {}
    for h in H.elements:
        cosets = _witness_cosets(h, index)
        if not cosets:
            logger.debug(f"No elementwise witness for {h}")
            return ConjugacyCertificate(
                Mode.ELEMENTWISE, False, failure_witness=h, exhausted=True, reason="no-witness"
            )
        witnesses[h] = KnVector(H.depth, min(c.offset for c in cosets))
    return ConjugacyCertificate(Mode.ELEMENTWISE, True, witnesses=witnesses)


def conjugates_into(H: Subgroup, G: Subgroup, b: KnVector) -> bool:
    """H^b <= G, conferido só nos geradores."""
    k = from_Kn_vector(b).perm
    return all(compose(k, compose(h.perm, k)) in G.perm_set for h in H.generators)


def _candidates(H: Subgroup, G: Subgroup) -> tuple[list[int], bool]:
    """Candidatos a conjugador em ordem crescente, e se houve poda.

    Com G ∩ K_n trivial, todo b com H^b <= G centraliza H ∩ G: para h em H ∩ G,
    h^b h^{-1} está em G ∩ K_n. Quando Φ(H) <= G isto restringe a C_{K_n}(Φ(H)).
    """
    n = H.depth
    if has_trivial_Kn_intersection(G):
        common = [h for h in H.elements if h in G]
        space = centralizer_space(common, n)
        return sorted(space.members_bits()), True
    return list(range(1 << (1 << (n - 1)))), False


def is_globally_conjugate(H: Subgroup, G: Subgroup) -> ConjugacyCertificate:
    """Busca exaustiva por b em K_n com H^b <= G."""
    _check_depths(H, G)
    if H.order > G.order:
        return ConjugacyCertificate(Mode.GLOBAL, False, exhausted=True, reason="order")

    candidates, pruned = _candidates(H, G)
    for searched, bits in enumerate(candidates, start=1):
        b = KnVector(H.depth, bits)
        if conjugates_into(H, G, b):
            return ConjugacyCertificate(
                Mode.GLOBAL, True, witness=b, candidates_searched=searched, pruned=pruned
            )
    return ConjugacyCertificate(
        Mode.GLOBAL,
        False,
        exhausted=True,
        candidates_searched=len(candidates),
        pruned=pruned,
        reason="exhausted",
    )


def find_global_conjugators(H: Subgroup, G: Subgroup) -> list[KnVector]:
    """Todos os b em K_n com H^b <= G, sem poda."""
    _check_depths(H, G)
    return [b for b in kn_elements(H.depth) if conjugates_into(H, G, b)]


def property_p(H: Subgroup, G: Subgroup) -> PropertyPReport:
    _check_depths(H, G)
    return PropertyPReport(
        elementwise=is_elementwise_conjugate(H, G),
        global_=is_globally_conjugate(H, G),
        hypotheses=HypothesisFlags.of(H, G),
    )


def _classify(report: PropertyPReport) -> Verdict:
    return Verdict.P_HOLDS if report.p_holds else Verdict.COUNTEREXAMPLE


def theorem_1_4_check(H: Subgroup, G: Subgroup) -> PairCheck:
    """Sob |H| = |G| e H ∩ K_n = {id}, elemento a elemento deve implicar global."""
    _check_depths(H, G)
    flags = HypothesisFlags.of(H, G)
    if not (flags.equal_order and flags.trivial_kn_intersection):
        return PairCheck(Verdict.VACUOUS, flags)
    report = property_p(H, G)
    verdict = _classify(report)
    if verdict == Verdict.COUNTEREXAMPLE:
        logger.error(f"Counterexample to the equal-order theorem: H={H!r}, G={G!r}")
    return PairCheck(verdict, flags, report)


def conjecture_6_1_check(H: Subgroup, G: Subgroup) -> PairCheck:
    """Com um elemento transitivo em H, P(H, G) deve valer para todo G."""
    _check_depths(H, G)
    flags = HypothesisFlags.of(H, G)
    if not flags.transitive:
        return PairCheck(Verdict.VACUOUS, flags)
    report = property_p(H, G)
    verdict = _classify(report)
    if verdict == Verdict.COUNTEREXAMPLE:
        logger.warning(f"Counterexample to the transitive-subgroup conjecture: H={H!r}, G={G!r}")
    return PairCheck(verdict, flags, report)


def property_p_check(H: Subgroup, G: Subgroup) -> PairCheck:
    """P(H, G) sem filtro de hipóteses."""
    _check_depths(H, G)
    report = property_p(H, G)
    return PairCheck(_classify(report), report.hypotheses, report)
