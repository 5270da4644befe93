"""Verificadores executáveis das etapas da prova de igualdade local-global.

Cada função recebe uma instância concreta e devolve HOLDS, VIOLATED ou
VACUOUS (hipóteses não satisfeitas). Nenhuma delas prova nada: elas apenas
conferem os enunciados em instâncias finitas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

from src.config import Config
from src.conjugacy import (
    Verdict,
    conjugates_into,
    is_elementwise_conjugate,
    is_globally_conjugate,
)
from src.errors import (
    DepthError,
    HypothesisViolation,
    MembershipError,
    MissingWitnessError,
    RelationError,
)
from src.f2_linalg import (
    F2Subspace,
    F2Vector,
    decompose,
    fix_subspace,
    fix_subspace_of_set,
    indicator_span,
    intersect,
    orbit_partition,
    permute_coordinates,
    solve_linear,
    subspace_sum,
)
from src.subgroups import (
    Subgroup,
    centralizer_space,
    closure,
    conjugate_subgroup,
    extend,
    frattini,
    has_trivial_Kn_intersection,
    intersection_of_maximals,
    is_cyclic,
    is_subgroup_of,
    maximal_subgroups,
    minimal_generating_set,
    project_subgroup,
)
from src.tree_automorphisms import (
    KnVector,
    TreeAutomorphism,
    commutes,
    conjugate,
    multiply,
    project,
)

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Resultado de uma verificação pontual."""

    name: str
    verdict: Verdict
    detail: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.verdict == Verdict.VIOLATED


def _result(name: str, holds: bool, **detail) -> CheckResult:
    verdict = Verdict.HOLDS if holds else Verdict.VIOLATED
    if not holds:
        logger.error(f"{name} violated: {detail}")
    return CheckResult(name, verdict, detail)


def _vacuous(name: str, reason: str) -> CheckResult:
    logger.debug(f"{name} vacuous: {reason}")
    return CheckResult(name, Verdict.VACUOUS, {"reason": reason})


def _kn_bits(a) -> int:
    if isinstance(a, KnVector):
        return a.bits
    if isinstance(a, TreeAutomorphism):
        return a.semidirect[0].bits
    return int(a)


def _kn(n: int, a) -> KnVector:
    return a if isinstance(a, KnVector) else KnVector(n, _kn_bits(a))


def _equal_order_hypotheses(H: Subgroup, G: Subgroup) -> Optional[str]:
    """Motivo pelo qual |H| = |G|, H ∩ K_n = {id} e conjugação elemento a elemento falham."""
    if H.depth != G.depth:
        raise DepthError(f"depth mismatch: {H.depth} != {G.depth}")
    if H.order != G.order:
        return "orders differ"
    if not has_trivial_Kn_intersection(H):
        return "H meets K_n"
    if not is_elementwise_conjugate(H, G).verdict:
        return "H is not elementwise conjugate into G"
    return None


def _maximal_pair_hypotheses(H: Subgroup, G: Subgroup, H1: Subgroup, H2: Subgroup) -> Optional[str]:
    reason = _equal_order_hypotheses(H, G)
    if reason:
        return reason
    if is_cyclic(H) or is_cyclic(G):
        return "H or G is cyclic"
    if H1 == H2:
        return "H1 and H2 coincide"
    for M in (H1, H2):
        if 2 * M.order != H.order or not is_subgroup_of(M, H):
            return "H1, H2 must be maximal subgroups of H"
    return None


# --- critérios ---------------------------------------------------------------


def lemma_3_3_criterion(H: Subgroup, G: Subgroup, H1: Subgroup, H2: Subgroup, a) -> bool:
    """a ∈ C_{K_n}(H1) C_{K_n}(x) para algum x ∈ H2 \\ H1."""
    reason = _maximal_pair_hypotheses(H, G, H1, H2)
    if reason:
        raise HypothesisViolation(reason)
    a = _kn(H.depth, a)
    if closure(list(H1.generators) + [conjugate(h, a.element) for h in H2.generators], H.depth) != G:
        raise HypothesisViolation("G is not generated by H1 and H2^a")

    n = H.depth
    base = centralizer_space(H1, n)
    for x in H2.elements:
        if x in H1:
            continue
        if subspace_sum(base, centralizer_space([x], n)).contains_bits(a.bits):
            return True
    return False


def lemma_3_6_residual(x: TreeAutomorphism, y: TreeAutomorphism, a, b) -> tuple[F2Vector, F2Vector]:
    """Os dois lados de s(u) + st(u) = z + st(z) sob x y^a = (xy)^b."""
    n = x.depth
    a, b = _kn(n, a), _kn(n, b)
    if multiply(x, conjugate(y, a.element)) != conjugate(multiply(x, y), b.element):
        raise RelationError("x y^a != (xy)^b")
    s = x.semidirect[1]
    t = y.semidirect[1]
    st = multiply(s, t)
    u, z = a.vector, b.vector
    left = permute_coordinates(s, u) + permute_coordinates(st, u)
    right = z + permute_coordinates(st, z)
    return left, right


# --- Fix(α) + Fix(X) -----------------------------------------------------------


@dataclass
class PropositionCheck:
    """Condições avaliadas e a conclusão Fix(α) + Fix(X)."""

    verdict: Verdict
    conditions: dict[str, bool]
    witness: Optional[tuple[F2Vector, F2Vector]] = None


def _require_outside(X: Subgroup, alpha: TreeAutomorphism):
    if alpha.depth != X.depth:
        raise DepthError(f"depth mismatch: {alpha.depth} != {X.depth}")
    if alpha in X:
        raise MembershipError(f"alpha {alpha} lies in X")


def _fix_phi_y(X: Subgroup, alpha: TreeAutomorphism) -> F2Subspace:
    Y = extend(X, [alpha])
    return fix_subspace_of_set(frattini(Y).phi.generators, 1 << X.depth)


def _conclusion(X: Subgroup, alpha: TreeAutomorphism, v: F2Vector, conditions: dict[str, bool], name: str) -> PropositionCheck:
    if not all(conditions.values()):
        return PropositionCheck(Verdict.VACUOUS, conditions)
    fix_x = fix_subspace_of_set(X.generators, v.length)
    witness = decompose(v, fix_subspace(alpha), fix_x)
    if witness is None:
        logger.error(f"{name}: {v} not in Fix(alpha)+Fix(X) for alpha={alpha}, X={X!r}")
        return PropositionCheck(Verdict.VIOLATED, conditions)
    return PropositionCheck(Verdict.HOLDS, conditions, witness)


def _cycle_ids(perm) -> list[int]:
    ids = [-1] * len(perm)
    for label, cls in enumerate(orbit_partition([perm], len(perm))):
        for i in cls:
            ids[i] = label
    return ids


def prop_4_1_check(X: Subgroup, alpha: TreeAutomorphism, v: F2Vector) -> PropositionCheck:
    """Condições (a) troca, (b) órbitas, (c) v ∈ Fix(Φ(Y)); conclusão v ∈ Fix(α) + Fix(X)."""
    _require_outside(X, alpha)
    if v.length != 1 << X.depth:
        raise DepthError(f"vector of length {v.length} for depth {X.depth}")
    a = alpha.perm
    alpha_ids = _cycle_ids(a)

    cond_a = True
    cond_b = True
    for beta in X.elements:
        b = beta.perm
        # índices literais: v_i + v_{α(i)} = v_{β(i)} + v_{βα(i)}
        if cond_a and any(v[i] ^ v[a[i]] != v[b[i]] ^ v[b[a[i]]] for i in range(v.length)):
            cond_a = False
        if cond_b:
            beta_ids = _cycle_ids(b)
            classes: dict[tuple[int, int], int] = {}
            for i in range(v.length):
                if classes.setdefault((alpha_ids[i], beta_ids[i]), v[i]) != v[i]:
                    cond_b = False
                    break

    cond_c = _fix_phi_y(X, alpha).contains_bits(v.bits)
    return _conclusion(X, alpha, v, {"a": cond_a, "b": cond_b, "c": cond_c}, "fix-sum proposition")


def prop_4_4_check(
    X: Subgroup,
    alpha: TreeAutomorphism,
    v: F2Vector,
    u_map: Mapping[TreeAutomorphism, F2Vector],
) -> PropositionCheck:
    """(1) α(v) + αβ(v) = u + αβ(u) com u ∈ Fix(Φ(Y)); (2) v ∈ Fix(Φ(Y))."""
    _require_outside(X, alpha)
    missing = [beta for beta in X.elements if beta not in u_map]
    if missing:
        raise MissingWitnessError(f"no u for beta = {missing[0]}")

    fix_phi = _fix_phi_y(X, alpha)
    alpha_v = permute_coordinates(alpha, v)
    cond_1 = True
    for beta in X.elements:
        u = u_map[beta]
        ab = multiply(alpha, beta)
        if not fix_phi.contains_bits(u.bits):
            cond_1 = False
            break
        if alpha_v + permute_coordinates(ab, v) != u + permute_coordinates(ab, u):
            cond_1 = False
            break
    cond_2 = fix_phi.contains_bits(v.bits)
    return _conclusion(X, alpha, v, {"1": cond_1, "2": cond_2}, "twisted fix-sum proposition")


def solve_u_map(X: Subgroup, alpha: TreeAutomorphism, v: F2Vector) -> Optional[dict[TreeAutomorphism, F2Vector]]:
    """Um u^{(β)} ∈ Fix(Φ(Y)) por β satisfazendo a condição (1), se existir."""
    _require_outside(X, alpha)
    fix_phi = _fix_phi_y(X, alpha)
    alpha_v = permute_coordinates(alpha, v)
    u_map = {}
    for beta in X.elements:
        ab = multiply(alpha, beta)
        pairs = [
            (row ^ permute_coordinates(ab, F2Vector(v.length, row)).bits, row)
            for row in fix_phi.rows
        ]
        target = (alpha_v + permute_coordinates(ab, v)).bits
        u = solve_linear(pairs, target, v.length)
        if u is None:
            return None
        u_map[beta] = F2Vector(v.length, u)
    return u_map


@dataclass
class CosetPair:
    """A_t e αA_t como classes laterais de Φ(Y)."""

    label: int
    a_coset: tuple[TreeAutomorphism, ...]
    alpha_coset: tuple[TreeAutomorphism, ...]


def coset_decomposition(X: Subgroup, alpha: TreeAutomorphism) -> list[CosetPair]:
    """Y = ⋃ A_t ∪ ⋃ αA_t sobre Φ(Y), ordenado pelo rótulo em Y/Φ(Y)."""
    _require_outside(X, alpha)
    Y = extend(X, [alpha])
    data = frattini(Y)
    shift = data.coordinate(alpha)
    x_labels = {data.coordinate(x) for x in X.elements}

    cosets: dict[int, list[TreeAutomorphism]] = {}
    for g in Y.elements:
        cosets.setdefault(data.coordinate(g), []).append(g)

    pairs = []
    for label in sorted(cosets):
        partner = label ^ shift
        if label in x_labels:
            a_label = label
        elif partner in x_labels:
            continue
        elif label < partner:
            a_label = label
        else:
            continue
        pairs.append(CosetPair(a_label, tuple(cosets[a_label]), tuple(cosets[a_label ^ shift])))
    return pairs


def v_y_subspace(X: Subgroup, alpha: TreeAutomorphism) -> F2Subspace:
    """Vetores constantes em {σ(i_j) : σ ∈ A_t ∪ αA_t} para cada t e cada representante i_j."""
    pairs = coset_decomposition(X, alpha)
    m = 1 << X.depth
    Y_gens = list(X.generators) + [alpha]
    representatives = [cls[0] for cls in orbit_partition((g.perm for g in Y_gens), m)]

    parent = list(range(m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for pair in pairs:
        members = pair.a_coset + pair.alpha_coset
        for rep in representatives:
            first = find(members[0].perm[rep])
            for sigma in members[1:]:
                other = find(sigma.perm[rep])
                if other != first:
                    parent[max(first, other)] = min(first, other)
                    first = min(first, other)

    classes: dict[int, list[int]] = {}
    for i in range(m):
        classes.setdefault(find(i), []).append(i)
    return indicator_span(classes.values(), m)


# --- lemas como veredictos -----------------------------------------------------


def check_lemma_3_1(H: Subgroup, G: Subgroup) -> CheckResult:
    name = "lemma_3_1"
    reason = _equal_order_hypotheses(H, G)
    if reason:
        return _vacuous(name, reason)
    return _result(name, has_trivial_Kn_intersection(G))


def check_lemma_3_2(H: Subgroup, G: Subgroup, H1: Subgroup) -> CheckResult:
    """G1 = ⟨h^{a_h}⟩ tem a ordem de H1 e recebe H1 elemento a elemento."""
    name = "lemma_3_2"
    reason = _equal_order_hypotheses(H, G)
    if reason:
        return _vacuous(name, reason)
    if not is_subgroup_of(H1, H):
        return _vacuous(name, "H1 is not a subgroup of H")
    certificate = is_elementwise_conjugate(H, G)
    G1 = closure(
        (conjugate(h, certificate.witnesses[h].element) for h in H1.elements), H.depth
    )
    holds = (
        is_subgroup_of(G1, G)
        and G1.order == H1.order
        and is_elementwise_conjugate(H1, G1).verdict
    )
    return _result(name, holds, h1_order=H1.order, g1_order=G1.order)


def check_generation_lemma(H: Subgroup, G: Subgroup, H1: Subgroup, H2: Subgroup, a, b) -> CheckResult:
    """Com H1^a, H2^b <= G, então G = ⟨H1^a, H2^b⟩."""
    name = "generation_lemma"
    reason = _maximal_pair_hypotheses(H, G, H1, H2)
    if reason:
        return _vacuous(name, reason)
    a, b = _kn(H.depth, a), _kn(H.depth, b)
    if not (conjugates_into(H1, G, a) and conjugates_into(H2, G, b)):
        return _vacuous(name, "H1^a or H2^b not contained in G")
    generated = closure(
        [conjugate(h, a.element) for h in H1.generators]
        + [conjugate(h, b.element) for h in H2.generators],
        H.depth,
    )
    return _result(name, generated == G, generated_order=generated.order, order=G.order)


def _generated_by_h1_h2a(G: Subgroup, H1: Subgroup, H2: Subgroup, a: KnVector) -> bool:
    return closure(
        list(H1.generators) + [conjugate(h, a.element) for h in H2.generators], G.depth
    ) == G


def check_lemma_3_3(H: Subgroup, G: Subgroup, H1: Subgroup, H2: Subgroup, a) -> CheckResult:
    """O critério de produto de centralizadores coincide com o decisor global."""
    name = "lemma_3_3"
    reason = _maximal_pair_hypotheses(H, G, H1, H2)
    if reason:
        return _vacuous(name, reason)
    a = _kn(H.depth, a)
    if not _generated_by_h1_h2a(G, H1, H2, a):
        return _vacuous(name, "G is not generated by H1 and H2^a")
    criterion = lemma_3_3_criterion(H, G, H1, H2, a)
    decided = is_globally_conjugate(H, G).verdict
    return _result(name, criterion == decided, criterion=criterion, global_=decided)


def check_lemma_3_4_instance(H: Subgroup, G: Subgroup, H1: Subgroup, H2: Subgroup, a) -> CheckResult:
    """Com G = ⟨H1, H2^a⟩, a centraliza Φ(H)."""
    name = "lemma_3_4"
    reason = _maximal_pair_hypotheses(H, G, H1, H2)
    if reason:
        return _vacuous(name, reason)
    a = _kn(H.depth, a)
    if not _generated_by_h1_h2a(G, H1, H2, a):
        return _vacuous(name, "G is not generated by H1 and H2^a")
    phi = frattini(H).phi
    return _result(name, centralizer_space(phi, H.depth).contains_bits(a.bits), a=str(a))


def check_lemma_3_5(x: TreeAutomorphism, a) -> CheckResult:
    """(u,1) comuta com (v,s) sse u ∈ Fix(s)."""
    a = _kn(x.depth, a)
    s = x.semidirect[1]
    lhs = commutes(x, a.element)
    rhs = fix_subspace(s).contains_bits(a.bits)
    return _result("lemma_3_5", lhs == rhs, commutes=lhs, in_fix=rhs)


def check_lemma_3_6(x: TreeAutomorphism, y: TreeAutomorphism, a, b) -> CheckResult:
    name = "lemma_3_6"
    try:
        left, right = lemma_3_6_residual(x, y, a, b)
    except RelationError as e:
        return _vacuous(name, str(e))
    return _result(name, left == right, left=str(left), right=str(right))


def check_projection_frattini(H: Subgroup) -> CheckResult:
    """π_n(Φ(H)) = Φ(π_n(H)) quando H ∩ K_n = {id}."""
    name = "projection_frattini"
    if not has_trivial_Kn_intersection(H):
        return _vacuous(name, "H meets K_n")
    lhs = project_subgroup(frattini(H).phi)
    rhs = frattini(project_subgroup(H)).phi
    return _result(name, lhs == rhs, lhs_order=lhs.order, rhs_order=rhs.order)


def check_frattini_intersection(G: Subgroup) -> CheckResult:
    """Φ(G) por quadrados e comutadores coincide com a interseção dos maximais."""
    phi = frattini(G).phi
    other = intersection_of_maximals(G)
    return _result("frattini_intersection", phi == other, phi_order=phi.order, intersection_order=other.order)


def check_burnside_rank(G: Subgroup) -> CheckResult:
    name = "burnside_rank"
    if G.order > Config.MIN_GENERATORS_SEARCH_LIMIT:
        return _vacuous(name, f"order {G.order} above the search limit")
    rank = frattini(G).quotient_rank
    size = len(minimal_generating_set(G))
    return _result(name, rank == size, rank=rank, minimal_generators=size)


def check_v_y(X: Subgroup, alpha: TreeAutomorphism) -> CheckResult:
    """V_Y está contido em Fix(α) ∩ Fix(Φ(Y))."""
    space = v_y_subspace(X, alpha)
    bound = intersect(fix_subspace(alpha), _fix_phi_y(X, alpha))
    return _result("v_y_subspace", space.is_subspace_of(bound), dimension=space.dimension)


def check_prop_4_1(X: Subgroup, alpha: TreeAutomorphism, v: F2Vector) -> CheckResult:
    outcome = prop_4_1_check(X, alpha, v)
    if outcome.verdict == Verdict.VACUOUS:
        return _vacuous("prop_4_1", f"conditions {outcome.conditions}")
    return CheckResult("prop_4_1", outcome.verdict, {"v": str(v)})


def check_prop_4_4(X: Subgroup, alpha: TreeAutomorphism, v: F2Vector, u_map) -> CheckResult:
    if u_map is None:
        return _vacuous("prop_4_4", "condition (1) has no solution in Fix(Phi(Y))")
    outcome = prop_4_4_check(X, alpha, v, u_map)
    if outcome.verdict == Verdict.VACUOUS:
        return _vacuous("prop_4_4", f"conditions {outcome.conditions}")
    return CheckResult("prop_4_4", outcome.verdict, {"v": str(v)})


# --- instâncias colhidas da prova ---------------------------------------------


@dataclass
class ProofInstances:
    """Dados do passo indutivo reconstruídos num par concreto."""

    H: Subgroup
    G: Subgroup
    H1: Optional[Subgroup] = None
    H2: Optional[Subgroup] = None
    b: Optional[KnVector] = None
    x: Optional[TreeAutomorphism] = None
    lemma_3_6: list[tuple[TreeAutomorphism, TreeAutomorphism, KnVector, KnVector]] = field(default_factory=list)
    prop_4_4: list[tuple[Subgroup, TreeAutomorphism, F2Vector, Optional[dict]]] = field(default_factory=list)
    reason: Optional[str] = None

    @property
    def empty(self) -> bool:
        return self.H1 is None


def harvest_proof_instances(H: Subgroup, G: Subgroup) -> ProofInstances:
    """Reconstrói o passo indutivo: normaliza G, acha b, x, c_i e as instâncias derivadas."""
    reason = _equal_order_hypotheses(H, G)
    if reason is None and is_cyclic(H):
        reason = "H is cyclic"
    if reason:
        return ProofInstances(H, G, reason=reason)

    maxes = maximal_subgroups(H)
    H1, H2 = maxes[0], maxes[1]

    first = is_globally_conjugate(H1, G)
    if not first.verdict:
        return ProofInstances(H, G, reason="H1 is not globally conjugate into G")
    # H1^a <= G  ⟺  H1 <= a G a
    G_norm = conjugate_subgroup(G, first.witness)

    second = is_globally_conjugate(H2, G_norm)
    if not second.verdict:
        return ProofInstances(H, G_norm, reason="H2 is not globally conjugate into G")
    b = second.witness

    x = next(h for h in H2.elements if h not in H1)
    instances = ProofInstances(H, G_norm, H1, H2, b, x)

    for h in H1.elements:
        hx = multiply(h, x)
        M = next(M for M in maxes if hx in M)
        c = is_globally_conjugate(M, G_norm)
        if c.verdict:
            instances.lemma_3_6.append((h, x, b, c.witness))

    X = project_subgroup(H1)
    alpha = project(x)
    v = b.vector
    instances.prop_4_4.append((X, alpha, v, solve_u_map(X, alpha, v)))
    return instances


def proof_conclusion_holds(instances: ProofInstances) -> bool:
    """u ∈ Fix(π_n(H1)) + Fix(s), com b = (u, 1) e x = (v, s)."""
    n = instances.H.depth
    m = 1 << (n - 1)
    fix_h1 = fix_subspace_of_set((project(h) for h in instances.H1.generators), m)
    fix_s = fix_subspace(project(instances.x))
    return subspace_sum(fix_h1, fix_s).contains_bits(instances.b.bits)


def harvested_checks(instances: ProofInstances) -> list[CheckResult]:
    """Todas as verificações aplicáveis a um conjunto de instâncias colhidas."""
    if instances.empty:
        return [_vacuous("harvest", instances.reason or "no instances")]
    H, G, H1, H2, b = instances.H, instances.G, instances.H1, instances.H2, instances.b
    zero = KnVector(H.depth, 0)
    results = [
        check_generation_lemma(H, G, H1, H2, zero, b),
        check_lemma_3_3(H, G, H1, H2, b),
        check_lemma_3_4_instance(H, G, H1, H2, b),
        _result("proof_conclusion", proof_conclusion_holds(instances), b=str(b)),
    ]
    results.extend(check_lemma_3_6(*inst) for inst in instances.lemma_3_6)
    results.extend(check_prop_4_4(*inst) for inst in instances.prop_4_4)
    return results

