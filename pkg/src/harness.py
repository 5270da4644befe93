"""Varreduras exaustivas e amostradas, suíte de lemas e replay de registros."""

import logging
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from tqdm import tqdm

from src.config import Config
from src.conjugacy import (
    PairCheck,
    Verdict,
    brute_force_elementwise_witnesses,
    conjecture_6_1_check,
    conjugates_into,
    property_p_check,
    theorem_1_4_check,
)
from src.errors import EnumerationLimitError, ParseError
from src.f2_linalg import F2Vector
from src.formats import parse_element, parse_vector
from src.lemma_checks import (
    CheckResult,
    check_burnside_rank,
    check_frattini_intersection,
    check_lemma_3_1,
    check_lemma_3_2,
    check_lemma_3_5,
    check_lemma_3_6,
    check_projection_frattini,
    check_prop_4_1,
    check_prop_4_4,
    check_v_y,
    harvest_proof_instances,
    harvested_checks,
    solve_u_map,
)
from src.markov import markov_group
from src.records import CheckRecord, PairRecord, SweepHeader, SweepReport, parse_record
from src.subgroups import (
    Subgroup,
    canonical_kn_class_key,
    closure,
    contains_transitive,
    enumerate_all_subgroups,
    has_trivial_Kn_intersection,
    maximal_subgroups,
    random_subgroup,
)
from src.tree_automorphisms import (
    KnVector,
    TreeAutomorphism,
    all_elements,
    conjugate,
    kn_elements,
    random_element,
    random_kn_vector,
    random_transitive_element,
    validate_depth,
)

logger = logging.getLogger(__name__)

THEOREM = "theorem"
CONJECTURE = "conjecture"
LEMMAS = "lemmas"
PROPERTY_P = "property_p"

PAIR_CHECKS: dict[str, Callable[[Subgroup, Subgroup], PairCheck]] = {
    THEOREM: theorem_1_4_check,
    CONJECTURE: conjecture_6_1_check,
    PROPERTY_P: property_p_check,
}

# verificações esperadas em toda suíte; ausentes viram VACUOUS
LEMMA_NAMES = (
    "lemma_3_1",
    "lemma_3_2",
    "generation_lemma",
    "lemma_3_3",
    "lemma_3_4",
    "lemma_3_5",
    "lemma_3_6",
    "proof_conclusion",
    "projection_frattini",
    "frattini_intersection",
    "burnside_rank",
    "v_y_subspace",
    "prop_4_1",
    "prop_4_4",
)

_DEFAULT_FILTERS = {
    THEOREM: {"require_equal_order": True, "require_trivial_kn": True, "require_transitive": False},
    CONJECTURE: {"require_equal_order": False, "require_trivial_kn": False, "require_transitive": True},
}

_MAX_REJECTIONS = 64
_FRATTINI_SAMPLES = 100


class SweepMode(str, Enum):
    EXHAUSTIVE = "EXHAUSTIVE"
    SAMPLED = "SAMPLED"


class SweepConfig(BaseModel):
    """Configuração de uma varredura; filtros em None seguem o padrão do experimento."""

    model_config = ConfigDict(extra="forbid")

    depth: int = Field(2, ge=1)
    mode: SweepMode = SweepMode.SAMPLED
    samples: int = Field(default_factory=lambda: Config.DEFAULT_SAMPLES, ge=0)
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED)
    require_equal_order: Optional[bool] = None
    require_trivial_kn: Optional[bool] = None
    require_transitive: Optional[bool] = None
    markov_target: bool = False
    jobs: int = Field(default_factory=lambda: Config.DEFAULT_JOBS, ge=1)
    progress: bool = Field(False, description="Barra de progresso; não afeta o relatório")

    @field_validator("mode", mode="before")
    @classmethod
    def _upper_mode(cls, value):
        if isinstance(value, str):
            return value.strip().upper()
        return value

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides) -> "SweepConfig":
        """Lê `CHAVE=valor` (com comentários `#`); overrides têm precedência."""
        if not Path(path).is_file():
            raise ParseError(f"config file not found: {path}")
        values = {key.lower(): value for key, value in dotenv_values(path).items() if value is not None}
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ParseError(f"invalid sweep config {path}: {e}") from e

    def filters(self, experiment: str) -> dict[str, bool]:
        defaults = _DEFAULT_FILTERS.get(experiment, _DEFAULT_FILTERS[THEOREM])
        resolved = {
            key: default if getattr(self, key) is None else getattr(self, key)
            for key, default in defaults.items()
        }
        resolved["markov_target"] = self.markov_target
        return resolved

    def header(self, experiment: str, scope: str) -> SweepHeader:
        return SweepHeader(
            experiment=experiment,
            depth=self.depth,
            mode=self.mode.value,
            samples=self.samples,
            seed=self.seed,
            jobs=self.jobs,
            filters=self.filters(experiment),
            scope=scope,
        )


def validate_config(config: SweepConfig):
    validate_depth(config.depth)
    if config.mode == SweepMode.EXHAUSTIVE and config.depth > Config.EXHAUSTIVE_MAX_DEPTH:
        raise EnumerationLimitError(
            f"exhaustive sweep at n={config.depth} exceeds EXHAUSTIVE_MAX_DEPTH={Config.EXHAUSTIVE_MAX_DEPTH}"
        )


# --- espaço de pares ----------------------------------------------------------


def kn_class_representatives(subgroups: Iterable[Subgroup]) -> list[Subgroup]:
    """Um subgrupo por classe de K_n-conjugação, na ordem de entrada."""
    seen = set()
    representatives = []
    for S in subgroups:
        key = canonical_kn_class_key(S)
        if key not in seen:
            seen.add(key)
            representatives.append(S)
    return representatives


def _accepts_h(H: Subgroup, filters: dict[str, bool]) -> bool:
    if filters["require_trivial_kn"] and not has_trivial_Kn_intersection(H):
        return False
    if filters["require_transitive"] and not contains_transitive(H):
        return False
    return True


def _markov_target(n: int) -> Subgroup:
    spec = markov_group(n)
    if spec.group is None:
        raise EnumerationLimitError(f"Markov group M_{n} could not be closed")
    return spec.group


def exhaustive_pairs(experiment: str, config: SweepConfig) -> tuple[list[tuple[Subgroup, Subgroup]], str]:
    """Pares (H, G) com H tomado a menos de K_n-conjugação."""
    n = config.depth
    filters = config.filters(experiment)
    subgroups = list(enumerate_all_subgroups(n))
    hs = kn_class_representatives(H for H in subgroups if _accepts_h(H, filters))
    targets = [_markov_target(n)] if filters["markov_target"] else subgroups

    pairs = []
    for H in hs:
        for G in targets:
            if filters["require_equal_order"] and H.order != G.order:
                continue
            pairs.append((H, G))
    scope = (
        f"exhaustive over W_{n}: {len(hs)} H classes up to K_{n}-conjugacy, "
        f"{len(targets)} candidate G, {len(pairs)} pairs"
    )
    logger.info(scope)
    return pairs, scope


def _generator_count(rng: random.Random) -> int:
    return rng.randint(1, 3)


def _conjugate_generators(H: Subgroup, rng: random.Random) -> Subgroup:
    """⟨h_i^{k_i}⟩ com k_i ∈ K_n independentes."""
    n = H.depth
    return closure((conjugate(h, random_kn_vector(n, rng).element) for h in H.generators), n)


def _sample_theorem_h(n: int, rng: random.Random, filters: dict[str, bool]) -> Subgroup:
    H = random_subgroup(n, 3, rng)
    for _ in range(_MAX_REJECTIONS):
        if _accepts_h(H, filters):
            break
        H = random_subgroup(n, 3, rng)
    return H


def _sample_conjecture_h(n: int, rng: random.Random) -> Subgroup:
    sigma = random_transitive_element(n, rng)
    extra = [random_element(n, rng) for _ in range(_generator_count(rng) - 1)]
    return closure([sigma] + extra, n)


def sampled_pairs(experiment: str, config: SweepConfig) -> tuple[list[tuple[Subgroup, Subgroup]], str]:
    """Pares amostrados com random.Random(seed); mesma semente, mesmos pares."""
    n = config.depth
    rng = random.Random(config.seed)
    filters = config.filters(experiment)
    target = _markov_target(n) if filters["markov_target"] else None

    pairs = []
    for i in range(config.samples):
        if experiment == THEOREM:
            H = _sample_theorem_h(n, rng, filters)
            G = target if target is not None else _conjugate_generators(H, rng)
        else:
            H = _sample_conjecture_h(n, rng)
            if target is not None:
                G = target
            elif i % 2 == 0:
                G = random_subgroup(n, 3, rng)
            else:
                G = _conjugate_generators(H, rng)
        pairs.append((H, G))

    target_text = f"G = M_{n}" if target is not None else "G drawn per pair"
    scope = (
        f"sampled over W_{n}: {config.samples} pairs, seed {config.seed}, "
        f"generator count uniform in {{1,2,3}}, {target_text}"
    )
    logger.info(scope)
    return pairs, scope


# --- avaliação ----------------------------------------------------------------


def _evaluate_pair(task: tuple[str, int, Subgroup, Subgroup]) -> PairRecord:
    experiment, index, H, G = task
    check = PAIR_CHECKS[experiment](H, G)
    full = check.verdict == Verdict.COUNTEREXAMPLE
    return PairRecord.from_check(experiment, index, H, G, check, full=full)


def _evaluate_all(tasks: list, jobs: int, progress: bool, desc: str) -> list[PairRecord]:
    """Avalia em ordem; com jobs > 1 usa processos, preservando a ordem da entrada."""
    bar = tqdm(total=len(tasks), desc=desc, disable=not progress)
    records = []
    try:
        if jobs <= 1:
            for task in tasks:
                records.append(_evaluate_pair(task))
                bar.update()
        else:
            chunksize = max(1, len(tasks) // (jobs * 16))
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for record in pool.map(_evaluate_pair, tasks, chunksize=chunksize):
                    records.append(record)
                    bar.update()
    finally:
        bar.close()
    return records


def _aggregate(header: SweepHeader, records: list, started: float) -> SweepReport:
    counts = Counter(record.verdict for record in records)
    return SweepReport(
        header=header,
        counts=dict(sorted(counts.items())),
        counterexamples=[r for r in records if isinstance(r, PairRecord) and r.verdict == Verdict.COUNTEREXAMPLE.value],
        violations=[r for r in records if isinstance(r, CheckRecord) and r.verdict == Verdict.VIOLATED.value],
        evaluated=len(records),
        wall_time=round(time.perf_counter() - started, 3),
    )


def run_pair_sweep(experiment: str, config: SweepConfig) -> tuple[SweepReport, list[PairRecord]]:
    if experiment not in PAIR_CHECKS:
        raise ParseError(f"unknown experiment: {experiment!r}")
    validate_config(config)
    started = time.perf_counter()
    if config.mode == SweepMode.EXHAUSTIVE:
        pairs, scope = exhaustive_pairs(experiment, config)
    else:
        pairs, scope = sampled_pairs(experiment, config)

    tasks = [(experiment, index, H, G) for index, (H, G) in enumerate(pairs)]
    records = _evaluate_all(tasks, config.jobs, config.progress, experiment)
    report = _aggregate(config.header(experiment, scope), records, started)

    logger.info(f"Sweep {experiment} at n={config.depth}: {report.counts}")
    for record in report.counterexamples:
        logger.error(f"Counterexample #{record.index}: H={record.H}, G={record.G}")
    return report, records


def sweep_theorem_1_4(config: SweepConfig) -> SweepReport:
    """Pares com |H| = |G| e H ∩ K_n = {id}; zero contraexemplos esperados."""
    return run_pair_sweep(THEOREM, config)[0]


def sweep_conjecture_6_1(config: SweepConfig) -> SweepReport:
    """H com elemento transitivo, G livre ou M_n."""
    return run_pair_sweep(CONJECTURE, config)[0]


# --- suíte de lemas -----------------------------------------------------------


class _CheckLog:
    """Acumula CheckRecord com índice sequencial."""

    def __init__(self, depth: int):
        self.depth = depth
        self.records: list[CheckRecord] = []

    def add(self, result: CheckResult):
        self.records.append(
            CheckRecord(
                experiment=LEMMAS,
                index=len(self.records),
                depth=self.depth,
                name=result.name,
                verdict=result.verdict.value,
                detail={key: _jsonable(value) for key, value in result.detail.items()},
            )
        )

    def fill_missing(self):
        seen = {record.name for record in self.records}
        for name in LEMMA_NAMES:
            if name not in seen:
                logger.warning(f"{name} has no instances at this depth; recorded as VACUOUS")
                self.add(CheckResult(name, Verdict.VACUOUS, {"reason": "no instances"}))


def _jsonable(value):
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


def _proposition_instances(
    subgroups: list[Subgroup], elements: list[TreeAutomorphism], exhaustive: bool, rng: random.Random, samples: int
) -> Iterable[tuple[Subgroup, TreeAutomorphism, list[F2Vector]]]:
    """(X, α, vetores): tudo em W_2, amostras de (X, α, v) acima disso."""
    m = 1 << elements[0].depth
    if exhaustive:
        vectors = [F2Vector(m, bits) for bits in range(1 << m)]
        for X in subgroups:
            for alpha in elements:
                if alpha not in X:
                    yield X, alpha, vectors
        return
    proper = [X for X in subgroups if X.order < len(elements)]
    for _ in range(samples):
        X = rng.choice(proper)
        alpha = rng.choice([g for g in elements if g not in X])
        yield X, alpha, [F2Vector(m, rng.getrandbits(m))]


def verify_lemma_suite(n: int, config: Optional[SweepConfig] = None) -> tuple[SweepReport, list[CheckRecord]]:
    """Roda todos os verificadores sobre os espaços de instâncias de W_n."""
    config = config or SweepConfig(depth=n, mode=SweepMode.EXHAUSTIVE)
    config = config.model_copy(update={"depth": n, "mode": SweepMode.EXHAUSTIVE})
    validate_config(config)
    started = time.perf_counter()
    rng = random.Random(config.seed)
    log = _CheckLog(n)
    small = n <= 2
    samples = max(1, config.samples)

    elements = all_elements(n)
    for x in elements:
        for a in kn_elements(n):
            log.add(check_lemma_3_5(x, a))

    if small:
        for x in elements:
            for y in elements:
                for a in kn_elements(n):
                    for b in kn_elements(n):
                        log.add(check_lemma_3_6(x, y, a, b))

    subgroups = list(enumerate_all_subgroups(n))
    for G in subgroups if small else rng.sample(subgroups, min(_FRATTINI_SAMPLES, len(subgroups))):
        log.add(check_frattini_intersection(G))
        log.add(check_burnside_rank(G))

    trivial = [H for H in subgroups if has_trivial_Kn_intersection(H)]
    if n >= 2:
        for H in trivial:
            log.add(check_projection_frattini(H))

    pairs = 0
    for H in kn_class_representatives(trivial):
        for G in subgroups:
            if G.order != H.order:
                continue
            pairs += 1
            log.add(check_lemma_3_1(H, G))
            for H1 in ([] if H.is_trivial() else maximal_subgroups(H)):
                log.add(check_lemma_3_2(H, G, H1))
            for result in harvested_checks(harvest_proof_instances(H, G)):
                log.add(result)

    instances = 0
    for X, alpha, vectors in _proposition_instances(subgroups, elements, small, rng, samples):
        log.add(check_v_y(X, alpha))
        for v in vectors:
            instances += 1
            log.add(check_prop_4_1(X, alpha, v))
            log.add(check_prop_4_4(X, alpha, v, solve_u_map(X, alpha, v)))

    log.fill_missing()
    scope = (
        f"lemma suite over W_{n}: {len(elements)} elements, {len(subgroups)} subgroups, "
        f"{pairs} equal-order pairs, {instances} proposition vectors "
        f"({'exhaustive' if small else f'sampled, seed {config.seed}'})"
    )
    report = _aggregate(config.header(LEMMAS, scope), log.records, started)
    logger.info(f"Lemma suite at n={n}: {report.counts}")
    return report, log.records


# --- replay -------------------------------------------------------------------


@dataclass
class ReplayResult:
    """Comparação entre um registro gravado e a reavaliação."""

    matches: bool
    verdict: str
    mismatches: list[str] = field(default_factory=list)


def replay(record: Union[str, PairRecord]) -> ReplayResult:
    """Reconstrói o par, roda o decisor de novo e confere as testemunhas gravadas."""
    if isinstance(record, str):
        record = parse_record(record)
    if not isinstance(record, PairRecord):
        raise ParseError("replay needs a pair record")
    if record.experiment not in PAIR_CHECKS:
        raise ParseError(f"unknown experiment in record: {record.experiment!r}")

    H, G = record.subgroups()
    check = PAIR_CHECKS[record.experiment](H, G)
    fresh = PairRecord.from_check(record.experiment, record.index, H, G, check)

    mismatches = []
    for name in ("verdict", "elementwise", "global_", "p_holds"):
        old, new = getattr(record, name), getattr(fresh, name)
        if old != new:
            mismatches.append(f"{name.rstrip('_')}: recorded {old}, recomputed {new}")

    n = record.depth
    if record.witness is not None:
        b = KnVector(n, parse_vector(record.witness).bits)
        if not conjugates_into(H, G, b):
            mismatches.append(f"witness {record.witness} does not conjugate H into G")
    if record.elementwise_witnesses:
        for text, u in record.elementwise_witnesses.items():
            h = parse_element(text, n)
            if conjugate(h, KnVector(n, parse_vector(u).bits).element) not in G:
                mismatches.append(f"elementwise witness {u} fails for {text}")
    if record.failure_witness is not None:
        h = parse_element(record.failure_witness, n)
        if h not in H or brute_force_elementwise_witnesses(h, G):
            mismatches.append(f"failure witness {record.failure_witness} is conjugable into G")

    for reason in mismatches:
        logger.warning(f"Replay mismatch for record #{record.index}: {reason}")
    return ReplayResult(not mismatches, fresh.verdict, mismatches)
