"""Modelos de registro serializados nos relatórios JSONL."""

import json
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.conjugacy import PairCheck, PropertyPReport
from src.errors import ParseError
from src.formats import format_cycles, parse_generator_list
from src.subgroups import Subgroup, closure, contains_transitive, has_trivial_Kn_intersection


class SubgroupRecord(BaseModel):
    """Subgrupo serializado pelos geradores."""

    depth: int = Field(..., description="Profundidade n da árvore")
    generators: list[str] = Field(default_factory=list, description="Geradores em notação de ciclos")
    order: int = Field(..., description="Ordem do subgrupo")
    trivial_kn_intersection: bool
    contains_transitive: bool

    @classmethod
    def from_subgroup(cls, G: Subgroup) -> "SubgroupRecord":
        return cls(
            depth=G.depth,
            generators=[format_cycles(g) for g in G.generators],
            order=G.order,
            trivial_kn_intersection=has_trivial_Kn_intersection(G),
            contains_transitive=contains_transitive(G),
        )

    def to_subgroup(self) -> Subgroup:
        return closure(parse_generator_list(",".join(self.generators), self.depth), self.depth)


class HypothesisRecord(BaseModel):
    equal_order: bool
    trivial_kn_intersection: bool
    cyclic: bool
    transitive: bool


class PairRecord(BaseModel):
    """Um par (H, G) avaliado numa varredura."""

    model_config = ConfigDict(populate_by_name=True)

    kind: str = "pair"
    experiment: str
    index: int
    depth: int
    H: list[str]
    G: list[str]
    hypotheses: HypothesisRecord
    verdict: str
    elementwise: Optional[bool] = None
    global_: Optional[bool] = Field(None, alias="global")
    p_holds: Optional[bool] = None
    witness: Optional[str] = Field(None, description="Conjugador global b em bits")
    failure_witness: Optional[str] = Field(None, description="Elemento de H sem testemunha")
    elementwise_witnesses: Optional[dict[str, str]] = None
    exhausted: Optional[bool] = None
    candidates_searched: Optional[int] = None

    @classmethod
    def from_check(
        cls,
        experiment: str,
        index: int,
        H: Subgroup,
        G: Subgroup,
        check: PairCheck,
        full: bool = False,
    ) -> "PairRecord":
        flags = check.hypotheses
        record = cls(
            experiment=experiment,
            index=index,
            depth=H.depth,
            H=[format_cycles(h) for h in H.generators],
            G=[format_cycles(g) for g in G.generators],
            hypotheses=HypothesisRecord(
                equal_order=flags.equal_order,
                trivial_kn_intersection=flags.trivial_kn_intersection,
                cyclic=flags.cyclic,
                transitive=flags.transitive,
            ),
            verdict=check.verdict.value,
        )
        if check.report is not None:
            record.apply_report(check.report, full=full)
        return record

    def apply_report(self, report: PropertyPReport, full: bool = False):
        elementwise, global_ = report.elementwise, report.global_
        self.elementwise = elementwise.verdict
        self.global_ = global_.verdict
        self.p_holds = report.p_holds
        self.witness = str(global_.witness) if global_.witness is not None else None
        self.exhausted = global_.exhausted if not global_.verdict else None
        self.candidates_searched = global_.candidates_searched
        if elementwise.failure_witness is not None:
            self.failure_witness = format_cycles(elementwise.failure_witness)
        if full and elementwise.verdict:
            self.elementwise_witnesses = {
                format_cycles(h): str(u) for h, u in sorted(elementwise.witnesses.items())
            }

    def subgroups(self) -> tuple[Subgroup, Subgroup]:
        H = closure(parse_generator_list(",".join(self.H), self.depth), self.depth)
        G = closure(parse_generator_list(",".join(self.G), self.depth), self.depth)
        return H, G

    def to_line(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)


class CheckRecord(BaseModel):
    """Uma verificação de lema registrada."""

    kind: str = "check"
    experiment: str
    index: int
    depth: int
    name: str
    verdict: str
    detail: dict[str, Any] = Field(default_factory=dict)

    def to_line(self) -> str:
        return self.model_dump_json(exclude_none=True)


class SweepHeader(BaseModel):
    """Cabeçalho de um relatório: eco da configuração e do escopo."""

    kind: str = "header"
    experiment: str
    depth: int
    mode: str
    samples: int
    seed: int
    jobs: int
    filters: dict[str, bool] = Field(default_factory=dict)
    scope: str = Field("", description="Descrição do espaço de instâncias percorrido")

    def to_line(self) -> str:
        return self.model_dump_json()


class SweepReport(BaseModel):
    """Resumo agregado de uma varredura."""

    model_config = ConfigDict(populate_by_name=True)

    header: SweepHeader
    counts: dict[str, int] = Field(default_factory=dict)
    counterexamples: list[PairRecord] = Field(default_factory=list)
    violations: list[CheckRecord] = Field(default_factory=list)
    evaluated: int = 0
    wall_time: float = Field(0.0, description="Segundos; único campo não determinístico")

    @property
    def counterexample_count(self) -> int:
        return self.counts.get("COUNTEREXAMPLE", 0)

    @property
    def violation_count(self) -> int:
        return self.counts.get("VIOLATED", 0)

    @property
    def exit_code(self) -> int:
        """0 sem contraexemplos, 2 quando algum foi encontrado."""
        return 2 if self.counterexample_count or self.violation_count else 0

    def summary_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True, indent=2)


def parse_record(line: str) -> Union[SweepHeader, PairRecord, CheckRecord]:
    """Reconstrói um registro a partir de uma linha JSONL."""
    try:
        data = json.loads(line)
        kind = data.get("kind") if isinstance(data, dict) else None
        if kind == "header":
            return SweepHeader.model_validate(data)
        if kind == "pair":
            return PairRecord.model_validate(data)
        if kind == "check":
            return CheckRecord.model_validate(data)
    except (ValueError, ValidationError) as e:
        raise ParseError(f"malformed record: {e}") from e
    raise ParseError(f"unknown record kind: {kind!r}")
