"""Linha de comando: aritmética de elementos, grupos, conjugação, Markov e varreduras."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from src.config import Config
from src.conjugacy import property_p_check
from src.errors import UsageError, WreathError
from src.formats import format_cycles, format_element, parse_element, parse_generator_list
from src.harness import (
    CONJECTURE,
    LEMMAS,
    PROPERTY_P,
    THEOREM,
    SweepConfig,
    SweepMode,
    replay,
    run_pair_sweep,
    verify_lemma_suite,
)
from src.markov import contains_transitive as markov_contains_transitive
from src.markov import markov_group, projection_observation
from src.records import PairRecord, SubgroupRecord, parse_record
from src.report_store import ReportStore, render_lines
from src.subgroups import (
    centralizer_in_Kn,
    centralizer_space,
    closure,
    contains_transitive,
    frattini,
    intersect_with_Kn,
    is_cyclic,
    maximal_subgroups,
    minimal_generating_set,
)
from src.tree_automorphisms import (
    conjugate,
    element_order,
    inverse,
    is_in_Kn,
    is_transitive,
    multiply,
    project,
)

logger = logging.getLogger("cli")

GROUP_FIELDS = ("order", "elements", "frattini", "maximals", "kn", "centralizer", "rank", "cyclic", "transitive")
DEFAULT_GROUP_FIELDS = "order,frattini,maximals,kn,centralizer"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser que levanta UsageError em vez de sair."""

    def error(self, message):
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="Profundidade da árvore")
    common.add_argument("--seed", type=int, default=None, help=f"Semente (padrão: {Config.DEFAULT_SEED})")
    common.add_argument("--samples", type=int, default=None, help="Pares amostrados")
    common.add_argument("--jobs", type=int, default=None, help="Processos paralelos")
    common.add_argument("--format", choices=("text", "jsonl"), default="text", help="Formato da saída")
    common.add_argument("--out", default=None, help="Arquivo (ou diretório de relatórios) para os registros")
    common.add_argument("--config", default=None, help="Arquivo CHAVE=valor com a configuração")
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="Nível de log")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="kn-conjugacy", description="K_n-conjugacy toolkit for Aut(T_n)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    elem = commands.add_parser("elem", parents=[common], help="Element arithmetic and conversion")
    elem.add_argument("x", help="Element in cycle, image-list or portrait notation")
    elem.add_argument("y", nargs="?", default=None, help="Second element for mul/conj")
    elem.add_argument("--op", choices=("show", "mul", "inv", "conj"), default="show")
    elem.add_argument("--style", choices=("cycles", "images", "portrait"), default="cycles")

    group = commands.add_parser("group", parents=[common], help="Subgroup construction")
    group.add_argument("--gens", required=True, help="Generator list, e.g. \"(1,3,2,4),(1,2)\"")
    group.add_argument("--show", default=DEFAULT_GROUP_FIELDS, help=f"Comma list of {', '.join(GROUP_FIELDS)}")

    conj = commands.add_parser("conj", parents=[common], help="K_n-conjugacy of H into G")
    conj.add_argument("--H", dest="H", required=True, help="Generators of H")
    conj.add_argument("--G", dest="G", required=True, help="Generators of G")
    conj.add_argument("--mode", choices=("elementwise", "global", "p"), default="p")

    markov = commands.add_parser("markov", parents=[common], help="Markov group M_n")
    markov.add_argument("--compare", action="store_true", help="Compare the projection with M_{n-1}")

    sweep = commands.add_parser("sweep", parents=[common], help="Exhaustive or sampled sweeps")
    sweep.add_argument("experiment", choices=(THEOREM, CONJECTURE, LEMMAS))
    mode = sweep.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sampled", action="store_true")
    sweep.add_argument("--markov", action="store_true", help="Restrict G to the Markov group")
    sweep.add_argument("--progress", action="store_true", help="Show a progress bar")
    sweep.add_argument("--no-save", action="store_true", help="Do not store the report")

    replay_cmd = commands.add_parser("replay", parents=[common], help="Re-run stored pair records")
    replay_cmd.add_argument("record", help="JSONL file with pair records, or '-' for stdin")
    replay_cmd.add_argument("--index", type=int, default=None, help="Only the record with this index")

    return parser


# --- saída --------------------------------------------------------------------


def _emit(args, line: str, text_lines: Sequence[str]):
    """Texto em stdout, ou a linha JSON; --out recebe a linha JSON."""
    if args.format == "jsonl":
        print(line)
    else:
        for text in text_lines:
            print(text)
    if args.out:
        Path(args.out).write_text(line + "\n", encoding="utf-8")


def _depth(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


# --- comandos -----------------------------------------------------------------


def _element_summary(x) -> dict[str, Any]:
    v, s = x.semidirect
    return {
        "cycles": format_element(x, "cycles"),
        "images": format_element(x, "images"),
        "portrait": format_element(x, "portrait"),
        "order": element_order(x),
        "transitive": is_transitive(x),
        "in_kn": is_in_Kn(x),
        "v": str(v),
        "s": format_cycles(s),
        "projection": format_cycles(project(x)),
    }


def cmd_elem(args) -> int:
    n = _depth(args)
    x = parse_element(args.x, n)
    y = parse_element(args.y, n) if args.y is not None else None
    if args.op in ("mul", "conj") and y is None:
        raise UsageError(f"--op {args.op} needs a second element")

    if args.op == "show":
        payload = _element_summary(x)
        _emit(args, json.dumps(payload), [f"{key}: {value}" for key, value in payload.items()])
        return 0
    if args.op == "inv":
        result = inverse(x)
    elif args.op == "mul":
        result = multiply(x, y)
    else:
        result = conjugate(x, y)
    text = format_element(result, args.style)
    _emit(args, json.dumps({"op": args.op, "result": text}), [text])
    return 0


def _group_field(G, name: str) -> Any:
    if name == "order":
        return G.order
    if name == "elements":
        return [format_cycles(g) for g in G.elements]
    if name == "frattini":
        data = frattini(G)
        return {"order": data.phi.order, "rank": data.quotient_rank,
                "generators": [format_cycles(g) for g in data.phi.generators]}
    if name == "maximals":
        return [{"order": M.order, "generators": [format_cycles(g) for g in M.generators]}
                for M in maximal_subgroups(G)]
    if name == "kn":
        K = intersect_with_Kn(G)
        return {"order": K.order, "generators": [format_cycles(g) for g in K.generators]}
    if name == "centralizer":
        return {"order": centralizer_in_Kn(G).order, "space": str(centralizer_space(G, G.depth))}
    if name == "rank":
        return [format_cycles(g) for g in minimal_generating_set(G)]
    if name == "cyclic":
        return is_cyclic(G)
    return contains_transitive(G)


def cmd_group(args) -> int:
    n = _depth(args)
    G = closure(parse_generator_list(args.gens, n), n)
    fields = [f.strip() for f in args.show.split(",") if f.strip()]
    unknown = [f for f in fields if f not in GROUP_FIELDS]
    if unknown or not fields:
        raise UsageError(f"unknown --show fields: {unknown}")

    values = {name: _group_field(G, name) for name in fields}
    payload = SubgroupRecord.from_subgroup(G).model_dump() | values
    if len(fields) == 1:
        lines = [str(values[fields[0]])]
    else:
        lines = [f"{name}: {value}" for name, value in values.items()]
    _emit(args, json.dumps(payload), lines)
    return 0


def cmd_conj(args) -> int:
    n = _depth(args)
    H = closure(parse_generator_list(args.H, n), n)
    G = closure(parse_generator_list(args.G, n), n)
    check = property_p_check(H, G)
    record = PairRecord.from_check(PROPERTY_P, 0, H, G, check, full=True)
    elementwise, global_ = check.report.elementwise, check.report.global_

    lines = []
    if args.mode in ("elementwise", "p"):
        lines.append(f"elementwise: {str(elementwise.verdict).lower()}")
    if args.mode in ("global", "p"):
        lines.append(f"global: {str(global_.verdict).lower()}")
        if global_.witness is not None:
            lines.append(f"witness: {format_cycles(global_.witness.element)} [{global_.witness}]")
        else:
            lines.append(f"searched: {global_.candidates_searched} candidates, exhausted")

    if args.mode == "p":
        lines.append(f"P(H,G): {str(record.p_holds).lower()}")
    _emit(args, record.to_line(), lines)
    return 0


def cmd_markov(args) -> int:
    n = _depth(args)
    spec = markov_group(n)
    payload: dict[str, Any] = {
        "depth": n,
        "generators": [format_cycles(g) for g in spec.generators],
        "order": spec.order,
        "contains_transitive": markov_contains_transitive(spec),
    }
    if args.compare:
        observation = projection_observation(n)
        payload["projection"] = {
            "projected_order": observation.projected_order,
            "previous_order": observation.previous_order,
            "equal": observation.equal,
        }
    _emit(args, json.dumps(payload), [f"{key}: {value}" for key, value in payload.items()])
    return 0


def _sweep_config(args) -> SweepConfig:
    overrides = {
        "depth": args.n,
        "seed": args.seed,
        "samples": args.samples,
        "jobs": args.jobs,
        "progress": args.progress or None,
        "markov_target": args.markov or None,
    }
    if args.exhaustive:
        overrides["mode"] = SweepMode.EXHAUSTIVE
    elif args.sampled:
        overrides["mode"] = SweepMode.SAMPLED
    if args.config:
        return SweepConfig.from_file(args.config, **overrides)
    return SweepConfig(**{key: value for key, value in overrides.items() if value is not None})


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    if args.experiment == LEMMAS:
        report, records = verify_lemma_suite(config.depth, config)
    else:
        report, records = run_pair_sweep(args.experiment, config)

    if args.format == "jsonl":
        for line in render_lines(report.header, records):
            print(line)
    else:
        header = report.header
        print(f"experiment: {header.experiment}  n={header.depth}  mode={header.mode}  seed={header.seed}")
        print(f"scope: {header.scope}")
        print(f"{'verdict':<16}{'count':>8}")
        for verdict, count in report.counts.items():
            print(f"{verdict:<16}{count:>8}")
        print(f"counterexamples: {report.counterexample_count}  violations: {report.violation_count}")
        print(f"wall time: {report.wall_time:.2f}s")

    if not args.no_save:
        store = ReportStore(args.out or Config.REPORTS_DIR)
        path = store.save_run(report, records)
        if path is None:
            print(f"error: could not save the {args.experiment} report under {store.root}", file=sys.stderr)
            return 1
        if args.format == "text":
            print(f"report: {path}")
    return report.exit_code


def cmd_replay(args) -> int:
    if args.record == "-":
        lines = sys.stdin.read().splitlines()
    else:
        lines = Path(args.record).read_text(encoding="utf-8").splitlines()

    records = [parse_record(line) for line in lines if line.strip()]
    pairs = [r for r in records if isinstance(r, PairRecord)]
    if args.index is not None:
        pairs = [r for r in pairs if r.index == args.index]
    if not pairs:
        raise UsageError("no pair records to replay")

    failed = 0
    for record in pairs:
        result = replay(record)
        failed += not result.matches
        payload = {"index": record.index, "matches": result.matches, "verdict": result.verdict,
                   "mismatches": result.mismatches}
        if args.format == "jsonl":
            print(json.dumps(payload))
        else:
            status = "match" if result.matches else "MISMATCH"
            print(f"#{record.index}: {status} ({result.verdict})")
            for reason in result.mismatches:
                print(f"  {reason}")
    return 2 if failed else 0


COMMANDS = {
    "elem": cmd_elem,
    "group": cmd_group,
    "conj": cmd_conj,
    "markov": cmd_markov,
    "sweep": cmd_sweep,
    "replay": cmd_replay,
}


def _configure_logging(level: str):
    logging.basicConfig(level=level.upper(), format=Config.LOG_FORMAT, stream=sys.stderr)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Executa um comando; 0 ok, 2 contraexemplo ou divergência, 1 erro."""
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except (WreathError, ValueError, OSError) as e:
        logger.error(f"Error running command: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
