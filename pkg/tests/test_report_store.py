import pytest

from src.errors import ParseError
from src.harness import THEOREM, SweepConfig, SweepMode, run_pair_sweep, verify_lemma_suite
from src.records import CheckRecord, PairRecord, SweepHeader
from src.report_store import ReportStore, render_lines


@pytest.fixture
def theorem_run():
    return run_pair_sweep(THEOREM, SweepConfig(depth=2, mode=SweepMode.EXHAUSTIVE))


def test_save_and_load_run(reports_dir, theorem_run):
    report, records = theorem_run
    store = ReportStore(reports_dir)
    path = store.save_run(report, records, timestamp="20240101T000000")
    assert path == reports_dir / "theorem" / f"20240101T000000-{report.header.seed}.jsonl"
    assert (reports_dir / "theorem" / "summary.json").is_file()

    header, loaded = store.load_run(path)
    assert header == report.header
    assert [r.to_line() for r in loaded] == [r.to_line() for r in records]
    assert all(isinstance(r, PairRecord) for r in loaded)


def test_render_lines_starts_with_header(theorem_run):
    report, records = theorem_run
    lines = render_lines(report.header, records)
    assert len(lines) == len(records) + 1
    assert '"kind":"header"' in lines[0]


def test_summary(reports_dir, theorem_run):
    report, records = theorem_run
    store = ReportStore(reports_dir)
    assert store.load_summary(THEOREM) is None
    store.save_run(report, records)
    summary = store.load_summary(THEOREM)
    assert summary.counts == report.counts
    assert summary.exit_code == 0


def test_lemma_runs_store_check_records(reports_dir):
    report, records = verify_lemma_suite(1)
    store = ReportStore(reports_dir)
    path = store.save_run(report, records, timestamp="20240101T000000")
    header, loaded = store.load_run(path)
    assert header.experiment == "lemmas"
    assert all(isinstance(r, CheckRecord) for r in loaded)


def test_list_and_delete_runs(reports_dir, theorem_run):
    report, records = theorem_run
    store = ReportStore(reports_dir)
    older = store.save_run(report, records, timestamp="20240101T000000")
    newer = store.save_run(report, records, timestamp="20240102T000000")
    runs = store.list_runs()
    assert [run["path"] for run in runs] == [str(newer), str(older)]
    assert runs[0]["experiment"] == THEOREM
    assert runs[0]["seed"] == report.header.seed
    assert store.list_runs("conjecture") == []

    assert store.delete_run(older)
    assert not store.delete_run(older)
    assert len(store.list_runs(THEOREM)) == 1


def test_load_rejects_malformed_files(reports_dir):
    store = ReportStore(reports_dir)
    empty = reports_dir / "empty.jsonl"
    empty.write_text("")
    with pytest.raises(ParseError):
        store.load_run(empty)

    headless = reports_dir / "headless.jsonl"
    headless.write_text('{"kind": "check", "experiment": "lemmas", "index": 0, "depth": 1, '
                        '"name": "lemma_3_5", "verdict": "HOLDS"}\n')
    with pytest.raises(ParseError):
        store.load_run(headless)

    garbage = reports_dir / "garbage.jsonl"
    header = SweepHeader(experiment="theorem", depth=2, mode="SAMPLED", samples=1, seed=1, jobs=1)
    garbage.write_text(header.to_line() + "\nnot json\n")
    with pytest.raises(ParseError):
        store.load_run(garbage)


def test_same_timestamp_does_not_overwrite(reports_dir, theorem_run):
    report, records = theorem_run
    store = ReportStore(reports_dir)
    first = store.save_run(report, records, timestamp="20240101T000000")
    second = store.save_run(report, records, timestamp="20240101T000000")
    assert first != second
    assert second.name == f"20240101T000000.1-{report.header.seed}.jsonl"
    assert [run["path"] for run in store.list_runs(THEOREM)] == [str(second), str(first)]
    assert store.load_run(second)[0] == report.header


def test_default_timestamps_have_microseconds(reports_dir, theorem_run):
    report, records = theorem_run
    path = ReportStore(reports_dir).save_run(report, records)
    timestamp = path.stem.rpartition("-")[0]
    assert len(timestamp) == len("20240101T000000000000")


def test_save_failure_returns_none(reports_dir, theorem_run):
    report, records = theorem_run
    store = ReportStore(reports_dir)
    (reports_dir / THEOREM).write_text("not a directory")
    assert store.save_run(report, records) is None
