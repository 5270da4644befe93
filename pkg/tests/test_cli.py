import json

import pytest

from cli import run


def output(capsys):
    return capsys.readouterr().out.splitlines()


def test_conj_example(capsys):
    code = run(["conj", "--n", "2", "--H", "(1,3)(2,4)", "--G", "(1,4)(2,3)"])
    assert code == 0
    assert output(capsys) == [
        "elementwise: true",
        "global: true",
        "witness: (1,2) [10]",
        "P(H,G): true",
    ]


def test_conj_failure_reports_the_search(capsys):
    assert run(["conj", "--n", "2", "--H", "(1,3)(2,4)", "--G", "(1,2)", "--mode", "global"]) == 0
    assert output(capsys) == ["global: false", "searched: 4 candidates, exhausted"]


def test_conj_jsonl(capsys):
    run(["conj", "--n", "2", "--H", "(1,3)(2,4)", "--G", "(1,4)(2,3)", "--format", "jsonl"])
    [line] = output(capsys)
    record = json.loads(line)
    assert record["global"] is True
    assert record["witness"] == "10"
    assert record["elementwise_witnesses"]["(1,3)(2,4)"] == "01"


def test_group_order(capsys):
    assert run(["group", "--n", "2", "--gens", "(1,3,2,4),(1,2)", "--show", "order"]) == 0
    assert output(capsys) == ["8"]


def test_group_fields(capsys):
    run(["group", "--n", "2", "--gens", "(1,3,2,4),(1,2)", "--show", "frattini,kn", "--format", "jsonl"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["order"] == 8
    assert payload["frattini"]["order"] == 2
    assert payload["frattini"]["rank"] == 2
    assert payload["kn"]["order"] == 4


def test_elem_operations(capsys):
    assert run(["elem", "--n", "2", "(1,2)", "(1,3)(2,4)", "--op", "mul"]) == 0
    assert output(capsys) == ["(1,3,2,4)"]
    run(["elem", "--n", "2", "(1,3,2,4)", "--op", "inv"])
    assert output(capsys) == ["(1,4,2,3)"]
    run(["elem", "--n", "2", "(1,3)(2,4)", "--op", "inv", "--style", "portrait"])
    assert output(capsys) == ["4"]


def test_elem_show(capsys):
    run(["elem", "--n", "2", "(1,3,2,4)", "--format", "jsonl"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["order"] == 4
    assert payload["transitive"] is True
    assert payload["in_kn"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["group", "--n", "2"],
        ["elem", "(1,2)"],
        ["elem", "--n", "2", "(1,3)"],
        ["elem", "--n", "2", "(1,2)", "--op", "mul"],
        ["group", "--n", "2", "--gens", "(1,2)", "--show", "colour"],
        ["frobnicate"],
        ["sweep", "theorem", "--n", "4", "--exhaustive", "--no-save"],
    ],
)
def test_errors_exit_with_1(argv, capsys):
    assert run(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_markov(capsys):
    assert run(["markov", "--n", "3", "--format", "jsonl"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["order"] == 64
    assert payload["contains_transitive"] is True
    run(["markov", "--n", "2", "--compare", "--format", "jsonl"])
    assert json.loads(capsys.readouterr().out)["projection"]["equal"] is True


def test_sweep_saves_a_replayable_report(tmp_path, capsys):
    out = tmp_path / "reports"
    assert run(["sweep", "theorem", "--n", "2", "--exhaustive", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "counterexamples: 0" in text
    [path] = list((out / "theorem").glob("*.jsonl"))

    assert run(["replay", str(path)]) == 0
    assert all(line.endswith("(P_HOLDS)") or line.endswith("(VACUOUS)") for line in output(capsys))


def test_replay_mismatch_exits_with_2(tmp_path, capsys):
    run(["conj", "--n", "2", "--H", "(1,3)(2,4)", "--G", "(1,4)(2,3)", "--format", "jsonl"])
    record = json.loads(capsys.readouterr().out)
    record["witness"] = "00"
    path = tmp_path / "tampered.jsonl"
    path.write_text(json.dumps(record) + "\n")
    assert run(["replay", str(path)]) == 2
    assert "MISMATCH" in capsys.readouterr().out


def test_lemma_sweep_in_jsonl(capsys):
    assert run(["sweep", "lemmas", "--n", "1", "--format", "jsonl", "--no-save"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert json.loads(lines[0])["kind"] == "header"
    assert all(json.loads(line)["kind"] == "check" for line in lines[1:])


def test_sweep_from_config_file(tmp_path, capsys):
    config = tmp_path / "sweep.env"
    config.write_text("DEPTH=2\nSAMPLES=4\nSEED=9\n")
    assert run(["sweep", "conjecture", "--config", str(config), "--format", "jsonl", "--no-save"]) == 0
    header = json.loads(capsys.readouterr().out.splitlines()[0])
    assert header["seed"] == 9
    assert header["samples"] == 4
    assert header["mode"] == "SAMPLED"


def test_sweep_exits_with_1_when_the_report_cannot_be_saved(tmp_path, capsys):
    out = tmp_path / "reports"
    out.mkdir()
    (out / "theorem").write_text("not a directory")
    assert run(["sweep", "theorem", "--n", "2", "--exhaustive", "--out", str(out)]) == 1
    captured = capsys.readouterr()
    assert "error:" in captured.err
    assert "report:" not in captured.out
