"""End-to-end CLI flows: gen, solve, verify, bench."""

import json

import pytest

from parityls.cli import main


def test_gen_solve_verify_roundtrip(tmp_path, capsys):
    instance = tmp_path / "instance.json"
    trace = tmp_path / "trace.json"
    report = tmp_path / "report.json"

    assert main(
        [
            "gen",
            "--kind",
            "random-parity",
            "--params",
            '{"objective": "coverage", "n_edges": 4, "n_vertices": 6, "rank": 3}',
            "--seed",
            "5",
            "--out",
            str(instance),
        ]
    ) == 0
    assert instance.exists()

    assert main(
        [
            "solve",
            "--instance",
            str(instance),
            "--mode",
            "hybrid",
            "--epsilon",
            "0.5",
            "--seed",
            "3",
            "--out",
            str(trace),
        ]
    ) == 0
    out = capsys.readouterr().out
    assert "selected:" in out and "value:" in out
    assert trace.exists()

    assert main(
        [
            "verify",
            "--instance",
            str(instance),
            "--trace",
            str(trace),
            "--out",
            str(report),
        ]
    ) == 0
    payload = json.loads(report.read_text())
    assert payload["ok"] is True
    assert any(c["name"] == "charging-chain" for c in payload["checks"])


def test_solve_reference_and_nonmonotone(tmp_path, capsys):
    instance = tmp_path / "cut.json"
    main(
        [
            "gen",
            "--kind",
            "random-parity",
            "--params",
            '{"objective": "cut", "n_edges": 4}',
            "--seed",
            "2",
            "--out",
            str(instance),
        ]
    )
    assert main(["solve", "--instance", str(instance), "--mode", "hybrid-reference"]) == 0
    assert main(["solve", "--instance", str(instance), "--mode", "nonmonotone"]) == 0
    out = capsys.readouterr().out
    assert "rounds:" in out


def test_bench_writes_csv_and_json(tmp_path, capsys):
    out = tmp_path / "batch"
    assert main(
        [
            "bench",
            "--generator",
            "random-parity",
            "--params",
            '{"count": 2, "objective": "modular"}',
            "--mode",
            "hybrid",
            "--trials",
            "3",
            "--seed",
            "4",
            "--out",
            str(out),
        ]
    ) == 0
    lines = (tmp_path / "batch.csv").read_text().splitlines()
    assert lines[0].startswith("instance_id,seed,alpha,solver")
    assert len(lines) == 7
    payload = json.loads((tmp_path / "batch.json").read_text())
    assert len(payload["rows"]) == 6
    assert len(payload["summary"]) == 2


def test_bench_requires_one_source(tmp_path):
    with pytest.raises(SystemExit):
        main(["bench", "--out", str(tmp_path / "x")])


def test_gen_prints_to_stdout_without_out(capsys):
    assert main(["gen", "--kind", "k-partition-intersection", "--seed", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "constraint" in payload and "objective" in payload
