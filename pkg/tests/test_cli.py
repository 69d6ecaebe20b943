import json
import subprocess
import sys

import numpy as np
import pytest

from gamebounds.cli import main
from gamebounds.games import chsh
from gamebounds.gamegraph import build_game_graph, parse_dimacs
from gamebounds.independence import classical_value
from gamebounds.quantum import (QuantumIndependentSet, qis_from_vertex_set,
                                qis_to_dict, strategy_from_dict,
                                winning_probability)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_chsh_text(capsys):
    code, out, _ = run_cli(capsys, "analyze", "chsh")
    assert code == 0
    assert "alpha: 3" in out
    assert "omega_classical: 0.75 (= 3/4)" in out
    assert "theta: 3.414213" in out
    assert "0.853553" in out
    assert "bell gap certified (theta/k > omega): true" in out


def test_analyze_chsh_json_schema(capsys):
    code, out, _ = run_cli(capsys, "analyze", "chsh", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["alpha"]["value"] == 3
    assert report["omega_exact"] == "3/4"
    assert report["theta"]["converged"] is True
    assert abs(report["theta_over_k"] - 0.8535533905932737) < 1e-4
    assert abs(report["xor_value"] - 0.8535533905932737) < 1e-6

    jsonschema = pytest.importorskip("jsonschema")
    import importlib.resources as resources
    schema = json.loads(resources.files("gamebounds")
                        .joinpath("report_schema.json").read_text())
    jsonschema.validate(report, schema)


def test_analyze_reports_are_byte_identical(capsys):
    _, out1, _ = run_cli(capsys, "analyze", "chsh", "--json")
    _, out2, _ = run_cli(capsys, "analyze", "chsh", "--json")
    assert out1 == out2
    _, text1, _ = run_cli(capsys, "analyze", "magic-square")
    _, text2, _ = run_cli(capsys, "analyze", "magic-square")
    assert text1 == text2


def test_analyze_rep2(capsys):
    code, out, _ = run_cli(capsys, "analyze", "chsh", "--rep", "2", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["graph"]["num_vertices"] == 64
    assert report["alpha"]["value"] == 10
    assert report["omega_classical"] == 0.625
    assert report["theta_over_k"] > 0.72855


def test_analyze_weighted_flag(capsys):
    code, out, _ = run_cli(capsys, "analyze", "chsh", "--weighted", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["weighted_pipeline"] is True
    assert abs(report["theta_over_k"] - 0.8535533905932737) < 1e-4


def test_analyze_file_and_parse_error(tmp_path, capsys):
    path = tmp_path / "game.json"
    path.write_text('{"name": "broken"')
    code, _, err = run_cli(capsys, "analyze", str(path))
    assert code == 1
    assert "error" in err
    code, _, err = run_cli(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 1


def test_analyze_export_graph(tmp_path, capsys):
    out_path = tmp_path / "graph.dimacs"
    code, _, _ = run_cli(capsys, "analyze", "chsh",
                         "--export-graph", str(out_path))
    assert code == 0
    graph = parse_dimacs(out_path.read_text())
    assert graph.n == 8 and graph.num_edges == 12
    sidecar = json.loads((tmp_path / "graph.dimacs.json").read_text())
    assert sidecar["num_vertices"] == 8
    assert sidecar["vertices"][0]["quadruple"] == [0, 0, 0, 0]


def test_catalog_list_and_emit(capsys):
    code, out, _ = run_cli(capsys, "catalog", "list")
    assert code == 0
    names = out.split()
    assert {"chsh", "magic-square", "isg-c5-t2"} <= set(names)
    code, out, _ = run_cli(capsys, "catalog", "emit", "chsh")
    assert code == 0
    from gamebounds.gameio import parse_game
    g = parse_game(out)
    assert np.array_equal(g.predicate, chsh().predicate)
    code, _, err = run_cli(capsys, "catalog", "emit", "nope")
    assert code == 1


def test_verify_qis_valid_and_invalid(tmp_path, capsys):
    g = chsh()
    gg = build_game_graph(g)
    witness = classical_value(g).alpha.witness
    good = tmp_path / "good.json"
    good.write_text(json.dumps(qis_to_dict(qis_from_vertex_set(gg, witness))))
    code, out, _ = run_cli(capsys, "verify-qis", "chsh", str(good))
    assert code == 0
    assert "valid" in out

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(qis_to_dict(qis_from_vertex_set(gg, [0, 1]))))
    code, out, _ = run_cli(capsys, "verify-qis", "chsh", str(bad))
    assert code == 3
    assert "violation" in out

    malformed = tmp_path / "malformed.json"
    malformed.write_text("{]")
    code, _, err = run_cli(capsys, "verify-qis", "chsh", str(malformed))
    assert code == 1


def test_lift_command(tmp_path, capsys):
    g = chsh()
    gg = build_game_graph(g)
    witness = classical_value(g).alpha.witness
    qis_path = tmp_path / "qis.json"
    qis_path.write_text(json.dumps(qis_to_dict(qis_from_vertex_set(gg, witness))))
    out_path = tmp_path / "strategy.json"
    code, out, _ = run_cli(capsys, "lift", "chsh", str(qis_path),
                           "--out", str(out_path))
    assert code == 0
    assert "winning probability: 0.75" in out
    strategy = strategy_from_dict(json.loads(out_path.read_text()))
    assert winning_probability(g, strategy) == pytest.approx(0.75, abs=1e-9)

    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(qis_to_dict(qis_from_vertex_set(gg, [0, 1]))))
    code, _, err = run_cli(capsys, "lift", "chsh", str(bad_path))
    assert code == 3


def test_analyze_magic_square(capsys):
    code, out, _ = run_cli(capsys, "analyze", "magic-square", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["alpha"]["value"] == 8
    assert report["omega_exact"] == "8/9"
    assert report["theta_over_k"] >= 0.9999
    assert report["xor_value"] is None


def test_analyze_nonconvergence_exit_code(capsys):
    code, out, _ = run_cli(capsys, "analyze", "chsh", "--max-iter", "5",
                           "--json")
    assert code == 2
    report = json.loads(out)
    assert report["theta"]["converged"] is False


def test_verify_qis_against_exported_graph(tmp_path, capsys):
    g = chsh()
    gg = build_game_graph(g)
    witness = classical_value(g).alpha.witness
    qis_path = tmp_path / "qis.json"
    qis_path.write_text(json.dumps(qis_to_dict(qis_from_vertex_set(gg, witness))))
    graph_path = tmp_path / "graph.dimacs"
    run_cli(capsys, "analyze", "chsh", "--export-graph", str(graph_path))
    code, out, _ = run_cli(capsys, "verify-qis", "chsh", str(qis_path),
                           "--graph", str(graph_path))
    assert code == 0
    assert "valid" in out


def test_analyze_never_winnable_game(tmp_path, capsys):
    path = tmp_path / "never.json"
    path.write_text(json.dumps({
        "name": "never", "nx": 2, "ny": 2, "na": 2, "nb": 2,
        "predicate": {"winning": []}}))
    code, out, _ = run_cli(capsys, "analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["omega_classical"] == 0.0
    assert report["theta_over_k"] == 0.0
    assert report["graph"]["num_vertices"] == 0


def test_cli_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "gamebounds.cli", "analyze", "chsh"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "omega_classical: 0.75" in proc.stdout


def test_reports_byte_identical_across_processes():
    runs = [subprocess.run(
        [sys.executable, "-m", "gamebounds.cli", "analyze", "chsh", "--json"],
        capture_output=True, text=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
