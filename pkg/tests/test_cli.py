"""End-to-end tests of the command-line interface."""

import json

import numpy as np
import pytest

from warmpce.cli import main
from warmpce.problems import load_tsp_instance


@pytest.fixture
def tsp_dir(tmp_path):
    out = tmp_path / "instances"
    assert main(["gen", "tsp", "--count", "2", "--size", "5", "--seed", "3",
                 "--out", str(out)]) == 0
    return out


@pytest.fixture
def graph_dir(tmp_path):
    out = tmp_path / "graphs"
    assert main(["gen", "graph", "--count", "1", "--size", "8", "--seed", "3",
                 "--out", str(out)]) == 0
    return out


class TestGen:
    def test_writes_instances_and_manifest(self, tsp_dir):
        files = sorted(tsp_dir.glob("tsp_*.json"))
        assert len(files) == 2
        assert (tsp_dir / "manifest.json").exists()
        load_tsp_instance(files[0])  # parses and validates


class TestSolve:
    def test_solve_runs_and_reports(self, tsp_dir, capsys):
        instance = sorted(tsp_dir.glob("tsp_*.json"))[0]
        code = main([
            "solve", str(instance), "--method", "warm-pce", "--layers", "1",
            "--inits", "2", "--seed", "1", "--max-evals", "60",
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert "best of 2" in out
        assert "optimal tour length" in out

    def test_no_postprocess_flag(self, tsp_dir):
        instance = sorted(tsp_dir.glob("tsp_*.json"))[0]
        code = main([
            "solve", str(instance), "--method", "pce", "--layers", "1",
            "--inits", "1", "--seed", "1", "--max-evals", "40", "--no-postprocess",
        ])
        assert code == 0


class TestGw:
    def test_prints_bias(self, graph_dir, capsys):
        graph = sorted(graph_dir.glob("graph_*.json"))[0]
        code = main(["gw", str(graph), "--roundings", "50", "--seed", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "best-of-50 cut" in out
        assert "regularized bits" in out


class TestOracle:
    def test_tsp(self, tsp_dir, capsys):
        instance = sorted(tsp_dir.glob("tsp_*.json"))[0]
        assert main(["oracle", "tsp", str(instance)]) == 0
        assert "optimal tour" in capsys.readouterr().out

    def test_maxcut(self, graph_dir, capsys):
        graph = sorted(graph_dir.glob("graph_*.json"))[0]
        assert main(["oracle", "maxcut", str(graph)]) == 0
        assert "optimal cut" in capsys.readouterr().out

    def test_qubo(self, tsp_dir, capsys):
        instance = sorted(tsp_dir.glob("tsp_*.json"))[0]
        assert main(["oracle", "qubo", str(instance)]) == 0
        assert "optimal objective" in capsys.readouterr().out

    def test_qubo_matches_tsp_optimum(self, tsp_dir, capsys):
        instance = sorted(tsp_dir.glob("tsp_*.json"))[0]
        main(["oracle", "tsp", str(instance)])
        tsp_out = capsys.readouterr().out
        main(["oracle", "qubo", str(instance)])
        qubo_out = capsys.readouterr().out
        tsp_opt = float(tsp_out.split("optimal length: ")[1].strip())
        qubo_opt = float(qubo_out.split("optimal objective: ")[1].splitlines()[0])
        assert abs(tsp_opt - qubo_opt) < 1e-9


class TestSweepAndBench:
    def test_sweep_writes_outputs(self, graph_dir, tmp_path, capsys):
        out = tmp_path / "sweep_out"
        code = main([
            "sweep", "--graphs", str(graph_dir), "--inits", "1",
            "--epsilons", "0.2,0.5", "--layers", "1", "--seed", "4",
            "--max-evals", "40", "--out", str(out),
        ])
        assert code == 0
        assert (out / "sweep_records.csv").exists()
        assert (out / "epsilon_sweep.svg").exists()

    def test_bench_writes_outputs(self, tsp_dir, tmp_path):
        out = tmp_path / "bench_out"
        code = main([
            "bench", "--instances", str(tsp_dir), "--inits", "1",
            "--depths", "1", "--seed", "4", "--max-evals", "40",
            "--out", str(out),
        ])
        assert code == 0
        for name in (
            "records.csv", "summary.csv", "ratio_vs_depth.svg",
            "success_vs_depth.svg", "wins_ties_losses.svg",
        ):
            assert (out / name).exists()

    def test_report_from_saved_records(self, tsp_dir, tmp_path):
        bench_out = tmp_path / "bench_out"
        main([
            "bench", "--instances", str(tsp_dir), "--inits", "1", "--depths", "1",
            "--seed", "4", "--max-evals", "40", "--out", str(bench_out),
        ])
        report_out = tmp_path / "report_out"
        code = main([
            "report", "--records", str(bench_out / "records.csv"),
            "--out", str(report_out),
        ])
        assert code == 0
        assert (report_out / "summary.csv").read_bytes() == (
            bench_out / "summary.csv"
        ).read_bytes()


class TestErrors:
    def test_missing_file_nonzero_exit(self, tmp_path, capsys):
        code = main(["oracle", "tsp", str(tmp_path / "nope.json")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_instance_dir(self, tmp_path, capsys):
        code = main([
            "bench", "--instances", str(tmp_path), "--out", str(tmp_path / "o"),
        ])
        assert code == 1
