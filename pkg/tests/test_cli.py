import json
import pytest
import statusnet.compstat
from statusnet.cli import build_parser, main

pytestmark = pytest.mark.integration

@pytest.fixture
def config_file(tmp_path, network_dict):
    """Base-model config next to its network file"""
    (tmp_path / "net.json").write_text(json.dumps(network_dict))
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"network": "net.json", "params": {"alpha": 2.0, "beta": 1.0, "gamma": 1.0}}))
    return path

@pytest.fixture
def communities_file(tmp_path):
    path = tmp_path / "communities.json"
    path.write_text(
        json.dumps(
            {
                "communities": {"N": 4, "size": 3},
                "params": {"alpha": 2.0, "beta": 1.0, "gamma": 1.0},
                "experiment": {"kind": "prop2", "shocked_community": 1},
            }
        )
    )
    return path

class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_repeatable_overrides(self):
        args = build_parser().parse_args(["solve", "-c", "x.json", "--set", "a=1", "--set", "b=2"])
        assert args.overrides == ["a=1", "b=2"]
        assert args.method == "closed_form"

class TestSolveCommand:
    def test_writes_solution(self, config_file, tmp_path):
        out = tmp_path / "solution.json"
        assert main(["solve", "-c", str(config_file), "-o", str(out)]) == 0
        solution = json.loads(out.read_text())
        assert solution["x"] == pytest.approx([0.6, 0.6, 6 / 11, 6 / 11], abs=1e-12)
        assert solution["Y_A"] == pytest.approx(1.1)
        assert solution["assumptions"] == {"a1": True, "a2": [True, True, True, True]}

    def test_stdout_and_oracle(self, config_file, capsys):
        assert main(["solve", "-c", str(config_file), "--method", "best_response"]) == 0
        solution = json.loads(capsys.readouterr().out)
        assert solution["method"] == "best_response"
        assert solution["x"][0] == pytest.approx(0.6, abs=1e-8)

    def test_csv_output(self, config_file, tmp_path):
        out = tmp_path / "solution.csv"
        assert main(["solve", "-c", str(config_file), "-o", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header == "agent_id,identity,income,x,R,u,Y"

    def test_override(self, config_file, capsys):
        assert main(["solve", "-c", str(config_file), "--set", "params.alpha=2.5"]) == 0
        solution = json.loads(capsys.readouterr().out)
        assert solution["x"][0] != pytest.approx(0.6)

    def test_assumption_one_exit_code(self, tmp_path, network_dict, capsys):
        network_dict["links"] = [[0, 1, 2.4], [1, 0, 2.4]]
        path = tmp_path / "dense.json"
        path.write_text(json.dumps({"network": network_dict, "params": {"alpha": 2.0, "beta": 1.0, "gamma": 1.0}}))
        assert main(["solve", "-c", str(path)]) == 2
        assert capsys.readouterr().err.strip().splitlines()[-1].startswith("E:ASSUMPTION1:")

    def test_malformed_config(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{")
        assert main(["solve", "-c", str(path)]) == 1
        assert "E:SCHEMA:" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["solve", "-c", str(tmp_path / "absent.json")]) == 1

    def test_no_partial_file_on_failure(self, tmp_path, network_dict):
        network_dict["links"] = [[0, 1, 2.4], [1, 0, 2.4]]
        path = tmp_path / "dense.json"
        path.write_text(json.dumps({"network": network_dict, "params": {"alpha": 2.0, "beta": 1.0, "gamma": 1.0}}))
        out = tmp_path / "solution.json"
        main(["solve", "-c", str(path), "-o", str(out)])
        assert not out.exists()

class TestGenerateCommand:
    def test_same_seed_same_bytes(self, capsys):
        main(["generate", "--kind", "random_block", "--seed", "7", "--ja", "5", "--jb", "5"])
        first = capsys.readouterr().out
        main(["generate", "--kind", "random_block", "--seed", "7", "--ja", "5", "--jb", "5"])
        assert capsys.readouterr().out == first
        assert len(json.loads(first)["agents"]) == 10

    def test_file_and_report(self, tmp_path, capsys):
        out = tmp_path / "net.json"
        assert main(["generate", "--n", "20", "--size", "3", "--seed", "7", "-o", str(out)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["J"] == 120
        assert report["assumption_2"] is True
        assert report["rho_H"] < 1.0
        assert len(json.loads(out.read_text())["agents"]) == 120

    def test_bad_parameters(self, capsys):
        assert main(["generate", "--alpha", "0.5", "--gamma", "1.0"]) == 1
        assert "E:SCHEMA:" in capsys.readouterr().err

class TestExperimentCommand:
    def test_prop2(self, communities_file, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["experiment", "-c", str(communities_file), "-o", str(out), "--jobs", "2"]) == 0
        printed = json.loads(capsys.readouterr().out)
        assert printed["violations"] == 0
        assert printed["checks"] > 0
        assert json.loads((out / "summary.json").read_text())["violations"] == 0
        assert (out / "report.csv").exists()

    def test_same_config_same_bytes(self, communities_file, tmp_path, capsys):
        for name in ("first", "second"):
            assert main(["experiment", "-c", str(communities_file), "-o", str(tmp_path / name), "--jobs", "3"]) == 0
        for output in ("report.csv", "summary.json"):
            assert (tmp_path / "first" / output).read_bytes() == (tmp_path / "second" / output).read_bytes()

    def test_other_kind_by_override(self, config_file, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["experiment", "-c", str(config_file), "-o", str(out), "--set", "experiment.kind=compstat"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["checks"] == 4 * 4 + 2 * 2 + 2 * 2

    def test_sign_violation_exit_code(self, config_file, tmp_path, monkeypatch, capsys):
        monkeypatch.setattr(statusnet.compstat, "sign_ok", lambda delta, expected, tol: False)
        code = main(["experiment", "-c", str(config_file), "-o", str(tmp_path / "out")])
        assert code == 3
        assert json.loads(capsys.readouterr().out)["violations"] > 0

    def test_unknown_kind(self, config_file, tmp_path, capsys):
        code = main(["experiment", "-c", str(config_file), "-o", str(tmp_path), "--set", "experiment.kind=nope"])
        assert code == 1
        assert "E:SCHEMA:" in capsys.readouterr().err

class TestNbarCommand:
    def test_prints_threshold(self, communities_file, capsys):
        assert main(["nbar", "-c", str(communities_file)]) == 0
        assert json.loads(capsys.readouterr().out)["N_bar"] == 2

    def test_needs_communities(self, config_file, capsys):
        assert main(["nbar", "-c", str(config_file)]) == 1
        assert "E:SCHEMA:" in capsys.readouterr().err
