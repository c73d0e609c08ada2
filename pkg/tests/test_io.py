import json
import numpy as np
import pytest
from statusnet.equilibrium import solve_closed_form
from statusnet.errors import DuplicateLink, SchemaError, SelfLink
from statusnet.io import (
    REPORT_COLUMNS,
    apply_overrides,
    atomic_write_text,
    dump_network,
    dumps_json,
    frame_to_csv,
    load_config,
    load_network,
    network_from_dict,
    network_to_dict,
    reports_summary,
    reports_to_frame,
    solution_to_frame,
)
from statusnet.models import ExperimentReport, Identity, ModelKind, SignCheck

pytestmark = pytest.mark.unit

@pytest.fixture
def report():
    rows = [
        SignCheck(
            experiment_id="demo",
            agent_id=j,
            identity=Identity.A,
            baseline_x=1.0,
            shocked_x=1.5,
            delta=0.5,
            expected_sign=1,
            sign_ok=True,
            extra={"C_before": 0.1 * j},
        )
        for j in range(3)
    ]
    return ExperimentReport(experiment_id="demo", kind="demo", rows=rows, summary={"count": np.int64(3)})

class TestNetworkFiles:
    def test_from_dict(self, network_dict):
        net = network_from_dict(network_dict)
        assert net.J == 4
        assert net.G[0, 1] == 0.5
        assert net.identities[2] is Identity.B

    def test_agents_in_any_order(self, network_dict):
        network_dict["agents"].reverse()
        assert network_from_dict(network_dict).identities[0] is Identity.A

    def test_bad_ids(self, network_dict):
        network_dict["agents"][3]["id"] = 7
        with pytest.raises(SchemaError):
            network_from_dict(network_dict)

    def test_unknown_agent_in_link(self, network_dict):
        network_dict["links"].append([0, 9, 0.1])
        with pytest.raises(SchemaError):
            network_from_dict(network_dict)

    def test_self_link(self, network_dict):
        network_dict["links"].append([2, 2, 0.1])
        with pytest.raises(SelfLink):
            network_from_dict(network_dict)

    def test_duplicate_link(self, network_dict):
        network_dict["links"].append([0, 1, 0.3])
        with pytest.raises(DuplicateLink):
            network_from_dict(network_dict)

    def test_missing_field(self, network_dict):
        del network_dict["agents"][0]["income"]
        with pytest.raises(SchemaError):
            network_from_dict(network_dict)

    def test_file_round_trip(self, network_dict, tmp_path):
        path = tmp_path / "net.json"
        dump_network(network_from_dict(network_dict), path)
        assert load_network(path).G[1, 0] == 0.5
        assert network_to_dict(load_network(path))["links"] == [[0, 1, 0.5], [1, 0, 0.5]]

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            load_network(path)

class TestConfigs:
    def test_overrides(self):
        data = {"params": {"alpha": 2.0}, "experiment": "solve"}
        apply_overrides(data, ["params.gamma=0.5", "experiment.target=3", "output.format=csv"])
        assert data["params"] == {"alpha": 2.0, "gamma": 0.5}
        assert data["experiment"] == {"kind": "solve", "target": 3}
        assert data["output"] == {"format": "csv"}

    def test_override_needs_equals(self):
        with pytest.raises(SchemaError):
            apply_overrides({}, ["params.alpha"])

    def test_relative_network_path(self, network_dict, tmp_path):
        (tmp_path / "net.json").write_text(json.dumps(network_dict))
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"network": "net.json", "params": {"alpha": 2, "beta": 1, "gamma": 1}}))
        config = load_config(config_path)
        assert config.network == str(tmp_path / "net.json")
        assert config.model is ModelKind.BASE
        assert config.experiment.kind == "solve"

    def test_missing_network_file(self, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"network": "absent.json"}))
        with pytest.raises(SchemaError):
            load_config(config_path)

    def test_invalid_field(self, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"model": "unknown"}))
        with pytest.raises(SchemaError) as excinfo:
            load_config(config_path)
        assert "model" in str(excinfo.value)

class TestWriting:
    def test_atomic_write_leaves_no_temp_files(self, tmp_path):
        target = tmp_path / "out" / "x.json"
        atomic_write_text(target, "first\n")
        atomic_write_text(target, "second\n")
        assert target.read_text() == "second\n"
        assert [p.name for p in target.parent.iterdir()] == ["x.json"]

    def test_canonical_json(self):
        assert dumps_json({"b": np.float64(1.5), "a": np.int64(2)}) == '{\n  "a": 2,\n  "b": 1.5\n}\n'

class TestReports:
    def test_frame_columns(self, report):
        frame = reports_to_frame([report])
        assert list(frame.columns) == REPORT_COLUMNS + ["C_before"]
        assert len(frame) == 3
        assert frame["identity"].tolist() == ["A", "A", "A"]

    def test_csv(self, report):
        text = frame_to_csv(reports_to_frame([report]))
        lines = text.splitlines()
        assert lines[0].split(",")[:2] == ["experiment_id", "agent_id"]
        assert len(lines) == 4
        assert "\r" not in text

    def test_summary(self, report):
        summary = reports_summary([report, report])
        assert summary["checks"] == 6
        assert summary["violations"] == 0
        assert json.loads(dumps_json(summary))["experiments"][0]["count"] == 3

    def test_solution_frame(self, four_agents, params):
        frame = solution_to_frame(solve_closed_form(four_agents, params), four_agents)
        assert list(frame.columns) == ["agent_id", "identity", "income", "x", "R", "u", "Y"]
        assert frame["Y"].iloc[0] == pytest.approx(1.1)
