import csv
import io
import json

import pytest

from looprate import families
from looprate.cli import main
from looprate.graph import graph_to_json


@pytest.fixture
def graph_file(tmp_path):
    def write(graph, rotation=None, name="g.json"):
        path = tmp_path / name
        path.write_text(json.dumps(graph_to_json(graph, rotation)))
        return str(path)
    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_exact_k3_and_c4(capsys, graph_file):
    code, out = run(capsys, ["exact", graph_file(*families.triangle())])
    d = json.loads(out)
    assert code == 0
    assert (d["tau"], d["rho"], d["lambda"]) == ("1/9", "4/9", "3")
    assert d["F1"] == "3" and d["unicycles"] == "1"
    code, out = run(capsys, ["exact", graph_file(*families.cycle(4))])
    d = json.loads(out)
    assert (d["tau"], d["rho"]) == ("1/16", "7/16")


def test_exact_float_backend(capsys, graph_file):
    code, out = run(capsys, ["exact", graph_file(*families.triangle()), "--backend", "float"])
    assert code == 0
    assert abs(json.loads(out)["rho"] - 4 / 9) < 1e-12


def test_exact_bridge_error(capsys, graph_file):
    from looprate.graph import WeightedGraph

    g = WeightedGraph([0, 1, 2, 3], [(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1)])
    rot = {0: [0, 2], 1: [0, 1], 2: [1, 2, 3], 3: [3]}
    code, out = run(capsys, ["exact", graph_file(g, rot)])
    assert code == 1
    assert json.loads(out)["error"] == "BridgePresent"


def test_table_square_csv(capsys):
    code, out = run(capsys, ["table", "square", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lattice", "tau", "lambda", "mean_lerw_loop", "rho", "delta_rho", "sand_density"]
    assert rows[1] == ["square", "1/16", "8", "16/5", "5/16", "5/4", "17/8"]


def test_table_all_and_unknown(capsys):
    code, out = run(capsys, ["table", "all"])
    assert code == 0 and len(json.loads(out)) == 9
    code, out = run(capsys, ["table", "pentagonal"])
    assert code == 1 and json.loads(out)["error"] == "UnknownLattice"


def test_table_weighted(capsys):
    code, out = run(capsys, ["table", "triakis", "--beta", "1"])
    assert json.loads(out)[0]["tau"] == "17/150"


def test_sample(capsys, graph_file, monkeypatch):
    path = graph_file(*families.triangle())
    argv = ["sample", path, "--steps", "20000", "--seed", "1"]
    code, first = run(capsys, argv)
    assert code == 0
    d = json.loads(first)
    assert abs(d["rho"]["estimate"] - 4 / 9) <= 3 * d["rho"]["stderr"]
    assert d["exact"]["rho"] == "4/9" and d["seed"] == 1
    _, second = run(capsys, argv)
    assert first == second
    code, out = run(capsys, ["sample", path, "--steps", "10"])
    assert code == 1 and json.loads(out)["error"] == "PreconditionFailed"


def test_sample_nan_is_null(capsys, graph_file):
    from looprate.graph import WeightedGraph

    g = WeightedGraph([0, 1], [(0, 1, 1), (0, 1, 1)])
    code, out = run(capsys, ["sample", graph_file(g), "--steps", "10000"])
    assert code == 0
    assert json.loads(out)["lambda"]["estimate"] is None


def test_sandpile(capsys, tmp_path):
    from looprate.graph import WeightedGraph

    g = WeightedGraph(["s", "v1", "v2"], [("v1", "v2", 1), ("v1", "s", 1), ("v2", "s", 1)], sink="s")
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"graph": graph_to_json(g), "heights": {"v1": 2, "v2": 2}}))
    code, out = run(capsys, ["sandpile", str(path)])
    d = json.loads(out)
    assert code == 0
    assert d["heights"] == {"v1": 1, "v2": 1} and d["topples"] == {"v1": 1, "v2": 1}
    assert d["recurrent"] is True and d["level"] == 1


def test_verify(capsys):
    code, out = run(capsys, ["verify"])
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["graphs"] > 10
    code, out = run(capsys, ["verify", "--n", "30"])
    assert code == 1 and json.loads(out)["error"] == "TooLarge"
    code, out = run(capsys, ["verify", "--n", "0"])
    assert code == 0 and json.loads(out)["graphs"] == 0 and "warning" in json.loads(out)


def test_lattice_check(capsys):
    code, out = run(capsys, ["lattice-check", "square", "--n", "16"])
    d = json.loads(out)
    assert code == 0
    assert d["patches"][0]["deviation"] < 5e-3


def test_missing_file(capsys):
    code, out = run(capsys, ["exact", "/nonexistent/graph.json"])
    assert code == 1 and json.loads(out)["error"] == "FileNotFoundError"
