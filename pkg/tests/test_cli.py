import argparse
import json

import pytest

from snbclab.cli import int_range, int_vector, run
from snbclab.graph_core import bouquet, cycle, default_ordering, graph_to_json, theta
from snbclab.polyexp import Polyexponential
from snbclab.reglang import nb_automaton


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in (("theta", theta()), ("c3", cycle(3)), ("bouquet2", bouquet(2))):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(graph_to_json(g)))
        out[name] = str(path)
    loop = bouquet(1)
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(graph_to_json(loop, default_ordering(loop))))
    out["loop"] = str(path)
    path = tmp_path / "f.json"
    path.write_text(json.dumps(Polyexponential.monomial(4).to_json()))
    out["f"] = str(path)
    path = tmp_path / "nb.json"
    path.write_text(json.dumps(nb_automaton(bouquet(2)).to_json()))
    out["nb"] = str(path)
    out["dir"] = tmp_path
    return out


def test_ranges_and_vectors():
    assert int_range("3..6") == [3, 4, 5, 6]
    assert int_range("1,4") == [1, 4]
    assert int_vector("1,2,2") == [1, 2, 2]
    with pytest.raises(argparse.ArgumentTypeError):
        int_range("6..3")


def test_mu1_of_theta(files, capsys):
    assert run(["mu1", "--graph", files["theta"]]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(2.0)


def test_walk_count_of_triangle(files, capsys):
    assert run(["walks", "count", "--graph", files["c3"], "--k", "3"]) == 0
    assert capsys.readouterr().out.strip() == "6"
    assert run(["walks", "count", "--graph", files["c3"], "--k", "3", "--enumerate"]) == 0
    assert capsys.readouterr().out.strip() == "6"


def test_graph_info_and_hashimoto(files, capsys):
    assert run(["graph", "info", "--graph", files["theta"]]) == 0
    assert capsys.readouterr().out
    assert run(["spectral", "hashimoto", "--graph", files["theta"]]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 7


def test_reglang_counts(files, capsys):
    assert run(["reglang", "count", "--automaton", files["nb"], "--k", "1..3"]) == 0
    out = capsys.readouterr().out
    assert "12" in out and "36" in out


def test_convolve_numeric(files, capsys):
    assert run(["convolve", "numeric", "--f", files["f"], "--g", "const:1", "--xi", "1", "--k", "1..3"]) == 0
    assert capsys.readouterr().out


def test_legal_count_of_loop(files, capsys):
    assert run(["legal", "count", "--type", files["loop"], "--m", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_expansion_fit_is_deterministic(files):
    out1, out2 = files["dir"] / "a.csv", files["dir"] / "b.csv"
    args = ["expansion", "fit", "--base", files["bouquet2"], "--n", "2..4", "--k", "1..3", "--r", "2"]
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    text = out1.read_text()
    assert text == out2.read_text()
    assert text.splitlines()[0].startswith("k,c0,c1")


def test_user_errors_exit_with_2(files):
    assert run(["mu1", "--graph", str(files["dir"] / "missing.json")]) == 2
    assert run(["walks", "count", "--graph", files["c3"], "--k", "0"]) == 2
    assert run(["no-such-command"]) == 2


def test_caps_exit_with_3(files):
    args = ["expansion", "fit", "--base", files["theta"], "--n", "6..8", "--k", "1", "--r", "2", "--budget", "10"]
    assert run(args) == 3
