import csv
import json
from fractions import Fraction

import pytest

from mdimlab import io
from mdimlab.cli import main
from mdimlab.tiling import build_box_tiling, build_dyadic_tiling


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


TRANSPORT = {
    "transport": {
        "metric": {"points": ["a", "b", "c"], "distances": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]},
        "mu": {"a": "1"},
        "nu": {"b": "1/2", "c": "1/2"},
    }
}


def test_fractions_round_trip():
    assert io.frac_str(Fraction(3, 6)) == "1/2"
    assert io.parse_frac("  7/14") == Fraction(1, 2)
    for bad in (True, "x", "1/0", 1.5):
        with pytest.raises(io.ConfigError):
            io.parse_frac(bad)


def test_scheme_round_trip():
    for s in (build_dyadic_tiling(4), build_box_tiling(3)):
        back = io.scheme_from_dict(json.loads(io.dumps(io.scheme_to_dict(s))))
        assert back.folner.sets == s.folner.sets and back.centers == s.centers


def test_csv_quoting():
    text = io.csv_text(["a", "b"], [[Fraction(1, 2), "x,y"], [[1, 2], True]])
    assert text == 'a,b\r\n1/2,"x,y"\r\n1;2,true\r\n'


def test_metric_formats_agree():
    m1 = io.metric_from_dict(TRANSPORT["transport"]["metric"])
    m2 = io.metric_from_dict({"points": ["a", "b", "c"], "pairs": [["a", "b", 1], ["b", "c", 1], ["a", "c", 2]]})
    assert all(m1(p, q) == m2(p, q) for p in "abc" for q in "abc")
    with pytest.raises(io.ConfigError):
        io.metric_from_dict({"points": ["a", "b"], "distances": [["0", "1"], ["2", "0"]]})


def test_transport_command(tmp_path, capsys):
    cfg = write(tmp_path / "t.json", TRANSPORT)
    assert main(["transport", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    assert capsys.readouterr().out.split() == ["3/2", "3/2"]
    out = json.loads((tmp_path / "o" / "transport.json").read_text())
    assert out["equal"] is True and out["primal"] == "3/2"


def test_tile_command_reports_corruption(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"tiling": {"kind": "dyadic", "depth": 3,
                                                 "centers": [{"k": 2, "n": 3, "c": [0, 3]}]}})
    assert main(["tile", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    v = json.loads((tmp_path / "o" / "tile.json").read_text())["violation"]
    assert v["n"] == 3 and v["overlap"] == [3]
    assert "overlap [3]" in capsys.readouterr().out


def test_config_errors_exit_2(tmp_path):
    assert main(["tile", "--config", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path / "b.json", {"tiling": {"kind": "dyadic", "depth": 1}})
    assert main(["tile", "--config", bad, "--out", str(tmp_path / "o")]) == 2
    assert main(["nonsense"]) == 2
    assert main(["tile", "--budget", "0", "--out", str(tmp_path / "o")]) == 2


def test_independence_and_folner(tmp_path):
    cfg = write(tmp_path / "g.json", {"subshift": {"alphabet": "01", "forbidden": ["11"]},
                                      "independence": {"max_n": 10}})
    assert main(["independence", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = list(csv.DictReader((tmp_path / "o" / "entropy.csv").open(newline="")))
    assert [int(r["patterns"]) for r in rows][:5] == [2, 3, 5, 8, 13]
    assert main(["folner", "--out", str(tmp_path / "f")]) == 0
    assert json.loads((tmp_path / "f" / "tempered.json").read_text())["tempered"] is True


def test_bound_and_check(tmp_path):
    assert main(["bound", "--out", str(tmp_path / "b")]) == 0
    rows = list(csv.DictReader((tmp_path / "b" / "portions.csv").open(newline="")))
    assert [r["mdim_lower_bound"] for r in rows] == ["1/2", "1/2", "1/1", "8/1"]
    cfg = write(tmp_path / "c.json", {"caps": {"samples": 4, "gamma_samples": 20}})
    assert main(["check", "--config", cfg, "--out", str(tmp_path / "c")]) == 0
    out = json.loads((tmp_path / "c" / "check.json").read_text())
    assert out["ok"] is True and out["gamma"] == "1/2" and out["gamma_check"]["ok"] is True


def test_lebesgue_small(tmp_path):
    cfg = write(tmp_path / "l.json", {"lebesgue": {"specs": [[2]], "samples": 20}})
    assert main(["lebesgue", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = list(csv.DictReader((tmp_path / "o" / "lebesgue.csv").open(newline="")))
    assert rows[0]["min_order"] == "1" and rows[0]["sum_k_bound_holds"] == "false"
