import json
import subprocess
import sys

import numpy as np
import pytest

from explainsim.cli import main
from explainsim.io import write_importances
from explainsim.ranking import ImportanceRecord


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_distance(capsys):
    code, out, _ = run(capsys, "distance", "A,B,C,D,E", "B,A,C,E,D")
    assert code == 0 and float(out) == pytest.approx(0.7, abs=1e-12)
    code, out, _ = run(capsys, "distance", "A,B,C", "A,B,C", "--metric", "kendall")
    assert code == 0 and float(out) == 1.0


def test_distance_errors(capsys):
    code, _, err = run(capsys, "distance", "A,B,C", "A,B,D")
    assert code == 2 and "incomparable" in err
    code, _, err = run(capsys, "distance", "A,B,A", "A,B,C")
    assert code == 2
    code, _, err = run(capsys, "distance", "A,B", "A,B", "--metric", "cosine")
    assert code == 1 and "invalid choice" in err
    code, _, _ = run(capsys, "distance", "A,B")
    assert code == 1


def test_distance_d_max_exceeded(capsys):
    # x = 10 admits a pair whose weighted difference passes d_max
    code, _, err = run(capsys, "distance", "1,2,3,4,5,6,7,8,9,10", "10,9,8,7,2,1,3,4,5,6")
    assert code == 3 and "numeric assertion" in err


def test_compare(capsys, tmp_path):
    names = ("a", "b", "c")
    recs = [
        ImportanceRecord("lime", 0, np.array([3.0, 2.0, 1.0]), names),
        ImportanceRecord("shap", 0, np.array([3.0, 2.0, 1.0]), names),
        ImportanceRecord("lime", 1, np.array([3.0, 2.0, 1.0]), names),
        ImportanceRecord("shap", 1, np.array([2.0, 3.0, 1.0]), names),
    ]
    path = write_importances(recs, tmp_path / "imp.csv")
    code, out, _ = run(capsys, "compare", "--input", str(path), "--reference", "lime", "--comparison", "shap")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "instance_id,value"
    assert lines[1] == "0,1.0"
    v1 = float(lines[2].split(",")[1])
    assert v1 < 1
    assert float(lines[3].split(",")[1]) == pytest.approx((1 + v1) / 2)
    code, _, err = run(capsys, "compare", "--input", str(path), "--reference", "lime", "--comparison", "tree")
    assert code == 2 and "'tree' not found" in err


def test_compare_malformed(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("explainer,instance_id,feature,importance\nlime,0,a,1\nlime,0,a,2\n")
    code, _, err = run(capsys, "compare", "--input", str(p), "--reference", "lime", "--comparison", "shap")
    assert code == 2 and "row 3" in err


def test_sample_dist(capsys, tmp_path):
    code, out, _ = run(capsys, "sample-dist", "--x", "9", "--n", "500", "--seed", "3", "--out-dir", str(tmp_path))
    assert code == 0
    stats = json.loads(out)
    assert 0.30 < stats["shreyan"]["mean"] < 0.50
    assert (tmp_path / "samples.csv").is_file()
    g, d = np.loadtxt(tmp_path / "density_shreyan.csv", delimiter=",", skiprows=1, unpack=True)
    assert np.trapezoid(d, g) == pytest.approx(1, abs=0.02)


def test_ttest_summary(capsys):
    code, out, _ = run(capsys, "ttest", "--summary", "0.6498", "0.0049", "12", "0.6921", "0.0032", "12")
    assert code == 0
    res = json.loads(out)
    assert res["df"] == 22
    code, _, err = run(capsys, "ttest", "--summary", "0", "1", "2.5", "0", "1", "3")
    assert code == 1
    code, _, _ = run(capsys, "ttest")
    assert code == 1


def test_ttest_files(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("1\n2\n3\n")
    b.write_text("value\n4\n5\n6\n")
    code, out, _ = run(capsys, "ttest", "--a", str(a), "--b", str(b))
    res = json.loads(out)
    assert code == 0 and res["t"] == pytest.approx(-3 / np.sqrt(2 / 3))
    code, _, _ = run(capsys, "ttest", "--a", str(tmp_path / "none.csv"), "--b", str(b))
    assert code == 2


def test_study(capsys, tmp_path):
    cfg = tmp_path / "study.cfg"
    cfg.write_text("reps = 2\nregression_models = dummy, ols\nclassification_models = dummy, gaussian_nb\n")
    code, out, _ = run(capsys, "study", "--config", str(cfg), "--out-dir", str(tmp_path / "o"), "--no-svg")
    assert code == 0
    assert "regression: 4 runs" in out and "classification: 4 runs" in out
    assert (tmp_path / "o" / "ttest.json").is_file()
    assert not (tmp_path / "o" / "svg").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("reps = 0\n")
    code, _, _ = run(capsys, "study", "--config", str(bad))
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "explainsim", "distance", "A,B,C,D,E", "A,B,C,D,E"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1.0"
