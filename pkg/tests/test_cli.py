import io
import json
import subprocess
import sys

import pytest

from manin_malle.cli import Output, run
from manin_malle.heights import count_points


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_count_points_csv():
    code, out = call("count-points", "--dim", "1", "--bound", "1e6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "B,N"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["1", "10", "100", "1000", "10000", "100000", "1000000"]
    assert lines[-1] == "1000000,1216768"


def test_peyre_json():
    code, out = call("peyre", "--dim", "1")
    js = json.loads(out)
    assert code == 0 and js["schema"] == "manin_malle.peyre/1"
    assert js["finite_part"]["value"] == pytest.approx(0.607927, abs=1e-6)
    assert js["finite_part"]["provenance"] == "computed"


def test_unknown_flag_exit_2(capsys):
    assert call("peyre", "--dim", "1", "--bogus")[0] == 2
    assert "usage" in capsys.readouterr().err


def test_usage_error_exit_2():
    assert call("invariants", "--cyclic", "3")[0] == 2


def test_deterministic_output():
    a = call("invariants", "--cyclic", "3", "--weights", "1,1")
    b = call("invariants", "--cyclic", "3", "--weights", "1,1")
    assert a == b and a[0] == 0
    js = json.loads(a[1])
    assert js["age_G"] == {"value": "2/3", "provenance": "exact"}
    assert js["manin_log_exponent"]["value"] == "unknown"


def test_invariants_from_group_file(tmp_path):
    g = tmp_path / "s3.txt"
    g.write_text("3\n1 0 2\n1 2 0\n")
    code, out = call("invariants", "--group", str(g))
    assert code == 0 and json.loads(out)["age_G"]["value"] == "1"


def test_config_overrides_flags(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\ndim = 2\n")
    code, out = call("peyre", "--dim", "1", "--config", str(cfg))
    assert code == 0 and json.loads(out)["d"] == 2


def test_out_file_written(tmp_path):
    p = tmp_path / "sub" / "pts.csv"
    code, out = call("count-points", "--dim", "2", "--bound", "1000", "--out", str(p))
    assert code == 0 and out == ""
    assert p.read_text().splitlines()[-1] == f"1000,{count_points(2, 1000)}"


def test_fields_and_records(tmp_path):
    rec = tmp_path / "recs.csv"
    code, out = call("count-fields", "--group", "C2", "--bound", "100", "--records-out", str(rec))
    assert code == 0 and out.strip().splitlines()[-1] == "100,61"
    code, out2 = call("count-fields", "--input", str(rec), "--bound", "100")
    assert code == 0 and out2 == out


def test_vdisc_csv():
    code, out = call("vdisc", "--bound", "30")
    rows = [ln.split(",") for ln in out.strip().splitlines()[1:]]
    assert code == 0
    assert all(r[3] == "true" for r in rows if r[3] != "skipped-wild")
    assert any(r[3] == "skipped-wild" for r in rows)


def test_fit_roundtrip(tmp_path):
    p = tmp_path / "q.csv"
    assert call("count-fields", "--group", "C2", "--bound", "1e6", "--per-decade", "2", "--out", str(p))[0] == 0
    code, out = call("fit", "--input", str(p))
    js = json.loads(out)
    assert code == 0 and js["beta"]["value"] == 0
    assert js["alpha"]["value"] == pytest.approx(1, abs=0.02)


def test_fit_bad_input_exit_1(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("B,N\n10,1\n")
    assert call("fit", "--input", str(p))[0] == 1


def test_quotient_experiment_files(tmp_path):
    p = tmp_path / "q.json"
    code, out = call("quotient-experiment", "--bound", "1e4", "--identity-bound", "100", "--out", str(p))
    assert code == 0
    js = json.loads(p.read_text())
    assert js["identity"]["ok"] and js["label"] == "consistency, not ground truth"
    assert (tmp_path / "q.xprim.csv").read_text().startswith("B,N")
    assert (tmp_path / "q.pred.csv").exists() and (tmp_path / "q.affine.csv").exists()


def test_partial_output_removed(tmp_path):
    good = tmp_path / "a.txt"
    blocker = tmp_path / "file"
    blocker.write_text("x")
    o = Output()
    o.add(good, "hello")
    o.add(blocker / "b.txt", "world")  # parent is a regular file: cannot be created
    with pytest.raises(OSError):
        o.commit(io.StringIO())
    assert not good.exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "manin_malle", "peyre", "--dim", "2"], capture_output=True,
                       text=True, check=True)
    assert json.loads(r.stdout)["finite_part"]["value"] == pytest.approx(0.831907, abs=1e-6)
