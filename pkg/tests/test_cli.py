import io
import json

import pytest

import umfb.cli as cli
from umfb.algebra import FormulaPoly
from umfb.special import MomentTable


def run(argv, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_compute_text_golden():
    code, out, err = run(["compute", "-i", "1", "-n", "1"])
    assert code == 0 and err == ""
    assert out == "f[1]*g1[1]\n"


def test_compute_appendix_term_count():
    code, out, _ = run(["compute", "-i", "1,1", "-n", "2", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 2 and data["m"] == 2
    assert len(data["terms"]) == 6
    assert FormulaPoly.from_json(out) == FormulaPoly.from_json(out)  # parses cleanly


def test_compute_uni_outer_json():
    code, out, _ = run(["compute", "-i", "2,1", "--mode", "uni-outer", "--format", "json"])
    assert code == 0
    assert len(json.loads(out)["terms"]) == 4


def test_compute_defaults_and_output_file(tmp_path):
    target = tmp_path / "poly.txt"
    code, out, _ = run(["compute", "-i", "1,1", "-o", str(target)])
    assert code == 0 and out == ""
    direct = run(["compute", "-i", "1,1"])[1]
    assert target.read_text() == direct


def test_compute_bad_length():
    code, _, err = run(["compute", "-i", "1,1", "-m", "3"])
    assert code == 2
    assert "error" in err


def test_partitions_golden():
    code, out, _ = run(["partitions", "-i", "2,1"])
    assert code == 0
    assert out.splitlines() == [
        "(2,1)",
        "(2,0) (0,1)",
        "(1,1) (1,0)",
        "(1,0)^2 (0,1)",
    ]


def test_partitions_count_only():
    code, out, _ = run(["partitions", "-i", "2,2", "--count-only"])
    assert code == 0 and out.strip() == "9"


def test_verify_small_sweep():
    code, out, _ = run(["verify", "--max-order", "2", "--max-n", "2", "--max-m", "2"])
    assert code == 0
    assert out.strip().endswith("all equal")


def test_verify_detects_forced_bug(monkeypatch):
    real = cli.umfb

    def broken(spec, cap=None):
        poly = real(spec, cap)
        if sum(spec.index) >= 2:
            return poly + poly  # double every coefficient
        return poly

    monkeypatch.setattr(cli, "umfb", broken)
    code, out, _ = run(["verify", "--max-order", "2", "--max-n", "1", "--max-m", "1"])
    assert code == 1
    assert "MISMATCH" in out


def test_bench_csv(tmp_path):
    rows = tmp_path / "rows.txt"
    rows.write_text("# small rows\n1,1;2\n2,1;2\n")
    code, out, _ = run(["bench", "--rows", str(rows)])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "i;n;m;terms;umfb_ms;oracle_ms"
    assert lines[1].startswith("1,1;2;2;6;")
    assert lines[2].startswith("2,1;2;2;16;")


def test_bench_skips_capped_rows(tmp_path, monkeypatch):
    monkeypatch.setenv("UMFB_TERM_CAP", "5")
    rows = tmp_path / "rows.txt"
    rows.write_text("1,1;2\n")
    code, out, err = run(["bench", "--rows", str(rows)])
    assert code == 0
    assert "skipping" in err
    assert out.strip() == "i;n;m;terms;umfb_ms;oracle_ms"


def _table_file(tmp_path, name, n, values):
    path = tmp_path / name
    path.write_text(MomentTable(n=n, values=values).to_json())
    return str(path)


def test_cumulants_golden(tmp_path):
    table = _table_file(tmp_path, "m.json", 2, {(1, 0): 2, (0, 1): 1, (1, 1): 5})
    code, out, _ = run(["cumulants", "--table", table, "-i", "1,1"])
    assert code == 0 and out.strip() == "3"


def test_moments_golden(tmp_path):
    table = _table_file(tmp_path, "c.json", 2, {(1, 0): 2, (0, 1): 1, (1, 1): 3})
    code, out, _ = run(["moments", "--table", table, "-i", "1,1"])
    assert code == 0 and out.strip() == "5"


def test_poisson_golden(tmp_path):
    table = _table_file(tmp_path, "mu.json", 2, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    code, out, _ = run(["poisson", "--alpha", "unity", "--table", table, "-i", "1,1"])
    assert code == 0 and out.strip() == "2"


def test_hermite_golden():
    code, out, _ = run(["hermite", "-i", "3", "--sigma", "1", "-x", "2"])
    assert code == 0 and out.strip() == "2"
    code, out, _ = run(["hermite", "-i", "3", "--sigma", "1", "-x", "2", "--route", "bell"])
    assert code == 0 and out.strip() == "2"


def test_hermite_missing_table_is_usage_error(tmp_path):
    code, _, err = run(["cumulants", "--table", str(tmp_path / "nope.json"), "-i", "1,1"])
    assert code == 2 and "error" in err


def test_usage_errors():
    assert run(["compute"])[0] == 2
    assert run(["nope"])[0] == 2
    assert run(["compute", "-i", "x,y"])[0] == 2
    assert run([])[0] == 2
    assert run(["--help"])[0] == 0


def test_term_cap_exit_code(monkeypatch):
    monkeypatch.setenv("UMFB_TERM_CAP", "3")
    code, _, err = run(["compute", "-i", "2,2", "-n", "2"])
    assert code == 3
    assert "cap" in err


def test_threads_flag_does_not_change_output():
    base = run(["compute", "-i", "2,1", "-n", "2", "--format", "json"])[1]
    for t in ("1", "4"):
        assert run(["compute", "-i", "2,1", "-n", "2", "--threads", t, "--format", "json"])[1] == base
