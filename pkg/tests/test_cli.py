import json

import pytest

from charp import __version__
from charp.cli import main, read_scan

SCHEMA_KEYS = ["schema_version", "command", "family", "p", "n", "d", "verdicts", "window", "tool_version"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_fedder_exit_codes(capsys):
    code, out, _ = run(capsys, "fedder", "--family", "fermat", "--p", "3", "--n", "3", "--d", "4")
    assert code == 10 and "not split" in out
    code, out, _ = run(capsys, "fedder", "--family", "fermat", "--p", "5", "--n", "3", "--d", "4")
    assert code == 0 and "split (witness 4)" in out
    code, out, _ = run(capsys, "fedder", "--poly", "x0^2+x1*x2", "--p", "7", "--n", "2")
    assert code == 0 and "split (deg < n+1)" in out


def test_fedder_poly_from_file(capsys, tmp_path):
    f = tmp_path / "quartic.txt"
    f.write_text("x0^4 + x1^4 + x2^4 + x3^4\n")
    code, rep = run_json(capsys, "fedder", "--poly", str(f), "--p", "5", "--n", "3")
    assert code == 0 and rep["verdicts"][0]["evidence"]["coefficient"] == 4


def test_error_exit_codes(capsys):
    code, _, err = run(capsys, "fedder", "--poly", "x0 + y", "--p", "5", "--n", "2")
    assert code == 2 and "position 5" in err
    assert run(capsys, "fedder", "--family", "fermat", "--p", "2", "--n", "2", "--d", "4")[0] == 2
    assert run(capsys, "ordinary", "--family", "fermat", "--p", "5", "--n", "3")[0] == 2
    assert run(capsys, "fedder", "--family", "fermat", "--p", "7", "--n", "2", "--d", "4")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["fedder"])
    assert exc.value.code == 2


def test_json_schema(capsys):
    code, rep = run_json(capsys, "acm-b1", "--family", "fermat", "--p", "3", "--n", "3", "--d", "4")
    assert code == 10
    assert list(rep)[:len(SCHEMA_KEYS)] == SCHEMA_KEYS
    assert rep["tool_version"] == __version__ and rep["window"] == 8
    assert rep["family"] == {"kind": "fermat", "p": 3, "n": 3, "d": 4}
    v = rep["verdicts"][0]
    assert v["value"] == "fails-at" and v["evidence"]["witness"] == {"m": 0, "i": 1, "kernel_dim": 1}


def test_reports_are_deterministic(capsys):
    argv = ["fsplit-equiv", "--family", "fermat", "--p", "5", "--n", "3", "--d", "4", "--format", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    v = json.loads(a)["verdicts"][0]
    assert v["value"] is True and v["evidence"]["fedder_coefficient"] == 4


def test_markdown_and_csv(capsys):
    code, out, _ = run(capsys, "ulrich-curve", "--family", "fermat", "--p", "7", "--n", "2", "--d", "3")
    assert code == 0 and "Ulrich, rank 6, degree 0" in out and out.startswith("## ulrich-curve")
    code, out, _ = run(capsys, "acm-b1", "--family", "fermat", "--p", "3", "--n", "3", "--format", "md")
    assert "fails-at(m=0, i=1)" in out and "witness:" in out and "| 0 | 1 | 1 |" in out
    code, out, _ = run(capsys, "ordinary", "--family", "fermat", "--p", "5", "--n", "2", "--d", "3",
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 10 and lines[0] == "command,family,kind,value,summary,evidence_digest"
    assert lines[1].startswith("ordinary,") and ",ordinary,False," in lines[1]


def test_other_commands(capsys):
    code, rep = run_json(capsys, "pushforward-acm", "--family", "fermat", "--p", "3", "--n", "3",
                         "--window", "5")
    assert code == 0 and rep["window"] == 5 and rep["verdicts"][0]["value"] == "passed"
    code, rep = run_json(capsys, "obstruction", "--family", "fermat", "--p", "3", "--n", "3",
                         "--t-range=-10:10")
    assert code == 10 and rep["verdicts"][0]["evidence"]["admissible"] == []
    code, rep = run_json(capsys, "b1-table", "--family", "fermat", "--p", "7", "--n", "2", "--d", "3",
                         "--twists=-1:1")
    assert code == 0 and rep["verdicts"][0]["evidence"]["rows"]["0"] == [0, 0]
    code, rep = run_json(capsys, "ordinary", "--family", "legendre", "--p", "3", "--lambda", "2")
    assert code == 10


def test_kunneth(capsys):
    code, rep = run_json(capsys, "kunneth", "--factors", "fermat:p=7,n=2,d=3", "fermat:p=7,n=2,d=3")
    assert code == 0 and rep["verdicts"][0]["value"] is True
    assert rep["window"] == [-1, 1] and len(rep["factors"]) == 2
    code, out, _ = run(capsys, "kunneth", "--factors", "fermat:p=5,n=2,d=3", "fermat:p=7,n=2,d=3")
    assert code == 10 and '"k": 1, "t": 1' in out and "note:" in out


def test_kunneth_single_factor_matches_ulrich_curve(capsys):
    for p in (5, 7):
        a = run(capsys, "kunneth", "--factors", json.dumps({"kind": "fermat", "p": p, "n": 2, "d": 3}))[0]
        b = run(capsys, "ulrich-curve", "--family", "fermat", "--p", str(p), "--n", "2", "--d", "3")[0]
        assert a == b


# -- scans ----------------------------------------------------------------------------

def test_scan_dwork_resumable(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    out = tmp_path / "dwork.jsonl"
    argv = ["scan", "--family", "dwork", "--p", "13", "--n", "2", "--lambda", "all", "--out", str(out)]
    code, text, _ = run(capsys, *argv)
    first = json.loads(text)
    assert code == 0 and first["cells"] == 13 and first["new_rows"] == 13
    recs = read_scan(out)
    assert [r["family"]["lam"] for r in recs] == list(range(13))
    assert all(r["timestamp"] == "1970-01-01T00:00:00Z" for r in recs)
    before = out.read_bytes()
    second = json.loads(run(capsys, *argv)[1])
    assert second["new_rows"] == 0 and out.read_bytes() == before
    first.pop("new_rows"), second.pop("new_rows")
    assert first == second


def test_scan_partial_resume_appends_in_order(capsys, tmp_path):
    out = tmp_path / "leg.jsonl"
    run(capsys, "scan", "--family", "legendre", "--p", "7", "--lambda", "2:3", "--out", str(out))
    summary = json.loads(run(capsys, "scan", "--family", "legendre", "--p", "7", "--lambda", "all",
                             "--out", str(out))[1])
    assert summary["new_rows"] == 3 and summary["cells"] == 5
    assert [r["family"]["lam"] for r in read_scan(out)] == [2, 3, 4, 5, 6]
    assert summary["counts"]["oracle-agreement"] == {"true": 5, "false": 0}


def test_scan_parallel_matches_serial(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    files = []
    for jobs in ("1", "2"):
        out = tmp_path / f"scan{jobs}.jsonl"
        run(capsys, "scan", "--family", "random-plane-curve", "--p", "3", "--d", "4", "--seeds", "0:5",
            "--jobs", jobs, "--out", str(out))
        files.append(out.read_bytes())
    assert files[0] == files[1] and files[0].count(b"\n") == 6


def test_scan_jobs_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CHARP_JOBS", "2")
    from charp.cli import build_parser
    args = build_parser().parse_args(["scan", "--family", "dwork", "--p", "5"])
    assert args.jobs == 2


def test_scan_markdown_summary(capsys):
    code, out, _ = run(capsys, "scan", "--family", "dwork", "--p", "5", "--n", "3", "--format", "md")
    assert code == 0 and out.startswith("- cells: 5")
