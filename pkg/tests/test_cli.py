from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from coxcluster import cli
from coxcluster.verify import Check, VerificationReport, verify_type


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_a2(capsys):
    code, out, _ = run(capsys, "verify", "A2")
    assert code == 0
    assert "h(Delta)              (1, 3, 1)" in out
    assert "rank counts           (1, 3, 1)" in out
    assert "result: PASS" in out


def test_verify_json_round_trip(capsys, tmp_path):
    path = tmp_path / "b3.json"
    code, out, _ = run(capsys, "verify", "B3", "--json", "--out", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["facet_count_delta"] == 20 == data["catalan"]
    assert json.loads(path.read_text()) == data
    report = VerificationReport.from_dict(data)
    assert report.to_dict() == data
    assert json.loads(json.dumps(report.to_dict())) == data


def test_table_and_json_agree(capsys):
    _, text, _ = run(capsys, "verify", "A1")
    _, js, _ = run(capsys, "verify", "A1", "--json")
    data = json.loads(js)
    assert data["h_delta"] == [1, 1]
    assert f"facets of Delta       {data['facet_count_delta']}" in text
    assert f"h(X(gamma))           (1, 0)" in text


def test_rho_table(capsys):
    code, out, _ = run(capsys, "tables", "A2", "rho")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0].startswith("rho_0") and "(0, -1)" in lines[0]
    assert lines[4].startswith("rho_4") and "(-1, 0)" in lines[4]
    _, js, _ = run(capsys, "tables", "A2", "rho", "--json")
    assert [r["root"] for r in json.loads(js)["rho"]] == [[0, -1], [1, 0], [1, 1], [0, 1], [-1, 0]]


def test_phi_table(capsys):
    code, out, _ = run(capsys, "tables", "A2", "phi")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    ranks = sorted(int(line.rsplit(" ", 1)[1]) for line in lines)
    assert ranks == [0, 1, 1, 1, 2]
    assert "{rho_2* rho_3*}  ->  rank 2" in lines


def test_ncp_table(capsys):
    _, js, _ = run(capsys, "tables", "A2", "ncp", "--json")
    data = json.loads(js)
    assert data["rank_counts"] == [1, 3, 1]
    assert data["peripheral_by_rank"] == [1, 2, 0]
    assert data["nonperipheral_by_rank"] == [0, 1, 1]


def test_shelling_and_hvector_tables(capsys):
    _, out, _ = run(capsys, "tables", "A2", "shelling")
    assert out.strip().splitlines()[-1] == "h from shelling (1, 3, 1)"
    _, js, _ = run(capsys, "tables", "B3", "hvector", "--json")
    data = json.loads(js)
    assert data["h_delta"] == [1, 9, 9, 1]
    assert data["f_delta"][0] == 1


def test_facet_guard(capsys, monkeypatch):
    monkeypatch.setattr(cli, "FACET_GUARD", 3)
    code, _, err = run(capsys, "tables", "A2", "phi")
    assert code == 2 and "--force" in err
    code, out, _ = run(capsys, "tables", "A2", "phi", "--force")
    assert code == 0 and len(out.strip().splitlines()) == 5


def test_batch(capsys):
    code, out, _ = run(capsys, "batch", "A1", "A2", "A3")
    rows = out.strip().splitlines()
    assert code == 0
    assert [r.split()[:2] for r in rows] == [["A1", "PASS"], ["A2", "PASS"], ["A3", "PASS"]]


def test_batch_threads_json(capsys):
    code, out, _ = run(capsys, "batch", "A2", "G2", "--threads", "2", "--json")
    data = json.loads(out)
    assert code == 0
    assert [r["cartan_type"] for r in data["reports"]] == ["A2", "G2"]


def test_batch_unsupported(capsys):
    code, out, _ = run(capsys, "batch", "H3")
    assert code == 2 and "UNSUPPORTED" in out
    code, out, _ = run(capsys, "batch", "A1", "H3")
    assert code == 2 and "PASS" in out


def test_unsupported_and_usage(capsys):
    assert run(capsys, "verify", "H3")[0] == 2
    assert run(capsys, "verify", "E7")[0] == 2
    for argv in ([], ["tables", "A2", "nothing"], ["batch", "--threads", "x"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2


def test_failed_check_exit_code(capsys, monkeypatch):
    def broken(name, allow_large=False):
        r = verify_type(name, allow_large=allow_large)
        r.checks.append(Check("forced failure", 1, False, "injected"))
        return r

    monkeypatch.setattr(cli, "verify_type", broken)
    code, out, _ = run(capsys, "verify", "A1")
    assert code == 1 and "FAIL" in out and "forced failure" in out
    code, out, _ = run(capsys, "batch", "A1")
    assert code == 1 and "forced failure" in out


def test_rationals_serialize_exactly():
    assert cli.to_jsonable({"x": Fraction(4, 3), "y": (Fraction(2), 1)}) == {"x": "4/3", "y": [2, 1]}
    assert Fraction(cli.to_jsonable(Fraction(-7, 5))) == Fraction(-7, 5)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "coxcluster", "tables", "A1", "ncp"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "(1, 1)" in out.stdout
