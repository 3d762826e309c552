import json
import subprocess
import sys

import numpy as np
import pytest

from gbslocc.cli import main
from gbslocc.clifford import CliffordUnitary, verify_clifford

KLEIN = '{"d":4,"states":[[0,0],[0,2],[2,0],[2,2]]}'
COLUMN5 = '{"d":5,"states":[[0,0],[0,1],[0,2],[0,3],[0,4]]}'
DIAGONAL5 = '{"d":5,"states":[[0,0],[1,1],[2,2],[3,3],[4,4]]}'
NO_WITNESS5 = '{"d":5,"states":[[0,0],[0,1],[0,2],[1,0],[1,2]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_column(self, capsys):
        code, out, _ = run(capsys, "check", COLUMN5)
        obj = json.loads(out)
        assert code == 0 and obj["status"] == "Distinguishable" and obj["witness"] == [0, 1]
        assert obj["sufficiency_only"] is False

    def test_indistinguishable(self, capsys):
        code, out, _ = run(capsys, "check", NO_WITNESS5)
        assert code == 0 and json.loads(out)["status"] == "Indistinguishable"

    def test_klein_with_oracle(self, capsys):
        code, out, err = run(capsys, "check", KLEIN, "--oracle", "--seed", "0")
        obj = json.loads(out)
        assert code == 0 and obj["status"] == "Unknown" and obj["sufficiency_only"] is True
        assert obj["oracle"]["status"] == "CertifiedOneWay"
        assert "sufficiency only" in err

    def test_oracle_needs_seed(self, capsys):
        assert run(capsys, "check", KLEIN, "--oracle")[0] == 2

    def test_file_and_out(self, capsys, tmp_path):
        src = tmp_path / "set.json"
        src.write_text(COLUMN5)
        dest = tmp_path / "verdict.json"
        code, out, _ = run(capsys, "check", str(src), "--out", str(dest))
        assert code == 0 and out == ""
        assert json.loads(dest.read_text())["status"] == "Distinguishable"

    @pytest.mark.parametrize("bad", ["{", '{"d":4,"states":[[0,0],[0,0]]}', '{"d":1,"states":[[0,0]]}', "/no/such/file"])
    def test_bad_input(self, capsys, bad):
        code, out, err = run(capsys, "check", bad)
        assert code == 2 and out == "" and err


class TestUnitary:
    def test_fourier(self, capsys):
        code, out, _ = run(capsys, "unitary", "--d", "3", "--sp", "0,2,1,0")
        assert code == 0
        u = CliffordUnitary.from_dict(json.loads(out))
        assert verify_clifford(u)[0]
        np.testing.assert_allclose(u.matrix.conj().T @ u.matrix, np.eye(3), atol=1e-12)

    @pytest.mark.parametrize("sp", ["2,0,0,1", "1,2,3", "a,b,c,d"])
    def test_rejects(self, capsys, sp):
        assert run(capsys, "unitary", "--d", "4", "--sp", sp)[0] == 2


class TestProtocol:
    def test_f_type(self, capsys):
        code, out, _ = run(capsys, "protocol", DIAGONAL5, "--trials", "1000", "--seed", "1")
        obj = json.loads(out)
        assert code == 0 and obj["success_rate"] == 1.0

    def test_non_f_type(self, capsys):
        assert run(capsys, "protocol", KLEIN, "--seed", "1")[0] == 2

    def test_seed_required(self, capsys):
        assert run(capsys, "protocol", KLEIN)[0] == 2


def test_phi_search(capsys):
    code, out, _ = run(capsys, "phi-search", KLEIN, "--seed", "0")
    obj = json.loads(out)
    assert code == 0 and obj["status"] == "CertifiedOneWay" and obj["residual"] < 1e-9
    assert len(obj["phi_re"]) == 4


class TestCensus:
    def test_d2(self, capsys, tmp_path):
        out = tmp_path / "d2.jsonl"
        code, stdout, _ = run(capsys, "census", "--d", "2", "--l", "2", "--seed", "0", "--out", str(out))
        summary = json.loads(stdout)
        assert code == 0 and summary["total"] == 6 and summary["verdicts"] == {"Distinguishable": 6}

    def test_d3(self, capsys, tmp_path):
        code, stdout, _ = run(capsys, "census", "--d", "3", "--l", "3", "--seed", "0", "--out", str(tmp_path / "c"))
        summary = json.loads(stdout)
        assert code == 0 and summary["total"] == 84 and summary["f_equivalent"] == 84

    def test_sample_needs_count(self, capsys, tmp_path):
        assert run(capsys, "census", "--d", "6", "--l", "6", "--mode", "sample", "--seed", "1", "--out", str(tmp_path / "x"))[0] == 2

    def test_domain(self, capsys, tmp_path):
        assert run(capsys, "census", "--d", "9", "--l", "3", "--seed", "1", "--out", str(tmp_path / "x"))[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gbslocc", "check", COLUMN5], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["witness"] == [0, 1]
