import io
import json
import subprocess
import sys

import pytest

from cmrt.bounds import dump_table, load_table
from cmrt.cli import PROVENANCE, rational, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


class TestCommands:
    def test_kronecker(self):
        assert call("kronecker", "2", "7") == (0, "(2/7) = 1\n", "")
        assert call("kronecker", "-3", "7", "--quiet")[1] == "1\n"
        assert call("kronecker", "-3", "5", "--quiet")[1] == "-1\n"

    def test_classnum(self):
        doc = call_json("classnum", "--disc", "-23")
        assert doc["result"]["h"] == 3 and doc["result"]["forms"] == [[1, 1, 6], [2, -1, 3], [2, 1, 3]]
        doc = call_json("classnum", "--disc", "-28")
        assert (doc["result"]["d_K"], doc["result"]["conductor"], doc["result"]["fundamental"]) == (-7, 2, False)

    def test_classnum_scan(self):
        doc = call_json("classnum", "--scan", "200")
        assert [d for d, h in doc["result"]["discriminants"] if h == 1] == [-3, -4, -7, -8, -11, -19, -43, -67, -163]

    def test_order_classnum(self):
        doc = call_json("order-classnum", "--dk", "-4", "--conductor", "5")
        assert doc["result"]["h"] == doc["result"]["h_enumerated"] == 2

    def test_rayclass(self):
        code, out, _ = call("rayclass", "--dk", "-163", "--ell", "163")
        assert code == 0
        assert "split type: Ramified" in out and "h_m = 13203" in out

    def test_rayclass_oracle(self):
        doc = call_json("rayclass", "--dk", "-4", "--ell", "5", "--oracle")
        assert doc["result"]["oracle"] == {"residue_unit_order": 16, "unit_index": 4, "agrees": True}
        assert doc["result"]["h_m"] == doc["result"]["h_m_general"] == 4

    def test_curve(self):
        doc = call_json("curve", "--a", "-595", "--b", "5586", "--degree", "1", "--ell", "7")
        r = doc["result"]
        assert r["j"] == "16581375"
        assert r["cm"] == {"d_K": -7, "f": 2, "order_disc": -28}
        assert r["necessary_condition"] == {"possible": True, "reason": "ℓ | d_K"}
        assert r["degree_divisor"] == 84

    def test_curve_rational_coefficients(self):
        code, out, _ = call("curve", "--a", "1/4", "--b", "-3/8")
        assert code == 0 and "CM: none" in out

    def test_weber(self):
        doc = call_json("weber", "--a", "-595", "--b", "5586", "--x", "14", "--y", "0")
        assert doc["result"] == {"weber": "-33915/64", "case": "generic", "j": "16581375"}
        assert call("weber", "--a", "0", "--b", "1", "--x", "-1", "--y", "0", "--quiet")[1] == "-1/108\n"

    def test_bound(self):
        code, out, _ = call("bound", "--degree", "7")
        assert code == 0
        assert out.startswith("C(7) = 5923") and "5923 divides |d_K| = 5923 (h_K = 7)" in out

    def test_bound_rough(self):
        assert call("bound", "--degree", "100", "--rough", "--quiet")[1] == "2383739\n"

    def test_table(self):
        code, out, _ = call("table", "--max-degree", "7")
        assert code == 0
        assert out.splitlines()[1:5] == ["1, 2    163", "3, 4    907", "5, 6    2683", "7       5923"]
        assert "C(1..7) = 163, 163, 907, 907, 2683, 2683, 5923" in out

    def test_verify_data(self):
        doc = call_json("verify-data", "--max-scan-limit", "20000")
        assert doc["result"]["table_rows_verified"] == 204
        assert doc["result"]["maxtable_scan"]["maxima_confirmed"] == 12

    def test_custom_data_file(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(dump_table(load_table().truncated(3)))
        assert call("table", "--max-degree", "3", "--data", str(path), "--quiet")[1] == "163 163 907\n"
        assert call("table", "--max-degree", "4", "--data", str(path))[0] == 2


class TestErrors:
    @pytest.mark.parametrize(
        "argv, code, message",
        [
            (["rayclass", "--dk", "-4", "--ell", "2"], 2, "error: ell must be an odd prime\n"),
            (["classnum", "--disc", "5"], 2, None),
            (["curve", "--a", "0", "--b", "0"], 2, None),
            (["order-classnum", "--dk", "-12", "--conductor", "2"], 2, None),
            (["bound", "--degree", "8"], 2, None),
            (["bound", "--degree", "101", "--rough"], 2, None),
            (["weber", "--a", "0", "--b", "1", "--x", "1", "--y", "1"], 2, None),
            (["curve", "--a", "1.5", "--b", "0"], 1, None),
            (["curve", "--a", "1/0", "--b", "0"], 1, None),
            (["curve", "--a", "-1.5", "--b", "0"], 1, None),
            (["bogus"], 1, None),
            ([], 1, None),
            (["kronecker", "x", "3"], 1, None),
            (["bound", "--degree", "3", "--data", "/nonexistent/t.csv"], 3, None),
        ],
    )
    def test_exit_codes(self, argv, code, message):
        got, out, err = call(*argv)
        assert got == code and out == ""
        assert err.startswith("error: ") and err.count("\n") == 1
        if message:
            assert err == message

    def test_bad_data_file(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("# complete_through=1\nh,abs_d\n1,20\n")
        code, _, err = call("table", "--max-degree", "1", "--data", str(path))
        assert code == 3 and "-20" in err

    def test_data_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CMRT_DATA_DIR", str(tmp_path))
        assert call("table")[0] == 3


class TestOutput:
    COMMANDS = [
        ["kronecker", "5", "21"],
        ["classnum", "--disc", "-5923"],
        ["order-classnum", "--dk", "-3", "--conductor", "3"],
        ["rayclass", "--dk", "-7", "--ell", "7", "--oracle"],
        ["curve", "--a", "-595", "--b", "5586", "--degree", "1", "--ell", "7"],
        ["weber", "--a", "-1", "--b", "0", "--x", "1", "--y", "0"],
        ["bound", "--degree", "5"],
        ["table"],
    ]

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_json_roundtrip_and_provenance(self, argv):
        code, out, _ = call(*argv, "--json")
        doc = json.loads(out)
        assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == out
        assert doc["command"] == argv[0]
        assert doc["provenance"] and all(list(p) in [list(v) for v in PROVENANCE.values()] for p in doc["provenance"])

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_deterministic(self, argv):
        assert call(*argv) == call(*argv)
        assert call(*argv, "--json") == call(*argv, "--json")

    def test_global_flag_position(self):
        assert call("--json", "kronecker", "2", "7") == call("kronecker", "2", "7", "--json")

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "cmrt", "kronecker", "2", "7"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout == "(2/7) = 1\n"


@pytest.mark.parametrize("text, value", [("3", 3), ("-7/2", -3.5), ("+4/6", 2 / 3)])
def test_rational_parser(text, value):
    assert rational(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["1.5", "1e3", "", "a/b", "1/-2"])
def test_rational_parser_rejects(text):
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        rational(text)
