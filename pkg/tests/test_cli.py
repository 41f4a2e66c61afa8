import csv
import io
import json
import subprocess
import sys

import pytest

from phononbus.cli import main


def parse(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def si_file(tmp_path):
    doc = {
        "material": "Si",
        "support": {"kind": "string", "derive_from_N": True, "lambda_kg_per_m": {"value": 1, "unit": "lambda0"},
                    "l_m": {"value": 3, "unit": "um"}},
        "scenario": {"N": 50, "epsilon": 0.1},
    }
    p = tmp_path / "si.json"
    p.write_text(json.dumps(doc))
    return p


def test_table1(capsys, si_file):
    code, out, _ = run(["table1", "--scenario", str(si_file)], capsys)
    assert code == 0
    header, rows = parse(out)
    assert header == ["neg_log10_epsilon", "lambda_over_lambda0", "N_c_CdTe", "N_c_Si"]
    assert len(rows) == 8
    assert abs(int(rows[0][3]) - 731) <= 0.2 * 731


def test_fig2_rows(capsys):
    code, out, _ = run(["fig2", "--ratios", "2,10,100,1000"], capsys)
    assert code == 0
    header, rows = parse(out)
    assert len(rows) == 4 and header[2] == "S11_over_S0_exact"
    assert all(0.5 <= float(r[2]) <= 1.0 for r in rows)


def test_empty_range_is_config_error(capsys):
    code, _, err = run(["nmax-scan", "--omega-min", "1e9", "--omega-max", "1e8"], capsys)
    assert code == 1 and "empty omega range" in err


@pytest.mark.parametrize("argv", [
    ["modes", "--modes", "3", "--omega1", "1e8"],
    ["modes", "--modes", "3", "--set", "support.kind=rod", "--omega1", "1e8"],
    ["exciton"],
    ["coupling", "--omega1", "1e8", "--set", "material=Si", "--set", "scenario.N=50"],
    ["nmax-scan", "--samples", "5"],
    ["simulate", "--ratio", "0.05", "--truncation", "3"],
    ["simulate", "--scan", "0.02,0.05"],
    ["dephasing", "--l-max", "2", "--radial-scale", "2=3.0"],
])
def test_subcommands_are_deterministic(argv, capsys):
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2 and out1.count("\n") > 1


def test_out_file(tmp_path, capsys):
    out = tmp_path / "modes.csv"
    code, stdout, _ = run(["modes", "--modes", "2", "--omega1", "1e8", "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    header, rows = parse(out.read_text())
    assert header[0] == "m" and len(rows) == 2


@pytest.mark.parametrize("argv,code", [
    (["modes"], 1),
    (["table1", "--set", "scenario.colour=red"], 1),
    (["table1", "--scenario", "/nonexistent/x.json"], 3),
    (["dephasing", "--radial-scale", "two"], 1),
    (["simulate", "--ratio", "0.3", "--truncation", "2"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv, capsys)[0] == code


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1


def test_help_and_module_entry():
    res = subprocess.run([sys.executable, "-m", "phononbus", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("modes", "exciton", "coupling", "nmax-scan", "table1", "fig2", "simulate", "dephasing"):
        assert cmd in res.stdout
