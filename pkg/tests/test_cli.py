import io
import json
import math
import subprocess
import sys

import pytest

from lorentz_entropy.cli import main, parse_config, run


def call(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(out):
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def test_envelope_table(capsys):
    code, out, _ = call(capsys, "envelope", "p=2", "u=1", "q=2", "v=2", "n=1024", "kmax=4096")
    assert code == 0
    assert out.startswith("# schema=1\n")
    rows = data_rows(out)
    assert len(rows) == 4096
    assert {r["case"] for r in rows} == {"III.1"}
    assert {r["regime"] for r in rows} == {"small-k", "mid-k", "large-k"}
    assert float(rows[1023]["value"]) == 0.5


def test_opnorm_exact(capsys):
    code, out, _ = call(capsys, "opnorm", "p=2", "u=2", "q=2", "v=1", "n=3", "method=exact")
    assert code == 0
    assert float(data_rows(out)[0]["value"]) == pytest.approx(math.sqrt(11 / 6), rel=1e-15)


def test_seventeen_digits(capsys):
    _, out, _ = call(capsys, "norm", "p=inf", "u=1", "x=1,1,1")
    assert data_rows(out)[0]["value"] == format(11 / 6, ".17g")


def test_inf_token_and_json(capsys):
    code, out, _ = call(capsys, "norm", "p=1", "u=inf", "x=1,1,1", "format=json")
    assert code == 0
    assert json.loads(out) == {"n": 3, "value": 3.0}


def test_other_commands(capsys):
    assert call(capsys, "sigma", "q=inf", "v=inf", "s=1", "x=3,2,1")[0] == 0
    assert call(capsys, "usup", "p=2", "u=inf", "q=2", "v=1", "n=90", "s=9")[0] == 0
    assert call(capsys, "kfunc", "x=1,1", "t=1.5")[0] == 0
    code, out, _ = call(capsys, "volume", "p=2", "u=1", "n=3", "samples=20000", "seed=1")
    assert code == 0 and data_rows(out)[0]["exact"] == ""
    code, out, _ = call(capsys, "entropy-bounds", "p=1", "u=1", "q=inf", "v=inf", "n=2", "kmax=3")
    assert code == 0
    rows = data_rows(out)
    assert all(float(r["packing_lower"]) <= float(r["covering_upper"]) for r in rows)


@pytest.mark.parametrize("args", [
    ["opnorm", "p=2", "u=1", "q=1", "v=2", "n=3"],
    ["norm", "p=2"],
    ["norm", "p=-1", "u=1", "x=1"],
    ["envelope", "p=2", "u=1", "q=2", "v=2", "n=8", "bogus=1"],
    ["nonsense"],
    ["volume", "p=2", "u=1", "n=2.5"],
])
def test_errors_are_machine_readable(capsys, args):
    code, out, err = call(capsys, *args)
    assert code != 0
    assert out == ""
    rec = json.loads(err)
    assert "error" in rec and "message" in rec


def test_identical_config_identical_bytes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.csv"
        assert main(["volume", "p=inf", "u=2", "n=4", "samples=30000", "seed=7", f"output={path}"]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_subset_exit_codes():
    buf = io.StringIO()
    extras = {}
    assert run(parse_config(["verify", "suite=6,10", "seed=42"]), buf, extras) == 0
    assert [r.criterion for r in extras["results"]] == [6, 10]
    assert "# criterion 6 PASS" in buf.getvalue()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lorentz_entropy.cli", "norm", "p=2", "u=2", "x=3,4"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[-1] == "2,5"
