import json
import shutil
import subprocess
import sys

import pytest

from cocat import serialize as ser
from cocat.abelian import AbelianGroup
from cocat.cli import main
from cocat.groupoid import delooping, identity_map, indiscrete, make_map
from cocat.groups import cyclic, symmetric
from cocat.site import circle_site


@pytest.fixture
def files(tmp_path):
    bc2 = delooping(cyclic(2))
    docs = {
        "c2": ser.group_to_json(cyclic(2)),
        "c3": ser.group_to_json(cyclic(3)),
        "s3": ser.group_to_json(symmetric(3)),
        "z": ser.abelian_to_json(AbelianGroup((0,))),
        "bc2": ser.groupoid_to_json(bc2),
        "i2": ser.groupoid_to_json(indiscrete(2)),
        "id": ser.groupoid_map_to_json(identity_map(bc2)),
        "collapse": ser.groupoid_map_to_json(make_map(bc2, delooping(cyclic(1)), [0], [0, 0])),
        "circle": ser.site_to_json(circle_site()),
        "nonassoc": {"elements": ["e", "a", "b"], "table": [[0, 1, 2], [1, 0, 0], [2, 0, 0]]},
        "badtype": {"elements": ["e"], "table": [["x"]]},
    }
    out = {}
    for name, data in docs.items():
        p = tmp_path / f"{name}.json"
        p.write_text(ser.dumps(data))
        out[name] = str(p)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    out["broken"] = str(broken)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_extensions_example(files, capsys):
    code, out, _ = run(capsys, "classify-extensions", "--h", files["c2"], "--k", files["c3"])
    r = json.loads(out)
    assert code == 0 and r["classes"] == 2 and r["oracleAgrees"] is True


def test_weq_on_identity(files, capsys):
    code, out, _ = run(capsys, "weq", "--map", files["id"])
    assert code == 0 and json.loads(out)["weq"] is True


def test_weq_failure_exits_one_with_witness(files, capsys):
    code, out, _ = run(capsys, "weq", "--map", files["collapse"])
    r = json.loads(out)
    assert code == 1 and r["weq"] is False and r["witness"]


def test_cech_example(files, capsys):
    code, out, _ = run(capsys, "cech", "--site", files["circle"], "--coeff", files["z"],
                       "--degree", "1")
    assert code == 0 and json.loads(out) == {"rank": 1, "torsion": []}


def test_torsors_on_circle(files, capsys):
    code, out, _ = run(capsys, "torsors", "--site", files["circle"], "--group", files["c2"])
    r = json.loads(out)
    assert code == 0
    assert (r["classes"], r["cechH1"], r["agree"]) == (2, 2, True)
    assert len(r["representatives"]) == 2


def test_cocycle_pi0(files, capsys):
    code, out, _ = run(capsys, "cocycle-pi0", "--x", files["bc2"], "--y", files["bc2"],
                       "--bound", "3")
    r = json.loads(out)
    assert code == 0 and r["bijection"] and r["classes"] == r["components"] == 2


def test_schema_violation_exits_two_with_path(files, capsys):
    code, out, err = run(capsys, "classify-extensions", "--h", files["badtype"], "--k",
                         files["c2"])
    r = json.loads(out)
    assert code == 2 and r["error"] == "input" and r["witness"] == "/table/0/0"
    assert "cocat:" in err


def test_unparseable_file_exits_two(files, capsys):
    code, out, _ = run(capsys, "weq", "--map", files["broken"])
    assert code == 2 and json.loads(out)["type"] == "SchemaViolation"


def test_missing_file_exits_two(files, capsys, tmp_path):
    code, _, _ = run(capsys, "weq", "--map", str(tmp_path / "nope.json"))
    assert code == 2


def test_algebraic_violation_exits_three(files, capsys):
    code, out, _ = run(capsys, "classify-extensions", "--h", files["nonassoc"], "--k",
                       files["c2"])
    r = json.loads(out)
    assert code == 3 and r["error"] == "algebraic" and r["witness"]


def test_nonabelian_cech_coefficients_exit_three(files, capsys):
    code, out, _ = run(capsys, "cech", "--site", files["circle"], "--coeff", files["s3"],
                       "--degree", "1")
    r = json.loads(out)
    assert code == 3 and r["type"] == "NoAbelianValues" and len(r["witness"]) == 2


def test_output_is_byte_identical_and_manifest_reproducible(files, capsys, tmp_path):
    argv = ["cech", "--site", files["circle"], "--coeff", files["z"], "--degree", "1"]
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    _, out1, _ = run(capsys, *argv, "--manifest", str(m1))
    _, out2, _ = run(capsys, *argv, "--manifest", str(m2))
    assert out1 == out2
    a, b = json.loads(m1.read_text()), json.loads(m2.read_text())
    assert a["outputDigest"] == b["outputDigest"] and a["inputs"] == b["inputs"]
    assert a["parameters"] == {"degree": 1}
    assert set(a["inputs"]) == {"site", "coeff"}


def test_table_format_renders_the_same_report(files, capsys):
    _, out, _ = run(capsys, "cech", "--site", files["circle"], "--coeff", files["z"],
                    "--degree", "1", "--format", "table")
    lines = out.splitlines()
    assert lines[0].split() == ["rank", "1"]
    assert "torsion:" in lines


def test_unknown_command_is_rejected(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


@pytest.mark.skipif(shutil.which("cocat") is None, reason="console script not installed")
def test_console_script(files):
    p = subprocess.run(["cocat", "weq", "--map", files["id"]], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["weq"] is True


def test_module_entry_point(files):
    p = subprocess.run([sys.executable, "-m", "cocat.cli", "weq", "--map", files["collapse"]],
                       capture_output=True, text=True)
    assert p.returncode == 1
