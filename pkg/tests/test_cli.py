import json
import os

import pytest

from finspan.cli import main
from finspan.dot import check_dot

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "finspan", "data")


def run(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, json.loads(out.read_text())


def test_decomposition_pass_and_fail(tmp_path):
    code, rep = run(tmp_path, "check-decomposition", "--decomposition", "div12-all")
    assert code == 0 and rep["command"] == "check-decomposition"
    code, rep = run(tmp_path, "check-decomposition", "--decomposition", "finset2-inj-surj")
    assert code == 1
    assert any(c["verdict"] == "fail" for c in rep["checks"])


def test_usage_errors(tmp_path, capsys):
    assert main(["check-decomposition", "--builtin", "nosuch"]) == 2
    assert main(["check-decomposition", "--input", str(tmp_path / "missing.cat")]) == 2
    bad = tmp_path / "bad.cat"
    bad.write_text("[objects]\na\n[morphisms]\nf : a b\n")
    assert main(["check-decomposition", "--input", str(bad)]) == 2


def test_byte_identical(tmp_path):
    argv = ["build-span2", "--decomposition", "div6-all"]
    main(argv + ["--out", str(tmp_path / "a.json")])
    main(argv + ["--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.parametrize("argv", [
    ["check-biadjointable", "--decomposition", "finset3-inj", "--indexing", "subset"],
    ["check-projection", "--decomposition", "finset3-inj", "--indexing", "subset"],
    ["factorization-category", "--decomposition", "finset2-inj"],
])
def test_recheck(tmp_path, argv):
    out = tmp_path / "r.json"
    main(argv + ["--out", str(out)])
    assert main(["recheck", str(out), "--out", str(tmp_path / "re.json")]) == 0


def test_recheck_detects_tampering(tmp_path):
    out = tmp_path / "r.json"
    main(["check-decomposition", "--decomposition", "div6-all", "--out", str(out)])
    rep = json.loads(out.read_text())
    rep["checks"][0]["verdict"] = "fail"
    out.write_text(json.dumps(rep))
    assert main(["recheck", str(out)]) == 1


def test_dot_and_figure(tmp_path):
    dot, fig = tmp_path / "c.dot", tmp_path / "c.png"
    code = main(["build-span", "--decomposition", "div6-all", "--dot", str(dot), "--figure", str(fig)])
    assert code == 0
    assert check_dot(dot.read_text())[0]
    assert fig.stat().st_size > 0


def test_file_input(tmp_path):
    code, rep = run(tmp_path, "verify-extension", "--input", os.path.join(DATA, "div2-down.cat"),
                    "--family", "E=all,I=all,P=iso", "--indexing", "down", "--hom-formula")
    assert code == 0
    assert rep["inputs"]["digest"].startswith("sha256:")
    code, _ = run(tmp_path, "check-decomposition", "--input", os.path.join(DATA, "finset3.cat"),
                  "--family", "E=E,I=I,P=P")
    assert code == 0


def test_segal(tmp_path):
    code, rep = run(tmp_path, "segal-compare", "--decomposition", "div6-all", "--max-n", "2")
    assert code == 0
    assert all(c["verdict"] == "pass" for c in rep["checks"])
