import io
import subprocess
import sys

import pytest

from bilpair.catalog import instantiate
from bilpair.cli import run
from bilpair.pair import dump, load, radical

from helpers import F2, F3, F7


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, id, F in (("a3_ext", "A_08", F7), ("a3", "A3", F3), ("a3x3", "A_08", F3), ("n2", "N2", F2)):
        paths[name] = str(tmp_path / f"{name}.bp")
        dump(instantiate(id, {}, F), paths[name])
    return paths


def test_radical(files):
    assert call("radical", files["a3_ext"]) == (0, "dim 1; basis e3\n")


def test_equiv_identity(files):
    code, out = call("equiv", files["a3_ext"], files["a3_ext"])
    assert code == 0
    assert out.splitlines()[1:] == ["1 0 0", "0 1 0", "0 0 1"]


def test_equiv_inequivalent(files, tmp_path):
    other = str(tmp_path / "b3.bp")
    dump(instantiate("B3", {}, F3), other)
    assert call("equiv", files["a3"], other) == (0, "inequivalent\n")


def test_h2(files):
    code, out = call("h2", files["a3"])
    assert code == 0
    assert "h2_dim 3" in out.splitlines()
    assert out.count("representative ") == 3


def test_aut(files):
    code, out = call("aut", files["a3"])
    assert code == 0 and out.startswith("order 6\n")


def test_extend_and_classify(files, tmp_path):
    ext = str(tmp_path / "ext.bp")
    assert call("extend", files["a3"], "--theta", "D12 + D22", "--out", ext)[0] == 0
    assert radical(load(ext)).dim == 1
    code, out = call("classify", files["a3"], "--s", "1", "--out", str(tmp_path / "rep"))
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("base\ts\t") and len(lines) == 7
    assert (tmp_path / "rep" / "a3_s1.tsv").read_text() == out


def test_usage_errors(files):
    assert call()[0] == 2
    assert call("radical", "/nonexistent.bp")[0] == 2
    assert call("verify-tables", "--field", "4")[0] == 2
    assert call("equiv", files["a3_ext"], files["a3x3"])[0] == 2
    assert call("classify", files["a3"], "--s", "9")[0] == 2
    assert call("extend", files["a3"], "--theta", "D13")[0] == 2


def test_budget_exit_code(tmp_path):
    big = str(tmp_path / "big.bp")
    with open(big, "w") as fh:
        fh.write("field p=7\ndim 4\ne1*e1 = 1*e2\n")
    assert call("aut", big)[0] == 3


def test_verify_tables_deterministic(monkeypatch):
    monkeypatch.setenv("BILPAIR_THREADS", "1")
    a = call("verify-tables", "--table", "main", "--field", "3", "--samples", "1")
    b = call("verify-tables", "--table", "main", "--field", "3", "--samples", "1")
    assert a == b and a[0] == 0
    assert a[1].splitlines()[0] == "section\tid\tcase\tvalues\tstatus\tdetail"


@pytest.mark.slow
def test_verify_table1_over_f7():
    proc = subprocess.run(
        [sys.executable, "-m", "bilpair.cli", "verify-tables", "--table", "1", "--field", "7", "--samples", "3"],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0, proc.stderr
    entries = {l.split("\t")[1] for l in proc.stdout.splitlines() if l.startswith("entry\t")}
    assert len(entries) == 68
    assert "\tFAIL\t" not in proc.stdout
