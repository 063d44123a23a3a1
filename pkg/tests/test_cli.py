import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from mms.canon import normal_form
from mms.cli import main
from mms.fixtures import laderman, naive, strassen
from mms.scheme import Scheme, dumps_json, parse, serialize, transpose_c
from mms.symmetry import apply, parse_element, random_element

DATA = Path(__file__).resolve().parents[1] / "src" / "mms" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return write


def test_packaged_fixtures_verify(capsys):
    code, out, _ = run(capsys, "verify", DATA / "strassen.mms", DATA / "strassen3.mms", DATA / "laderman.mms")
    assert code == 0
    assert out.count("OK ") == 3


def test_verify_fail_and_malformed(capsys, files):
    lines = serialize(strassen(2)).splitlines()
    lines[1] = "0" + lines[1][1:]
    bad = files("bad.mms", "\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", bad)
    assert code == 1 and out.startswith("FAIL")
    junk = files("junk.mms", "scheme 2 7 2\n1 2\n")
    code, _, err = run(capsys, "verify", junk)
    assert code == 2 and "junk.mms:2:" in err
    code, _, err = run(capsys, "verify", files("x.mms", "scheme 2 7 4\n"))
    assert code == 2 and "not prime" in err
    code, _, _ = run(capsys, "verify", "/nonexistent.mms")
    assert code == 2


def test_field_flag(capsys):
    assert run(capsys, "verify", "--field", "2", DATA / "strassen.mms")[0] == 0
    assert run(capsys, "verify", "--field", "3", DATA / "strassen.mms")[0] == 2
    assert run(capsys, "verify", "--field", "4", DATA / "strassen.mms")[0] == 2


def test_convention_flag(capsys, files):
    c_form = files("c.mms", serialize(transpose_c(strassen(3))))
    assert run(capsys, "verify", c_form)[0] == 1
    assert run(capsys, "verify", "--convention", "c", c_form)[0] == 0


def test_normalize_deterministic_and_witness(capsys, files):
    code, out1, _ = run(capsys, "normalize", DATA / "strassen.mms")
    _, out2, _ = run(capsys, "normalize", DATA / "strassen.mms")
    assert code == 0 and out1 == out2
    assert parse(out1) == [normal_form(strassen(2)).nf]
    code, out, _ = run(capsys, "normalize", "--witness", DATA / "laderman.mms")
    nf = parse(out)[0]
    wline = [ln for ln in out.splitlines() if ln.startswith("# witness: ")][0]
    g = parse_element(wline[len("# witness: "):], 3, 23, 2)
    assert apply(g, laderman(2)) == nf


def test_normalize_orbit_samples_agree(capsys, files):
    code, out, _ = run(capsys, "orbit-sample", "--count", "4", "--seed", "3", DATA / "strassen.mms")
    assert code == 0
    samples = files("samples.mms", out)
    _, normed, _ = run(capsys, "normalize", samples)
    _, base, _ = run(capsys, "normalize", DATA / "strassen.mms")
    assert normed == base * 4


def test_normalize_warns_on_invalid(capsys, files):
    f = files("z.mms", "scheme 2 1 2\n1 0 0 1 0 0 0 0 1 1 1 1\n")
    code, out, err = run(capsys, "normalize", f)
    assert code == 0 and "does not verify" in err
    assert parse(out)


def test_normalize_cap(capsys):
    code, _, err = run(capsys, "normalize", "--max-stabilizer", "5", DATA / "strassen.mms")
    assert code == 3 and "cap" in err
    assert run(capsys, "normalize", "--max-stabilizer", "0", DATA / "strassen.mms")[0] == 2


def test_json_io(capsys, files):
    f = files("s.json", dumps_json(strassen(3)))
    code, out, _ = run(capsys, "normalize", "--json", "--witness", f)
    obj = json.loads(out)
    assert code == 0 and set(obj) == {"nf", "witness"}
    assert obj["nf"]["field"] == 3
    assert run(capsys, "verify", f)[0] == 0
    code, out, _ = run(capsys, "orbit-sample", "--json", "--count", "2", f)
    assert len(json.loads(out)) == 2
    assert run(capsys, "verify", "--json", files("bad.json", "{\"n\": 2}"))[0] == 2


def test_equiv(capsys, files):
    _, sample, _ = run(capsys, "orbit-sample", "--count", "1", "--seed", "11", DATA / "laderman.mms")
    other = files("other.mms", sample)
    code, out, _ = run(capsys, "equiv", "--witness", DATA / "laderman.mms", other)
    assert code == 0 and out.startswith("equivalent")
    g = parse_element(out.splitlines()[1][len("# witness: "):], 3, 23, 2)
    assert apply(g, laderman(2)) == parse(sample)[0]
    assert run(capsys, "equiv", DATA / "strassen.mms", DATA / "strassen.mms")[0] == 0
    rows = strassen(2).to_lists()
    rows[1][0] = [[0, 0], [0, 0]]
    zeroed = files("zeroed.mms", serialize(Scheme.from_matrices(rows, 2)))
    code, out, _ = run(capsys, "equiv", DATA / "strassen.mms", zeroed)
    assert code == 1 and "rank patterns differ" in out
    code, _, err = run(capsys, "equiv", DATA / "strassen.mms", DATA / "laderman.mms")
    assert code == 2 and "shape mismatch" in err
    two = files("two.mms", serialize(strassen(2)) * 2)
    assert run(capsys, "equiv", two, DATA / "strassen.mms")[0] == 2


def test_equiv_same_pattern_not_equivalent(capsys, files):
    a = files("a.mms", "scheme 2 2 2\n1 0 0 0 1 0 0 0 1 0 0 0\n1 0 0 0 1 0 0 0 1 0 0 0\n")
    b = files("b.mms", "scheme 2 2 2\n1 0 0 0 1 0 0 0 1 0 0 0\n0 1 0 0 0 1 0 0 0 1 0 0\n")
    code, out, _ = run(capsys, "equiv", a, b)
    assert code == 1 and "normal forms differ" in out


def test_rank_pattern(capsys, files):
    code, out, _ = run(capsys, "rank-pattern", DATA / "strassen.mms")
    assert code == 0
    assert "sorted: (2,2,2)" + " (1,1,1)" * 6 in out
    assert out.count("pi=") == 6
    z = files("z.mms", "scheme 2 1 2\n" + " ".join(["0"] * 12) + "\n")
    assert "1: 0 0 0" in run(capsys, "rank-pattern", z)[1]
    n1 = files("n1.mms", "scheme 1 2 2\n1 0 1\n0 1 1\n")
    out = run(capsys, "rank-pattern", n1)[1]
    assert "1: 1 0 1" in out and "2: 0 1 1" in out


def test_orbit_sample(capsys):
    code, out, _ = run(capsys, "orbit-sample", "--count", "0", DATA / "strassen.mms")
    assert code == 0 and out == ""
    _, a, _ = run(capsys, "orbit-sample", "--count", "3", "--seed", "2", DATA / "strassen3.mms")
    _, b, _ = run(capsys, "orbit-sample", "--count", "3", "--seed", "2", DATA / "strassen3.mms")
    assert a == b and len(parse(a)) == 3
    assert run(capsys, "orbit-sample", "--count", "-1", DATA / "strassen.mms")[0] == 2


def test_orbit_sample_stable_across_processes():
    cmd = [sys.executable, "-m", "mms", "orbit-sample", "--count", "2", "--seed", "9", str(DATA / "strassen.mms")]
    outs = {subprocess.run(cmd, capture_output=True, text=True, check=True, env=dict(os.environ, PYTHONHASHSEED=str(h))).stdout for h in (1, 2)}
    assert len(outs) == 1


def _dedupe_inputs(files):
    paths = []
    for name, s in [("s2", strassen(2)), ("s3", strassen(3)), ("n22", naive(2, 2))]:
        base = files(f"{name}.mms", serialize(s))
        paths.append(base)
        paths.append(files(f"{name}_orbit.mms", serialize(apply(random_element(s.n, s.r, s.p, 1), s))))
    return paths


def test_dedupe_and_index(capsys, files, tmp_path):
    paths = _dedupe_inputs(files)
    index = tmp_path / "index.txt"
    code, out, _ = run(capsys, "dedupe", "--index", index, *paths)
    assert code == 0
    assert out.splitlines()[-1] == "6 schemes, 3 classes, 3 new"
    text = index.read_text()
    lines = text.splitlines()
    assert len(lines) == 3 and lines == sorted(lines) and text.endswith("\n")
    code, out, _ = run(capsys, "dedupe", "--index", index, *reversed(paths))
    assert out.splitlines()[-1] == "6 schemes, 3 classes, 0 new"
    assert index.read_text() == text
    code, out, _ = run(capsys, "dedupe")
    assert code == 0 and out == "0 schemes, 0 classes, 0 new\n"


def test_dedupe_representative_independent_of_order(capsys, files):
    paths = _dedupe_inputs(files)
    a = run(capsys, "dedupe", *paths)[1]
    b = run(capsys, "dedupe", *reversed(paths))[1]
    c = run(capsys, "dedupe", "--jobs", "2", *paths)[1]
    assert a == b == c


@pytest.mark.parametrize(
    "content",
    ["zz" * 32 + " a:1\n", "ab" * 32 + " a:1", "ab" * 31 + " a:1\n", "ab" * 32 + "\n", ("ab" * 32 + " a:1\n") * 2],
)
def test_dedupe_corrupt_index(capsys, files, tmp_path, content):
    index = tmp_path / "idx"
    index.write_text(content)
    code, _, err = run(capsys, "dedupe", "--index", index, DATA / "strassen.mms")
    assert code == 4 and "corrupt" in err
    assert index.read_text() == content


def test_jobs_env(capsys, files, monkeypatch):
    monkeypatch.setenv("MMS_JOBS", "2")
    paths = _dedupe_inputs(files)
    assert run(capsys, "dedupe", *paths)[1].splitlines()[-1] == "6 schemes, 3 classes, 3 new"


def test_console_script():
    exe = Path(sys.executable).with_name("mms")
    cmd = [str(exe)] if exe.exists() else [sys.executable, "-m", "mms"]
    res = subprocess.run(cmd + ["verify", str(DATA / "strassen.mms")], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("OK")
    res = subprocess.run(cmd + ["bogus"], capture_output=True, text=True)
    assert res.returncode == 2
