import hashlib
import json
import subprocess
import sys

import pytest

from ccext.catalog import Catalog, CatalogRecord, canonical_json, digest, revalidate
from ccext.cli import main
from ccext.groups import dihedral_group, group_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_canonical_digest_is_stable():
    payload = {"b": [1, 2], "a": "x"}
    assert canonical_json(payload) == '{"a":"x","b":[1,2]}'
    assert digest(payload) == hashlib.sha256(b'{"a":"x","b":[1,2]}').hexdigest()
    assert digest({"a": "x", "b": [1, 2]}) == digest(payload)


def test_record_line_round_trip_and_tamper_check():
    rec = CatalogRecord.make("skew", {"group": "cyclic:3", "perm": [0, 2, 1], "pi": [1, 1, 1], "m": 2})
    assert CatalogRecord.from_line(rec.to_line()) == rec
    tampered = json.loads(rec.to_line())
    tampered["payload"]["m"] = 3
    with pytest.raises(ValueError):
        CatalogRecord.from_line(json.dumps(tampered))
    with pytest.raises(ValueError):
        CatalogRecord.make("bogus", {})


def test_skew_count_commands(capsys):
    assert run(capsys, "skew", "enumerate", "--group", "cyclic:3", "--count")[:2] == (0, "2\n")
    assert run(capsys, "skew", "enumerate", "--group", "cyclic:1", "--count")[:2] == (0, "1\n")
    assert run(capsys, "skew", "enumerate", "--group", "cyclic:4", "--count")[:2] == (0, "2\n")


def test_emitted_lines_revalidate(capsys):
    code, out, _ = run(capsys, "skew", "enumerate", "--group", "dihedral:3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 12
    for line in lines:
        revalidate(CatalogRecord.from_line(line))
    code, out, _ = run(capsys, "epf", "enumerate", "--group", "cyclic:8", "--skew", "perm:0,3,6,1,4,7,2,5", "--n", "8")
    assert code == 0 and len(out.splitlines()) == 6
    for line in out.splitlines():
        revalidate(CatalogRecord.from_line(line))


def test_epf_enumerate_examples(capsys):
    assert run(capsys, "epf", "enumerate", "--group", "cyclic:2", "--skew", "0", "--n", "4", "--count")[1] == "2\n"
    code, out, _ = run(capsys, "epf", "enumerate", "--group", "cyclic:6", "--skew", "1", "--n", "3", "--count")
    assert (code, out) == (0, "1\n")


def test_selectors(capsys):
    code, out, _ = run(capsys, "skew", "enumerate", "--group", "cyclic:5")
    digests = [json.loads(line)["digest"] for line in out.splitlines()]
    prefix = digests[2][:10]
    code, out, _ = run(capsys, "epf", "enumerate", "--group", "cyclic:5", "--skew", prefix, "--n", "4", "--count")
    assert code == 0
    # the empty prefix matches every skew-morphism
    code, _, err = run(capsys, "epf", "enumerate", "--group", "cyclic:5", "--skew", "", "--n", "4")
    assert code == 2 and "matches" in err
    code, _, _ = run(capsys, "epf", "enumerate", "--group", "cyclic:5", "--skew", "99", "--n", "4")
    assert code == 2


def test_exit_codes(capsys):
    assert run(capsys, "skew", "enumerate", "--group", "nonsense")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "skew", "enumerate", "--group", "cyclic:13")[0] == 3
    assert run(capsys, "epf", "enumerate", "--group", "dihedral:4", "--skew", "0", "--n", "16", "--budget", "5")[0] == 3
    assert run(capsys, "build", "--group", "cyclic:2", "--skew", "0", "--n", "4", "--pi", "1,2")[0] == 1
    assert run(capsys, "build", "--triple", "8,8,3,1,2")[0] == 1
    assert run(capsys, "build", "--triple", "8,8,2,1,1")[0] == 2
    assert run(capsys, "classify", "--k", "8", "--n", "3", "--r", "3")[0] == 2


def test_order_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CCEXT_CAP_ORDER", "16")
    assert run(capsys, "build", "--triple", "8,8,3,1,3", "--emit", "cayley")[0] == 3
    assert run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3", "--classes")[0] == 3
    code, out, _ = run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3")
    assert code == 0 and all(json.loads(line)["class_id"] is None for line in out.splitlines())


def test_build_presentation(capsys):
    code, out, _ = run(capsys, "build", "--triple", "8,8,3,0,1", "--emit", "presentation")
    assert code == 0
    assert out.splitlines() == ["⟨a,c | a^8=c^8=1, c^2a=ac^2, ca=a^3c⟩", "⟨a,c | a^8=c^8=1, a^c=a^3⟩"]


def test_build_report(capsys):
    code, out, _ = run(capsys, "build", "--group", "cyclic:3", "--skew", "0", "--n", "4", "--pi", "1,1,1")
    assert code == 0
    checks = json.loads(out)["checks"]
    assert all(v["pass"] for v in checks.values())


def test_build_cayley_and_extract(capsys, tmp_path):
    out_file = tmp_path / "g.json"
    code, _, _ = run(capsys, "build", "--group", "cyclic:2", "--skew", "0", "--n", "4", "--pi", "1,3",
                     "--emit", "cayley", "--out", str(out_file))
    assert code == 0
    record = json.loads(out_file.read_text())
    assert record["order"] == 8
    rows = record["mul"]
    assert any(rows[a][b] != rows[b][a] for a in range(8) for b in range(8))
    code, out, _ = run(capsys, "extract", "--group", f"file:{out_file}", "--subgroup", "0,4", "--c", "1")
    assert code == 0
    assert json.loads(out)["epf"]["values"] == [1, 3]


def test_build_from_epf_file(capsys, tmp_path):
    code, out, _ = run(capsys, "epf", "enumerate", "--group", "cyclic:8", "--skew", "perm:0,3,6,1,4,7,2,5", "--n", "8")
    path = tmp_path / "rec.json"
    path.write_text(out.splitlines()[1])
    code, out, _ = run(capsys, "build", "--epf", str(path), "--emit", "presentation")
    assert code == 0 and out.startswith("⟨x,c |")


def test_file_group_spec(capsys, tmp_path):
    path = tmp_path / "d4.json"
    path.write_text(json.dumps(group_to_json(dihedral_group(4))))
    code, out, _ = run(capsys, "skew", "enumerate", "--group", f"file:{path}", "--count")
    assert (code, out) == (0, "20\n")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mul": [[0, 1], [1, 1]]}))
    assert run(capsys, "skew", "enumerate", "--group", f"file:{bad}")[0] == 2


def test_classify_outputs(capsys):
    code, out, _ = run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3", "--table")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2 + 6 + 1
    assert "ca=a^3c^3, ca^3=ac^7" in lines[3]
    assert lines[-1].startswith("note: published row (3,1,1) prints ca=a^3c^5")
    code, out, _ = run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3", "--classes")
    classes = [json.loads(line)["members"] for line in out.splitlines()]
    assert sorted(map(len, classes)) == [1, 1, 1, 1, 2]
    code, out, _ = run(capsys, "classify", "--k", "1", "--n", "5")
    assert code == 0 and len(out.splitlines()) == 1
    code, out, _ = run(capsys, "classify", "--k", "6", "--n", "12", "--all-r")
    assert {json.loads(line)["r"] for line in out.splitlines()} == {1, 5}


def test_catalog_is_idempotent(capsys, tmp_path):
    cat = tmp_path / "cat.jsonl"
    run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3", "--catalog", str(cat))
    first = cat.read_text()
    run(capsys, "classify", "--k", "8", "--n", "8", "--r", "3", "--catalog", str(cat))
    assert cat.read_text() == first
    recs = list(Catalog(cat))
    assert sorted(r.kind for r in recs).count("triple") == 6
    assert sorted(r.kind for r in recs).count("class") == 5
    for rec in recs:
        revalidate(rec)
    run(capsys, "skew", "enumerate", "--group", "cyclic:6", "--catalog", str(cat))
    assert len(list(Catalog(cat))) == 15


def test_verify_cyclic_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cyclic", "--budget", "500", "--seed", "7")
    assert code == 0 and "all invariants hold" in out
    assert "PASS cyclic.tau_product_law" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ccext", "skew", "enumerate", "--group", "cyclic:5", "--count"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "4\n"
