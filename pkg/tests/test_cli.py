import json

import pytest

from braceforge.classlist import read_class_list, read_subgroup_list, write_subgroup_list
from braceforge.cli import main
from braceforge.errors import IntegrityError


def test_enumerate_small_counts(tmp_path, capsys):
    out = tmp_path / "c4.classes"
    assert main(["enumerate", "--group", "4", "--prime", "2", "--out", str(out)]) == 0
    assert "classes=2" in capsys.readouterr().out
    _spec, rows = read_class_list(out)
    assert len(rows) == 2

    out2 = tmp_path / "c2.classes"
    assert main(["enumerate", "--group", "2", "--prime", "2", "--out", str(out2)]) == 0
    assert len(read_class_list(out2)[1]) == 1

    out3 = tmp_path / "c22.classes"
    assert main(["enumerate", "--group", "2,2", "--prime", "2", "--out", str(out3)]) == 0
    assert len(read_class_list(out3)[1]) == 2


@pytest.mark.parametrize("group", ["4", "2,4", "2,2"])
def test_verify_passes(group, capsys):
    assert main(["verify", "--group", group, "--prime", "2"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_oracle_and_reclassify_identical(tmp_path):
    classes = tmp_path / "a.classes"
    raw = tmp_path / "a.subs"
    reclass = tmp_path / "b.classes"
    assert main(["oracle", "--group", "2,2", "--prime", "2", "--out", str(classes)]) == 0
    assert main(["oracle", "--group", "2,2", "--prime", "2", "--raw", "--out", str(raw)]) == 0
    assert main(["classify", "--in", str(raw), "--out", str(reclass)]) == 0
    assert classes.read_bytes() == reclass.read_bytes()
    _spec, subs = read_subgroup_list(raw)
    assert len(subs) == 4


def test_enumerate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.classes", tmp_path / "b.classes"
    for out in (a, b):
        assert main(["enumerate", "--group", "2,4", "--prime", "2", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jobs_byte_identical(tmp_path):
    a, b = tmp_path / "j1.classes", tmp_path / "j8.classes"
    assert main(["enumerate", "--group", "2,4", "--prime", "2", "--jobs", "1", "--out", str(a)]) == 0
    assert main(["enumerate", "--group", "2,4", "--prime", "2", "--jobs", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_report(tmp_path, capsys):
    classes = tmp_path / "c4.classes"
    main(["enumerate", "--group", "4", "--prime", "2", "--out", str(classes)])
    capsys.readouterr()
    assert main(["report", "--in", str(classes)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "total\t2"
    body = [l.split("\t") for l in lines[:-1]]
    assert len(body) == 2 and all(c == "1" for _id, c in body)
    assert sum(int(c) for _id, c in body) == 2


def test_report_empty(tmp_path, capsys):
    empty = tmp_path / "empty.classes"
    empty.write_text("BRACEFORGE-CLASSES 1\n2\ntotal=0\n")
    assert main(["report", "--in", str(empty)]) == 0
    assert capsys.readouterr().out == "total\t0\n"


def test_report_id_map(tmp_path, capsys):
    classes = tmp_path / "c4.classes"
    main(["enumerate", "--group", "4", "--prime", "2", "--out", str(classes)])
    _spec, rows = read_class_list(classes)
    import hashlib

    fid = hashlib.sha256(rows[0][0][0].encode()).hexdigest()[:12]
    mapping = tmp_path / "ids.json"
    mapping.write_text(json.dumps({fid: "FIRST"}))
    capsys.readouterr()
    assert main(["report", "--in", str(classes), "--id-map", str(mapping)]) == 0
    assert "FIRST\t1" in capsys.readouterr().out


def test_exit_codes(tmp_path, capsys):
    # integrity: corrupt input file
    bad = tmp_path / "bad.classes"
    bad.write_text("garbage\n")
    assert main(["report", "--in", str(bad)]) == 3
    # integrity: group/prime mismatch
    assert main(["enumerate", "--group", "6", "--prime", "2", "--out", str(tmp_path / "x")]) == 3
    capsys.readouterr()


def test_resume_over_finished_checkpoints(tmp_path):
    """--resume over a completed checkpoint set reproduces the same bytes."""
    ck = tmp_path / "ck"
    out_a = tmp_path / "first.classes"
    out_b = tmp_path / "second.classes"
    base = ["enumerate", "--group", "2,4", "--prime", "2", "--checkpoint-dir", str(ck)]
    assert main(base + ["--out", str(out_a)]) == 0
    assert (ck / "layer_0000.ckpt").exists()
    assert main(base + ["--resume", "--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_subgroup_list_roundtrip(tmp_path, spec_run):
    run = spec_run("2,2")
    path = tmp_path / "subs.txt"
    write_subgroup_list(path, run.spec, run.oracle_subs)
    spec, subs = read_subgroup_list(path)
    assert spec == run.spec
    assert [s.key for s in subs] == [s.key for s in run.oracle_subs]


def test_class_list_rejects_bad_footer(tmp_path):
    bad = tmp_path / "bad.classes"
    bad.write_text("BRACEFORGE-CLASSES 1\n4\ntotal=5\n")
    with pytest.raises(IntegrityError):
        read_class_list(bad)
