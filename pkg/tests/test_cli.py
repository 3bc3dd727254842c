import json

import pytest

from k3forms import suite
from k3forms.cli import main
from k3forms.exactmath import matmul, transpose


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_lattice_info_a0(capsys):
    code, doc = run(capsys, "lattice", "info", "--name", "A0")
    assert code == 0
    assert doc["schema"] == 1
    assert doc["signature"] == [2, 5, 0]
    assert doc["det"] == -6
    assert doc["even"] is True
    assert doc["disc"] == [2, 3]


def test_lattice_info_inline_gram(capsys):
    code, doc = run(capsys, "lattice", "info", "--gram", "[[0,1],[1,0]]")
    assert code == 0 and doc["det"] == -1


def test_lattice_info_from_file(tmp_path, capsys):
    path = tmp_path / "b1.json"
    path.write_text(json.dumps({"gram": [[-2, 1], [1, -2]], "label": "A2(-1)"}))
    code, doc = run(capsys, "lattice", "info", "--file", str(path))
    assert code == 0 and doc["det"] == 3 and doc["label"] == "A2(-1)"


def test_isometry_between_files(tmp_path, capsys):
    code, b1 = run(capsys, "lattice", "dump", "--name", "B1")
    code2, a1 = run(capsys, "lattice", "dump", "--name", "A1(2)")
    assert code == code2 == 0
    left, right = tmp_path / "B1.json", tmp_path / "A1twist2.json"
    left.write_text(json.dumps(b1))
    right.write_text(json.dumps(a1))
    code, doc = run(capsys, "lattice", "isometry", "--left", str(left), "--right", str(right))
    assert code == 0 and doc["result"] == "isometric"
    P = doc["P"]
    assert matmul(transpose(P), matmul(b1["gram"], P)) == a1["gram"]


def test_isometry_refuted(capsys):
    code, doc = run(capsys, "lattice", "isometry", "--left", "B0", "--right", "A0(2)")
    assert code == 1 and doc["result"] == "not isometric"


def test_complement_output(capsys):
    code, doc = run(capsys, "lattice", "complement")
    assert code == 0
    assert len(doc["basis"]) == 7 and len(doc["gram"]) == 7


def test_catalog_list_and_dump(capsys):
    code, doc = run(capsys, "catalog", "list")
    assert code == 0 and "A0" in doc["names"]
    code, doc = run(capsys, "catalog", "dump", "--name", "A0")
    assert code == 0 and len(doc["gram"]) == 7


def test_fibers_classify_generic(capsys):
    code, doc = run(capsys, "fibers", "classify", "--params", "1,1,1,1,1,1,1")
    assert code == 0
    assert doc["types"] == {"I1": 7, "III*": 1, "IV*": 1}
    assert doc["total_euler"] == 24
    assert doc["d84"] == "9917532888584159232"


def test_fibers_classify_json_params(capsys):
    code, doc = run(capsys, "fibers", "classify", "--params", '{"a": ["1", "2/3", "1", "1", "1", "1", "1"]}')
    assert code == 0 and doc["a"][1] == "2/3"


def test_fibers_sample(capsys):
    code, doc = run(capsys, "fibers", "sample", "--kind", "type-I2")
    assert code == 0 and doc["types"]["I2"] == 1 and doc["d84"] == "0"


def test_fibers_rational_surface_is_structured_error(capsys):
    code, doc = run(capsys, "fibers", "classify", "--params", "0,0,1,0,0,0,0")
    assert code == 1
    assert doc["error"] == "not a K3 surface"


def test_graded_verbs(capsys):
    code, doc = run(capsys, "graded", "canonical", "--params", "2,4,6,8,10,12,14")
    assert code == 0 and doc["chart"] == "u" and doc["values"] == ["2", "6", "8", "20", "24", "56"]
    code, doc = run(capsys, "graded", "canonical", "--params", "0,2,3,5,7,11,13")
    assert code == 0 and doc["chart"] == "t" and doc["values"] == ["3", "5", "14", "22", "52"]
    code, doc = run(capsys, "graded", "humbert", "--params", "0,1,0,0,0,2,0")
    assert code == 0 and doc["humbert"] == "4"
    code, doc = run(capsys, "graded", "hilbert", "--system", "u", "--k", "8")
    assert code == 0 and doc["count"] == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["lattice", "info", "--gram", "[[1,2],[3"],
        ["lattice", "info", "--name", "nonsense"],
        ["fibers", "classify", "--params", "1,2"],
        ["verify", "all", "--only", "no_such_check"],
        ["verify", "all", "--tamper", "A0:x:0:1"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_verify_single_check_writes_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["verify", "all", "--only", "numerology", "--json", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1
    assert [c["id"] for c in doc["checks"]] == ["numerology"]
    assert doc["summary"] == {"pass": 1, "fail": 0, "skipped": 0, "total": 1}


def test_verify_report_is_deterministic(tmp_path, capsys):
    docs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        main(["verify", "all", "--only", "fibers_generic,graded_equivariance", "--seed", "3", "--json", str(path)])
        doc = json.loads(path.read_text())
        for c in doc["checks"]:
            c.pop("elapsed_ms")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_tampered_gram_fails_with_check_id(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["verify", "all", "--only", "kummer_transcendental", "--tamper", "B0:4:4:-2", "--json", str(path)])
    assert code == 1
    doc = json.loads(path.read_text())
    assert [c["id"] for c in doc["checks"] if c["status"] == "fail"] == ["kummer_transcendental"]


def test_every_in_scope_item_is_covered_by_existing_checks():
    covered = set()
    for item, ids in suite.IN_SCOPE_ITEMS.items():
        assert ids, item
        for i in ids:
            assert i in suite.CHECK_IDS, (item, i)
            covered.add(i)
    assert covered == set(suite.CHECK_IDS)
    assert all(c.anchor for c in suite.CHECKS)


def test_unknown_check_id_raises():
    with pytest.raises(KeyError):
        suite.run_checks(0, ["nope"])
