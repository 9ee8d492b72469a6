import json
import os
import subprocess
import sys

import pytest

from cobiased.bonds import format_class, trivial_class, validate_linear_class
from cobiased.cli import main
from cobiased.corpus import k3, k4, k24, k24_class, p4, p4_bc_class, rotation
from cobiased.gains import AdditiveGroup, GainAssignment, QuotientLabeling, format_gains, format_labeling
from cobiased.graph import format_graph
from cobiased.planar import format_rotation


@pytest.fixture
def files(tmp_path):
    z2 = AdditiveGroup.cyclic(2)
    contents = {
        "k3.graph": format_graph(k3()),
        "k4.graph": format_graph(k4()),
        "p4.graph": format_graph(p4()),
        "k24.graph": format_graph(k24()),
        "p4bc.class": format_class(p4_bc_class()),
        "k3triv.class": format_class(trivial_class(k3())),
        "k24.class": format_class(k24_class()),
        "k24.rot": format_rotation(rotation("k24")),
        "k3.rot": format_rotation(rotation("k3")),
        "k3a.gains": format_gains(GainAssignment(k3(), z2, ((1,), (1,), (0,)))),
        "k3b.gains": format_gains(GainAssignment(k3(), z2, ((0,), (0,), (1,)))),
        "k3zero.gains": "gains Z/2\n",
        "k4.labels": format_labeling(QuotientLabeling(k4(), AdditiveGroup.cyclic(3), ((1,), (1,), (1,), (0,)))),
        "k3s3.gains": "gains S3\ngain 0 120\n",
        "k3bad.class": format_class(trivial_class(k3())).splitlines()[0] + "\nbond 0 1\nbond 0 2\n",
    }
    for name, text in contents.items():
        (tmp_path / name).write_text(text)
    return lambda name: str(tmp_path / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bonds(capsys, files):
    code, out, _ = run(capsys, "bonds", files("k3.graph"))
    assert code == 0 and out.splitlines() == ["bond 0 1", "bond 0 2", "bond 1 2"]


def test_bonds_json(capsys, files):
    code, out, _ = run(capsys, "bonds", files("k3.graph"), "--json")
    assert code == 0 and len(json.loads(out)["bonds"]) == 3


def test_tribonds(capsys, files):
    _, out, _ = run(capsys, "tribonds", files("p4.graph"), "--dibonds")
    assert out.splitlines() == [
        "dibond 0 1 missing-cross-edges",
        "dibond 0 2 missing-cross-edges",
        "dibond 1 2 missing-cross-edges",
    ]


def test_tribond_line(capsys, files):
    _, out, _ = run(capsys, "tribonds", files("k3.graph"))
    assert out == "tribond 0 1 2 parts 0|1|2\n"


def test_validate_class(capsys, files):
    code, out, _ = run(capsys, "validate-class", files("p4.graph"), files("p4bc.class"))
    assert code == 0 and out == "linear bonds=1 trivial=no additive=yes\n"


def test_validate_class_violation(capsys, files):
    code, out, err = run(capsys, "validate-class", files("k3.graph"), files("k3bad.class"))
    assert code == 1 and "tribond" in err and out == ""


def test_enumerate_classes(capsys, files):
    _, out, _ = run(capsys, "enumerate-classes", files("k3.graph"))
    assert out.splitlines()[-1] == "count 5"
    _, out, _ = run(capsys, "enumerate-classes", files("k3.graph"), "--nontrivial")
    assert out.splitlines()[-1] == "count 4"


def test_matroid_cocircuits(capsys, files):
    code, out, _ = run(capsys, "matroid", files("p4.graph"), files("p4bc.class"), "--variant", "j", "--show", "cocircuits")
    assert code == 0 and out == "matroid j 3\ncocircuit 1\ncocircuit 0 2\n"


def test_matroid_complete_join(capsys, files):
    _, out, _ = run(capsys, "matroid", files("p4.graph"), files("p4bc.class"), "--variant", "j0", "--show", "bases")
    assert out == "matroid j0 4\nbase 0 1 2\nbase 0 1 *\nbase 1 2 *\n"


def test_matroid_trivial_complete_join(capsys, files):
    code, _, err = run(capsys, "matroid", files("k3.graph"), files("k3triv.class"), "--variant", "j0")
    assert code == 1 and "trivial" in err


def test_minor(capsys, files):
    code, out, _ = run(capsys, "minor", files("p4.graph"), files("p4bc.class"), "--op", "delete", "--edge", "0")
    assert code == 0
    assert out.startswith("graph 4\nedge 0 1 2\nedge 1 2 3\nclass ")
    assert out.endswith("bond 0\n")


def test_ljoins(capsys, files):
    _, out, _ = run(capsys, "ljoins", files("p4.graph"), files("p4bc.class"))
    assert out == "ljoin 0 2\n"


def test_gains_class(capsys, files):
    _, out, _ = run(capsys, "gains-class", files("k3.graph"), files("k3a.gains"))
    assert out.splitlines()[1:] == ["bond 0 1"]


def test_labeling_class(capsys, files):
    _, out, _ = run(capsys, "labeling-class", files("k4.graph"), files("k4.labels"))
    assert out.splitlines()[1:] == ["bond 2 4 5"]


def test_normalize(capsys, files):
    _, out, _ = run(capsys, "normalize", files("k3.graph"), files("k3b.gains"))
    assert out == "gains Z/2\ngain 0 1\ngain 1 1\ngain 2 0\n"


def test_normalize_bad_forest(capsys, files):
    code, _, err = run(capsys, "normalize", files("k3.graph"), files("k3b.gains"), "--forest", "0")
    assert code == 1 and "forest" in err


def test_equivalent(capsys, files):
    _, out, _ = run(capsys, "equivalent", files("k3.graph"), files("k3a.gains"), files("k3b.gains"))
    assert out == "equivalent\n"
    _, out, _ = run(capsys, "equivalent", files("k3.graph"), files("k3a.gains"), files("k3zero.gains"))
    assert out == "not-equivalent\n"


def test_realizable_z2(capsys, files):
    code, out, _ = run(capsys, "realizable", files("k24.graph"), files("k24.class"), "--group", "Z/2")
    assert code == 0 and out == "not-realizable searched=32\n"


def test_realizable_witness(capsys, files):
    code, out, _ = run(capsys, "realizable", files("p4.graph"), files("p4bc.class"), "--group", "Z/3")
    assert code == 0 and out.splitlines()[0].startswith("realizable searched=")
    assert "gains Z/3" in out


def test_realizable_planar(capsys, files):
    _, out, _ = run(
        capsys, "realizable", files("k24.graph"), files("k24.class"), "--group", "S3", "--planar", files("k24.rot")
    )
    assert out == f"not-realizable searched={6**8}\n"


def test_realizable_guard(capsys, files):
    code, _, err = run(capsys, "realizable", files("k24.graph"), files("k24.class"), "--group", "Z/6", "--max-space", "10")
    assert code == 1 and "guard" in err


def test_planar_class(capsys, files):
    _, out, _ = run(capsys, "planar-class", files("k3.graph"), files("k3.rot"), files("k3s3.gains"))
    assert out.splitlines()[1:] == ["bond 1 2"]


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "5,9")
    assert code == 0
    assert out.splitlines()[-1] == "summary 2/2 criteria passed"


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["bonds"], ["bonds", "/nonexistent/x.graph"], ["verify", "--criteria", "x"], ["verify", "--corpus", "other"]],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_format_error_is_domain_error(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("graph 2\nedge 0 0 5\n")
    code, _, err = run(capsys, "bonds", str(bad))
    assert code == 1 and err.startswith("cobiased: line 2:")


def test_byte_identical_across_hash_seeds(files):
    argv = ["matroid", files("p4.graph"), files("p4bc.class"), "--variant", "j0", "--json"]
    outputs = set()
    for seed in ("0", "1", "7"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "cobiased.cli", *argv], capture_output=True, env=env, check=True)
        outputs.add(proc.stdout)
    assert len(outputs) == 1


def test_class_file_for_other_graph(capsys, files, tmp_path):
    other = tmp_path / "k4triv.class"
    other.write_text(format_class(validate_linear_class(k4(), [])))
    code, _, err = run(capsys, "validate-class", files("k3.graph"), str(other))
    assert code == 1 and "references graph" in err
