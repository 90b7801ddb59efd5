import json
from fractions import Fraction

import pytest

from nilkilling import catalog, specfile
from nilkilling.killing import dimension_table
from nilkilling.liealg import validate


def doc(**over):
    base = {
        "dim": 3,
        "basis": ["e1", "e2", "z1"],
        "brackets": [{"i": "e1", "j": "e2", "targets": [{"k": "z1", "c": "1"}]}],
    }
    base.update(over)
    return base


def test_parse_h3():
    alg = specfile.from_dict(doc())
    assert alg.dim == 3 and validate(alg) == []
    assert alg.bracket_basis(0, 1) == {2: 1}


def test_rationals_exact():
    d = doc(brackets=[{"i": "e1", "j": "e2", "targets": [{"k": "z1", "c": "-3/7"}]}])
    assert specfile.from_dict(d).bracket_basis(0, 1) == {2: Fraction(-3, 7)}


def test_metric():
    d = doc(metric=[["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1/4"]])
    alg = specfile.from_dict(d)
    assert alg.gram[2, 2] == Fraction(1, 4) and not alg.is_orthonormal()


def test_reversed_pair_stored():
    d = doc(brackets=[{"i": "e2", "j": "e1", "targets": [{"k": "z1", "c": "1"}]}])
    assert specfile.from_dict(d).bracket_basis(0, 1) == {2: -1}


@pytest.mark.parametrize(
    "bad",
    [
        [],
        {"dim": 3, "basis": ["a", "b", "c"]},
        doc(dim=2),
        doc(basis=["e1", "e1", "z1"]),
        doc(extra=1),
        doc(dim=True),
        doc(brackets=[{"i": "e1", "j": "x", "targets": []}]),
        doc(brackets=[{"i": "e1", "j": "e2", "targets": [{"k": "z1", "c": "1/0"}]}]),
        doc(brackets=[{"i": "e1", "j": "e2", "targets": [{"k": "z1", "c": 0.5}]}]),
        doc(brackets=[{"i": "e1", "j": "e2", "targets": [{"k": "z1"}]}]),
        doc(brackets=[{"i": "e1", "j": "e2", "targets": []}, {"i": "e1", "j": "e2", "targets": []}]),
        doc(metric=[["1", "0"], ["0", "1"]]),
        doc(brackets={}),
    ],
)
def test_rejects(bad):
    with pytest.raises(specfile.SpecError):
        specfile.from_dict(bad)


def test_invalid_json():
    with pytest.raises(specfile.SpecError):
        specfile.loads("{not json")


@pytest.mark.parametrize("name", list(catalog.ENTRIES))
def test_round_trip_catalog(name):
    alg = catalog.get(name)
    text = specfile.dumps(alg)
    again = specfile.loads(text)
    assert (again.structure == alg.structure).all()
    assert specfile.dumps(again) == text


def test_canonical_bytes():
    messy = json.dumps({
        "brackets": [
            {"i": "e2", "j": "e1", "targets": [{"k": "z1", "c": "-2/2"}]},
        ],
        "basis": ["e1", "e2", "z1"],
        "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "dim": 3,
    })
    assert specfile.dumps(specfile.loads(messy)) == specfile.dumps(catalog.h3())


def test_metric_written_when_needed():
    d = doc(metric=[["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    out = json.loads(specfile.dumps(specfile.from_dict(d)))
    assert out["metric"][0] == ["2", "0", "0"]


def test_file_round_trip(tmp_path):
    path = tmp_path / "h5.json"
    specfile.dump(catalog.h5(), path)
    alg = specfile.load(path)
    assert alg.name == "h5" and dimension_table(alg) == dimension_table(catalog.h5())


def test_bundled():
    names = specfile.bundled_names()
    for expected in ("h3", "h5", "quaternionic", "h3_plus_h3", "h3_plus_r2", "abelian3", "abelian4",
                     "free2step3"):
        assert expected in names
    for name in names:
        alg = specfile.load_bundled(name)
        assert validate(alg) == []
        assert specfile.dumps(alg) == specfile.dumps(catalog.get(name))


def test_bundled_missing():
    with pytest.raises(FileNotFoundError):
        specfile.load_bundled("nope")
