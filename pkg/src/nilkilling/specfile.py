"""JSON spec files for metric Lie algebras.

Layout::

    {"dim": 3,
     "basis": ["e1", "e2", "z1"],
     "metric": [["1", "0", "0"], ...],          # optional, default identity
     "brackets": [{"i": "e1", "j": "e2", "targets": [{"k": "z1", "c": "1"}]}]}

Rationals are strings ``"p/q"`` (integers and plain ints are accepted on
input).  :func:`dumps` writes the canonical form: brackets with i before j
in basis order, targets in basis order, metric omitted when it is the
identity, sorted keys.
"""

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import linalg
from .liealg import MetricLieAlgebra


class SpecError(ValueError):
    """Malformed spec document."""


def _rational(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SpecError(f"{where}: expected a rational string, got {x!r}")
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"{where}: cannot parse rational {x!r}") from None


def from_dict(doc, name=None):
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object")
    missing = {"dim", "basis", "brackets"} - set(doc)
    if missing:
        raise SpecError(f"missing keys: {', '.join(sorted(missing))}")
    unknown = set(doc) - {"dim", "basis", "metric", "brackets", "name"}
    if unknown:
        raise SpecError(f"unknown keys: {', '.join(sorted(unknown))}")
    dim, basis = doc["dim"], doc["basis"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise SpecError("dim must be a non-negative integer")
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise SpecError("basis must be a list of names")
    if len(basis) != dim:
        raise SpecError(f"basis has {len(basis)} names but dim is {dim}")
    if len(set(basis)) != dim:
        raise SpecError("basis names must be distinct")
    pos = {b: i for i, b in enumerate(basis)}

    def resolve(label, where):
        if label not in pos:
            raise SpecError(f"{where}: unknown basis name {label!r}")
        return pos[label]

    gram = None
    if doc.get("metric") is not None:
        metric = doc["metric"]
        if not (isinstance(metric, list) and len(metric) == dim
                and all(isinstance(r, list) and len(r) == dim for r in metric)):
            raise SpecError(f"metric must be a {dim}x{dim} array")
        gram = linalg.as_matrix([[_rational(x, f"metric[{r}][{c}]") for c, x in enumerate(row)]
                                 for r, row in enumerate(metric)])
    if not isinstance(doc["brackets"], list):
        raise SpecError("brackets must be a list")
    brackets = {}
    for n, entry in enumerate(doc["brackets"]):
        where = f"brackets[{n}]"
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "targets"}:
            raise SpecError(f"{where}: expected keys i, j, targets")
        key = (resolve(entry["i"], where), resolve(entry["j"], where))
        if key in brackets:
            raise SpecError(f"{where}: duplicate bracket [{entry['i']}, {entry['j']}]")
        if not isinstance(entry["targets"], list):
            raise SpecError(f"{where}: targets must be a list")
        row = {}
        for t in entry["targets"]:
            if not isinstance(t, dict) or set(t) != {"k", "c"}:
                raise SpecError(f"{where}: each target needs keys k, c")
            k = resolve(t["k"], where)
            row[k] = row.get(k, 0) + _rational(t["c"], where)
        brackets[key] = row
    return MetricLieAlgebra(basis, brackets, gram, name or doc.get("name"))


def loads(text, name=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    return from_dict(doc, name)


def load(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads(text, name=Path(path).stem)


def to_dict(alg):
    names = alg.names
    brackets = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            t = alg.bracket_basis(i, j)
            if t:
                brackets.append({
                    "i": names[i],
                    "j": names[j],
                    "targets": [{"k": names[k], "c": str(t[k])} for k in sorted(t)],
                })
    doc = {"dim": alg.dim, "basis": list(names), "brackets": brackets}
    if not alg.is_orthonormal():
        doc["metric"] = [[str(Fraction(x)) for x in row] for row in alg.gram]
    return doc


def dumps(alg):
    return json.dumps(to_dict(alg), sort_keys=True, indent=2) + "\n"


def dump(alg, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(alg))


def bundled_names():
    files = resources.files("nilkilling").joinpath("data")
    return sorted(p.name.removesuffix(".json") for p in files.iterdir() if p.name.endswith(".json"))


def load_bundled(name):
    name = name.removesuffix(".json")
    ref = resources.files("nilkilling").joinpath("data", f"{name}.json")
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled spec named {name!r}")
    return loads(ref.read_text(encoding="utf-8"), name=name)
