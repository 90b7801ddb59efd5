"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 parse failure, 4 usage
error, 5 internal cross-check failure.
"""

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import catalog, decompose as dec, killing, liealg, specfile
from .exterior import ExteriorForm, format_form

OK, INVALID, PARSE, USAGE, MISMATCH = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE)


def _emit_json(obj):
    print(json.dumps(obj, sort_keys=True, indent=2))


def _q(x):
    return str(Fraction(x))


def _vec_text(v, names):
    return format_form(ExteriorForm.vector(len(names), v), list(names))


def _resolve(path):
    """Algebra from a file path or the name of a bundled spec."""
    if os.path.exists(path):
        return specfile.load(path)
    try:
        return specfile.load_bundled(path)
    except FileNotFoundError:
        raise specfile.SpecError(f"{path}: no such file or bundled spec") from None


def _load_valid(path):
    alg = _resolve(path)
    problems = liealg.validate(alg)
    if problems:
        for v in problems:
            print(f"violation [{v.kind}]: {v.detail}")
        return None, INVALID
    return alg, OK


def _orthonormal(alg):
    if alg.is_orthonormal():
        return alg
    try:
        out, _ = liealg.orthonormalize(alg)
    except liealg.NonRationalNormError as exc:
        raise UsageError(str(exc)) from None
    return out


def _matrix_rows(m):
    return [[_q(x) for x in row] for row in m]


# -- commands ---------------------------------------------------------------------

def cmd_validate(args):
    alg = _resolve(args.spec)
    problems = liealg.validate(alg)
    if args.json:
        _emit_json({"valid": not problems,
                    "violations": [{"kind": v.kind, "detail": v.detail} for v in problems]})
    elif problems:
        for v in problems:
            print(f"violation [{v.kind}]: {v.detail}")
    else:
        print(f"valid: {alg.name or args.spec} (dim {alg.dim})")
    return INVALID if problems else OK


def cmd_info(args):
    alg, code = _load_valid(args.spec)
    if alg is None:
        return code
    names = alg.names
    cls = liealg.nilpotency_class(alg)
    zb = liealg.center(alg)
    cb = liealg.commutator_ideal(alg)
    two = liealg.is_two_step(alg)
    report = {
        "name": alg.name,
        "dim": alg.dim,
        "nilpotency_class": cls,
        "center": [_vec_text(v, names) for v in zb],
        "commutator": [_vec_text(v, names) for v in cb],
        "two_step": two,
        "orthonormal": alg.is_orthonormal(),
    }
    if two:
        data = liealg.two_step_data(_orthonormal(alg))
        wn = data.algebra.names
        report["v_basis"] = [wn[i] for i in data.v_idx]
        report["z_basis"] = [wn[i] for i in data.z_idx]
        report["jmaps"] = {wn[iz]: _matrix_rows(j) for iz, j in zip(data.z_idx, data.jmaps)}
    if args.json:
        _emit_json(report)
        return OK
    print(f"algebra: {alg.name}")
    print(f"dim {alg.dim}")
    print(f"nilpotency class: {cls if cls is not None else 'not nilpotent'}")
    print(f"center dim {len(zb)}: " + ", ".join(report["center"]))
    print(f"commutator dim {len(cb)}: " + ", ".join(report["commutator"]))
    print(f"two-step: {'yes' if two else 'no'}")
    if two:
        print("v = span{" + ", ".join(report["v_basis"]) + "}")
        for z, rows in report["jmaps"].items():
            print(f"j({z}) =")
            width = max(len(x) for r in rows for x in r)
            for r in rows:
                print("  [" + " ".join(x.rjust(width) for x in r) + "]")
    return OK


def _check_degree(k, n):
    if not 0 <= k <= n:
        raise UsageError(f"degree {k} out of range 0..{n}")


def cmd_killing(args):
    alg, code = _load_valid(args.spec)
    if alg is None:
        return code
    _check_degree(args.degree, alg.dim)
    work = _orthonormal(alg)
    spaces = {}
    if args.solver in ("twostep", "both"):
        if not liealg.is_two_step(work):
            raise UsageError("the twostep solver needs a 2-step nilpotent algebra")
        data = liealg.two_step_data(work)
        work = data.algebra
        spaces["twostep"] = killing.two_step_killing_space(data, args.degree)
    if args.solver in ("generic", "both"):
        spaces["generic"] = killing.killing_space(work, args.degree)
    space = spaces["generic"] if "generic" in spaces else spaces["twostep"]
    agree = None
    if len(spaces) == 2:
        agree = spaces["generic"].same_as(spaces["twostep"])
    names = list(work.names)
    if args.json:
        out = {"degree": args.degree, "dim": space.dimension, "solver": args.solver}
        if args.basis:
            out["basis"] = [format_form(f, names) for f in space]
        if agree is not None:
            out["solvers_agree"] = agree
        _emit_json(out)
    else:
        print(f"dim {space.dimension}")
        if args.basis:
            for f in space:
                print(f"  {format_form(f, names)}")
        if agree is not None:
            print("solvers agree" if agree else "MISMATCH between generic and twostep solvers")
    return MISMATCH if agree is False else OK


def cmd_sweep(args):
    alg, code = _load_valid(args.spec)
    if alg is None:
        return code
    kil, par = killing.dimension_table(_orthonormal(alg))
    if args.json:
        _emit_json({"name": alg.name, "dim": alg.dim, "killing": kil, "parallel": par})
        return OK
    print(f"algebra: {alg.name} (dim {alg.dim})")
    print(f"{'k':>3} {'killing':>8} {'parallel':>9}")
    for k, (a, b) in enumerate(zip(kil, par)):
        print(f"{k:>3} {a:>8} {b:>9}")
    return OK


def cmd_decompose(args):
    alg, code = _load_valid(args.spec)
    if alg is None:
        return code
    report = dec.decompose(alg, tol=args.tol, seed=args.seed)
    names = alg.names
    certified = report.mode == dec.EXACT
    if args.json:
        _emit_json({
            "flat_dim": report.flat_dim,
            "flat_basis": [_vec_text(v, names) for v in report.flat_basis],
            "ideals": [[_vec_text(v, names) for v in b] for b in report.ideals],
            "ideal_dims": report.ideal_dims,
            "mode": report.mode,
            "irreducible": report.flat_dim == 0 and len(report.ideals) == 1,
        })
    else:
        print(f"mode: {report.mode}")
        print(f"flat_dim {report.flat_dim}")
        for v in report.flat_basis:
            print(f"  {_vec_text(v, names)}")
        for n, b in enumerate(report.ideals, 1):
            print(f"ideal {n} dim {len(b)}")
            for v in b:
                print(f"  {_vec_text(v, names)}")
        if report.flat_dim == 0 and len(report.ideals) == 1:
            print("irreducible")
        if not certified:
            print(f"warning: decomposition not certified ({report.info})", file=sys.stderr)
    return OK if certified else MISMATCH


def _parse_omega(text, dim):
    if text.startswith("random:"):
        try:
            seed = int(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad seed in {text!r}") from None
        if dim % 2:
            raise UsageError("random nondegenerate forms need an even dimension")
        return catalog.random_nondegenerate_form(dim, seed)
    try:
        with open(text, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {text}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise specfile.SpecError(f"{text}: invalid JSON: {exc}") from None
    return form_from_json(doc, dim)


def form_from_json(doc, dim):
    """2-form from ``{"dim": n, "terms": [{"indices": [i, j], "c": "p/q"}]}`` (1-based indices)."""
    if not isinstance(doc, dict) or "terms" not in doc:
        raise specfile.SpecError("form file needs a 'terms' list")
    n = doc.get("dim", dim)
    if n != dim:
        raise UsageError(f"form has dim {n} but --dim is {dim}")
    out = ExteriorForm.zero(dim, 2)
    for t in doc["terms"]:
        try:
            i, j = t["indices"]
            c = Fraction(str(t.get("c", "1")))
        except (KeyError, TypeError, ValueError):
            raise specfile.SpecError(f"bad term {t!r}") from None
        if not (1 <= i <= dim and 1 <= j <= dim) or i == j:
            raise specfile.SpecError(f"bad indices in term {t!r}")
        out = out + ExteriorForm.basis(dim, i - 1, j - 1, coeff=c)
    return out


def cmd_lemma(args):
    n = args.dim
    if n < 1:
        raise UsageError("--dim must be positive")
    _check_degree(args.degree, n)
    w = _parse_omega(args.omega, n)
    space = killing.contraction_wedge_solve(w, args.degree)
    nondeg = space.info["nondegenerate"]
    if not nondeg:
        print("warning: omega is degenerate; the solution space may be larger", file=sys.stderr)
    if args.json:
        _emit_json({"omega": format_form(w), "nondegenerate": nondeg, "degree": args.degree,
                    "dim": space.dimension, "basis": [format_form(f) for f in space]})
        return OK
    print(f"omega = {format_form(w)}")
    print(f"nondegenerate: {'yes' if nondeg else 'no'}")
    print(f"dim {space.dimension}")
    for f in space:
        print(f"  {format_form(f)}")
    return OK


def cmd_export(args):
    if args.name not in catalog.ENTRIES:
        raise UsageError(f"unknown catalog entry {args.name!r}; choose from {', '.join(catalog.ENTRIES)}")
    text = specfile.dumps(catalog.get(args.name))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_list(args):
    for name in specfile.bundled_names():
        print(name)
    return OK


def build_parser():
    p = _Parser(prog="nilkilling", description="Killing and parallel forms on metric Lie algebras.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_cmd(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("spec", help="spec file path or bundled name (e.g. h3)")
        s.add_argument("--json", action="store_true", help="machine-readable output")
        s.set_defaults(func=func)
        return s

    spec_cmd("validate", cmd_validate, "check antisymmetry, Jacobi and the metric")
    spec_cmd("info", cmd_info, "center, commutator, nilpotency class, j-maps")
    s = spec_cmd("killing", cmd_killing, "Killing forms of one degree")
    s.add_argument("--degree", "-k", type=int, required=True)
    s.add_argument("--basis", action="store_true", help="print an echelon basis")
    s.add_argument("--solver", choices=("generic", "twostep", "both"), default="generic")
    spec_cmd("sweep", cmd_sweep, "Killing and parallel dimensions for every degree")
    s = spec_cmd("decompose", cmd_decompose, "orthogonal ideal decomposition")
    s.add_argument("--tol", type=float, default=1e-9, help="relative eigenvalue gap")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("lemma", help="solve (x _| omega) ^ (x _| gamma) = 0")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--omega", required=True, help="form file (JSON) or random:SEED")
    s.add_argument("--degree", "-d", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_lemma)

    s = sub.add_parser("export", help="write a catalog entry as a spec file")
    s.add_argument("name")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("list", help="list bundled spec files")
    s.set_defaults(func=cmd_list)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except specfile.SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        # e.g. out-of-range bracket indices rejected by the algebra constructor
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE


if __name__ == "__main__":
    sys.exit(main())
