"""Command-line front end.

Every subcommand reads a JSON descriptor, runs the requested checks and
emits one report per check (human-readable lines, or one JSON object per
line with ``--json``).  Randomized checks are seeded and the seed is
included in every report, so ``--json`` output is byte-identical across
runs.  Exit status: 0 if every requested check passed, 1 on a failed
check, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cxmat import DomainError, adjoint, op_norm
from .descriptor import ParseError, matrix_to_json, parse_descriptor, parse_matrix
from .dfell import build_example1, check_double_star_axioms, compose4, hcompose, union, vcompose
from .dualcat import dual_category, dual_section
from .fellcore import check_cstar_category, check_fell_axioms, is_saturated, random_matrix
from .gns import State, check_gns, gns_homset, gns_object
from .report import Report


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class _Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.failed = False

    def report(self, rep: Report):
        if rep.status == "fail":
            self.failed = True
        if self.as_json:
            print(_dumps(rep.to_dict()))
        else:
            line = f"{rep.status.upper():8s} {rep.check}  residual={rep.residual:.3e}"
            if rep.seed is not None:
                line += f"  seed={rep.seed}"
            if rep.witness is not None:
                line += f"  witness={_dumps(rep.witness)}"
            print(line)

    def payload(self, obj: dict):
        if self.as_json:
            print(_dumps(obj))
        else:
            print(_dumps(obj))

    def reports(self, reps):
        for rep in reps:
            self.report(rep)


def _common(p: argparse.ArgumentParser):
    # the same four flags exist on every subcommand, even where sampling
    # plays no role, so scripted invocations need not special-case them
    p.add_argument("--tol", type=float, default=1e-9, help="check tolerance")
    p.add_argument("--samples", type=int, default=100, help="random samples per check")
    p.add_argument("--seed", type=int, default=42, help="RNG seed")
    p.add_argument("--json", action="store_true", help="machine-readable reports on stdout")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fellbundle",
        description="Verify Fell bundle, C*-category and double *-algebra "
        "axioms on JSON bundle descriptors.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-fell", help="the ten bundle axioms")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("check-cstar", help="the six C*-category conditions")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("check-double", help="double *-algebra conditions (a)-(i)")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("saturation", help="do fiber products span composite fibers")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("compose", help="compose two adjacent square sections")
    p.add_argument("file")
    p.add_argument("--sections", required=True, help="two names, comma separated")
    p.add_argument("--dir", required=True, choices=["h", "v"])
    _common(p)

    p = sub.add_parser("compose4", help="compose a 2x2 block both ways")
    p.add_argument("file")
    p.add_argument("--sections", required=True, help="four names, comma separated")
    p.add_argument("--order", required=True, choices=["hv", "vh"])
    _common(p)

    p = sub.add_parser("union", help="the 6x6 union of two adjacent square sections")
    p.add_argument("file")
    p.add_argument("--sections", required=True, help="two names, comma separated")
    p.add_argument("--dir", required=True, choices=["h", "v"])
    _common(p)

    p = sub.add_parser("gns", help="GNS representation from a state")
    p.add_argument("file")
    p.add_argument("--object", required=True, dest="obj", help="anchor object id")
    p.add_argument("--state", required=True, help="JSON file with the density matrix")
    p.add_argument("--homsets", action="store_true", help="extend to every homset")
    _common(p)

    p = sub.add_parser("dual", help="transpose dual of a saturated bundle")
    p.add_argument("file")
    p.add_argument("--section", help="also emit the dual payload of this section")
    _common(p)

    p = sub.add_parser("example1", help="one-square line bundle from Pair(2) with M2 fibers")
    _common(p)
    return ap


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_descriptor(fh.read())
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _parse_object(txt: str):
    if "," in txt:
        parts = txt.split(",")
        return (int(parts[0]), int(parts[1]))
    return int(txt)


def _obj_key(obj) -> str:
    if isinstance(obj, tuple):
        return ",".join(str(x) for x in obj)
    return str(obj)


def _graded_payload(op: str, out_el) -> dict:
    squares = [list(sq) for sq in out_el.grade[1]] if len(out_el.grade) > 1 else []
    return {
        "op": op,
        "grade": {"kind": out_el.grade[0], "squares": squares},
        "blocks": [[list(v), n] for v, n in out_el.blocks],
        "payload": matrix_to_json(out_el.payload),
    }


def _cmd_checks(args, out: _Output, which: str) -> None:
    desc = _load(args.file)
    if which == "double":
        if desc.kind != "grid":
            raise ParseError("check-double needs a grid descriptor", "base.kind")
        out.reports(check_double_star_axioms(desc.bundle, args.samples, args.tol, args.seed))
        return
    bundle = desc.fell_bundle()
    if which == "fell":
        out.reports(check_fell_axioms(bundle, args.samples, args.tol, args.seed))
    else:
        out.reports(check_cstar_category(bundle, args.tol, args.samples, args.seed))


def _cmd_saturation(args, out: _Output) -> None:
    desc = _load(args.file)
    ok = is_saturated(desc.fell_bundle(), args.tol)
    out.report(
        Report(
            "saturation",
            "pass" if ok else "fail",
            0.0,
            args.seed,
            None if ok else {"detail": "fiber products do not span some composite fiber"},
        )
    )


def _section_names(txt: str, expect: int):
    names = [s.strip() for s in txt.split(",") if s.strip()]
    if len(names) != expect:
        raise ParseError(f"expected {expect} section names, got {len(names)}", "--sections")
    return names


def _cmd_compose(args, out: _Output) -> None:
    desc = _load(args.file)
    if desc.kind != "grid":
        raise ParseError("compose needs a grid descriptor", "base.kind")
    names = _section_names(args.sections, 2)
    s1, s2 = (desc.section(n) for n in names)
    res = hcompose(s1, s2, desc.bundle.dg) if args.dir == "h" else vcompose(s1, s2, desc.bundle.dg)
    if res.is_zero:
        out.report(Report("compose", "fail", 0.0, args.seed, {"detail": res.diagnostic}))
        return
    out.payload(_graded_payload("compose", res))
    out.report(Report("compose", "pass", 0.0, args.seed))


def _cmd_compose4(args, out: _Output) -> None:
    desc = _load(args.file)
    if desc.kind != "grid":
        raise ParseError("compose4 needs a grid descriptor", "base.kind")
    names = _section_names(args.sections, 4)
    s1, s2, s3, s4 = (desc.section(n) for n in names)
    res = compose4(s1, s2, s3, s4, args.order, desc.bundle.dg)
    if res.is_zero:
        out.report(Report("compose4", "fail", 0.0, args.seed, {"detail": res.diagnostic}))
        return
    out.payload(_graded_payload("compose4", res))
    out.report(Report("compose4", "pass", 0.0, args.seed))


def _cmd_union(args, out: _Output) -> None:
    desc = _load(args.file)
    if desc.kind != "grid":
        raise ParseError("union needs a grid descriptor", "base.kind")
    names = _section_names(args.sections, 2)
    s1, s2 = (desc.section(n) for n in names)
    res = union(s1, s2, args.dir)
    if res.is_zero:
        out.report(Report("union", "fail", 0.0, args.seed, {"detail": res.diagnostic}))
        return
    out.payload(_graded_payload("union", res))
    out.report(Report("union", "pass", 0.0, args.seed))


def _cmd_gns(args, out: _Output) -> None:
    desc = _load(args.file)
    bundle = desc.fell_bundle()
    obj = _parse_object(args.obj)
    if obj not in bundle.base.objects:
        raise ParseError(f"unknown object {args.obj!r}", "--object")
    try:
        with open(args.state, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {args.state}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"syntax error: {e.msg}", f"line {e.lineno}, column {e.colno}") from None
    rho = parse_matrix(doc.get("rho") if isinstance(doc, dict) else doc, "state.rho")
    try:
        state = State(obj, rho)
        rep = gns_object(bundle, obj, state, args.tol)
        if args.homsets:
            for target in bundle.base.objects:
                if target != obj:
                    gns_homset(rep, target)
    except DomainError as e:
        raise ParseError(str(e)) from None
    out.payload(
        {
            "op": "gns",
            "object": _obj_key(obj),
            "dims": {
                _obj_key(k): sp.dim
                for k, sp in sorted(rep.spaces.items(), key=lambda kv: str(kv[0]))
            },
        }
    )
    out.reports(check_gns(rep, args.samples, args.seed))


def _cmd_dual(args, out: _Output) -> None:
    desc = _load(args.file)
    fold = desc.fell_bundle()  # raises for grids without folding: input error
    src = desc.bundle if desc.kind == "grid" else fold
    try:
        descr = dual_category(src)
    except DomainError as e:
        out.report(Report("dual-saturated", "fail", 0.0, args.seed, {"detail": str(e)}))
        return
    out.report(Report("dual-saturated", "pass", 0.0, args.seed))
    ok = dual_category(descr) is src
    out.report(
        Report("dual-involutive", "pass" if ok else "fail", 0.0, args.seed,
               None if ok else {"detail": "dual of dual is not the source"})
    )
    rng = np.random.default_rng(args.seed)
    res = 0.0
    for _ in range(args.samples):
        s = fold.random_section(rng)
        mat = s.linking()
        psi = rng.standard_normal(mat.shape[0]) + 1j * rng.standard_normal(mat.shape[0])
        lhs = np.conj(adjoint(mat) @ np.conj(psi))
        res = max(res, float(np.abs(lhs - dual_section(s) @ psi).max()))
    out.report(
        Report("dual-tomita-identity", "pass" if res <= args.tol else "fail", res, args.seed,
               None if res <= args.tol else {"residual": res})
    )
    res = 0.0
    for _ in range(args.samples):
        s1, s2 = fold.random_section(rng), fold.random_section(rng)
        lhs = dual_section(s1 * s2)
        rhs = dual_section(s2) @ dual_section(s1)
        res = max(res, float(np.abs(lhs - rhs).max()))
    out.report(
        Report("dual-antihomomorphism", "pass" if res <= args.tol else "fail", res, args.seed,
               None if res <= args.tol else {"residual": res})
    )
    if args.section:
        sec = desc.section(args.section)
        out.payload({"op": "dual", "section": args.section,
                     "payload": matrix_to_json(dual_section(sec))})


def _cmd_example1(args, out: _Output) -> None:
    ex = build_example1()
    out.payload(
        {
            "op": "example1",
            "layout": [list(row) for row in
                       (("a", "m*", "d1*", "alpha1*"),
                        ("m", "b", "alpha1'*", "r1*"),
                        ("d1", "alpha1'", "a'", "n*"),
                        ("alpha1", "r1", "n", "b'"))],
            "vertices": [list(v) for v in ex.dg.layout_vertices()],
        }
    )
    rng = np.random.default_rng(args.seed)
    res = 0.0
    for k in range(16):
        basis = np.zeros(16)
        basis[k] = 1.0
        mat = basis.reshape(4, 4).astype(np.complex128)
        res = max(res, float(np.abs(ex.to_matrix(ex.to_section(mat)) - mat).max()))
    out.report(
        Report("example1-iso-roundtrip", "pass" if res == 0.0 else "fail", res, args.seed,
               None if res == 0.0 else {"residual": res})
    )
    res = 0.0
    for _ in range(args.samples):
        x = random_matrix(rng, (4, 4))
        y = random_matrix(rng, (4, 4))
        via_sections = ex.convolve(ex.to_section(x), ex.to_section(y)).assemble()
        res = max(res, float(np.abs(via_sections - x @ y).max()))
    ok = res <= args.tol
    out.report(
        Report("example1-product-transport", "pass" if ok else "fail", res, args.seed,
               None if ok else {"residual": res})
    )
    res = 0.0
    for _ in range(args.samples):
        x = random_matrix(rng, (4, 4))
        res = max(res, float(np.abs(ex.to_section(x).star().assemble() - adjoint(x)).max()))
        res = max(res, abs(op_norm(ex.to_section(x).assemble()) - op_norm(x)))
    ok = res <= args.tol
    out.report(
        Report("example1-star-norm-transport", "pass" if ok else "fail", res, args.seed,
               None if ok else {"residual": res})
    )


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    out = _Output(args.json)
    try:
        if args.command == "check-fell":
            _cmd_checks(args, out, "fell")
        elif args.command == "check-cstar":
            _cmd_checks(args, out, "cstar")
        elif args.command == "check-double":
            _cmd_checks(args, out, "double")
        elif args.command == "saturation":
            _cmd_saturation(args, out)
        elif args.command == "compose":
            _cmd_compose(args, out)
        elif args.command == "compose4":
            _cmd_compose4(args, out)
        elif args.command == "union":
            _cmd_union(args, out)
        elif args.command == "gns":
            _cmd_gns(args, out)
        elif args.command == "dual":
            _cmd_dual(args, out)
        elif args.command == "example1":
            _cmd_example1(args, out)
    except (ParseError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 1 if out.failed else 0


if __name__ == "__main__":
    sys.exit(main())
