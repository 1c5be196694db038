"""Command-line interface.

All outputs are JSON (one object, or JSON lines for verification reports).
Exit codes: 0 = all checks passed, 1 = some assertion failed, 2 = usage or
input error (argparse uses 2 on its own).
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexes import (
    divided_koszul_complex,
    eagon_northcott_complex,
    koszul_complex,
)
from .bicomplex import KoszulBicomplex
from .errors import GkError
from .groebner import GRADE_INFINITE, IdealHandle, is_finite_grade, minors_ideal
from .linalg import Matrix
from .ring import PolyRing
from .theorems import (
    DEFAULT_DEGREE_BOUND,
    Instance,
    THEOREM_CHECKERS,
    certify_product_nonzero,
    gen_hilbert_burch_instance,
    gen_regular_sequence_instance,
    gen_wide_target_instance,
)


def _ring_from_arg(text: str) -> PolyRing:
    data = json.loads(text)
    if isinstance(data, list):
        return PolyRing(data)
    return PolyRing.from_json(data)


def _matrix_from_arg(ring: PolyRing, text: str) -> Matrix:
    return Matrix.from_json(ring, json.loads(text))


def _emit(obj, pretty: bool):
    if pretty:
        json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    else:
        json.dump(obj, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")


def _grade_json(value):
    return value if is_finite_grade(value) else "INFINITE"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gkoszul",
        description="Generalized Koszul complexes and grade-sensitivity checks "
                    "over QQ[x1..xk], in exact arithmetic.",
    )
    parser.add_argument("--pretty", action="store_true",
                        help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grade", help="grade of an ideal")
    p.add_argument("--ring", required=True,
                   help='ring JSON, e.g. \'{"variables":["x","y"],"order":{"kind":"grevlex"}}\'')
    p.add_argument("--gens", nargs="*", default=[], help="generator strings")

    p = sub.add_parser("minors", help="ideal of t x t minors")
    p.add_argument("--ring", required=True)
    p.add_argument("--matrix", required=True, help="JSON array of rows of strings")
    p.add_argument("-t", type=int, required=True, help="minor size")

    for name, brief in (("build-c", "symmetric-power Koszul complex"),
                        ("build-d", "divided-power Koszul complex"),
                        ("build-en", "finite classical complex")):
        p = sub.add_parser(name, help=brief)
        p.add_argument("--ring", required=True)
        p.add_argument("--matrix", required=True)
        p.add_argument("-t", type=int, required=True)
        p.add_argument("--out", help="write the complex JSON to a file")

    p = sub.add_parser("bicomplex-check",
                       help="build the bicomplex and validate every square")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("-t", type=int, default=0)

    p = sub.add_parser("homology", help="homology of one built complex")
    p.add_argument("--kind", choices=["c", "d", "en"], required=True)
    p.add_argument("--ring", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)

    p = sub.add_parser("certify-product",
                       help="numerical non-vanishing certificate for a product")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--attest-proper", action="store_true",
                   help="attest that both entry ideals are proper")

    p = sub.add_parser("verify", help="run a theorem checker on an instance")
    p.add_argument("theorem", choices=sorted(THEOREM_CHECKERS))
    p.add_argument("--instance", required=True)
    p.add_argument("-t", type=int, default=None)
    p.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)
    p.add_argument("--report", help="append the report as a JSON line here")

    p = sub.add_parser("gen", help="emit a generated instance")
    p.add_argument("family",
                   choices=["regular-sequence", "hilbert-burch", "wide-target"])
    p.add_argument("--vars", type=int, default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--out", help="write the instance JSON to a file")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (GkError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "grade":
        ring = _ring_from_arg(args.ring)
        ideal = IdealHandle.from_strings(ring, args.gens)
        _emit({
            "grade": _grade_json(ideal.grade()),
            "reduced_basis": [str(g) for g in ideal.reduced_basis()],
        }, args.pretty)
        return 0

    if args.command == "minors":
        ring = _ring_from_arg(args.ring)
        mat = _matrix_from_arg(ring, args.matrix)
        ideal = minors_ideal(mat, args.t)
        _emit({
            "generators": [str(g) for g in ideal.generators],
            "reduced_basis": [str(g) for g in ideal.reduced_basis()],
            "grade": _grade_json(ideal.grade()),
        }, args.pretty)
        return 0

    if args.command in ("build-c", "build-d", "build-en"):
        ring = _ring_from_arg(args.ring)
        mat = _matrix_from_arg(ring, args.matrix)
        builder = {"build-c": koszul_complex,
                   "build-d": divided_koszul_complex,
                   "build-en": eagon_northcott_complex}[args.command]
        cx = builder(mat, args.t)
        blob = cx.to_json()
        blob["d_squared_zero"] = True
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(blob, fh, indent=2)
        else:
            _emit(blob, args.pretty)
        return 0

    if args.command == "bicomplex-check":
        with open(args.instance) as fh:
            inst = Instance.from_json(json.load(fh))
        bc = KoszulBicomplex(inst.phi, inst.psi, args.t)
        _emit({
            "ok": True,
            "t": args.t,
            "profile": inst.profile().to_json(),
            "columns": [bc.c_lo, bc.c_hi],
            "rows": [bc.q_lo, bc.q_hi],
        }, args.pretty)
        return 0

    if args.command == "homology":
        ring = _ring_from_arg(args.ring)
        mat = _matrix_from_arg(ring, args.matrix)
        builder = {"c": koszul_complex, "d": divided_koszul_complex,
                   "en": eagon_northcott_complex}[args.kind]
        cx = builder(mat, args.t)
        rows = []
        for i in range(len(cx)):
            h = cx.homology_at(i)
            entry = {"position": i, "zero": h.is_zero()}
            if not h.is_zero():
                try:
                    entry["hilbert"] = h.hilbert_function(args.degree_bound).to_json()
                except GkError:
                    entry["hilbert"] = "ungraded"
            rows.append(entry)
        _emit({"ranks": cx.ranks(), "homology": rows}, args.pretty)
        return 0

    if args.command == "certify-product":
        verdict = certify_product_nonzero(args.l, args.m, args.n, args.h,
                                          args.g, args.attest_proper)
        _emit(verdict, args.pretty)
        return 0

    if args.command == "verify":
        with open(args.instance) as fh:
            inst = Instance.from_json(json.load(fh))
        report = THEOREM_CHECKERS[args.theorem](inst, args.t, args.degree_bound)
        line = report.to_json()
        if args.report:
            with open(args.report, "a") as fh:
                fh.write(json.dumps(line) + "\n")
        _emit(line, args.pretty)
        return 0 if report.passed else 1

    if args.command == "gen":
        if args.family == "regular-sequence":
            nv = args.vars if args.vars is not None else 4
            rk = args.rank if args.rank is not None else nv
            inst = gen_regular_sequence_instance(nv, rk)
        elif args.family == "hilbert-burch":
            inst = gen_hilbert_burch_instance(args.vars or 2)
        else:
            inst = gen_wide_target_instance(args.vars or 4)
        blob = inst.to_json()
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(blob, fh, indent=2)
        else:
            _emit(blob, args.pretty)
        return 0

    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
