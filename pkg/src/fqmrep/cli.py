"""Command line front end.

Subcommands print representation matrices (gamma, jrs, u, weil-odd),
run named verification suites (verify), or serialize a matrix to JSON
or CSV (export).  Exit codes: 0 on success / all checks passed, 1 when
a suite reports failures, 2 on usage or parameter errors.

Reports printed by `verify` omit wall-clock time and serialize with
sorted keys, so output bytes are identical across runs for a fixed
seed and parameter set.  The seed falls back to the FQM_SEED
environment variable when the flag is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .harness import SUITE_NAMES, SuiteSpec, run_suite
from .heisenberg import HWParams, gamma_p
from .magnetic import j_odd, j_twisted
from .matrixcore import OpMatrix, matrix_to_csv_text, matrix_to_json_dict
from .metaplectic import u_general, weil_odd_general
from .sl2 import SL2Element

__all__ = ["main"]


def _elem(text: str) -> tuple[int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated integers a,b,c,d")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqmrep")
    sub = parser.add_subparsers(dest="command", required=True)

    gamma = sub.add_parser("gamma", help="print a Heisenberg group element matrix")
    gamma.add_argument("--n", type=int, required=True, help="modulus exponent, N = 2^n")
    gamma.add_argument("--p", type=int, default=1)
    gamma.add_argument("--m", type=int, default=0)
    gamma.add_argument("--r", type=int, default=0)
    gamma.add_argument("--s", type=int, default=0)

    jrs = sub.add_parser("jrs", help="print a cocycle operator J_{r,s}")
    jrs.add_argument("--n", type=int, help="modulus exponent, N = 2^n")
    jrs.add_argument("--p", type=int, default=1)
    jrs.add_argument("--r", type=int, default=0)
    jrs.add_argument("--s", type=int, default=0)
    jrs.add_argument("--odd-N", dest="odd_N", type=int,
                     help="use the odd-modulus family at this N instead")

    u = sub.add_parser("u", help="print the metaplectic operator of an SL2 element")
    u.add_argument("--n", type=int, required=True, help="modulus exponent, N = 2^n")
    u.add_argument("--p", type=int, default=1)
    u.add_argument("--elem", type=_elem, required=True, metavar="a,b,c,d")
    u.add_argument("--backend", choices=("exact", "float"))

    weil = sub.add_parser("weil-odd", help="print the odd-modulus Weil operator")
    weil.add_argument("--N", type=int, required=True)
    weil.add_argument("--elem", type=_elem, required=True, metavar="a,b,c,d")

    verify = sub.add_parser("verify", help="run a named verification suite")
    verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    mod = verify.add_mutually_exclusive_group()
    mod.add_argument("--n", type=int, help="modulus exponent, N = 2^n")
    mod.add_argument("--N", type=int, help="modulus")
    verify.add_argument("--p", type=int)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--tol", type=float)
    verify.add_argument("--out", help="also write the report JSON to this file")

    export = sub.add_parser("export", help="serialize a matrix to JSON or CSV")
    export.add_argument("--format", required=True, choices=("json", "csv"))
    export.add_argument("--kind", default="u", choices=("gamma", "jrs", "u", "weil-odd"))
    export.add_argument("--n", type=int)
    export.add_argument("--N", type=int)
    export.add_argument("--p", type=int, default=1)
    export.add_argument("--m", type=int, default=0)
    export.add_argument("--r", type=int, default=0)
    export.add_argument("--s", type=int, default=0)
    export.add_argument("--elem", type=_elem, metavar="a,b,c,d")
    export.add_argument("--odd-N", dest="odd_N", type=int)
    export.add_argument("--backend", choices=("exact", "float"))
    export.add_argument("--out", help="write to this file instead of stdout")

    return parser


def _need(args: argparse.Namespace, kind: str, names: list[str]) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValueError(f"{kind} needs {', '.join(missing)}")


def _matrix_for(kind: str, args: argparse.Namespace) -> OpMatrix:
    backend = getattr(args, "backend", None)
    if kind == "gamma":
        _need(args, kind, ["n"])
        return gamma_p(HWParams(2**args.n, args.p), args.m, args.r, args.s, backend)
    if kind == "jrs":
        if args.odd_N is not None:
            return j_odd(args.odd_N, (args.r, args.s))
        _need(args, kind, ["n"])
        return j_twisted(HWParams(2**args.n, args.p), (args.r, args.s), backend=backend)
    if kind == "u":
        _need(args, kind, ["n", "elem"])
        pr = HWParams(2**args.n, args.p)
        return u_general(pr, SL2Element(*args.elem, pr.N), backend)
    _need(args, "weil-odd", ["N", "elem"])
    return weil_odd_general(args.N, SL2Element(*args.elem, args.N))


def _print_matrix(m: OpMatrix) -> int:
    arr = m.to_complex_array()
    with np.printoptions(precision=6, suppress=True, linewidth=160):
        print(np.array2string(arr))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    params: dict = {}
    if args.N is not None:
        params["N"] = args.N
    if args.n is not None:
        params["n"] = args.n
    for name in ("p", "samples", "tol"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    seed = args.seed
    if seed is None and os.environ.get("FQM_SEED"):
        seed = int(os.environ["FQM_SEED"])
    if seed is not None:
        params["seed"] = seed
    report = run_suite(SuiteSpec(args.suite, params))
    text = report.to_json(include_runtime=False)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if report.passed else 1


def _cmd_export(args: argparse.Namespace) -> int:
    m = _matrix_for(args.kind, args)
    if args.format == "json":
        text = json.dumps(matrix_to_json_dict(m), sort_keys=True, separators=(",", ":"))
    else:
        text = matrix_to_csv_text(m)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "export":
            return _cmd_export(args)
        return _print_matrix(_matrix_for(args.command, args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
