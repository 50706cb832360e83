"""Command-line interface.

Exit codes: 0 success, 1 usage/parse/shape error, 2 violated hypothesis under
``--strict``, 3 internal oracle disagreement (failed Penrose certificate or a
failing verification trial).
"""

import argparse
import json
import sys

from . import __version__
from .blockinv import block_pinv
from .blocks import complementary_pseudo_schur, cpppt, pppt, pseudo_schur
from .harness import STRATEGIES, GenerationError, GenSpec, gen_block, verify_all
from .matrix import EQ_TOL, FLOAT, MODES, RATIONAL, ShapeError, penrose_certificate, pinv
from .matrixfile import MatrixFileError, entry_out, read_block_matrix, read_matrix, write_matrix
from .ranges import INCL_TOL, condition_report

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_ORACLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=MODES, default=argparse.SUPPRESS,
                   help="scalar backend (default: float)")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help="comparison and inclusion tolerance (float mode)")
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                   help="output format (default: text)")
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="exit 2 when a hypothesis is violated")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="pseudoschur", parents=[common],
                     description="Pseudo Schur complements, pseudo principal pivot "
                                 "transforms and block Moore-Penrose inverses.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pinv", parents=[common], help="Moore-Penrose inverse with certificate")
    p.add_argument("file")

    p = sub.add_parser("schur", parents=[common], help="pseudo Schur complement F or G")
    p.add_argument("file")
    p.add_argument("--relative-to", choices=("a", "d"), default="a")

    p = sub.add_parser("ppt", parents=[common], help="pseudo principal pivot transform H or J")
    p.add_argument("file")
    p.add_argument("--relative-to", choices=("a", "d"), default="a")

    p = sub.add_parser("block-pinv", parents=[common], help="block formula for M^+")
    p.add_argument("file")
    p.add_argument("--formula", choices=("f", "g", "mixed"), required=True)

    p = sub.add_parser("check", parents=[common], help="the eight range-inclusion hypotheses")
    p.add_argument("file")

    p = sub.add_parser("verify", parents=[common], help="run the theorem verification suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("gen", parents=[common], help="generate a random block matrix file")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="a_side")
    p.add_argument("--dims", type=int, nargs=4, metavar=("M", "N", "S", "P"), default=(2, 2, 2, 2))
    p.add_argument("--rank-a", type=int)
    p.add_argument("--rank-d", type=int)
    p.add_argument("--rank-b", type=int)
    p.add_argument("--rank-c", type=int)
    p.add_argument("--rectangular-f", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    return parser


# -- rendering -------------------------------------------------------------


def _matrix_obj(m):
    return [[entry_out(x, m.mode) for x in row] for row in m.tolist()]


def _matrix_text(m, indent="  "):
    cells = [[str(x) if m.mode == RATIONAL else repr(float(x)) for x in row] for row in m.tolist()]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + " ".join(c.rjust(width) for c in row) for row in cells)


def _emit(payload, fmt, out):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    for key, val in payload.items():
        if key == "hypotheses":
            continue
        if isinstance(val, dict) and "matrix" in val:
            out.write(f"{key}:\n{val['text']}\n")
        elif key == "hypotheses_text":
            out.write(val + "\n")
        elif isinstance(val, dict):
            out.write(f"{key}: " + ", ".join(f"{k}={v}" for k, v in val.items()) + "\n")
        else:
            out.write(f"{key}: {val}\n")


def _mat(m):
    return {"matrix": _matrix_obj(m), "text": _matrix_text(m), "shape": list(m.shape)}


def _json_ready(payload):
    """Strip text renderings from the JSON payload."""
    out = {}
    for k, v in payload.items():
        if k == "hypotheses_text":
            continue
        if isinstance(v, dict) and "matrix" in v:
            v = {"shape": v["shape"], "data": v["matrix"]}
        out[k] = v
    return out


# -- commands --------------------------------------------------------------


def _cmd_pinv(args):
    m, _, _ = read_matrix(args.file, args.mode)
    x = pinv(m)
    cert = penrose_certificate(m, x)
    payload = {"command": "pinv", "mode": args.mode, "result": _mat(x),
               "certificate": cert.as_dict()}
    return payload, EXIT_OK if cert.ok else EXIT_ORACLE


def _hyp_payload(report):
    return report.as_dict(), report.describe()


def _cmd_schur(args):
    mb = read_block_matrix(args.file, args.mode)
    fn = pseudo_schur if args.relative_to == "a" else complementary_pseudo_schur
    res = fn(mb, args.incl_tol)
    hyp, text = _hyp_payload(res.hypotheses)
    payload = {"command": "schur", "mode": args.mode, "relative_to": res.relative_to,
               "result": _mat(res.value), "hypotheses": hyp, "hypotheses_text": text,
               "sound": res.sound}
    return payload, EXIT_HYPOTHESIS if args.strict and not res.sound else EXIT_OK


def _cmd_ppt(args):
    mb = read_block_matrix(args.file, args.mode)
    report = condition_report(mb, args.incl_tol)
    if args.relative_to == "a":
        value, names, label = pppt(mb), ("incl_B_A", "incl_Ct_At"), "H"
    else:
        value, names, label = cpppt(mb), ("incl_C_D", "incl_Bt_Dt"), "J"
    sub = report.subset(names)
    hyp, text = _hyp_payload(sub)
    payload = {"command": "ppt", "mode": args.mode, "transform": label, "result": _mat(value),
               "hypotheses": hyp, "hypotheses_text": text, "sound": sub.holds()}
    return payload, EXIT_HYPOTHESIS if args.strict and not sub.holds() else EXIT_OK


def _cmd_block_pinv(args):
    mb = read_block_matrix(args.file, args.mode)
    formula = {"f": "via-F", "g": "via-G", "mixed": "mixed"}[args.formula]
    res = block_pinv(mb, formula, tol=args.incl_tol)
    hyp, text = _hyp_payload(res.hypotheses_used)
    payload = {"command": "block-pinv", "mode": args.mode, "formula": res.formula,
               "result": _mat(res.value), "hypotheses": hyp, "hypotheses_text": text,
               "sound": res.sound, "certificate": res.certificate.as_dict()}
    if not res.sound:
        code = EXIT_HYPOTHESIS if args.strict else EXIT_OK
    else:
        code = EXIT_OK if res.certificate.ok else EXIT_ORACLE
    return payload, code


def _cmd_check(args):
    mb = read_block_matrix(args.file, args.mode)
    report = condition_report(mb, args.incl_tol)
    hyp, text = _hyp_payload(report)
    payload = {"command": "check", "mode": args.mode, "dims": list(mb.dims),
               "hypotheses": hyp, "hypotheses_text": text, "all_hold": report.holds()}
    return payload, EXIT_HYPOTHESIS if args.strict and not report.holds() else EXIT_OK


def _cmd_verify(args):
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    report = verify_all(args.trials, args.seed, args.mode, args.max_dim, args.eq_tol,
                        workers=args.workers)
    return report, EXIT_OK if report.ok else EXIT_ORACLE


def _cmd_gen(args):
    spec = GenSpec(tuple(args.dims), args.strategy, args.mode, args.seed,
                   rank_a=args.rank_a, rank_d=args.rank_d, rank_b=args.rank_b,
                   rank_c=args.rank_c, rectangular_f=args.rectangular_f)
    mb = gen_block(spec)
    write_matrix(args.output, mb)
    report = condition_report(mb, args.incl_tol)
    hyp, text = _hyp_payload(report)
    payload = {"command": "gen", "mode": args.mode, "output": args.output,
               "strategy": args.strategy, "seed": args.seed, "dims": list(mb.dims),
               "hypotheses": hyp, "hypotheses_text": text}
    return payload, EXIT_OK


COMMANDS = {
    "pinv": _cmd_pinv,
    "schur": _cmd_schur,
    "ppt": _cmd_ppt,
    "block-pinv": _cmd_block_pinv,
    "check": _cmd_check,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.mode = getattr(args, "mode", FLOAT)
        args.format = getattr(args, "format", "text")
        args.strict = getattr(args, "strict", False)
        tol = getattr(args, "tol", None)
        args.incl_tol = INCL_TOL if tol is None else tol
        args.eq_tol = EQ_TOL if tol is None else tol
        result, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pseudoschur: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MatrixFileError, ShapeError, GenerationError) as exc:
        print(f"pseudoschur: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "verify":
        if args.format == "json":
            out.write(result.to_json() + "\n")
        else:
            out.write(result.describe() + "\n")
        return code
    if args.format == "json":
        _emit(_json_ready(result), "json", out)
    else:
        _emit(result, "text", out)
    return code


if __name__ == "__main__":
    sys.exit(main())
