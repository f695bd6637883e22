"""Command line front end: ``structqap <subcommand> ...``.

Reports go to standard output as JSON.  Exit codes: 0 success, 1 a "no",
infeasible or no-case outcome, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Any, Sequence

from . import decomposition as dec
from .generators import RANDOM_CLASSES, random_instance_with_spec
from .matrix import (
    DimensionError,
    ExactMatrix,
    MatrixFormatError,
    format_matrix,
    format_rational,
    parse_matrix,
    qap_objective,
    write_matrix,
)
from .recognizers import NotSymmetricError, classify
from .schemas import SCHEMAS
from .solver import SplitError, brute_force, detect_case

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2
RAMP = " .:-=+*#%@"


class InputError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


def _emit(obj: Any, out) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def _load(path: str) -> ExactMatrix:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError("io", f"{path}: {exc.strerror}", path=path) from None
    try:
        return parse_matrix(text)
    except MatrixFormatError as exc:
        raise InputError("parse", f"{path}: {exc}", path=path, line=exc.line, column=exc.column) from None


def matrix_digest(M: ExactMatrix) -> str:
    """sha256 of the canonical text form."""
    return hashlib.sha256(format_matrix(M).encode("utf-8")).hexdigest()


# -- subcommands ------------------------------------------------------------


def cmd_classify(args, out) -> int:
    A = _load(args.matrix)
    _emit(classify(A).to_json(), out)
    return EXIT_OK


def _reconstruction(rebuilt: ExactMatrix, original: ExactMatrix, full: bool) -> dict:
    same = rebuilt == original if full else rebuilt.off_diagonal_equal(original)
    return {
        "sha256": matrix_digest(rebuilt),
        "matches_input": same,
        "compared": "all entries" if full else "off-diagonal entries",
    }


def _no_report(mode: str, n: int, verdict, reason: str | None = None) -> dict:
    rep: dict[str, Any] = {"mode": mode, "n": n, "verdict": "no"}
    if reason or verdict.reason:
        rep["reason"] = reason or verdict.reason
    if verdict.witness is not None:
        rep["witness"] = verdict.witness.to_json()
    return rep


def cmd_decompose(args, out) -> int:
    C = _load(args.matrix)
    mode, n = args.mode, C.n
    try:
        if mode == "kalmanson":
            kd = dec.kalmanson_decomposition(C)
            body, rebuilt, full = kd.to_json(), kd.reconstruct(), False
        elif mode == "robinson-kalmanson":
            cd = dec.robinson_kalmanson_decomposition(C)
            body, rebuilt, full = cd.to_json(), cd.reconstruct(), False
        elif mode == "cdw":
            v = dec.cdw_decomposition(C)
            if not v:
                rep = _no_report(mode, n, v, "cut weights violate the sorted-block feasibility inequalities")
                rep["violated_pair"] = list(v.certificate)
                _emit(rep, out)
                return EXIT_NO
            body, rebuilt, full = v.certificate.to_json(), v.certificate.reconstruct(), False
        else:
            bs = dec.benevolent_split(C)
            body, rebuilt, full = bs.to_json(), bs.reconstruct(), True
    except dec.PreconditionError as exc:
        _emit(_no_report(mode, n, exc.verdict, str(exc)), out)
        return EXIT_NO
    rep = {
        "mode": mode,
        "n": n,
        "verdict": "yes",
        "decomposition": body,
        "reconstruction": _reconstruction(rebuilt, C, full),
    }
    _emit(rep, out)
    return EXIT_OK if rep["reconstruction"]["matches_input"] else EXIT_NO


def _solve_report(args, force_oracle: bool) -> tuple[dict, int]:
    A, B = _load(args.a), _load(args.b)
    split = None
    if args.b_split:
        split = (_load(args.b_split[0]), _load(args.b_split[1]))
    cert = detect_case(A, B, split)
    rep: dict[str, Any] = {"n": A.n}
    if cert is None:
        rep.update(case=None, permutation=None, value=None)
    else:
        p = cert.optimal_permutation
        cj = cert.to_json()
        rep.update(
            case=cert.case,
            hypotheses=cj["hypotheses"],
            permutation=list(p.images),
            value=format_rational(qap_objective(A, B, p)),
            evidence=cj["evidence"],
        )
    code = EXIT_OK if cert is not None else EXIT_NO
    if args.oracle or force_oracle:
        if A.n > args.max_brute:
            raise InputError("limit", f"n = {A.n} exceeds --max-brute {args.max_brute}")
        bf = brute_force(A, B, max_n=args.max_brute, threads=args.threads)
        agree = cert is not None and format_rational(bf.value) == rep["value"]
        rep["oracle"] = {
            "permutation": list(bf.permutation.images),
            "value": format_rational(bf.value),
            "agree": agree,
            "permutations_checked": bf.certificate.permutations_checked,
        }
        if not agree:
            code = EXIT_NO
    return rep, code


def cmd_solve(args, out) -> int:
    rep, code = _solve_report(args, force_oracle=False)
    _emit(rep, out)
    return code


def cmd_verify(args, out) -> int:
    rep, code = _solve_report(args, force_oracle=True)
    _emit(rep, out)
    return code


def cmd_generate(args, out) -> int:
    try:
        M, spec = random_instance_with_spec(args.cls, args.n, args.seed)
    except ValueError as exc:
        raise InputError("argument", str(exc)) from None
    rep = {"class": args.cls, "n": args.n, "seed": args.seed, "spec": spec}
    if args.output:
        write_matrix(M, args.output)
        if args.spec:
            rep["output"] = args.output
            _emit(rep, out)
    elif args.spec:
        rep["matrix"] = format_matrix(M)
        _emit(rep, out)
    else:
        out.write(format_matrix(M))
    return EXIT_OK


def render_heatmap(M: ExactMatrix, ramp: str = RAMP) -> str:
    """One glyph per entry; denser glyphs mean larger values."""
    vals = [v for row in M.rows for v in row]
    lo, hi = min(vals), max(vals)
    top = len(ramp) - 1
    lines = []
    for row in M.rows:
        glyphs = []
        for v in row:
            k = 0 if hi == lo else int((v - lo) * top / (hi - lo))
            glyphs.append(ramp[k] * 2)
        lines.append("".join(glyphs))
    legend = f"min {format_rational(lo)} '{ramp[0]}'  max {format_rational(hi)} '{ramp[-1]}'"
    return "\n".join(lines + [legend]) + "\n"


def cmd_render(args, out) -> int:
    out.write(render_heatmap(_load(args.matrix)))
    return EXIT_OK


def cmd_schema(args, out) -> int:
    _emit(SCHEMAS[args.name], out)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="structqap", description="Structured QAP toolkit with exact certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="run every class recognizer on a matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="decompose a matrix into cut matrices or stripes")
    p.add_argument("--mode", required=True, choices=["kalmanson", "robinson-kalmanson", "cdw", "benevolent"])
    p.add_argument("matrix")
    p.set_defaults(func=cmd_decompose)

    for name, func, helptext in (
        ("solve", cmd_solve, "detect a solvable case and report its optimum"),
        ("verify", cmd_verify, "solve, then compare against exhaustive search"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("a", metavar="A")
        p.add_argument("b", metavar="B")
        p.add_argument("--b-split", nargs=2, metavar=("B1", "B2"))
        if name == "solve":
            p.add_argument("--oracle", action="store_true", help="cross-check with brute force")
        else:
            p.set_defaults(oracle=True)
        p.add_argument("--max-brute", type=_positive, default=10)
        p.add_argument("--threads", type=_positive, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("generate", help="write a random member of a matrix class")
    p.add_argument("--class", dest="cls", required=True, choices=RANDOM_CLASSES)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--spec", action="store_true", help="also print the generating parameters as JSON")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("render", help="ASCII heatmap of a matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("schema", help="print the JSON schema of a report")
    p.add_argument("name", choices=sorted(SCHEMAS))
    p.set_defaults(func=cmd_schema)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        err = {"type": exc.kind, "message": str(exc), **exc.extra}
    except NotSymmetricError as exc:
        err = {"type": "not-symmetric", "message": str(exc)}
        if getattr(exc, "cell", None):
            err["cell"] = list(exc.cell)
    except (DimensionError, SplitError) as exc:
        err = {"type": "dimension" if isinstance(exc, DimensionError) else "split", "message": str(exc)}
    except OSError as exc:
        err = {"type": "io", "message": str(exc)}
    _emit({"error": err}, out)
    print(f"structqap: {err['message']}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
