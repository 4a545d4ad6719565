"""Command-line interface: ``lrval <command> ...``.

Exit codes: 0 success, 2 validation or parse failure, 3 no certified generic
form within the retry budget (``LRVAL_MAX_RETRIES``), 1 an internal
consistency check failed (a bug, not bad input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .combin import (
    LRFilling,
    count_integer_fillings,
    ScaleError,
    shift_filling,
    validate_filling,
)
from .dynamics import (
    NegativePartsError,
    TheoremViolation,
    frame_filling,
    frame_parameters,
    sweep,
)
from .extract import (
    InconsistencyError,
    content_shift,
    invariant_sequence_left,
    invariant_sequence_right,
    left_filling,
    left_filling_determinantal,
    matrices_from_filling,
    right_filling,
    right_filling_determinantal,
)
from .generic import (
    GenericityError,
    genericity_violations,
    to_mu_generic,
    to_mu_nuhat_generic,
)
from .render import DiagramSpec, layout, render_ascii, render_svg
from .valfield import format_rational, parse_rational
from .valmat import RPartition, SingularMatrixError, ValMatrix, invariant_partition

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_GENERICITY = 3
EXIT_INTERNAL = 1


class InputError(ValueError):
    """Malformed input file or argument."""


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load_matrix(path: str) -> ValMatrix:
    text = _read(path)
    try:
        if text.lstrip().startswith("{"):
            return ValMatrix.from_json(json.loads(text))
        return ValMatrix.from_text(text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_filling(path: str) -> LRFilling:
    text = _read(path)
    try:
        if text.lstrip().startswith("{"):
            return LRFilling.from_json(text)
        return LRFilling.from_text(text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _partition_arg(text: str) -> RPartition:
    try:
        return RPartition([parse_rational(tok) for tok in text.replace(",", " ").split()])
    except ValueError as exc:
        raise InputError(f"bad partition {text!r}: {exc}") from exc


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _plist(p) -> list:
    return [format_rational(x) for x in p]


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _beta_tag(b) -> str:
    q = Fraction(b)
    return f"{q.numerator}_{q.denominator}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_inv(args) -> int:
    M = _load_matrix(args.matrix)
    p = invariant_partition(M)
    _emit(args, str(p), {"inv": _plist(p)})
    return EXIT_OK


def cmd_right_fill(args) -> int:
    M, N = _load_matrix(args.M), _load_matrix(args.N)
    F = right_filling(M, N, seed=args.seed, method=args.method)
    _emit(args, F.to_text(), F.to_json())
    return EXIT_OK


def cmd_left_fill(args) -> int:
    M, N = _load_matrix(args.M), _load_matrix(args.N)
    if args.method == "determinantal":
        G = left_filling_determinantal(M, N, seed=args.seed)
    else:
        G = left_filling(M, N, seed=args.seed)
    _emit(args, G.to_text(), G.to_json())
    return EXIT_OK


def _report_invalid(args, bad) -> int:
    lines = [str(v) for v in bad]
    _emit(args, "INVALID\n" + "\n".join(lines), {"valid": False, "violations": lines})
    return EXIT_INVALID


def cmd_build(args) -> int:
    F = _load_filling(args.filling)
    bad = validate_filling(F)
    if bad:
        return _report_invalid(args, bad)
    M, factors, N = matrices_from_filling(F, increasing=args.increasing)
    chunks = ["# M", M.to_text()]
    for i, f in enumerate(factors, start=1):
        chunks += [f"# N{i}", f.to_text()]
    chunks += ["# N", N.to_text()]
    payload = {"M": M.to_json(), "factors": [f.to_json() for f in factors], "N": N.to_json()}
    _emit(args, "\n".join(chunks), payload)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    F = _load_filling(args.filling)
    bad = validate_filling(F)
    if bad:
        return _report_invalid(args, bad)
    M, _, N = matrices_from_filling(F)
    back = right_filling_determinantal(to_mu_generic(M, N, seed=args.seed))
    ok = back == F
    msg = "OK: filling reproduced exactly" if ok else "MISMATCH:\n" + back.to_text()
    _emit(args, msg, {"ok": ok, "extracted": back.to_json()})
    return EXIT_OK if ok else EXIT_INVALID


def cmd_sequence(args) -> int:
    M, N = _load_matrix(args.M), _load_matrix(args.N)
    G = to_mu_nuhat_generic(M, N, seed=args.seed)
    if args.side == "left":
        shift = content_shift(G.mu)
        seq = invariant_sequence_left(G, shift)
    else:
        shift = content_shift(G.nu)
        seq = invariant_sequence_right(G, shift)
    lines = [str(p) for p in seq]
    if shift:
        lines.insert(0, f"# content shifted by {format_rational(shift)} to make it non-negative")
    payload = {"side": args.side, "shift": format_rational(shift), "sequence": [_plist(p) for p in seq]}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_sweep(args) -> int:
    M, N = _load_matrix(args.M), _load_matrix(args.N)
    G = to_mu_nuhat_generic(M, N, seed=args.seed)
    side = args.side.upper()
    trace = sweep(G, side, args.strip)
    lines = [f"side {side} strip {args.strip} from {format_rational(trace.beta0)}"]
    for s in trace.segments:
        lines.append(
            f"({format_rational(s.lower)}, {format_rational(s.upper)}]: row {s.row}; "
            f"strip {' '.join(format_rational(x) for x in s.strip_upper.rows)} -> "
            f"{' '.join(format_rational(x) for x in s.strip_lower.rows)}"
        )
    payload = trace.to_json()
    if args.frames:
        out = Path(args.frames)
        out.mkdir(parents=True, exist_ok=True)
        names = []
        for k, b in enumerate(frame_parameters(trace)):
            F = frame_filling(G, side, args.strip, b)
            name = f"frame-{k}-beta-{_beta_tag(b)}.svg"
            (out / name).write_text(render_svg(DiagramSpec(F, highlight_strip=args.strip)), encoding="utf-8")
            names.append(name)
        lines.append(f"wrote {len(names)} frames to {out}")
        payload["frames"] = names
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_count(args) -> int:
    mu, nu, lam = (_partition_arg(x) for x in (args.mu, args.nu, args.lam))
    n = count_integer_fillings(mu, nu, lam)
    _emit(args, str(n), {"count": n})
    return EXIT_OK


def cmd_shift(args) -> int:
    F = _load_filling(args.filling)
    out = shift_filling(F, args.alpha, side=args.side)
    _emit(args, out.to_text(), out.to_json())
    return EXIT_OK


def cmd_check(args) -> int:
    if len(args.files) == 1:
        F = _load_filling(args.files[0])
        bad = validate_filling(F)
        if bad:
            return _report_invalid(args, bad)
        _emit(args, "VALID", {"valid": True, "nu": _plist(F.nu), "lambda": _plist(F.lam)})
        return EXIT_OK
    if len(args.files) != 2:
        raise InputError("check takes a filling file or two matrix files")
    M, N = _load_matrix(args.files[0]), _load_matrix(args.files[1])
    upper = to_mu_generic(M, N, seed=args.seed)
    lower = to_mu_nuhat_generic(M, N, seed=args.seed)
    problems = genericity_violations(upper) + genericity_violations(lower)
    if problems:
        return _report_invalid(args, problems)
    text = f"CERTIFIED: mu={upper.mu} nu={upper.nu} lambda={upper.lam}"
    _emit(args, text, {"certified": True, "mu": _plist(upper.mu), "nu": _plist(upper.nu), "lambda": _plist(upper.lam)})
    return EXIT_OK


def cmd_render(args) -> int:
    F = _load_filling(args.filling)
    bad = validate_filling(F)
    if bad:
        return _report_invalid(args, bad)
    spec = DiagramSpec(F, scale=args.scale)
    if args.format == "json":
        pieces = [
            {"row": p.row, "strip": p.strip, "start": format_rational(p.start), "length": format_rational(p.length)}
            for p in layout(F)
        ]
        print(json.dumps({"pieces": pieces}, indent=2, sort_keys=True))
    elif args.format == "svg":
        sys.stdout.write(render_svg(spec))
    else:
        sys.stdout.write(render_ascii(spec))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrval", description="Fillings of matrix pairs over a valuation ring.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, formats=("text", "json")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)
        return p

    p = add("inv", cmd_inv, "invariant partition of a matrix")
    p.add_argument("matrix")
    for name, func in (("right-fill", cmd_right_fill), ("left-fill", cmd_left_fill)):
        p = add(name, func, f"{name.split('-')[0]} filling of a pair")
        p.add_argument("M")
        p.add_argument("N")
        p.add_argument("--method", choices=("sequence", "determinantal"), default="sequence")
    p = add("build", cmd_build, "matrices realizing a filling")
    p.add_argument("filling")
    p.add_argument("--increasing", action="store_true", help="list invariants in increasing order")
    p = add("roundtrip", cmd_roundtrip, "build matrices then extract the filling again")
    p.add_argument("filling")
    p = add("sequence", cmd_sequence, "invariant sequence of a pair")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("--side", choices=("left", "right"), default="right")
    p = add("sweep", cmd_sweep, "deform one part and trace its strip")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("--side", choices=("mu", "nu", "MU", "NU"), default="nu")
    p.add_argument("--strip", type=int, required=True)
    p.add_argument("--frames", help="directory for SVG frames")
    p = add("count", cmd_count, "count integer fillings (brute force)")
    p.add_argument("mu")
    p.add_argument("nu")
    p.add_argument("lam", metavar="lambda")
    p = add("shift", cmd_shift, "scalar shift of a filling")
    p.add_argument("filling")
    p.add_argument("--alpha", type=_rational_arg, required=True)
    p.add_argument("--side", choices=("left", "right"), default="right")
    p = add("check", cmd_check, "validate a filling, or certify generic forms of a pair")
    p.add_argument("files", nargs="+")
    p = add("render", cmd_render, "draw a filling", formats=("ascii", "svg", "json"))
    p.add_argument("filling")
    p.add_argument("--scale", type=_rational_arg, default=Fraction(1))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenericityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in exc.diagnostics:
            print(f"  {line}", file=sys.stderr)
        return EXIT_GENERICITY
    except (ValueError, ScaleError, NegativePartsError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InconsistencyError, TheoremViolation) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
