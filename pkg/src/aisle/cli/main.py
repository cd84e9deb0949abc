"""The ``aisle`` executable."""

import argparse
import sys
import time

from .. import __version__
from .._engine import set_max_pairs
from ..errors import AisleError, InvalidInput
from .commands import SESSIONLESS, VERBS
from .dsl import parse_session
from .report import emit, error_payload, to_json

EXIT_OK, EXIT_FALSE = 0, 1


def build_parser():
    p = argparse.ArgumentParser(prog="aisle", description="Exact commutative and homological algebra sessions.")
    p.add_argument("verb", choices=sorted(VERBS), help="command to run")
    p.add_argument("operands", nargs="*", help="names or inline expressions from the session")
    p.add_argument("--version", action="version", version=f"aisle {__version__}")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--session", help="session file (default: stdin)")
    p.add_argument("--max-pairs", type=int, dest="max_pairs", help="Groebner pair budget")
    p.add_argument("--seed", type=int)
    p.add_argument("--cases", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--suite")
    p.add_argument("--window", help="degree window a..b")
    p.add_argument("--side", help="aisle, coaisle or coaisle-gamma")
    p.add_argument("--filtration")
    p.add_argument("--complex")
    p.add_argument("--evidence")
    p.add_argument("--vars")
    p.add_argument("--length", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--method")
    p.add_argument("--shift", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--kind")
    p.add_argument("--timing", action="store_true", help="append wall time to human output")
    return p


def _read_session(args, stdin):
    if args.session:
        try:
            with open(args.session, "rb") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read session file: {exc}") from None
    else:
        text = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
    return parse_session(text)


_VALUE_FLAGS = {"--window", "--shift", "--n", "--degree", "--seed"}


def _glue_negative_values(argv):
    # "--window -1..2" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv, stdin=None):
    """Run one command line; returns (exit code, output bytes)."""
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(_glue_negative_values(list(argv)))
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), b""
    budget = args.max_pairs  # AISLE_MAX_PAIRS is read by the engine itself
    if budget is not None:
        set_max_pairs(budget)
    fmt = "json" if args.json else "human"
    try:
        session = None if args.verb in SESSIONLESS else _read_session(args, stdin)
        t0 = time.perf_counter()
        report = VERBS[args.verb](session, args)
        if args.timing:
            report.timing = time.perf_counter() - t0
        out = emit(report, fmt)
        code = EXIT_FALSE if report.verdict is False else EXIT_OK
    except AisleError as exc:
        payload = error_payload(exc, args.verb)
        if fmt == "json":
            out = to_json(payload).encode("utf-8")
        else:
            out = f"error ({exc.kind}): {exc}\n".encode("utf-8")
        code = exc.exit_code
    except RecursionError:
        out = b'{"error": {"kind": "resource-exhausted", "message": "recursion limit"}}\n'
        code = 3
    finally:
        if budget is not None:
            set_max_pairs(None)
    return code, out


def main(argv=None):
    code, out = run(sys.argv[1:] if argv is None else argv)
    target = sys.stdout if code in (EXIT_OK, EXIT_FALSE) or out.startswith(b"{") else sys.stderr
    target.buffer.write(out)
    target.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
