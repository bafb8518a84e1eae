"""Command line interface: ``res-kernel <command> ...``.

Exit status: 0 success, 1 input could not be parsed, 2 the driver failed
(or a checked trace was rejected), 3 the blow-up budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys

from res_kernel.contact import reduced
from res_kernel.driver import (
    DEFAULT_BUDGET,
    BudgetExhausted,
    DriverFailure,
    detect_embedded_resolution,
    principalize,
)
from res_kernel.ideal import Ideal
from res_kernel.order import MarkedIdeal, max_order, t_ideal
from res_kernel.poly import PolynomialSyntaxError, UnknownVariableError, parse_polynomial, variables_from_text
from res_kernel.toric import FanError, format_fan, inserted_rays, parse_fan, resolve_fan_2d
from res_kernel.trace import TraceDocument, TraceError, check_trace, document_from_result

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FAILURE = 2
EXIT_BUDGET = 3


class InputError(Exception):
    """Bad command line input; reported with exit status 1."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_ideal(args) -> Ideal:
    if not args.vars:
        raise InputError("--vars is required")
    try:
        variables = variables_from_text(args.vars)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    texts = list(args.ideal or [])
    if args.input:
        for line in _read(args.input).splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                texts.append(line)
    if not texts:
        raise InputError("give at least one --ideal generator (or --input FILE)")
    gens = []
    for t in texts:
        try:
            gens.append(parse_polynomial(t, variables))
        except (PolynomialSyntaxError, UnknownVariableError) as exc:
            raise InputError(f"{t!r}: {exc}") from None
    return Ideal(gens, variables)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def render_text(doc: TraceDocument) -> str:
    """Human-readable view of a trace document."""
    inp = doc.input
    lines = [
        f"{doc.command} ({', '.join(inp['ideal'])}) over {', '.join(inp['variables'])}",
        f"outcome: {doc.outcome}" + (f" ({doc.reason})" if doc.reason else ""),
        f"blow-ups: {doc.blowups}",
    ]
    if doc.embedded_stage is not None:
        lines.append(f"embedded resolution at stage {doc.embedded_stage}")
    kids = {}
    for n in doc.nodes:
        kids.setdefault(n.parent, []).append(n)
    order = []
    stack = [(n, 0) for n in reversed(kids.get(None, []))]
    while stack:
        n, d = stack.pop()
        order.append((n, d))
        stack.extend((c, d + 1) for c in reversed(kids.get(n.id, [])))
    for n, d in order:
        pad = "  " * d
        head = n.id.rsplit("/", 1)[-1] if n.parent else n.id
        where = f" on D({', '.join(n.inverted)})" if n.inverted else ""
        if n.map:
            sub = ", ".join(f"{v} = {e}" for v, e in n.map.items())
            if n.denominator != "1":
                sub += f" over {n.denominator}"
            head += f" [{sub}]"
        lines.append(f"{pad}{head}{where}")
        lines.append(f"{pad}  total ({', '.join(n.total)})")
        lines.append(f"{pad}  monomial {n.monomial}, residual ({', '.join(n.residual)})")
        if n.center is not None:
            lines.append(f"{pad}  blow up {{{','.join(n.center)}}} with mark {n.mark}: {n.note}")
        elif n.status == "covered":
            lines.append(f"{pad}  cover: {n.note}")
        elif n.status == "delegated":
            lines.append(f"{pad}  delegated to {n.delegate}")
        elif n.status == "done":
            lines.append(f"{pad}  done ({n.finish})")
        else:
            lines.append(f"{pad}  {n.status}")
    return "\n".join(lines) + "\n"


def _run_driver(args, detect: bool) -> int:
    I = _load_ideal(args)
    if I.is_zero():
        raise InputError("the zero ideal cannot be principalized")
    command = "resolve-curve" if detect else "principalize"
    status = EXIT_OK
    try:
        result = principalize(I, budget=args.budget)
        if detect:
            stage = detect_embedded_resolution(result, I)
            if stage is not None:
                result.outcome = "embedded-resolution-detected"
    except BudgetExhausted as exc:
        result, status = exc.result, EXIT_BUDGET
    except DriverFailure as exc:
        result, status = exc.result, EXIT_FAILURE
    doc = document_from_result(result, command, I, args.budget)
    _emit(doc.to_json() if args.format == "json" else render_text(doc), args.out)
    if status != EXIT_OK:
        print(f"error: {result.reason}", file=sys.stderr)
    return status


def _display_key(g):
    exp = g.leading_term()[0]
    return (sum(exp), tuple(-e for e in exp))


def cmd_order(args) -> int:
    I = _load_ideal(args)
    a = max_order(I)
    if a == float("inf"):
        raise InputError("the zero ideal has infinite order")
    mark = args.mark if args.mark is not None else a
    if mark < 1:
        T = Ideal.unit(I.variables)
    else:
        T = reduced(t_ideal(MarkedIdeal(I, mark)))
        T = Ideal(sorted(T.generators, key=_display_key), I.variables)
    if args.format == "json":
        text = json.dumps({"maxord": a, "mark": mark, "t_ideal": [str(g) for g in T.generators]}, indent=2) + "\n"
    else:
        text = f"maxord {a}\nt_ideal {T}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_principalize(args) -> int:
    return _run_driver(args, detect=False)


def cmd_resolve_curve(args) -> int:
    return _run_driver(args, detect=True)


def cmd_toric_resolve(args) -> int:
    try:
        F = parse_fan(_read(args.fan))
    except FanError as exc:
        raise InputError(str(exc)) from None
    if F.dim != 2:
        print("error: only 2-dimensional fans can be resolved", file=sys.stderr)
        return EXIT_FAILURE
    R = resolve_fan_2d(F)
    if args.format == "json":
        payload = {
            "dim": R.dim,
            "cones": [[list(r) for r in c.rays] for c in R.maximal_cones() if c.rays],
            "inserted": [list(r) for r in inserted_rays(F, R)],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = format_fan(R)
    _emit(text, args.out)
    return EXIT_OK


def cmd_check_trace(args) -> int:
    try:
        doc = TraceDocument.from_json(_read(args.trace))
    except TraceError as exc:
        raise InputError(str(exc)) from None
    problems = check_trace(doc)
    if args.format == "json":
        text = json.dumps({"ok": not problems, "violations": problems}, indent=2) + "\n"
    else:
        text = "ok\n" if not problems else "".join(f"violation: {p}\n" for p in problems)
    _emit(text, args.out)
    return EXIT_OK if not problems else EXIT_FAILURE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="res-kernel", description="Blow-up algorithms over the rationals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, ideal=True):
        if ideal:
            p.add_argument("--vars", help="comma-separated variable names, e.g. x,y")
            p.add_argument("--ideal", action="append", help="a generator (repeatable)")
            p.add_argument("--input", help="file with one generator per line")
        p.add_argument("--out", help="write the result here instead of stdout")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("order", help="maximal order and T(I, a)")
    common(p)
    p.add_argument("--mark", type=int, help="use this mark for T(I, a) instead of maxord")
    p.set_defaults(func=cmd_order)

    for name, func, text in (
        ("principalize", cmd_principalize, "blow up until the ideal is monomial"),
        ("resolve-curve", cmd_resolve_curve, "principalize and report embedded resolution"),
    ):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximal number of blow-ups")
        p.set_defaults(func=func)

    p = sub.add_parser("toric-resolve", help="minimal regular subdivision of a 2D fan")
    p.add_argument("fan", help="fan file ('-' for stdin)")
    common(p, ideal=False)
    p.set_defaults(func=cmd_toric_resolve)

    p = sub.add_parser("check-trace", help="re-verify a JSON trace")
    p.add_argument("trace", help="trace file ('-' for stdin)")
    common(p, ideal=False)
    p.set_defaults(func=cmd_check_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) < 0:
        print("error: --budget must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
