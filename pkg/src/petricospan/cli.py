"""Command-line interface.

Exit codes: 0 success, 1 model or user error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .compare import describe_path, diff_expr, diff_net
from .dynamics import SimConfig, conserves_tokens, simulate
from .errors import ParseError, PetriCospanError, ValidationError
from .modelio import ModelFile, export_dot, format_generator, load_model, write_csv
from .morphexpr import MorphExpr, evaluate, parse, to_text, typecheck

COLOR_ENV = "PETRICOSPAN_COLOR"


class CliError(Exception):
    pass


def _binding(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number in {text!r}") from None


def _resolve(model: ModelFile, expr: str) -> tuple[str, MorphExpr]:
    """A named expression from the file, else inline expression text."""
    if expr in model.expressions:
        return expr, model.expressions[expr]
    return "composite", parse(expr)


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def _colour(line: str) -> str:
    if os.environ.get(COLOR_ENV, "") not in ("1", "always") or "NO_COLOR" in os.environ:
        return line
    if line.startswith("+"):
        return f"\x1b[32m{line}\x1b[0m"
    if line.startswith("-"):
        return f"\x1b[31m{line}\x1b[0m"
    return line


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_eval(args) -> int:
    model = load_model(args.file)
    name, expr = _resolve(model, args.expr)
    net = evaluate(expr, model.generators)
    print(
        f"{_plural(len(net.states), 'state')}, {_plural(len(net.transitions), 'transition')}, "
        f"dom {net.dom_object}, cod {net.cod_object}"
    )
    print(format_generator(name, net), end="")
    return 0


def _sim_config(model: ModelFile, net, args) -> SimConfig:
    sim = model.sim
    t0 = args.t0 if args.t0 is not None else (sim.t0 if sim else 0.0)
    t_end = args.t_end if args.t_end is not None else (sim.t_end if sim else None)
    if t_end is None:
        raise CliError("no end time: set t_end in [sim] or pass --t-end")
    step = args.step if args.step is not None else (sim.step if sim else 0.01)

    rates = dict(sim.rates) if sim else {}
    rates.update(dict(args.rate))
    states = set(net.states)
    unknown = [s for s, _ in args.init if s not in states]
    if unknown:
        raise CliError("--init names unknown state(s): " + ", ".join(unknown))
    init = {s: v for s, v in (sim.init.items() if sim else ()) if s in states}
    init.update(dict(args.init))
    missing = [s for s in net.states if s not in init]
    if missing:
        raise CliError("no initial value for state(s): " + ", ".join(missing))
    try:
        return SimConfig(t0=t0, t_end=t_end, step=step, initial=init, rates=rates)
    except ValueError as err:
        raise CliError(str(err)) from None


def cmd_simulate(args) -> int:
    model = load_model(args.file)
    _, expr = _resolve(model, args.expr)
    net = evaluate(expr, model.generators)
    traj = simulate(net, _sim_config(model, net, args))
    _write(write_csv(traj), args.output)
    final = ", ".join(f"{s}={v!r}" for s, v in traj.final().items())
    print(f"{traj.steps} steps to t={traj.times[-1]!r}; final {final}", file=sys.stderr)
    return 0


def cmd_diff(args) -> int:
    """Expression diff first (purely syntactic), then the net diff.

    If either side fails to evaluate, the expression diff is still printed
    before the error and the exit status is 1.
    """
    model_a = load_model(args.file_a)
    model_b = load_model(args.file_b)
    _, expr_a = _resolve(model_a, args.expr_a)
    _, expr_b = _resolve(model_b, args.expr_b)
    ed = diff_expr(expr_a, expr_b)
    expr_lines = [f"shared: {to_text(s.expr)}" for s in ed.shared]
    expr_lines += [
        f"substitution at {describe_path(s.path)}: {to_text(s.left)} → {to_text(s.right)}"
        for s in ed.substitutions
    ]
    try:
        net_a = evaluate(expr_a, model_a.generators)
        net_b = evaluate(expr_b, model_b.generators)
    except PetriCospanError:
        for line in expr_lines:
            print(line)
        raise
    nd = diff_net(net_a, net_b)
    if ed.identical and nd.empty:
        print("identical")
        return 0
    lines = list(expr_lines)
    removed = set(nd.removed_states)
    for s in net_a.states:
        lines.append(("-" if s in removed else " ") + f"state {s}")
    lines += [f"+state {s}" for s in nd.added_states]
    removed_t = {t.name for t in nd.removed_transitions}
    for t in net_a.transitions:
        lines.append(("-" if t.name in removed_t else " ") + f"transition {t.name}")
    lines += [f"+transition {t.name}" for t in nd.added_transitions]
    for line in lines:
        print(_colour(line))
    return 0


def cmd_dot(args) -> int:
    model = load_model(args.file)
    _, expr = _resolve(model, args.expr)
    _write(export_dot(evaluate(expr, model.generators)), args.output)
    return 0


def cmd_check(args) -> int:
    try:
        model = load_model(args.file)
    except ValidationError as err:
        for entity, reason in err.problems:
            print(f"FAIL {entity}: {reason}")
        return 1
    except ParseError as err:
        print(f"FAIL {args.file}: {err}")
        return 1
    failures = 0
    for name, net in model.generators.items():
        note = "conserves tokens" if conserves_tokens(net) else "does not conserve tokens"
        print(f"ok   generator {name} ({note})")
    for name, expr in model.expressions.items():
        try:
            dom, cod = typecheck(expr, model.generators)
        except PetriCospanError as err:
            failures += 1
            print(f"FAIL expr {name}: {err}")
        else:
            print(f"ok   expr {name}: {dom} -> {cod}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="petricospan",
        description="Compose, compare and simulate open Petri net models.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("eval", help="evaluate an expression and print the composite net")
    p.add_argument("file")
    p.add_argument("expr", help="expression name from the file, or inline expression text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="simulate a composite and write a CSV trajectory")
    p.add_argument("file")
    p.add_argument("expr")
    p.add_argument("--t0", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--rate", type=_binding, action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--init", type=_binding, action="append", default=[], metavar="STATE=VALUE")
    p.add_argument("-o", "--output", help="CSV path (default: standard output)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diff", help="compare two composites")
    p.add_argument("file_a")
    p.add_argument("expr_a")
    p.add_argument("file_b")
    p.add_argument("expr_b")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("dot", help="export a composite as Graphviz DOT")
    p.add_argument("file")
    p.add_argument("expr")
    p.add_argument("-o", "--output", help="DOT path (default: standard output)")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("check", help="validate a model file and typecheck its expressions")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PetriCospanError, CliError, OSError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
