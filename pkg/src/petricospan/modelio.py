"""Model files, Graphviz DOT export and CSV trajectories.

Model file layout (UTF-8, ``#`` starts a comment)::

    [generator F]
    states: S, I
    dom: S
    cod: I
    transition α α: S + I -> 2 I

    [expr sir]
    F ; G

    [sim]
    t0: 0
    t_end: 40
    step: 0.01
    rates: α=1.0, β=0.5
    init: S=0.99, I=0.01, R=0

Boundary entries are state labels, or ``port=state`` when a port needs its
own name. In a transition line the rate parameter may be omitted, in which
case it defaults to the transition name; an empty side is written ``∅``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .dynamics import DEFAULT_STEP, Trajectory
from .errors import ExprSyntaxError, ParseError, ValidationError
from .finset import FinFn, LabeledSet
from .morphexpr import KEYWORDS, MorphExpr, generators, parse, to_text
from .opennet import OpenPetriNet, PetriNet, Transition

_NAME = r"[\w']+"
_SECTION_RE = re.compile(r"^\[\s*(generator|expr|sim)(?:\s+(\S+))?\s*\]$")
_KEY_RE = re.compile(r"^(states|dom|cod|t0|t_end|step|rates|init)\s*:(.*)$")
_TRANSITION_RE = re.compile(rf"^transition\s+({_NAME})(?:\s+({_NAME}))?\s*:(.*)->(.*)$")
_TERM_RE = re.compile(rf"^(?:(\d+)\s+)?({_NAME})$")
_LABEL_RE = re.compile(rf"^{_NAME}$")
_GEN_NAME_RE = re.compile(r"^[^\W\d][\w']*$")
EMPTY_SIDE = "∅"


@dataclass
class SimSettings:
    """Simulation defaults from a ``[sim]`` section; CLI flags override them."""

    t0: float = 0.0
    t_end: float | None = None
    step: float = DEFAULT_STEP
    rates: dict[str, float] = field(default_factory=dict)
    init: dict[str, float] = field(default_factory=dict)


class ModelFile(NamedTuple):
    generators: dict[str, OpenPetriNet]
    expressions: dict[str, MorphExpr]
    sim: SimSettings | None = None


# -- reading ------------------------------------------------------------------

@dataclass
class _RawGenerator:
    name: str
    line: int
    states: list[str] | None = None
    dom: list[tuple[str, str]] | None = None
    cod: list[tuple[str, str]] | None = None
    transitions: list[tuple[int, str, str, list, list]] = field(default_factory=list)


def _split_list(text: str, lineno: int) -> list[str]:
    text = text.strip()
    if not text:
        return []
    items = [item.strip() for item in text.split(",")]
    for item in items:
        if not item:
            raise ParseError(lineno, "empty list entry")
    return items


def _parse_label(text: str, lineno: int) -> str:
    if not _LABEL_RE.match(text):
        raise ParseError(lineno, f"invalid label {text!r}")
    return text


def _parse_ports(text: str, lineno: int) -> list[tuple[str, str]]:
    ports = []
    for item in _split_list(text, lineno):
        if "=" in item:
            port, state = (part.strip() for part in item.split("=", 1))
        else:
            port = state = item
        ports.append((_parse_label(port, lineno), _parse_label(state, lineno)))
    return ports


def _parse_side(text: str, lineno: int) -> list[tuple[str, int]]:
    text = text.strip()
    if not text or text == EMPTY_SIDE:
        return []
    arcs = []
    for term in text.split("+"):
        m = _TERM_RE.match(term.strip())
        if m is None:
            raise ParseError(lineno, f"invalid term {term.strip()!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        if mult < 1:
            raise ParseError(lineno, f"multiplicity must be positive in {term.strip()!r}")
        arcs.append((m.group(2), mult))
    return arcs


def _parse_number(text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(lineno, f"invalid number {text.strip()!r}") from None


def _parse_bindings(text: str, lineno: int) -> dict[str, float]:
    out = {}
    for item in _split_list(text, lineno):
        if "=" not in item:
            raise ParseError(lineno, f"expected name=value, got {item!r}")
        name, value = (part.strip() for part in item.split("=", 1))
        out[_parse_label(name, lineno)] = _parse_number(value, lineno)
    return out


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def loads_model(text: str) -> ModelFile:
    """Parse and validate model file text."""
    raw_gens: list[_RawGenerator] = []
    raw_exprs: list[tuple[str, int, list[tuple[int, str]]]] = []
    sim: SimSettings | None = None
    section = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line:
            continue
        header = _SECTION_RE.match(line)
        if header:
            kind, name = header.groups()
            if kind == "sim":
                if name:
                    raise ParseError(lineno, "[sim] takes no name")
                if sim is not None:
                    raise ParseError(lineno, "duplicate [sim] section")
                sim = SimSettings()
                section = ("sim", sim)
            elif not name:
                raise ParseError(lineno, f"[{kind}] needs a name")
            elif kind == "generator":
                raw_gens.append(_RawGenerator(name, lineno))
                section = ("generator", raw_gens[-1])
            else:
                raw_exprs.append((name, lineno, []))
                section = ("expr", raw_exprs[-1])
            continue
        if line.startswith("["):
            raise ParseError(lineno, f"unknown section header {line!r}")
        if section is None:
            raise ParseError(lineno, "content outside of any section")

        kind, target = section
        if kind == "expr":
            target[2].append((lineno, line))
        elif kind == "generator":
            _generator_line(target, line, lineno)
        else:
            _sim_line(target, line, lineno)

    return _validate(raw_gens, raw_exprs, sim)


def _generator_line(gen: _RawGenerator, line: str, lineno: int) -> None:
    m = _TRANSITION_RE.match(line)
    if m:
        name, rate, lhs, rhs = m.groups()
        gen.transitions.append(
            (lineno, name, rate or name, _parse_side(lhs, lineno), _parse_side(rhs, lineno))
        )
        return
    if line.startswith("transition"):
        raise ParseError(lineno, "expected 'transition <name> [<rate>]: <inputs> -> <outputs>'")
    m = _KEY_RE.match(line)
    if not m or m.group(1) not in ("states", "dom", "cod"):
        raise ParseError(lineno, f"unexpected line in generator {gen.name!r}")
    key, value = m.groups()
    if getattr(gen, key) is not None:
        raise ParseError(lineno, f"duplicate {key!r} in generator {gen.name!r}")
    if key == "states":
        gen.states = [_parse_label(x, lineno) for x in _split_list(value, lineno)]
    else:
        setattr(gen, key, _parse_ports(value, lineno))


def _sim_line(sim: SimSettings, line: str, lineno: int) -> None:
    m = _KEY_RE.match(line)
    if not m or m.group(1) in ("states", "dom", "cod"):
        raise ParseError(lineno, "unexpected line in [sim]")
    key, value = m.groups()
    if key in ("rates", "init"):
        getattr(sim, key).update(_parse_bindings(value, lineno))
    else:
        setattr(sim, key, _parse_number(value, lineno))


def _build_generator(raw: _RawGenerator, problems: list) -> OpenPetriNet | None:
    entity = f"generator {raw.name}"
    before = len(problems)
    states = raw.states if raw.states is not None else []
    if raw.states is None:
        problems.append((entity, "missing 'states:'"))
    dupes = sorted({s for s in states if states.count(s) > 1})
    if dupes:
        problems.append((entity, "duplicate states " + ", ".join(dupes)))
    known = set(states)
    legs = {}
    for side in ("dom", "cod"):
        ports = getattr(raw, side) or []
        names = [p for p, _ in ports]
        if len(set(names)) != len(names):
            problems.append((entity, f"duplicate {side} port labels; name them with port=state"))
        for port, state in ports:
            if state not in known:
                problems.append((entity, f"{side} port {port!r} refers to undeclared state {state!r}"))
        legs[side] = ports
    seen = set()
    transitions = []
    for lineno, name, rate, ins, outs in raw.transitions:
        if name in seen:
            problems.append((entity, f"duplicate transition {name!r} (line {lineno})"))
        seen.add(name)
        for state, _ in ins + outs:
            if state not in known:
                problems.append(
                    (entity, f"transition {name!r} references undeclared state {state!r} (line {lineno})")
                )
        transitions.append(Transition(name, rate, ins, outs))
    if len(problems) > before:
        return None
    net = PetriNet(LabeledSet(states), tuple(transitions))
    leg = {
        side: FinFn(LabeledSet(p for p, _ in ports), net.states, [s for _, s in ports])
        for side, ports in legs.items()
    }
    return OpenPetriNet(net, leg["dom"], leg["cod"])


def _validate(raw_gens, raw_exprs, sim) -> ModelFile:
    problems: list[tuple[str, str]] = []
    gens: dict[str, OpenPetriNet] = {}
    seen: set[str] = set()
    for raw in raw_gens:
        if not _GEN_NAME_RE.match(raw.name) or raw.name in KEYWORDS:
            problems.append((f"generator {raw.name}", "name is not a valid generator identifier"))
        if raw.name in seen:
            problems.append((f"generator {raw.name}", f"duplicate generator name (line {raw.line})"))
            continue
        seen.add(raw.name)
        built = _build_generator(raw, problems)
        if built is not None:
            gens[raw.name] = built

    declared = {raw.name for raw in raw_gens}
    exprs: dict[str, MorphExpr] = {}
    for name, lineno, lines in raw_exprs:
        entity = f"expr {name}"
        if name in exprs:
            problems.append((entity, f"duplicate expression name (line {lineno})"))
            continue
        if not lines:
            problems.append((entity, "empty expression"))
            continue
        source = "\n".join(text for _, text in lines)
        try:
            expr = parse(source)
        except ExprSyntaxError as err:
            raise ParseError(lines[0][0] + err.line - 1, f"in {entity}: {err}") from None
        for gen in dict.fromkeys(generators(expr)):
            if gen not in declared:
                problems.append((entity, f"references undefined generator {gen!r}"))
        exprs[name] = expr

    if sim is not None:
        if sim.step <= 0:
            problems.append(("sim", "step must be positive"))
        if sim.t_end is not None and sim.t_end <= sim.t0:
            problems.append(("sim", "t_end must exceed t0"))
        for rate, value in sim.rates.items():
            if value < 0:
                problems.append(("sim", f"rate {rate} must be nonnegative"))
    if problems:
        entity, reason = problems[0]
        raise ValidationError(entity, reason, problems)
    return ModelFile(gens, exprs, sim)


def load_model(path: str | Path) -> ModelFile:
    return loads_model(Path(path).read_text(encoding="utf-8"))


def bundled_model(name: str) -> Path:
    """Path of a model file shipped with the package (``sir``, ``sird``, ``malaria``)."""
    if not name.endswith(".model"):
        name += ".model"
    path = Path(str(resources.files(__package__).joinpath("models").joinpath(name)))
    if not path.is_file():
        raise FileNotFoundError(name)
    return path


# -- writing ------------------------------------------------------------------

def _format_side(arcs) -> str:
    if not arcs:
        return EMPTY_SIDE
    return " + ".join(s if k == 1 else f"{k} {s}" for s, k in arcs)


def _format_ports(leg: FinFn) -> str:
    return ", ".join(
        port if port == state else f"{port}={state}"
        for port, state in zip(leg.source, leg.images)
    )


def format_generator(name: str, net: OpenPetriNet) -> str:
    lines = [
        f"[generator {name}]",
        "states: " + ", ".join(net.states),
        "dom: " + _format_ports(net.dom),
        "cod: " + _format_ports(net.cod),
    ]
    for t in net.transitions:
        lines.append(
            f"transition {t.name} {t.rate_param}: "
            f"{_format_side(t.inputs)} -> {_format_side(t.outputs)}"
        )
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _bindings(values: dict[str, float]) -> str:
    return ", ".join(f"{k}={v!r}" for k, v in values.items())


def dumps_model(model: ModelFile) -> str:
    blocks = [format_generator(name, net) for name, net in model.generators.items()]
    blocks += [f"[expr {name}]\n{to_text(e)}\n" for name, e in model.expressions.items()]
    if model.sim is not None:
        sim = model.sim
        lines = ["[sim]", f"t0: {sim.t0!r}"]
        if sim.t_end is not None:
            lines.append(f"t_end: {sim.t_end!r}")
        lines.append(f"step: {sim.step!r}")
        if sim.rates:
            lines.append("rates: " + _bindings(sim.rates))
        if sim.init:
            lines.append("init: " + _bindings(sim.init))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def save_model(path: str | Path, model: ModelFile) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


# -- DOT ----------------------------------------------------------------------

def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(n: OpenPetriNet, name: str = "G") -> str:
    """Render an open net as a Graphviz digraph.

    States are circles, transitions squares, boundary ports diamonds wired
    to their leg images with dashed edges. Parallel arcs collapse into one
    edge labelled with the multiplicity.
    """
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for s in n.states:
        lines.append(f"  {_q('s:' + s)} [shape=circle, label={_q(s)}];")
    for t in n.transitions:
        lines.append(f"  {_q('t:' + t.name)} [shape=square, label={_q(t.name)}];")
    for side, leg in (("dom", n.dom), ("cod", n.cod)):
        for i, port in enumerate(leg.source):
            lines.append(f"  {_q(f'{side}:{i}')} [shape=diamond, label={_q(port)}];")
    for t in n.transitions:
        tid = _q("t:" + t.name)
        for s, k in t.inputs:
            attrs = f" [label={_q(str(k))}]" if k > 1 else ""
            lines.append(f"  {_q('s:' + s)} -> {tid}{attrs};")
        for s, k in t.outputs:
            attrs = f" [label={_q(str(k))}]" if k > 1 else ""
            lines.append(f"  {tid} -> {_q('s:' + s)}{attrs};")
    for i, s in enumerate(n.dom.images):
        lines.append(f"  {_q(f'dom:{i}')} -> {_q('s:' + s)} [style=dashed];")
    for i, s in enumerate(n.cod.images):
        lines.append(f"  {_q('s:' + s)} -> {_q(f'cod:{i}')} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- CSV ----------------------------------------------------------------------

def write_csv(t: Trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *t.states])
    for time, row in zip(t.times, t.values):
        writer.writerow([repr(float(time)), *(repr(float(v)) for v in row)])
    return buf.getvalue()


def read_csv(text: str) -> Trajectory:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    if not header or header[0] != "t":
        raise ValueError("CSV header must start with 't'")
    times = tuple(float(r[0]) for r in body)
    values = tuple(tuple(float(x) for x in r[1:]) for r in body)
    return Trajectory(tuple(header[1:]), times, values)
