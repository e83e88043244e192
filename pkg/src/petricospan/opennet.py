"""Petri nets, open Petri nets as cospans, and the cospan algebra.

An open net ``X -> N <- Y`` is a Petri net whose state set is the apex of a
cospan of finite sets. Composition glues states along the shared foot with a
pushout; the monoidal product is the disjoint union. Transitions are never
identified by composition.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import MismatchedBoundary
from .finset import (
    FinFn,
    LabeledSet,
    compose_fn,
    copair,
    coproduct,
    fresh_names,
    identity_fn,
    pushout,
)

Arcs = tuple[tuple[str, int], ...]


def _as_arcs(side) -> Arcs:
    """Normalize a multiset given as a mapping, pair list or label list.

    Repeated labels merge; first-appearance order is kept.
    """
    if isinstance(side, Mapping):
        items = list(side.items())
    else:
        items = []
        for entry in side:
            if isinstance(entry, str):
                items.append((entry, 1))
            else:
                label, mult = entry
                items.append((label, mult))
    merged: dict[str, int] = {}
    for label, mult in items:
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise ValueError(f"arc multiplicity for {label!r} must be a positive integer, got {mult!r}")
        merged[label] = merged.get(label, 0) + mult
    return tuple(merged.items())


@dataclass(frozen=True)
class Transition:
    """A transition with input/output arc multisets and a symbolic rate name.

    ``inputs``/``outputs`` are ``(state, multiplicity)`` pairs; construct them
    from a dict, a pair list, or a list of labels with repeats.
    """

    name: str
    rate_param: str
    inputs: Arcs = ()
    outputs: Arcs = ()

    def __post_init__(self):
        object.__setattr__(self, "inputs", _as_arcs(self.inputs))
        object.__setattr__(self, "outputs", _as_arcs(self.outputs))

    def input_counts(self) -> Counter:
        return Counter(dict(self.inputs))

    def output_counts(self) -> Counter:
        return Counter(dict(self.outputs))

    def states(self) -> set[str]:
        return {s for s, _ in self.inputs} | {s for s, _ in self.outputs}

    def relabel(self, states: Mapping[str, str], name: str | None = None,
                rate_param: str | None = None) -> Transition:
        return Transition(
            self.name if name is None else name,
            self.rate_param if rate_param is None else rate_param,
            [(states[s], k) for s, k in self.inputs],
            [(states[s], k) for s, k in self.outputs],
        )


@dataclass(frozen=True)
class PetriNet:
    states: LabeledSet
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        if not isinstance(self.states, LabeledSet):
            object.__setattr__(self, "states", LabeledSet(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        names = [t.name for t in self.transitions]
        if len(set(names)) != len(names):
            raise ValueError("duplicate transition names")
        for t in self.transitions:
            for s in t.states():
                if s not in self.states:
                    raise ValueError(f"transition {t.name!r} references unknown state {s!r}")

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise KeyError(name)

    def rate_params(self) -> list[str]:
        """Distinct rate parameter names in first-use order."""
        return list(dict.fromkeys(t.rate_param for t in self.transitions))


@dataclass(frozen=True)
class OpenPetriNet:
    """A Petri net with domain and codomain legs into its states."""

    net: PetriNet
    dom: FinFn
    cod: FinFn

    def __post_init__(self):
        if self.dom.target != self.net.states or self.cod.target != self.net.states:
            raise ValueError("boundary legs must land in the net's states")

    @property
    def dom_object(self) -> LabeledSet:
        return self.dom.source

    @property
    def cod_object(self) -> LabeledSet:
        return self.cod.source

    @property
    def states(self) -> LabeledSet:
        return self.net.states

    @property
    def transitions(self) -> tuple[Transition, ...]:
        return self.net.transitions

    @classmethod
    def build(cls, states: Iterable[str], transitions: Iterable[Transition],
              dom: Sequence[str] | Mapping[str, str],
              cod: Sequence[str] | Mapping[str, str]) -> OpenPetriNet:
        """Convenience constructor.

        ``dom``/``cod`` are either state labels (ports named after their
        states) or explicit ``{port: state}`` mappings.
        """
        net = PetriNet(LabeledSet(states), tuple(transitions))
        return cls(net, _leg(dom, net.states), _leg(cod, net.states))


def _leg(spec, states: LabeledSet) -> FinFn:
    if isinstance(spec, Mapping):
        return FinFn(LabeledSet(spec.keys()), states, dict(spec))
    spec = list(spec)
    return FinFn(LabeledSet(spec), states, spec)


def _merge_transitions(first: Sequence[Transition], first_map: Mapping[str, str],
                       second: Sequence[Transition], second_map: Mapping[str, str]
                       ) -> tuple[Transition, ...]:
    """Relabel both transition lists and rename the second's colliding names.

    Transition names and rate parameters are separate namespaces; a rate
    parameter shared by several transitions of one operand stays shared.
    """
    names = fresh_names([t.name for t in first], [t.name for t in second])
    first_rates = list(dict.fromkeys(t.rate_param for t in first))
    second_rates = list(dict.fromkeys(t.rate_param for t in second))
    rate_map = dict(zip(second_rates, fresh_names(first_rates, second_rates)))
    out = [t.relabel(first_map) for t in first]
    out += [
        t.relabel(second_map, name=name, rate_param=rate_map[t.rate_param])
        for t, name in zip(second, names)
    ]
    return tuple(out)


def compose(f: OpenPetriNet, g: OpenPetriNet) -> OpenPetriNet:
    """Serial composition: ``f`` then ``g`` (the paper's ``g . f``)."""
    if f.cod.source != g.dom.source:
        raise MismatchedBoundary(
            f"codomain {f.cod.source} does not match domain {g.dom.source}"
        )
    apex, m, n = pushout(f.cod, g.dom)
    transitions = _merge_transitions(f.transitions, m.as_dict(), g.transitions, n.as_dict())
    net = PetriNet(apex, transitions)
    return OpenPetriNet(net, compose_fn(f.dom, m), compose_fn(g.cod, n))


def tensor(f: OpenPetriNet, g: OpenPetriNet) -> OpenPetriNet:
    """Parallel composition; states, transitions and boundaries concatenate."""
    states, inj1, inj2 = coproduct(f.states, g.states)
    transitions = _merge_transitions(
        f.transitions, inj1.as_dict(), g.transitions, inj2.as_dict()
    )
    dom, _, _ = copair(f.dom, g.dom)
    cod, _, _ = copair(f.cod, g.cod)
    # copair rebuilds the target coproduct; it is label-identical to `states`
    assert dom.target == states and cod.target == states
    return OpenPetriNet(PetriNet(states, transitions), dom, cod)


def identity_open(x: LabeledSet | Iterable[str]) -> OpenPetriNet:
    if not isinstance(x, LabeledSet):
        x = LabeledSet(x)
    ident = identity_fn(x)
    return OpenPetriNet(PetriNet(x, ()), ident, ident)

