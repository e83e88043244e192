"""Exact isomorphism search for small open Petri nets.

Two open nets are isomorphic when there is a bijection of states and a
bijection of transitions that preserve every arc and multiplicity, commute
with both boundary legs port-by-port, and induce a bijection of rate
parameter names. Labels themselves are irrelevant.

The search refines state/transition colours jointly over both nets and then
backtracks within colour classes. It is exact; nets above ``MAX_EXACT_SIZE``
states or transitions are refused rather than answered heuristically.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .errors import TooLarge
from .opennet import OpenPetriNet

MAX_EXACT_SIZE = 16


@dataclass(frozen=True)
class Isomorphism:
    states: dict[str, str] = field(hash=False)
    transitions: dict[str, str] = field(hash=False)
    rate_params: dict[str, str] = field(hash=False)


def _check_size(n: OpenPetriNet) -> None:
    if len(n.states) > MAX_EXACT_SIZE or len(n.transitions) > MAX_EXACT_SIZE:
        raise TooLarge(
            f"net has {len(n.states)} states and {len(n.transitions)} transitions; "
            f"exact search is limited to {MAX_EXACT_SIZE}"
        )


def _perm(perm: Sequence[int] | None, size: int) -> list[int]:
    if perm is None:
        return list(range(size))
    perm = list(perm)
    if sorted(perm) != list(range(size)):
        raise ValueError(f"{perm} is not a permutation of {size} ports")
    return perm


def _port_marks(a: OpenPetriNet, b: OpenPetriNet, dom_perm, cod_perm):
    """Per-state port incidences, expressed in ``a``'s port numbering."""
    marks_a: dict[str, list] = {s: [] for s in a.states}
    marks_b: dict[str, list] = {s: [] for s in b.states}
    for side, leg_a, leg_b, perm in (("d", a.dom, b.dom, dom_perm), ("c", a.cod, b.cod, cod_perm)):
        for i, s in enumerate(leg_a.images):
            marks_a[s].append((side, i))
            marks_b[leg_b.images[perm[i]]].append((side, i))
    return (
        {s: tuple(sorted(v)) for s, v in marks_a.items()},
        {s: tuple(sorted(v)) for s, v in marks_b.items()},
    )


class _Colouring:
    """Joint colour refinement over two nets.

    Colour ids come from one shared table per round, so equal ids mean equal
    structural signatures across the two nets.
    """

    def __init__(self, a: OpenPetriNet, b: OpenPetriNet, marks_a, marks_b):
        self.nets = (a.net, b.net)
        self.scol = []
        self.tcol = []
        for net, marks in ((a.net, marks_a), (b.net, marks_b)):
            rate_use = Counter(t.rate_param for t in net.transitions)
            self.scol.append({s: ("s", marks[s]) for s in net.states})
            self.tcol.append({
                t.name: ("t", tuple(sorted(k for _, k in t.inputs)),
                         tuple(sorted(k for _, k in t.outputs)), rate_use[t.rate_param])
                for t in net.transitions
            })
        self._intern()

    def _intern(self) -> None:
        table: dict = {}
        for cols in (*self.scol, *self.tcol):
            for key, sig in cols.items():
                cols[key] = table.setdefault(sig, len(table))

    def histograms_match(self) -> bool:
        return (Counter(self.scol[0].values()) == Counter(self.scol[1].values())
                and Counter(self.tcol[0].values()) == Counter(self.tcol[1].values()))

    def n_classes(self) -> int:
        return len(set(self.scol[0].values())) + len(set(self.tcol[0].values()))

    def refine(self) -> bool:
        """Refine until stable; False as soon as the nets are told apart."""
        if not self.histograms_match():
            return False
        while True:
            before = self.n_classes()
            for side, net in enumerate(self.nets):
                scol, tcol = self.scol[side], self.tcol[side]
                nbrs: dict[str, list] = defaultdict(list)
                new_t = {}
                for t in net.transitions:
                    c = tcol[t.name]
                    for s, k in t.inputs:
                        nbrs[s].append(("in", k, c))
                    for s, k in t.outputs:
                        nbrs[s].append(("out", k, c))
                    new_t[t.name] = (c, tuple(sorted((k, scol[s]) for s, k in t.inputs)),
                                     tuple(sorted((k, scol[s]) for s, k in t.outputs)))
                new_s = {s: (scol[s], tuple(sorted(nbrs[s]))) for s in net.states}
                self.scol[side], self.tcol[side] = new_s, new_t
            self._intern()
            if not self.histograms_match():
                return False
            if self.n_classes() == before:
                return True


def _arc_key(t, smap=None):
    if smap is None:
        ins, outs = t.inputs, t.outputs
    else:
        ins = [(smap[s], k) for s, k in t.inputs]
        outs = [(smap[s], k) for s, k in t.outputs]
    return tuple(sorted(ins)), tuple(sorted(outs))


def is_isomorphic(a: OpenPetriNet, b: OpenPetriNet, *,
                  dom_perm: Sequence[int] | None = None,
                  cod_perm: Sequence[int] | None = None) -> Isomorphism | None:
    """Return an isomorphism witness from ``a`` to ``b``, or ``None``.

    Port ``i`` of ``a``'s domain corresponds to port ``dom_perm[i]`` of
    ``b``'s (identity by default); likewise for codomains.
    """
    _check_size(a)
    _check_size(b)
    if (len(a.states) != len(b.states) or len(a.transitions) != len(b.transitions)
            or len(a.dom_object) != len(b.dom_object)
            or len(a.cod_object) != len(b.cod_object)
            or len(a.net.rate_params()) != len(b.net.rate_params())):
        return None
    dom_perm = _perm(dom_perm, len(a.dom_object))
    cod_perm = _perm(cod_perm, len(a.cod_object))
    marks_a, marks_b = _port_marks(a, b, dom_perm, cod_perm)
    colours = _Colouring(a, b, marks_a, marks_b)
    if not colours.refine():
        return None
    scol_a, scol_b = colours.scol
    tcol_a, tcol_b = colours.tcol

    b_by_colour: dict[int, list[str]] = defaultdict(list)
    for s in b.states:
        b_by_colour[scol_b[s]].append(s)
    order = sorted(a.states, key=lambda s: (len(b_by_colour[scol_a[s]]), a.states.index(s)))
    depth_of = {s: i for i, s in enumerate(order)}

    # transitions of `a` that become fully mapped at each depth
    ready: list[list] = [[] for _ in order]
    for t in a.transitions:
        touched = t.states()
        d = max((depth_of[s] for s in touched), default=0)
        if order:
            ready[d].append(t)
    b_keys = Counter((tcol_b[t.name], _arc_key(t)) for t in b.transitions)

    smap: dict[str, str] = {}
    used: set[str] = set()

    def partial_ok(depth: int) -> bool:
        for t in ready[depth]:
            if b_keys[(tcol_a[t.name], _arc_key(t, smap))] == 0:
                return False
        return True

    def match_transitions() -> tuple[dict, dict] | None:
        groups_b: dict = defaultdict(list)
        for t in b.transitions:
            groups_b[(tcol_b[t.name], _arc_key(t))].append(t)
        keyed_a = [((tcol_a[t.name], _arc_key(t, smap)), t) for t in a.transitions]
        if Counter(k for k, _ in keyed_a) != Counter({k: len(v) for k, v in groups_b.items()}):
            return None
        tmap: dict[str, str] = {}
        rmap: dict[str, str] = {}
        rinv: dict[str, str] = {}
        taken: set[str] = set()

        def assign(i: int) -> bool:
            if i == len(keyed_a):
                return True
            key, t = keyed_a[i]
            for u in groups_b[key]:
                if u.name in taken:
                    continue
                r, q = t.rate_param, u.rate_param
                if rmap.get(r, q) != q or rinv.get(q, r) != r:
                    continue
                fresh_r = r not in rmap
                tmap[t.name] = u.name
                taken.add(u.name)
                rmap[r], rinv[q] = q, r
                if assign(i + 1):
                    return True
                del tmap[t.name]
                taken.discard(u.name)
                if fresh_r:
                    del rmap[r], rinv[q]
            return False

        return (tmap, rmap) if assign(0) else None

    def place(depth: int) -> Isomorphism | None:
        if depth == len(order):
            found = match_transitions()
            if found is None:
                return None
            return Isomorphism(dict(smap), found[0], found[1])
        s = order[depth]
        for cand in b_by_colour[scol_a[s]]:
            if cand in used:
                continue
            smap[s] = cand
            used.add(cand)
            if partial_ok(depth):
                result = place(depth + 1)
                if result is not None:
                    return result
            del smap[s]
            used.discard(cand)
        return None

    if not order:
        found = match_transitions()
        return None if found is None else Isomorphism({}, found[0], found[1])
    return place(0)


def check_isomorphism(a: OpenPetriNet, b: OpenPetriNet, iso: Isomorphism, *,
                      dom_perm: Sequence[int] | None = None,
                      cod_perm: Sequence[int] | None = None) -> bool:
    """Verify a witness directly against the definition."""
    smap, tmap = iso.states, iso.transitions
    if sorted(smap) != sorted(a.states) or sorted(smap.values()) != sorted(b.states):
        return False
    if sorted(tmap) != sorted(t.name for t in a.transitions):
        return False
    if sorted(tmap.values()) != sorted(t.name for t in b.transitions):
        return False
    if len(a.dom_object) != len(b.dom_object) or len(a.cod_object) != len(b.cod_object):
        return False
    dom_perm = _perm(dom_perm, len(a.dom_object))
    cod_perm = _perm(cod_perm, len(a.cod_object))
    for leg_a, leg_b, perm in ((a.dom, b.dom, dom_perm), (a.cod, b.cod, cod_perm)):
        for i, s in enumerate(leg_a.images):
            if smap[s] != leg_b.images[perm[i]]:
                return False
    rates: dict[str, str] = {}
    for t in a.transitions:
        u = b.net.transition(tmap[t.name])
        if _arc_key(t, smap) != _arc_key(u):
            return False
        if rates.setdefault(t.rate_param, u.rate_param) != u.rate_param:
            return False
    return len(set(rates.values())) == len(rates)
