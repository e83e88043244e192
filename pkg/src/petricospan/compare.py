"""Structural comparison of morphism expressions and of Petri nets."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .morphexpr import Compose, MorphExpr, Tensor
from .opennet import OpenPetriNet, PetriNet, Transition

Path = tuple[int, ...]  # child indices from the root: 0 = left, 1 = right


@dataclass(frozen=True)
class Shared:
    path: Path
    expr: MorphExpr


@dataclass(frozen=True)
class Substitution:
    path: Path
    left: MorphExpr
    right: MorphExpr


@dataclass(frozen=True)
class ExprDiff:
    """Outcome of a simultaneous top-down walk of two expressions.

    Both walks follow the same path, so every recorded path is a valid
    position in each tree.
    """

    shared: tuple[Shared, ...]
    substitutions: tuple[Substitution, ...]

    @property
    def identical(self) -> bool:
        return not self.substitutions


def diff_expr(a: MorphExpr, b: MorphExpr) -> ExprDiff:
    shared: list[Shared] = []
    subs: list[Substitution] = []

    def walk(x: MorphExpr, y: MorphExpr, path: Path) -> None:
        if x == y:
            shared.append(Shared(path, x))
        elif type(x) is type(y) and isinstance(x, (Compose, Tensor)):
            walk(x.left, y.left, path + (0,))
            walk(x.right, y.right, path + (1,))
        else:
            subs.append(Substitution(path, x, y))

    walk(a, b, ())
    return ExprDiff(tuple(shared), tuple(subs))


def subtree(e: MorphExpr, path: Path) -> MorphExpr:
    for step in path:
        e = e.right if step else e.left
    return e


def replace_at(e: MorphExpr, path: Path, new: MorphExpr) -> MorphExpr:
    if not path:
        return new
    if not isinstance(e, (Compose, Tensor)):
        raise ValueError(f"path {path} leaves the tree")
    head, rest = path[0], path[1:]
    if head == 0:
        return type(e)(replace_at(e.left, rest, new), e.right)
    return type(e)(e.left, replace_at(e.right, rest, new))


def apply_substitutions(e: MorphExpr, subs: Iterable[Substitution]) -> MorphExpr:
    for sub in subs:
        e = replace_at(e, sub.path, sub.right)
    return e


def describe_path(path: Path) -> str:
    if not path:
        return "root"
    return ".".join("right" if step else "left" for step in path)


def _transition_key(t: Transition):
    return t.name, frozenset(t.input_counts().items()), frozenset(t.output_counts().items())


@dataclass(frozen=True)
class NetDiff:
    matched_states: tuple[str, ...]
    added_states: tuple[str, ...]
    removed_states: tuple[str, ...]
    matched_transitions: tuple[Transition, ...] = field(repr=False)
    added_transitions: tuple[Transition, ...] = field(repr=False)
    removed_transitions: tuple[Transition, ...] = field(repr=False)

    @property
    def empty(self) -> bool:
        return not (self.added_states or self.removed_states
                    or self.added_transitions or self.removed_transitions)


def diff_net(a: PetriNet | OpenPetriNet, b: PetriNet | OpenPetriNet) -> NetDiff:
    """Label-anchored diff from ``a`` to ``b``.

    States match by label; transitions match when name, input multiset and
    output multiset all agree. Matched transitions are reported as they
    appear in ``a``.
    """
    if isinstance(a, OpenPetriNet):
        a = a.net
    if isinstance(b, OpenPetriNet):
        b = b.net
    matched_s = tuple(s for s in a.states if s in b.states)
    removed_s = tuple(s for s in a.states if s not in b.states)
    added_s = tuple(s for s in b.states if s not in a.states)

    pool = Counter(_transition_key(t) for t in b.transitions)
    matched_t, removed_t = [], []
    for t in a.transitions:
        key = _transition_key(t)
        if pool[key]:
            pool[key] -= 1
            matched_t.append(t)
        else:
            removed_t.append(t)
    remaining = Counter(_transition_key(t) for t in matched_t)
    added_t = []
    for t in b.transitions:
        key = _transition_key(t)
        if remaining[key]:
            remaining[key] -= 1
        else:
            added_t.append(t)
    return NetDiff(matched_s, added_s, removed_s,
                   tuple(matched_t), tuple(added_t), tuple(removed_t))
