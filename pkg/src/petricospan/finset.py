"""Labeled finite sets, total functions between them, coproducts and pushouts.

Sets are ordered label sequences; the order is the canonical element order
and is what every downstream construction (state order, CSV columns, DOT
node order) inherits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import MismatchedSets

PRIME = "'"


@dataclass(frozen=True)
class LabeledSet:
    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str] = ()):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            dupes = sorted({x for x in labels if labels.count(x) > 1})
            raise ValueError(f"duplicate labels: {', '.join(dupes)}")
        for x in labels:
            if not isinstance(x, str):
                raise TypeError(f"labels must be str, got {x!r}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self) -> str:
        return f"LabeledSet({list(self.labels)!r})"

    def __str__(self) -> str:
        return "[" + ", ".join(self.labels) + "]"


@dataclass(frozen=True)
class FinFn:
    """A total function ``source -> target``.

    ``images[i]`` is the image of ``source.labels[i]``.
    """

    source: LabeledSet
    target: LabeledSet
    images: tuple[str, ...]

    def __init__(self, source: LabeledSet, target: LabeledSet, mapping):
        if isinstance(mapping, Mapping):
            missing = [x for x in source if x not in mapping]
            if missing:
                raise ValueError(f"function undefined on {', '.join(missing)}")
            extra = [x for x in mapping if x not in source]
            if extra:
                raise ValueError(f"mapping has labels outside the source: {', '.join(extra)}")
            images = tuple(mapping[x] for x in source)
        else:
            images = tuple(mapping)
            if len(images) != len(source):
                raise ValueError(
                    f"expected {len(source)} images, got {len(images)}"
                )
        for y in images:
            if y not in target:
                raise ValueError(f"image {y!r} is not in the target {target}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)

    def __call__(self, label: str) -> str:
        return self.images[self.source.index(label)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.source.labels, self.images))

    def image(self) -> set[str]:
        return set(self.images)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x}->{y}" for x, y in zip(self.source, self.images))
        return f"FinFn({{{pairs}}} : {self.source} -> {self.target})"


def identity_fn(a: LabeledSet) -> FinFn:
    return FinFn(a, a, a.labels)


def compose_fn(f: FinFn, g: FinFn) -> FinFn:
    """Return ``g . f`` (first ``f``, then ``g``)."""
    if f.target != g.source:
        raise MismatchedSets(f"cannot compose: {f.target} is not {g.source}")
    gmap = g.as_dict()
    return FinFn(f.source, g.target, [gmap[y] for y in f.images])


def fresh_names(existing: Sequence[str], incoming: Sequence[str]) -> list[str]:
    """Rename the members of ``incoming`` that collide with ``existing``.

    Colliding names get apostrophes appended until they are fresh against
    everything seen so far (both sequences and earlier renames). Names that
    do not collide are kept as-is.
    """
    existing_set = set(existing)
    taken = existing_set | set(incoming)
    out = []
    for name in incoming:
        if name in existing_set:
            candidate = name + PRIME
            while candidate in taken:
                candidate += PRIME
            taken.add(candidate)
            name = candidate
        out.append(name)
    return out


def coproduct(a: LabeledSet, b: LabeledSet) -> tuple[LabeledSet, FinFn, FinFn]:
    renamed = fresh_names(a.labels, b.labels)
    total = LabeledSet(a.labels + tuple(renamed))
    return total, FinFn(a, total, a.labels), FinFn(b, total, renamed)


def copair(f: FinFn, g: FinFn) -> tuple[FinFn, FinFn, FinFn]:
    """Return ``f + g : A + B -> C + D`` together with the target injections."""
    src, _, _ = coproduct(f.source, g.source)
    tgt, inj_c, inj_d = coproduct(f.target, g.target)
    images = [inj_c(y) for y in f.images] + [inj_d(y) for y in g.images]
    return FinFn(src, tgt, images), inj_c, inj_d


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # keep the smaller index as root so roots are stable
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri


def pushout(f: FinFn, g: FinFn) -> tuple[LabeledSet, FinFn, FinFn]:
    """Glue ``M = f.target`` and ``N = g.target`` along ``Y = f.source``.

    Returns the apex ``P`` and legs ``m: M -> P``, ``n: N -> P`` with
    ``m . f == n . g``. ``P`` is the quotient of ``M + N`` by ``f(y) ~ g(y)``.
    Classes appear in order of their first member in ``M + N`` and are named
    by their lexicographically least original label; a name already taken by
    an earlier class is primed (so an empty ``Y`` reproduces the coproduct).
    """
    if f.source != g.source:
        raise MismatchedSets(f"pushout feet differ: {f.source} vs {g.source}")
    M, N = f.target, g.target
    originals = M.labels + N.labels
    offset = len(M)
    uf = _UnionFind(len(originals))
    for fy, gy in zip(f.images, g.images):
        uf.union(M.index(fy), offset + N.index(gy))

    roots: list[int] = []
    members: dict[int, list[str]] = {}
    for i, label in enumerate(originals):
        r = uf.find(i)
        if r not in members:
            roots.append(r)
            members[r] = []
        members[r].append(label)

    candidates = [min(members[r]) for r in roots]
    taken = set(candidates)
    used: set[str] = set()
    names: dict[int, str] = {}
    for r, name in zip(roots, candidates):
        if name in used:
            name += PRIME
            while name in taken:
                name += PRIME
            taken.add(name)
        used.add(name)
        names[r] = name

    apex = LabeledSet(names[r] for r in roots)
    m = FinFn(M, apex, [names[uf.find(i)] for i in range(offset)])
    n = FinFn(N, apex, [names[uf.find(offset + j)] for j in range(len(N))])
    return apex, m, n
