"""Independent brute-force checks used by several test modules."""

import itertools


def closure_partition(f, g):
    """Partition of M + N generated by f(y) ~ g(y), by repeated block merging.

    Elements are tagged ("M", label) / ("N", label) so equal labels on the two
    sides stay distinct.
    """
    blocks = [{("M", x)} for x in f.target] + [{("N", z)} for z in g.target]
    changed = True
    while changed:
        changed = False
        for fy, gy in zip(f.images, g.images):
            left = next(b for b in blocks if ("M", fy) in b)
            right = next(b for b in blocks if ("N", gy) in b)
            if left is not right:
                left |= right
                blocks.remove(right)
                changed = True
    return {frozenset(b) for b in blocks}


def induced_partition(m, n):
    """Partition of M + N given by which apex element each lands on."""
    classes = {}
    for x, p in zip(m.source, m.images):
        classes.setdefault(p, set()).add(("M", x))
    for z, p in zip(n.source, n.images):
        classes.setdefault(p, set()).add(("N", z))
    return {frozenset(c) for c in classes.values()}


def all_functions(source, target):
    """Every function source -> target as a dict (source/target: label lists)."""
    for images in itertools.product(list(target), repeat=len(source)):
        yield dict(zip(source, images))


def mediating_count(f, g, apex, m, n, q_labels):
    """For each competing cocone into q_labels, count mediating maps apex -> Q.

    Returns the list of counts, one per commuting cocone (m', n').
    """
    counts = []
    mm, nn = m.as_dict(), n.as_dict()
    for m2 in all_functions(list(f.target), q_labels):
        for n2 in all_functions(list(g.target), q_labels):
            if any(m2[fy] != n2[gy] for fy, gy in zip(f.images, g.images)):
                continue
            count = 0
            for u in all_functions(list(apex), q_labels):
                if all(u[mm[x]] == m2[x] for x in f.target) and all(
                        u[nn[z]] == n2[z] for z in g.target):
                    count += 1
            counts.append(count)
    return counts
