"""Shared constructors and exhaustive generators for the test suite."""

from itertools import product

from flagmann import FlagType, Quiver, RootMultiset


def quiver_a(n: int, directions=None) -> Quiver:
    """Path quiver on vertices 1..n; directions[i] = 1 reverses edge i."""
    names = tuple(str(i + 1) for i in range(n))
    directions = directions or [0] * (n - 1)
    arrows = []
    for i, d in enumerate(directions):
        e = (names[i], names[i + 1])
        arrows.append(e if d == 0 else (e[1], e[0]))
    return Quiver(names, tuple(arrows))


def quiver_d(n: int, directions=None) -> Quiver:
    """D(n): path 1..n-2 with forks n-1, n attached to vertex n-2."""
    names = tuple(str(i + 1) for i in range(n))
    edges = [(names[i], names[i + 1]) for i in range(n - 3)]
    edges += [(names[n - 2], names[n - 3]), (names[n - 1], names[n - 3])]
    directions = directions or [0] * len(edges)
    arrows = tuple(e if d == 0 else (e[1], e[0]) for e, d in zip(edges, directions))
    return Quiver(names, arrows)


def quiver_e(n: int) -> Quiver:
    """E(n), arrows oriented along increasing standard labels."""
    names = tuple(str(i + 1) for i in range(n))
    edges = [("1", "3"), ("3", "4"), ("2", "4")]
    edges += [(str(i), str(i + 1)) for i in range(4, n)]
    return Quiver(names, tuple(edges))


def all_orientations(quiver: Quiver):
    """Every orientation of the underlying graph of `quiver`."""
    for dirs in product((0, 1), repeat=len(quiver.arrows)):
        arrows = tuple(
            (s, t) if d == 0 else (t, s) for (s, t), d in zip(quiver.arrows, dirs)
        )
        yield Quiver(quiver.vertices, arrows)


def multisets_upto(quiver, roots, max_entry: int, max_total: int):
    """Nonempty root multisets with per-vertex and total dimension caps."""

    def rec(i, acc, total):
        if acc:
            yield RootMultiset.from_roots(quiver, tuple(acc))
        for j in range(i, len(roots)):
            new = tuple(a + b for a, b in zip(total, roots[j]))
            if sum(new) > max_total or any(x > max_entry for x in new):
                continue
            acc.append(roots[j])
            yield from rec(j, acc, new)
            acc.pop()

    yield from rec(0, [], tuple(0 for _ in range(quiver.n)))


def flag_types_of(weight, d_max: int):
    """All monotone flag types of the given weight with at most d_max steps."""
    weight = tuple(weight)
    for d in range(1, d_max + 1):

        def chains(r, prev, acc):
            if r == d - 1:
                yield FlagType(tuple(acc) + (weight,))
                return
            for step in product(*(range(p, w + 1) for p, w in zip(prev, weight))):
                acc.append(step)
                yield from chains(r + 1, step, acc)
                acc.pop()

        yield from chains(0, tuple(0 for _ in weight), [])
