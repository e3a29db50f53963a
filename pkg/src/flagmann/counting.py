"""Brute-force ground truth: enumerate and count flags of subrepresentations
over a prime field, straight from the definitions.

A flag of type (u_1, ..., u_d) in V is a chain of arrow-stable subspace
tuples of the prescribed dimensions.  Enumeration walks the chain bottom-up;
the counting path additionally replaces "subspaces containing the previous
step" by subrepresentations of the quotient, which keeps every search space
as small as possible and makes memoization effective.

Everything here works over PrimeField representations only.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import BudgetExceededError, InputError
from .linalg import (
    PrimeField,
    gaussian_binomial,
    image_rowspace,
    mat_mul_rows,
    preimage_rowspace,
    quotient_map_rows,
    rowspace_contains,
    rref_rows,
    subspaces_between,
    sum_rowspaces,
)
from .quiver import FlagType, Quiver
from .reps import Representation

DEFAULT_BUDGET = 10**8
BUDGET_ENV_VAR = "FLAGMANN_BUDGET"


def resolve_budget(budget: int | None = None) -> int:
    """Explicit value, else the FLAGMANN_BUDGET environment override, else default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"bad {BUDGET_ENV_VAR} value {env!r}") from exc
    return DEFAULT_BUDGET


@lru_cache(maxsize=None)
def _full_basis(n: int) -> tuple:
    return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class FlagPoint:
    """A concrete flag: one canonical subspace basis per step and vertex."""

    steps: tuple[tuple[tuple, ...], ...]

    @property
    def d(self) -> int:
        return len(self.steps)

    def dims(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(len(b) for b in step) for step in self.steps)


def candidate_estimate(rep: Representation, flag_type: FlagType) -> int:
    """Upper bound on the number of candidate subspace tuples the search visits."""
    q = rep.field.char
    est = 1
    prev = tuple(0 for _ in rep.dims)
    for step in flag_type.steps[:-1]:
        for n_i, p_i, k_i in zip(rep.dims, prev, step):
            est *= gaussian_binomial(n_i - p_i, k_i - p_i, q)
        prev = step
    return est


class _Counter:
    """Per-(quiver, prime) enumeration engine with a shared count memo."""

    def __init__(self, quiver: Quiver, p: int):
        self.quiver = quiver
        self.p = p
        self.n = quiver.n
        self.arrows = quiver.arrow_indices
        self.in_arrows = [[] for _ in range(self.n)]
        self.out_arrows = [[] for _ in range(self.n)]
        for a, (s, t) in enumerate(self.arrows):
            self.out_arrows[s].append((a, t))
            self.in_arrows[t].append((a, s))
        self.neighbors = [set() for _ in range(self.n)]
        for s, t in self.arrows:
            self.neighbors[s].add(t)
            self.neighbors[t].add(s)
        self.memo: dict = {}

    # -- vertex ordering -------------------------------------------------

    def _vertex_order(self, gap_counts: list[int]) -> list[int]:
        """Cheapest vertex first, then grow through the underlying graph."""
        order = []
        chosen: set[int] = set()
        while len(order) < self.n:
            frontier = [
                i
                for i in range(self.n)
                if i not in chosen and (not order or self.neighbors[i] & chosen)
            ]
            if not frontier:
                frontier = [i for i in range(self.n) if i not in chosen]
            best = min(frontier, key=lambda i: (gap_counts[i], i))
            order.append(best)
            chosen.add(best)
        return order

    # -- subrepresentation enumeration ------------------------------------

    def subreps(
        self,
        dims: tuple[int, ...],
        maps: tuple,
        target: tuple[int, ...],
        within: tuple | None = None,
        containing: tuple | None = None,
    ) -> Iterator[tuple]:
        """Arrow-stable subspace tuples of exact dimensions `target`.

        `within` / `containing` are per-vertex RREF bases bounding the result
        from above and below.  Constraints from arrows propagate as image
        lower bounds and preimage upper bounds while the search walks the
        vertices, so infeasible branches die early.
        """
        p = self.p
        uppers = list(within) if within is not None else [_full_basis(d) for d in dims]
        lowers = list(containing) if containing is not None else [()] * self.n
        for i in range(self.n):
            if not (len(lowers[i]) <= target[i] <= len(uppers[i])):
                return
        gap = [
            gaussian_binomial(len(uppers[i]) - len(lowers[i]), target[i] - len(lowers[i]), p)
            for i in range(self.n)
        ]
        order = self._vertex_order(gap)
        chosen: list[tuple | None] = [None] * self.n

        def walk(pos: int) -> Iterator[tuple]:
            if pos == self.n:
                yield tuple(chosen)
                return
            i = order[pos]
            low = lowers[i]
            for a, s in self.in_arrows[i]:
                if chosen[s] is not None:
                    img = image_rowspace(maps[a], chosen[s], p)
                    if img:
                        low = sum_rowspaces(low, img, p) if low else img
            if len(low) > target[i]:
                return
            up = uppers[i]
            for a, t in self.out_arrows[i]:
                if chosen[t] is not None:
                    pre = preimage_rowspace(maps[a], chosen[t], dims[i], p)
                    up = _intersect_rref(up, pre, dims[i], p)
            if len(up) < target[i] or not _rowspace_leq(low, up, p):
                return
            for sub in subspaces_between(low, up, target[i], p):
                chosen[i] = sub
                yield from walk(pos + 1)
            chosen[i] = None

        yield from walk(0)

    # -- counting ----------------------------------------------------------

    def count(self, dims: tuple[int, ...], maps: tuple, diffs: tuple) -> int:
        if len(diffs) <= 1:
            return 1
        key = (dims, maps, diffs)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if len(self.memo) > 1_000_000:
            self.memo.clear()
        total = 0
        for sub in self.subreps(dims, maps, diffs[0]):
            qdims, qmaps = self._quotient(dims, maps, sub)
            total += self.count(qdims, qmaps, diffs[1:])
        self.memo[key] = total
        return total

    def _quotient(self, dims, maps, subspaces):
        p = self.p
        qmats = []
        nonpivots = []
        for i, basis in enumerate(subspaces):
            qm, np = quotient_map_rows(basis, dims[i], p)
            qmats.append(qm)
            nonpivots.append(np)
        qdims = tuple(len(np) for np in nonpivots)
        qmaps = []
        for a, (s, t) in enumerate(self.arrows):
            lifted = tuple(tuple(row[c] for c in nonpivots[s]) for row in maps[a])
            qmaps.append(mat_mul_rows(qmats[t], lifted, p))
        return qdims, tuple(qmaps)


def _rowspace_leq(small, big, p):
    return all(rowspace_contains(big, v, p) for v in small)


def _intersect_rref(a, b, n, p):
    if len(a) == n:
        return b
    if len(b) == n:
        return a
    from .linalg import intersect_rowspaces

    return intersect_rowspaces(a, b, n, p)


_counters: dict = {}


def _counter(rep: Representation) -> _Counter:
    if not isinstance(rep.field, PrimeField):
        raise InputError("the counting oracle needs a representation over a prime field")
    key = (rep.quiver, rep.field.p)
    ctr = _counters.get(key)
    if ctr is None:
        ctr = _Counter(rep.quiver, rep.field.p)
        _counters[key] = ctr
    return ctr


def clear_count_cache() -> None:
    _counters.clear()


def _raw_maps(rep: Representation) -> tuple:
    return tuple(m.entries for m in rep.arrow_maps)


def enumerate_subreps(
    rep: Representation,
    target,
    within: tuple | None = None,
    containing: tuple | None = None,
) -> Iterator[tuple]:
    """Yield each arrow-stable subspace tuple of the given dimensions once.

    Results are canonical RREF bases in the ambient coordinates of `rep`,
    between `containing` and `within` when those subrepresentations are given.
    """
    ctr = _counter(rep)
    target = rep.quiver.check_dim_vector(target)
    p = rep.field.p
    if within is not None:
        within = tuple(rref_rows(b, p)[0] for b in within)
    if containing is not None:
        containing = tuple(rref_rows(b, p)[0] for b in containing)
    yield from ctr.subreps(rep.dims, _raw_maps(rep), target, within, containing)


def enumerate_flags(rep: Representation, flag_type: FlagType) -> Iterator[FlagPoint]:
    """All flags of the given type in `rep`, as concrete subspace chains."""
    if flag_type.weight != rep.dims:
        raise InputError(
            f"flag type of weight {flag_type.weight} inside dimensions {rep.dims}"
        )
    ctr = _counter(rep)
    maps = _raw_maps(rep)
    steps = flag_type.steps

    def chain(r: int, prev: tuple | None, acc: list) -> Iterator[FlagPoint]:
        if r == len(steps):
            yield FlagPoint(tuple(acc))
            return
        for sub in ctr.subreps(rep.dims, maps, steps[r], None, prev):
            acc.append(sub)
            yield from chain(r + 1, sub, acc)
            acc.pop()

    yield from chain(0, None, [])


def count_flags(rep: Representation, flag_type: FlagType, budget: int | None = None) -> int:
    """|F_u(V)(F_p)| by exhaustive chained enumeration (quotient form)."""
    if flag_type.weight != rep.dims:
        raise InputError(
            f"flag type of weight {flag_type.weight} inside dimensions {rep.dims}"
        )
    limit = resolve_budget(budget)
    est = candidate_estimate(rep, flag_type)
    if est > limit:
        raise BudgetExceededError(
            f"estimated {est} candidate tuples exceeds budget {limit}"
        )
    ctr = _counter(rep)
    diffs = tuple(flag_type.differences())
    return ctr.count(rep.dims, _raw_maps(rep), diffs)


def intersection_dims(point: FlagPoint, subspaces: tuple, p: int) -> tuple:
    """Per-step, per-vertex dimension of the intersection with fixed subspaces."""
    out = []
    for step in point.steps:
        row = []
        for basis, fixed in zip(step, subspaces):
            if not basis or not fixed:
                row.append(0)
                continue
            stacked = rref_rows(basis + fixed, p)[0]
            row.append(len(basis) + len(fixed) - len(stacked))
        out.append(tuple(row))
    return tuple(out)


def stratum_counts(
    u_rep: Representation,
    sub_spaces: tuple,
    flag_type: FlagType,
    budget: int | None = None,
) -> dict:
    """Counts of flags of `flag_type` grouped by the flag type of their
    intersection with the embedded subrepresentation `sub_spaces`."""
    from .reps import is_subrepresentation

    if not is_subrepresentation(u_rep, sub_spaces):
        raise InputError("the distinguished subspaces are not a subrepresentation")
    limit = resolve_budget(budget)
    est = candidate_estimate(u_rep, flag_type)
    if est > limit:
        raise BudgetExceededError(
            f"estimated {est} candidate tuples exceeds budget {limit}"
        )
    p = u_rep.field.p
    canon = tuple(rref_rows(b, p)[0] for b in sub_spaces)
    out: dict = {}
    for point in enumerate_flags(u_rep, flag_type):
        key = intersection_dims(point, canon, p)
        out[key] = out.get(key, 0) + 1
    return out


def count_strata(
    u_rep: Representation,
    sub_spaces: tuple,
    u: FlagType,
    v: FlagType,
    w: FlagType | None = None,
    budget: int | None = None,
) -> int:
    """Number of flags of type `u` whose intersection flag with the embedded
    subrepresentation has type `v`.  Summing over all `v` recovers count_flags."""
    if w is not None:
        expect = tuple(
            tuple(a - b for a, b in zip(us, vs)) for us, vs in zip(u.steps, v.steps)
        )
        if tuple(w.steps) != expect:
            raise InputError("w does not complement v inside u")
    return stratum_counts(u_rep, sub_spaces, u, budget).get(tuple(v.steps), 0)


def sample_flags(
    rep: Representation,
    flag_type: FlagType,
    count: int,
    rng: random.Random,
    budget: int | None = None,
) -> list[FlagPoint]:
    """Uniform sample (with replacement) from the full flag enumeration."""
    limit = resolve_budget(budget)
    est = candidate_estimate(rep, flag_type)
    if est > limit:
        raise BudgetExceededError(
            f"estimated {est} candidate tuples exceeds budget {limit}"
        )
    pool = list(enumerate_flags(rep, flag_type))
    if not pool:
        return []
    return [pool[rng.randrange(len(pool))] for _ in range(count)]
