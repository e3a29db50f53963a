"""The layered quiver picture of flags.

A depth-d extension of a quiver repeats it in d layers joined by vertical
arrows.  Representations whose layer squares commute form the category where
a flag in V becomes an honest subrepresentation of the layer-constant
embedding of V, and where the fiber of a stratum over a pair of flags is a
Hom space computable by exact linear algebra.  That computation is what this
module provides, together with a sampling verifier for the bundle-rank
formula.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .counting import FlagPoint, count_flags, sample_flags
from .errors import InputError
from .linalg import Matrix, PrimeField, rref_rows
from .quiver import FlagType, Quiver
from .reps import (
    Representation,
    ext1_dim,
    hom_dim,
    is_subrepresentation,
    quotient_representation,
    subrepresentation,
)
from .poincare import stratum_rank


@dataclass(frozen=True)
class ExtendedQuiver:
    """d layers of a base quiver, joined by vertical arrows layer r -> r+1.

    Vertices are layer-major: position(i, r) = r*n + i for layer r in 0..d-1.
    Horizontal arrows come first (layer by layer in base-arrow order), then
    the verticals (layer by layer in vertex order).
    """

    base: Quiver
    depth: int
    quiver: Quiver

    @property
    def n(self) -> int:
        return self.base.n

    def vertex_position(self, i: int, r: int) -> int:
        return r * self.n + i

    def horizontal_position(self, r: int, arrow: int) -> int:
        return r * len(self.base.arrows) + arrow

    def vertical_position(self, r: int, i: int) -> int:
        return self.depth * len(self.base.arrows) + r * self.n + i


@lru_cache(maxsize=None)
def extend_quiver(base: Quiver, depth: int) -> ExtendedQuiver:
    if depth < 1:
        raise InputError(f"depth must be >= 1, got {depth}")
    names = [f"{v}#{r + 1}" for r in range(depth) for v in base.vertices]
    arrows = []
    for r in range(depth):
        for s, t in base.arrows:
            arrows.append((f"{s}#{r + 1}", f"{t}#{r + 1}"))
    for r in range(depth - 1):
        for v in base.vertices:
            arrows.append((f"{v}#{r + 1}", f"{v}#{r + 2}"))
    return ExtendedQuiver(base, depth, Quiver(tuple(names), tuple(arrows)))


@dataclass(frozen=True)
class Rep0Representation:
    """A representation of the extended quiver whose layer squares commute."""

    extended: ExtendedQuiver
    rep: Representation

    def __post_init__(self):
        if self.rep.quiver != self.extended.quiver:
            raise InputError("representation does not live on the extended quiver")
        ext = self.extended
        for r in range(ext.depth - 1):
            for a, (i, j) in enumerate(ext.base.arrow_indices):
                top = self.rep.arrow_maps[ext.horizontal_position(r, a)]
                bottom = self.rep.arrow_maps[ext.horizontal_position(r + 1, a)]
                vert_i = self.rep.arrow_maps[ext.vertical_position(r, i)]
                vert_j = self.rep.arrow_maps[ext.vertical_position(r, j)]
                if vert_j * top != bottom * vert_i:
                    raise InputError(
                        f"layer square at arrow {ext.base.arrows[a]} between layers "
                        f"{r + 1} and {r + 2} does not commute"
                    )

    @property
    def depth(self) -> int:
        return self.extended.depth

    def layer(self, r: int) -> Representation:
        """Layer r (0-based) as a representation of the base quiver."""
        ext = self.extended
        dims = tuple(self.rep.dims[ext.vertex_position(i, r)] for i in range(ext.n))
        maps = tuple(
            self.rep.arrow_maps[ext.horizontal_position(r, a)]
            for a in range(len(ext.base.arrows))
        )
        return Representation(ext.base, self.rep.field, dims, maps)

    def vertical_map(self, r: int, i: int) -> Matrix:
        return self.rep.arrow_maps[self.extended.vertical_position(r, i)]


def phi(v_rep: Representation, depth: int) -> Rep0Representation:
    """Layer-constant embedding: every layer is V, verticals are identities."""
    ext = extend_quiver(v_rep.quiver, depth)
    dims = tuple(
        v_rep.dims[i] for _ in range(depth) for i in range(v_rep.quiver.n)
    )
    maps = []
    for _ in range(depth):
        maps.extend(v_rep.arrow_maps)
    for _ in range(depth - 1):
        for i in range(v_rep.quiver.n):
            maps.append(Matrix.identity(v_rep.field, v_rep.dims[i]))
    return Rep0Representation(ext, Representation(ext.quiver, v_rep.field, dims, tuple(maps)))


def flag_subspaces(v_rep: Representation, point: FlagPoint) -> tuple:
    """The flag read as a subspace tuple over the extended quiver.

    Validates inclusions, ambient dimensions and arrow stability; the result
    indexes subspaces layer-major like the extended quiver's vertices.
    """
    p = v_rep.field.char
    n = v_rep.quiver.n
    steps = point.steps
    if any(len(step) != n for step in steps):
        raise InputError("flag step width does not match the quiver")
    canon = []
    for step in steps:
        row = []
        for i, basis in enumerate(step):
            basis = tuple(tuple(v_rep.field.coerce(x) for x in v) for v in basis)
            if any(len(v) != v_rep.dims[i] for v in basis):
                raise InputError("flag subspace has the wrong ambient dimension")
            red, _ = rref_rows(basis, p)
            if len(red) != len(basis):
                raise InputError("flag subspace basis is not independent")
            row.append(red)
        canon.append(tuple(row))
    from .linalg import rowspace_contains

    for prev, cur in zip(canon, canon[1:]):
        for i in range(n):
            if not all(rowspace_contains(cur[i], vec, p) for vec in prev[i]):
                raise InputError("flag steps are not nested")
    if tuple(len(b) for b in canon[-1]) != v_rep.dims:
        raise InputError("top flag step is not the whole representation")
    for step in canon:
        if not is_subrepresentation(v_rep, step):
            raise InputError("a flag step is not arrow-stable")
    return tuple(basis for step in canon for basis in step)


def flag_to_subrep(v_rep: Representation, point: FlagPoint) -> Rep0Representation:
    """The flag as a subrepresentation of the layer-constant embedding."""
    ext = extend_quiver(v_rep.quiver, point.d)
    ambient = phi(v_rep, point.d)
    subs = flag_subspaces(v_rep, point)
    return Rep0Representation(ext, subrepresentation(ambient.rep, subs))


def quotient_by_flag(v_rep: Representation, point: FlagPoint) -> Rep0Representation:
    """The quotient of the layer-constant embedding by the flag subrepresentation."""
    ext = extend_quiver(v_rep.quiver, point.d)
    ambient = phi(v_rep, point.d)
    subs = flag_subspaces(v_rep, point)
    return Rep0Representation(ext, quotient_representation(ambient.rep, subs))


def hom_dim_rep0(w0: Rep0Representation, v0: Rep0Representation) -> int:
    """Morphisms commuting with all horizontal and vertical structure maps."""
    if w0.extended != v0.extended:
        raise InputError("representations live on different extended quivers")
    return hom_dim(w0.rep, v0.rep)


@dataclass(frozen=True)
class FiberReport:
    prime: int
    expected_rank: int
    pairs_checked: int
    fiber_dims: tuple[int, ...]
    deviations: tuple[str, ...]
    sub_flag_count: int
    quot_flag_count: int

    @property
    def ok(self) -> bool:
        return not self.deviations


def verify_fiber_rank(
    v_rep: Representation,
    w_rep: Representation,
    sub_flag: FlagType,
    quot_flag: FlagType,
    samples: int = 5,
    seed: int = 0,
    budget: int | None = None,
) -> FiberReport:
    """Check the stratum fiber dimension against the bundle-rank formula.

    Samples flag pairs over the representations' prime field and computes the
    Hom space from the quotient-side flag subrepresentation into the quotient
    of the sub-side embedding; every sample must equal the predicted rank.
    """
    if v_rep.quiver != w_rep.quiver or v_rep.field != w_rep.field:
        raise InputError("representations must share a quiver and a field")
    if not isinstance(v_rep.field, PrimeField):
        raise InputError("fiber verification works over a prime field")
    if sub_flag.d != quot_flag.d:
        raise InputError("flag types of different lengths")
    e = ext1_dim(w_rep, v_rep)
    if e:
        raise InputError(f"precondition Ext^1(W, V) = 0 fails: dimension {e}")
    expected = stratum_rank(v_rep.quiver, quot_flag, sub_flag)
    sub_count = count_flags(v_rep, sub_flag, budget)
    quot_count = count_flags(w_rep, quot_flag, budget)
    rng = random.Random(seed)
    v_pool = sample_flags(v_rep, sub_flag, samples, rng, budget)
    w_pool = sample_flags(w_rep, quot_flag, samples, rng, budget)
    fiber_dims = []
    deviations = []
    for v_point, w_point in zip(v_pool, w_pool):
        w_sub = flag_to_subrep(w_rep, w_point)
        v_quot = quotient_by_flag(v_rep, v_point)
        dim = hom_dim_rep0(w_sub, v_quot)
        fiber_dims.append(dim)
        if dim != expected:
            deviations.append(
                f"fiber dimension {dim} != rank {expected} at flags "
                f"{v_point.dims()} / {w_point.dims()}"
            )
    return FiberReport(
        prime=v_rep.field.p,
        expected_rank=expected,
        pairs_checked=len(fiber_dims),
        fiber_dims=tuple(fiber_dims),
        deviations=tuple(deviations),
        sub_flag_count=sub_count,
        quot_flag_count=quot_count,
    )
