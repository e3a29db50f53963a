"""Concrete quiver representations over an exact field.

Representations are immutable: a dimension vector plus one matrix per arrow
(shape target x source).  Input representations are described as multisets of
positive roots; the matching indecomposables are built deterministically by
sink/source reflections starting from simple representations, so the same
root yields the same matrices over every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, InternalConsistencyError, UnsupportedQuiverError
from .linalg import (
    FieldSpec,
    Matrix,
    block_diag,
    mat_mul_rows,
    reduce_vector,
    rowspace_contains,
    rref_rows,
    quotient_map_rows,
)
from .quiver import DimVector, Quiver, euler_form, positive_roots

Subspaces = tuple  # per-vertex tuple of RREF row bases


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    field: FieldSpec
    dims: DimVector
    arrow_maps: tuple[Matrix, ...]

    def __post_init__(self):
        dims = self.quiver.check_dim_vector(self.dims)
        object.__setattr__(self, "dims", dims)
        if len(self.arrow_maps) != len(self.quiver.arrows):
            raise InputError("one matrix per arrow required")
        for (s, t), m in zip(self.quiver.arrow_indices, self.arrow_maps):
            if m.field != self.field:
                raise InputError("arrow matrix over the wrong field")
            if (m.nrows, m.ncols) != (dims[t], dims[s]):
                raise InputError(
                    f"arrow matrix shape {(m.nrows, m.ncols)} does not match "
                    f"dimensions {(dims[t], dims[s])}"
                )

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def key(self):
        """Hashable identity used for memoization."""
        return (
            self.quiver,
            self.field,
            self.dims,
            tuple(m.entries for m in self.arrow_maps),
        )


def zero_representation(quiver: Quiver, field: FieldSpec) -> Representation:
    dims = tuple(0 for _ in quiver.vertices)
    maps = tuple(Matrix.zeros(field, 0, 0) for _ in quiver.arrows)
    return Representation(quiver, field, dims, maps)


def simple_representation(quiver: Quiver, vertex: int | str, field: FieldSpec) -> Representation:
    idx = quiver.index[vertex] if isinstance(vertex, str) else vertex
    dims = tuple(1 if i == idx else 0 for i in range(quiver.n))
    maps = tuple(
        Matrix.zeros(field, dims[t], dims[s]) for s, t in quiver.arrow_indices
    )
    return Representation(quiver, field, dims, maps)


def direct_sum(a: Representation, b: Representation) -> Representation:
    """Block-diagonal sum; `a` occupies the leading coordinates at each vertex."""
    if a.quiver != b.quiver or a.field != b.field:
        raise InputError("direct sum needs matching quiver and field")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    maps = tuple(
        block_diag(a.field, [ma, mb]) for ma, mb in zip(a.arrow_maps, b.arrow_maps)
    )
    return Representation(a.quiver, a.field, dims, maps)


# ---------------------------------------------------------------------------
# Root multisets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootMultiset:
    """A direct-sum description: positive roots with multiplicities."""

    quiver: Quiver
    items: tuple[tuple[DimVector, int], ...]

    def __post_init__(self):
        roots = positive_roots(self.quiver)
        order = {r: i for i, r in enumerate(roots)}
        merged: dict[DimVector, int] = {}
        for root, mult in self.items:
            root = tuple(int(x) for x in root)
            if root not in order:
                raise InputError(f"{root} is not a positive root of this quiver")
            if mult < 1:
                raise InputError(f"multiplicity must be >= 1, got {mult}")
            merged[root] = merged.get(root, 0) + int(mult)
        canon = tuple(sorted(merged.items(), key=lambda kv: order[kv[0]]))
        object.__setattr__(self, "items", canon)

    @classmethod
    def from_roots(cls, quiver: Quiver, roots) -> "RootMultiset":
        return cls(quiver, tuple((tuple(r), 1) for r in roots))

    @property
    def total(self) -> DimVector:
        vec = [0] * self.quiver.n
        for root, mult in self.items:
            for i, x in enumerate(root):
                vec[i] += mult * x
        return tuple(vec)

    def expand(self) -> tuple[DimVector, ...]:
        out = []
        for root, mult in self.items:
            out.extend([root] * mult)
        return tuple(out)

    def __len__(self) -> int:
        return sum(m for _, m in self.items)


def parse_rep_spec(text: str, quiver: Quiver) -> RootMultiset:
    """Parse ``summand: 1,1 x 2`` lines into a root multiset."""
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("summand:"):
            raise InputError(f"line {lineno}: expected a 'summand:' line")
        body = line[len("summand:") :].strip()
        mult = 1
        if "x" in body:
            vec_part, mult_part = body.rsplit("x", 1)
            try:
                mult = int(mult_part)
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad multiplicity {mult_part!r}") from exc
            body = vec_part.strip()
        try:
            root = tuple(int(x) for x in body.split(","))
        except ValueError as exc:
            raise InputError(f"line {lineno}: bad root {body!r}") from exc
        items.append((root, mult))
    return RootMultiset(quiver, tuple(items))


def format_rep_spec(multiset: RootMultiset) -> str:
    lines = [
        "summand: " + ",".join(str(x) for x in root) + f" x {mult}"
        for root, mult in multiset.items
    ]
    return "\n".join(lines) + "\n"


def load_rep_spec(path, quiver: Quiver) -> RootMultiset:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_rep_spec(fh.read(), quiver)
    except OSError as exc:
        raise InputError(f"cannot read representation file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Hom and Ext
# ---------------------------------------------------------------------------


def _hom_system(w_rep: Representation, v_rep: Representation):
    """Coefficient rows of the linear system cutting out Hom(W, V).

    Unknowns are the entries of one matrix f_i per vertex (shape v_i x w_i),
    vertex blocks in order, row-major inside a block; one equation per arrow
    h: i -> j and position (a, c) enforcing (f_j W_h - V_h f_i)[a, c] = 0.
    """
    q = w_rep.quiver
    wd, vd = w_rep.dims, v_rep.dims
    offsets = []
    total = 0
    for i in range(q.n):
        offsets.append(total)
        total += vd[i] * wd[i]
    zero = v_rep.field.coerce(0)
    rows = []
    for (i, j), wm, vm in zip(q.arrow_indices, w_rep.arrow_maps, v_rep.arrow_maps):
        for a in range(vd[j]):
            for c in range(wd[i]):
                row = [zero] * total
                for b in range(wd[j]):
                    row[offsets[j] + a * wd[j] + b] = wm.entries[b][c]
                for b in range(vd[i]):
                    coeff = vm.entries[a][b]
                    row[offsets[i] + b * wd[i] + c] -= coeff
                if v_rep.field.char:
                    row = [x % v_rep.field.char for x in row]
                rows.append(tuple(row))
    return tuple(rows), total, offsets


def hom_dim(w_rep: Representation, v_rep: Representation) -> int:
    """Exact dimension of the space of morphisms W -> V."""
    if w_rep.quiver != v_rep.quiver or w_rep.field != v_rep.field:
        raise InputError("Hom needs matching quiver and field")
    rows, total, _ = _hom_system(w_rep, v_rep)
    from .linalg import rank_rows

    return total - rank_rows(rows, v_rep.field.char)


def hom_space(w_rep: Representation, v_rep: Representation) -> tuple[tuple[Matrix, ...], ...]:
    """Basis of Hom(W, V); each element is one matrix per vertex."""
    if w_rep.quiver != v_rep.quiver or w_rep.field != v_rep.field:
        raise InputError("Hom needs matching quiver and field")
    rows, total, offsets = _hom_system(w_rep, v_rep)
    from .linalg import null_space_rows

    basis = null_space_rows(rows, total, v_rep.field.char)
    q = w_rep.quiver
    out = []
    for vec in basis:
        mats = []
        for i in range(q.n):
            vi, wi = v_rep.dims[i], w_rep.dims[i]
            block = vec[offsets[i] : offsets[i] + vi * wi]
            entries = tuple(tuple(block[a * wi + b] for b in range(wi)) for a in range(vi))
            mats.append(Matrix(v_rep.field, vi, wi, entries))
        out.append(tuple(mats))
    return tuple(out)


def ext1_dim(w_rep: Representation, v_rep: Representation) -> int:
    """dim Ext^1(W, V) = dim Hom(W, V) - <dim W, dim V>; always >= 0."""
    h = hom_dim(w_rep, v_rep)
    e = h - euler_form(w_rep.quiver, w_rep.dims, v_rep.dims)
    if e < 0:
        raise InternalConsistencyError(
            f"negative Ext dimension {e} for dims {w_rep.dims} -> {v_rep.dims}"
        )
    return e


def is_rigid(rep: Representation) -> bool:
    return ext1_dim(rep, rep) == 0


# ---------------------------------------------------------------------------
# Indecomposables by reflections
# ---------------------------------------------------------------------------


def admissible_vertex_order(quiver: Quiver) -> tuple[int, ...]:
    """Vertex indices ordered so each is a sink of the preceding reflections.

    Equivalently: repeatedly peel a sink of the induced subquiver on the
    remaining vertices (smallest index first).  Fails on directed cycles.
    """
    remaining = set(range(quiver.n))
    order = []
    while remaining:
        sink = None
        for i in sorted(remaining):
            if not any(s == i and t in remaining for s, t in quiver.arrow_indices):
                sink = i
                break
        if sink is None:
            raise UnsupportedQuiverError("quiver has a directed cycle")
        order.append(sink)
        remaining.discard(sink)
    return tuple(order)


def _reverse_at(quiver: Quiver, idx: int) -> Quiver:
    vname = quiver.vertices[idx]
    arrows = tuple(
        (t, s) if s == vname or t == vname else (s, t) for s, t in quiver.arrows
    )
    return Quiver(quiver.vertices, arrows)


def _simple_reflection(vec: DimVector, idx: int, adj) -> DimVector:
    new = -vec[idx] + sum(adj[idx][j] * vec[j] for j in range(len(vec)) if j != idx)
    return vec[:idx] + (new,) + vec[idx + 1 :]


def _reflect_at_source(rep: Representation, idx: int) -> Representation:
    """Apply the source reflection at vertex `idx`, reversing its arrows.

    The new space at `idx` is the cokernel of V_i -> sum of targets of the
    outgoing arrows; every reversed arrow gets the induced projection.
    """
    q = rep.quiver
    p = rep.field.char
    out_arrows = [a for a, (s, _) in enumerate(q.arrow_indices) if s == idx]
    if any(t == idx for _, t in q.arrow_indices):
        raise InternalConsistencyError(f"vertex {q.vertices[idx]} is not a source")
    blocks = []
    offsets = []
    total = 0
    for a in out_arrows:
        offsets.append(total)
        total += rep.arrow_maps[a].nrows
        blocks.append(rep.arrow_maps[a].entries)
    # column space of the stacked map, as a row space of its transpose
    stacked_cols = tuple(
        tuple(blocks[bi][r][c] for bi in range(len(blocks)) for r in range(len(blocks[bi])))
        for c in range(rep.dims[idx])
    )
    colspace, _ = rref_rows(stacked_cols, p)
    if len(colspace) != rep.dims[idx]:
        raise InternalConsistencyError("reflection hit a non-injective map")
    qmap, _ = quotient_map_rows(colspace, total, p)
    new_dim = total - rep.dims[idx]
    new_dims = rep.dims[:idx] + (new_dim,) + rep.dims[idx + 1 :]
    new_quiver = _reverse_at(q, idx)
    new_maps = list(rep.arrow_maps)
    for a, off in zip(out_arrows, offsets):
        j = q.arrow_indices[a][1]
        cols = range(off, off + rep.dims[j])
        entries = tuple(tuple(row[c] for c in cols) for row in qmap)
        new_maps[a] = Matrix(rep.field, new_dim, rep.dims[j], entries)
    return Representation(new_quiver, rep.field, new_dims, tuple(new_maps))


@lru_cache(maxsize=None)
def indecomposable_for_root(quiver: Quiver, root: DimVector, field: FieldSpec) -> Representation:
    """The indecomposable representation with the given root as dimension vector.

    Built by walking the root down to a simple one along the cyclic admissible
    reflection sequence, then lifting the simple representation back with
    source reflections.  Deterministic; verified to have a one-dimensional
    endomorphism ring.
    """
    root = quiver.check_dim_vector(root)
    if root not in positive_roots(quiver):
        raise InputError(f"{root} is not a positive root of this quiver")
    from .quiver import _undirected_adjacency

    adj = _undirected_adjacency(quiver)
    order = admissible_vertex_order(quiver)
    quivers = [quiver]
    word: list[int] = []
    cur = root
    step = 0
    while True:
        if step > 10000:
            raise InternalConsistencyError("reflection walk did not terminate")
        i = order[step % quiver.n]
        nxt = _simple_reflection(cur, i, adj)
        if any(x < 0 for x in nxt):
            if sum(cur) != 1 or cur[i] != 1:
                raise InternalConsistencyError("reflection walk ended off a simple root")
            base_vertex = i
            break
        word.append(i)
        quivers.append(_reverse_at(quivers[-1], i))
        cur = nxt
        step += 1
    rep = simple_representation(quivers[-1], base_vertex, field)
    for i in reversed(word):
        rep = _reflect_at_source(rep, i)
    if rep.quiver != quiver or rep.dims != root:
        raise InternalConsistencyError("reflection construction missed its target")
    if hom_dim(rep, rep) != 1:
        raise InternalConsistencyError(f"endomorphisms of the root {root} are not scalar")
    return rep


@lru_cache(maxsize=None)
def build_rep(multiset: RootMultiset, field: FieldSpec) -> Representation:
    """Block-diagonal sum of the indecomposables named by the multiset."""
    rep = zero_representation(multiset.quiver, field)
    for root in multiset.expand():
        rep = direct_sum(rep, indecomposable_for_root(multiset.quiver, root, field))
    return rep


# ---------------------------------------------------------------------------
# Subrepresentations and quotients
# ---------------------------------------------------------------------------


def _canonical_subspaces(rep: Representation, subspaces: Subspaces) -> Subspaces:
    p = rep.field.char
    if len(subspaces) != rep.quiver.n:
        raise InputError("one subspace per vertex required")
    out = []
    for i, basis in enumerate(subspaces):
        rows = tuple(tuple(rep.field.coerce(x) for x in row) for row in basis)
        if any(len(row) != rep.dims[i] for row in rows):
            raise InputError(f"subspace basis at vertex {i} has wrong ambient dimension")
        red, _ = rref_rows(rows, p)
        if len(red) != len(rows):
            raise InputError(f"subspace basis at vertex {i} is not independent")
        out.append(red)
    return tuple(out)


def is_subrepresentation(rep: Representation, subspaces: Subspaces) -> bool:
    """True iff every arrow map sends the source subspace into the target one."""
    subspaces = _canonical_subspaces(rep, subspaces)
    p = rep.field.char
    for (s, t), m in zip(rep.quiver.arrow_indices, rep.arrow_maps):
        for row in subspaces[s]:
            if not rowspace_contains(subspaces[t], m.apply(row), p):
                return False
    return True


def subrepresentation(rep: Representation, subspaces: Subspaces) -> Representation:
    """The subrepresentation carried by arrow-stable subspaces, in their bases."""
    subspaces = _canonical_subspaces(rep, subspaces)
    p = rep.field.char
    dims = tuple(len(b) for b in subspaces)
    maps = []
    for (s, t), m in zip(rep.quiver.arrow_indices, rep.arrow_maps):
        pivots = tuple(next(i for i, x in enumerate(row) if x) for row in subspaces[t])
        cols = []
        for row in subspaces[s]:
            img = m.apply(row)
            if any(reduce_vector(img, subspaces[t], p)):
                raise InputError("subspaces are not arrow-stable")
            cols.append(tuple(img[c] for c in pivots))
        entries = tuple(tuple(col[r] for col in cols) for r in range(dims[t]))
        maps.append(Matrix(rep.field, dims[t], dims[s], entries))
    return Representation(rep.quiver, rep.field, dims, tuple(maps))


def quotient_representation(rep: Representation, subspaces: Subspaces) -> Representation:
    """The quotient by an arrow-stable tuple of subspaces, in complement coordinates."""
    subspaces = _canonical_subspaces(rep, subspaces)
    if not is_subrepresentation(rep, subspaces):
        raise InputError("subspaces are not arrow-stable")
    p = rep.field.char
    qmaps = []
    nonpivots = []
    for i, basis in enumerate(subspaces):
        qm, np = quotient_map_rows(basis, rep.dims[i], p)
        qmaps.append(qm)
        nonpivots.append(np)
    dims = tuple(len(np) for np in nonpivots)
    maps = []
    for (s, t), m in zip(rep.quiver.arrow_indices, rep.arrow_maps):
        lifted = tuple(tuple(row[c] for c in nonpivots[s]) for row in m.entries)
        entries = mat_mul_rows(qmaps[t], lifted, p)
        if dims[t] == 0 or dims[s] == 0:
            entries = tuple(() for _ in range(dims[t]))
            maps.append(Matrix.zeros(rep.field, dims[t], dims[s]))
        else:
            maps.append(Matrix(rep.field, dims[t], dims[s], entries))
    return Representation(rep.quiver, rep.field, dims, tuple(maps))
