"""Exact linear algebra over the rationals and over prime fields F_p.

Two layers live here.  The `Matrix` class is the convenient, field-agnostic
surface used by the representation-theoretic modules.  Below it sits a set of
row-tuple helpers parameterised by a characteristic `p` (`p == 0` means exact
rationals via `Fraction`); these are the hot path of the subspace enumerator
and are deliberately allocation-light.

Subspaces are always handled as row spaces of reduced-row-echelon matrices
(tuples of row tuples), which doubles as their canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .errors import InputError

Row = tuple
Rows = tuple


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Rationals:
    """The field of exact rational numbers."""

    char = 0

    def coerce(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p, elements stored as least nonnegative residues."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**31) or not _is_prime(self.p):
            raise InputError(f"PrimeField needs a prime < 2^31, got {self.p}")

    @property
    def char(self) -> int:
        return self.p

    def coerce(self, x):
        return int(x) % self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"


FieldSpec = Rationals | PrimeField

QQ = Rationals()


def _inv(x, p: int):
    if p:
        return pow(x, p - 2, p)
    return Fraction(1) / x


def rref_rows(rows: Rows, p: int) -> tuple[Rows, tuple[int, ...]]:
    """Reduced row echelon form over F_p (or QQ when p == 0).

    Returns (nonzero rows, pivot column indices).
    """
    work = [list(r) for r in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots = []
    rpos = 0
    for col in range(ncols):
        piv = None
        for r in range(rpos, len(work)):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            continue
        work[rpos], work[piv] = work[piv], work[rpos]
        inv = _inv(work[rpos][col], p)
        if p:
            work[rpos] = [(x * inv) % p for x in work[rpos]]
        else:
            work[rpos] = [x * inv for x in work[rpos]]
        for r in range(len(work)):
            if r != rpos and work[r][col]:
                f = work[r][col]
                if p:
                    work[r] = [(a - f * b) % p for a, b in zip(work[r], work[rpos])]
                else:
                    work[r] = [a - f * b for a, b in zip(work[r], work[rpos])]
        pivots.append(col)
        rpos += 1
        if rpos == len(work):
            break
    out = tuple(tuple(r) for r in work[:rpos])
    return out, tuple(pivots)


def rank_rows(rows: Rows, p: int) -> int:
    return len(rref_rows(rows, p)[0])


def null_space_rows(rows: Rows, ncols: int, p: int) -> Rows:
    """RREF row basis of {x : A x = 0} for the matrix A with the given rows."""
    red, pivots = rref_rows(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero = 0 if p else Fraction(0)
    one = 1 if p else Fraction(1)
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, c in enumerate(pivots):
            val = red[r][f]
            vec[c] = (-val) % p if p else -val
        basis.append(tuple(vec))
    return rref_rows(tuple(basis), p)[0]


def mat_mul_rows(a: Rows, b: Rows, p: int) -> Rows:
    """Product of row-tuple matrices (a is m x k, b is k x n)."""
    if not a:
        return ()
    if not b:
        return tuple(() for _ in a)
    n = len(b[0])
    out = []
    for arow in a:
        acc = [0] * n
        for x, brow in zip(arow, b):
            if x:
                for j in range(n):
                    acc[j] += x * brow[j]
        if p:
            out.append(tuple(v % p for v in acc))
        else:
            out.append(tuple(Fraction(v) for v in acc))
    return tuple(out)


def apply_rows(m: Rows, vec: Row, p: int) -> Row:
    """Apply the matrix (rows over source coordinates) to a column vector."""
    if p:
        return tuple(sum(x * v for x, v in zip(row, vec)) % p for row in m)
    return tuple(Fraction(sum(x * v for x, v in zip(row, vec))) for row in m)


# ---------------------------------------------------------------------------
# Row-space (subspace) toolkit.  A subspace of F^n is its RREF row basis.
# ---------------------------------------------------------------------------


def reduce_vector(vec: Row, basis: Rows, p: int) -> Row:
    """Remainder of vec after elimination against an RREF basis."""
    v = list(vec)
    for row in basis:
        lead = next(i for i, x in enumerate(row) if x)
        f = v[lead]
        if f:
            if p:
                v = [(a - f * b) % p for a, b in zip(v, row)]
            else:
                v = [a - f * b for a, b in zip(v, row)]
    return tuple(v)


def rowspace_contains(basis: Rows, vec: Row, p: int) -> bool:
    return not any(reduce_vector(vec, basis, p))


def rowspace_leq(small: Rows, big: Rows, p: int) -> bool:
    return all(rowspace_contains(big, v, p) for v in small)


def sum_rowspaces(a: Rows, b: Rows, p: int) -> Rows:
    return rref_rows(a + b, p)[0]


def intersect_rowspaces(a: Rows, b: Rows, n: int, p: int) -> Rows:
    """Zassenhaus intersection of two row spaces inside F^n."""
    zero = tuple([0] * n) if p else tuple([Fraction(0)] * n)
    block = [row + row for row in a] + [row + zero for row in b]
    red, _ = rref_rows(tuple(block), p)
    out = [row[n:] for row in red if not any(row[:n])]
    return rref_rows(tuple(out), p)[0]


@lru_cache(maxsize=1 << 20)
def image_rowspace(m: Rows, basis: Rows, p: int) -> Rows:
    """Row basis of the image of a row space under a matrix (column action)."""
    return rref_rows(tuple(apply_rows(m, v, p) for v in basis), p)[0]


@lru_cache(maxsize=1 << 20)
def quotient_map_rows(basis: Rows, n: int, p: int) -> tuple[Rows, tuple[int, ...]]:
    """Matrix of F^n -> F^n/span(basis) in complement coordinates.

    Returns (Q, nonpivot column indices); the section of Q sends the a-th
    quotient coordinate to the unit vector at the a-th nonpivot column.
    """
    pivots = tuple(next(i for i, x in enumerate(row) if x) for row in basis)
    nonpivots = tuple(c for c in range(n) if c not in pivots)
    zero = 0 if p else Fraction(0)
    one = 1 if p else Fraction(1)
    rows = []
    for a in nonpivots:
        row = [zero] * n
        row[a] = one
        for j, pc in enumerate(pivots):
            val = basis[j][a]
            row[pc] = (-val) % p if p else -val
        rows.append(tuple(row))
    return tuple(rows), nonpivots


@lru_cache(maxsize=1 << 20)
def preimage_rowspace(m: Rows, target_basis: Rows, ncols: int, p: int) -> Rows:
    """{x : M x in span(target_basis)} as an RREF row basis."""
    nrows = len(m)
    q, _ = quotient_map_rows(target_basis, nrows, p)
    comp = mat_mul_rows(q, m, p)
    return null_space_rows(comp, ncols, p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=None)
def _rref_bases(n: int, k: int, p: int) -> tuple[Rows, ...]:
    """All RREF bases of k-dimensional subspaces of F_p^n, fixed order."""
    if k == 0:
        return ((),)
    if k > n:
        return ()
    out = []
    for pivots in combinations(range(n), k):
        free = []
        for r in range(k):
            for c in range(pivots[r] + 1, n):
                if c not in pivots:
                    free.append((r, c))
        base = [[0] * n for _ in range(k)]
        for r in range(k):
            base[r][pivots[r]] = 1
        nfree = len(free)
        for code in range(p**nfree):
            rows = [list(row) for row in base]
            c = code
            for r, col in free:
                rows[r][col] = c % p
                c //= p
            out.append(tuple(tuple(row) for row in rows))
    return tuple(out)


def enumerate_subspaces(n: int, k: int, p: int) -> Iterator[Rows]:
    """Yield every k-dimensional subspace of F_p^n exactly once, as an RREF basis."""
    if not (0 <= k <= n):
        raise InputError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    yield from _rref_bases(n, k, p)


def subspaces_between(lower: Rows, upper: Rows, k: int, p: int) -> Iterator[Rows]:
    """Subspaces S with lower <= S <= upper and dim S = k, in ambient coordinates.

    `lower` must be contained in `upper`; both are RREF bases in a common
    ambient space.  Enumerated via the quotient upper/lower, so the cost only
    depends on the gap dimensions.
    """
    kl, ku = len(lower), len(upper)
    if k < kl or k > ku:
        return
    if k == kl:
        yield lower
        return
    if not lower and upper and ku == len(upper[0]):
        # no bounds at all: the cached full enumeration applies verbatim
        yield from _rref_bases(ku, k, p)
        return
    upivots = tuple(next(i for i, x in enumerate(row) if x) for row in upper)
    # coordinates of lower inside upper (read off pivot columns of the RREF)
    lower_in_u = tuple(tuple(row[c] for c in upivots) for row in lower)
    lred, _ = rref_rows(lower_in_u, p)
    q, nonpivots = quotient_map_rows(lred, ku, p)
    for t in _rref_bases(ku - kl, k - kl, p):
        coords = []
        for row in t:
            lift = [0] * ku
            for a, val in enumerate(row):
                lift[nonpivots[a]] = val
            coords.append(tuple(lift))
        ambient = mat_mul_rows(tuple(coords), upper, p) + lower
        yield rref_rows(ambient, p)[0]


# ---------------------------------------------------------------------------
# Matrix class
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over a FieldSpec, entries in canonical form."""

    field: FieldSpec
    nrows: int
    ncols: int
    entries: tuple[tuple, ...]

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        rows = [tuple(field.coerce(x) for x in r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged matrix rows")
        return cls(field, nrows, ncols, tuple(rows))

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        z = field.coerce(0)
        return cls(field, nrows, ncols, tuple(tuple([z] * ncols) for _ in range(nrows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.coerce(0), field.coerce(1)
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise InputError("matrix shape does not match entries")

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field or self.ncols != other.nrows:
            raise InputError("incompatible matrix product")
        if self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        prod = mat_mul_rows(self.entries, other.entries, self.field.char)
        return Matrix(self.field, self.nrows, other.ncols, prod)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field or (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("incompatible matrix sum")
        f = self.field.coerce
        rows = tuple(
            tuple(f(a + b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        )
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field or (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("incompatible matrix difference")
        f = self.field.coerce
        rows = tuple(
            tuple(f(a - b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        )
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def transpose(self) -> "Matrix":
        rows = tuple(tuple(self.entries[r][c] for r in range(self.nrows)) for c in range(self.ncols))
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def rank(self) -> int:
        return rank_rows(self.entries, self.field.char)

    def rref(self) -> "Matrix":
        red, _ = rref_rows(self.entries, self.field.char)
        return Matrix(self.field, len(red), self.ncols, red)

    def kernel_basis(self) -> tuple[tuple, ...]:
        """Basis of the right null space, as column vectors in RREF order."""
        return null_space_rows(self.entries, self.ncols, self.field.char)

    def apply(self, vec) -> tuple:
        """Matrix-vector product (vec has length ncols)."""
        return apply_rows(self.entries, tuple(vec), self.field.char)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)


def block_diag(field: FieldSpec, mats: list[Matrix]) -> Matrix:
    nrows = sum(m.nrows for m in mats)
    ncols = sum(m.ncols for m in mats)
    z = field.coerce(0)
    rows = [[z] * ncols for _ in range(nrows)]
    r0 = c0 = 0
    for m in mats:
        for r in range(m.nrows):
            for c in range(m.ncols):
                rows[r0 + r][c0 + c] = m.entries[r][c]
        r0 += m.nrows
        c0 += m.ncols
    return Matrix(field, nrows, ncols, tuple(tuple(r) for r in rows))
