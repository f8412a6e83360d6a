"""Exact sparse linear algebra over the rationals or a prime field.

Vectors are dicts {index: nonzero scalar}; matrices are column-major
tuples of such dicts.  Elimination over the rationals is fraction-free:
echelon rows are kept as integer vectors (denominators cleared on
entry) combined by integer cross-multiplication and re-normalized by
their content gcd, which keeps entries small without dense Bareiss
bookkeeping.  Subspaces are canonicalized to reduced row echelon form,
so equality of subspaces is a syntactic check.

Everything here is immutable after construction and all operations are
pure, so concurrent use on distinct inputs is safe.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import gcd

from .errors import (
    AmbientMismatchError,
    BudgetExceededError,
    FieldMismatchError,
    NotAChainMapError,
    PreconditionError,
)
from .fields import Rationals


def vec_add_scaled(field, acc, scale, vec):
    """acc += scale * vec, in place, dropping cancellations."""
    for k, v in vec.items():
        nv = field.add(acc.get(k, field.zero), field.mul(scale, v))
        if nv == field.zero:
            acc.pop(k, None)
        else:
            acc[k] = nv


def vec_scale(field, scale, vec):
    if scale == field.zero:
        return {}
    return {k: field.mul(scale, v) for k, v in vec.items()}


def _check_same_field(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"mixed fields {a.field!r} and {b.field!r}")


class SparseMatrix:
    """Immutable sparse matrix, stored as a tuple of column dicts."""

    __slots__ = ("field", "rows", "cols", "_columns")

    def __init__(self, field, rows, cols, columns):
        assert len(columns) == cols
        self.field = field
        self.rows = rows
        self.cols = cols
        self._columns = tuple(columns)

    @classmethod
    def from_columns(cls, field, rows, columns):
        cleaned = []
        for col in columns:
            c = {r: v for r, v in col.items() if v != field.zero}
            if any(r < 0 or r >= rows for r in c):
                raise ValueError("row index out of range")
            cleaned.append(c)
        return cls(field, rows, len(cleaned), cleaned)

    @classmethod
    def from_entries(cls, field, rows, cols, entries):
        columns = [{} for _ in range(cols)]
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry index {(r, c)} out of range")
            if v != field.zero:
                columns[c][r] = v
        return cls(field, rows, cols, columns)

    @classmethod
    def from_dense(cls, field, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows_data):
            for c, v in enumerate(row):
                if v != field.zero:
                    entries[(r, c)] = v
        return cls.from_entries(field, rows, cols, entries)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, rows, cols, [{} for _ in range(cols)])

    def column(self, j):
        return self._columns[j]

    def columns(self):
        return self._columns

    def entry(self, r, c):
        return self._columns[c].get(r, self.field.zero)

    def entries(self):
        for c, col in enumerate(self._columns):
            for r, v in col.items():
                yield (r, c), v

    @property
    def nnz(self):
        return sum(len(col) for col in self._columns)

    def is_zero(self):
        return all(not col for col in self._columns)

    def transpose(self):
        cols = [{} for _ in range(self.rows)]
        for c, col in enumerate(self._columns):
            for r, v in col.items():
                cols[r][c] = v
        return SparseMatrix(self.field, self.cols, self.rows, cols)

    def apply(self, vec):
        """Matrix @ sparse vector."""
        field = self.field
        out = {}
        for j, coeff in vec.items():
            if coeff != field.zero:
                vec_add_scaled(field, out, coeff, self._columns[j])
        return out

    def __matmul__(self, other):
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [self.apply(other.column(j)) for j in range(other.cols)]
        return SparseMatrix(self.field, self.rows, other.cols, cols)

    def __add__(self, other):
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        field = self.field
        cols = []
        for j in range(self.cols):
            col = dict(self._columns[j])
            vec_add_scaled(field, col, field.one, other.column(j))
            cols.append(col)
        return SparseMatrix(field, self.rows, self.cols, cols)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, a):
        return SparseMatrix(
            self.field,
            self.rows,
            self.cols,
            [vec_scale(self.field, a, col) for col in self._columns],
        )

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and self._columns == other._columns
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, {self.field!r})"

    def to_dense(self):
        zero = self.field.zero
        return [
            [self._columns[c].get(r, zero) for c in range(self.cols)]
            for r in range(self.rows)
        ]


def _int_rows(vec):
    """Clear denominators of a rational vector; returns a gcd-1 int dict."""
    den = 1
    for v in vec.values():
        den = den * v.denominator // gcd(den, v.denominator)
    row = {k: int(v * den) for k, v in vec.items()}
    return _normalize_int_row(row)


def _normalize_int_row(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        for k in row:
            row[k] //= g
    if row and row[min(row)] < 0:
        for k in row:
            row[k] = -row[k]
    return row


class Echelon:
    """Online row-echelon accumulator.

    Rows are stored in raw form: gcd-normalized int vectors over QQ,
    lead-1 residue vectors over GF(p).  Insertion order determines
    nothing but performance; the RREF extracted at the end is the
    canonical one for the row space.
    """

    def __init__(self, field, deadline=None):
        self.field = field
        self.rational = isinstance(field, Rationals)
        self.by_pivot = {}
        self.deadline = deadline
        self._ops = 0

    @property
    def rank(self):
        return len(self.by_pivot)

    def _tick(self):
        self._ops += 1
        if self.deadline is not None and self._ops % 512 == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceededError("elimination ran past its time budget")

    def insert(self, vec):
        """Insert a field-scalar vector; returns its pivot column or None."""
        if self.rational:
            row = _int_rows(vec)
            return self._insert_q(row)
        p = self.field.p
        row = {k: v % p for k, v in vec.items() if v % p}
        return self._insert_p(row)

    def _insert_q(self, row):
        by_pivot = self.by_pivot
        while row:
            c = min(row)
            piv = by_pivot.get(c)
            if piv is None:
                by_pivot[c] = _normalize_int_row(row)
                return c
            self._tick()
            a = piv[c]
            b = row.pop(c)
            g = gcd(a, b)
            fa, fb = a // g, b // g
            if fa != 1:
                for k in row:
                    row[k] *= fa
            for k, v in piv.items():
                if k == c:
                    continue
                nv = row.get(k, 0) - fb * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            row = _normalize_int_row(row)
        return None

    def _insert_p(self, row):
        p = self.field.p
        by_pivot = self.by_pivot
        while row:
            c = min(row)
            piv = by_pivot.get(c)
            if piv is None:
                lead_inv = pow(row[c], -1, p)
                by_pivot[c] = {k: v * lead_inv % p for k, v in row.items()}
                return c
            self._tick()
            b = row.pop(c)
            for k, v in piv.items():
                if k == c:
                    continue
                nv = (row.get(k, 0) - b * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return None

    def rref_rows(self):
        """Back-substituted, lead-1 rows sorted by pivot (the canonical RREF)."""
        field = self.field
        pivots = sorted(self.by_pivot)
        raw = [dict(self.by_pivot[p]) for p in pivots]
        for i in range(len(raw) - 1, -1, -1):
            row = raw[i]
            for j in range(i + 1, len(raw)):
                c = pivots[j]
                if c not in row:
                    continue
                other = raw[j]
                if self.rational:
                    a = other[c]
                    b = row.pop(c)
                    g = gcd(a, b)
                    fa, fb = a // g, b // g
                    if fa != 1:
                        for k in row:
                            row[k] *= fa
                    for k, v in other.items():
                        if k == c:
                            continue
                        nv = row.get(k, 0) - fb * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    row = _normalize_int_row(row)
                    raw[i] = row
                else:
                    p = field.p
                    b = row.pop(c)
                    for k, v in other.items():
                        if k == c:
                            continue
                        nv = (row.get(k, 0) - b * v) % p
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
        out = []
        for pcol, row in zip(pivots, raw):
            if self.rational:
                lead = row[pcol]
                out.append({k: Fraction(v, lead) for k, v in row.items()})
            else:
                out.append(row)
        return pivots, out


class Subspace:
    """Subspace of k^n held as its canonical RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, basis, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field, ambient_dim, vectors):
        ech = Echelon(field)
        for v in vectors:
            for k in v:
                if k < 0 or k >= ambient_dim:
                    raise ValueError("coordinate index out of range")
            ech.insert(v)
        pivots, rows = ech.rref_rows()
        return cls(field, ambient_dim, rows, pivots)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field, ambient_dim):
        basis = [{i: field.one} for i in range(ambient_dim)]
        return cls(field, ambient_dim, basis, range(ambient_dim))

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, vec):
        """Residue of vec modulo this subspace (single pass; basis is RREF)."""
        field = self.field
        r = {k: v for k, v in vec.items() if v != field.zero}
        for p, row in zip(self.pivots, self.basis):
            coeff = r.get(p)
            if coeff is not None:
                vec_add_scaled(field, r, field.neg(coeff), row)
        return r

    def contains(self, vec):
        return not self.reduce(vec)

    def coordinates(self, vec):
        """Coefficients of vec on the RREF basis, or None if outside."""
        coords = [vec.get(p, self.field.zero) for p in self.pivots]
        if self.reduce(vec):
            return None
        return coords

    def leq(self, other):
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        _check_same_field(self, other)
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatchError(
                f"ambient {self.ambient_dim} vs {other.ambient_dim}"
            )
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def rank(m, deadline=None):
    """Rank of a sparse matrix; deterministic, exact."""
    ech = Echelon(m.field, deadline=deadline)
    for j in range(m.cols):
        ech.insert(m.column(j))
    return ech.rank


def kernel_basis(m):
    """Null space of m as a canonical Subspace of k^cols."""
    ech = Echelon(m.field)
    for col in m.transpose().columns():
        ech.insert(col)
    pivots, rows = ech.rref_rows()
    pivot_set = set(pivots)
    field = m.field
    vectors = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = {f: field.one}
        for p, row in zip(pivots, rows):
            coeff = row.get(f)
            if coeff is not None:
                v[p] = field.neg(coeff)
        vectors.append(v)
    return Subspace.span(field, m.cols, vectors)


def image_basis(m):
    """Column space of m as a canonical Subspace of k^rows."""
    return Subspace.span(m.field, m.rows, m.columns())


def subspace_leq(u, v):
    return u.leq(v)


class TaggedEchelon:
    """Echelon in plain field arithmetic with linear bookkeeping tags.

    Each stored row knows its expression in terms of the tagged inserts,
    which turns membership into 'solve for the combination'.
    """

    def __init__(self, field):
        self.field = field
        self.by_pivot = {}

    def insert(self, vec, tag):
        """Returns the new pivot, or None if vec was dependent."""
        field = self.field
        row = {k: v for k, v in vec.items() if v != field.zero}
        acc = dict(tag)
        while row:
            c = min(row)
            entry = self.by_pivot.get(c)
            if entry is None:
                lead_inv = field.inv(row[c])
                row = vec_scale(field, lead_inv, row)
                acc = vec_scale(field, lead_inv, acc)
                self.by_pivot[c] = (row, acc)
                return c
            coeff = field.neg(row[c])
            vec_add_scaled(field, row, coeff, entry[0])
            vec_add_scaled(field, acc, coeff, entry[1])
        return None

    def express(self, vec):
        """Write vec as a tag-combination; None if vec is outside the span."""
        field = self.field
        row = {k: v for k, v in vec.items() if v != field.zero}
        acc = {}
        while row:
            c = min(row)
            entry = self.by_pivot.get(c)
            if entry is None:
                return None
            coeff = row[c]
            vec_add_scaled(field, row, field.neg(coeff), entry[0])
            vec_add_scaled(field, acc, coeff, entry[1])
        return acc


def solve(m, rhs):
    """One particular solution of m @ x = rhs (free variables 0), or None."""
    te = TaggedEchelon(m.field)
    for j in range(m.cols):
        te.insert(m.column(j), {j: m.field.one})
    return te.express(rhs)


class QuotientSpace:
    """k^n modulo a subspace, with coordinates on the non-pivot axes."""

    def __init__(self, relations):
        self.field = relations.field
        self.ambient_dim = relations.ambient_dim
        self.relations = relations
        pivot_set = set(relations.pivots)
        self.free = tuple(
            i for i in range(relations.ambient_dim) if i not in pivot_set
        )
        self._free_pos = {f: i for i, f in enumerate(self.free)}

    @property
    def dim(self):
        return len(self.free)

    def project(self, vec):
        r = self.relations.reduce(vec)
        return {self._free_pos[k]: v for k, v in r.items()}

    def lift(self, qvec):
        return {self.free[i]: v for i, v in qvec.items()}


class HomologyBasis:
    """Representatives for cycles modulo boundaries, with class coordinates.

    Representatives are the cycle RREF basis vectors whose classes are
    not already spanned, taken in canonical order.
    """

    def __init__(self, cycles, boundaries):
        _check_same_field(cycles, boundaries)
        if cycles.ambient_dim != boundaries.ambient_dim:
            raise AmbientMismatchError("cycles and boundaries ambient mismatch")
        if not boundaries.leq(cycles):
            raise PreconditionError("boundaries not contained in cycles")
        self.field = cycles.field
        self.ambient_dim = cycles.ambient_dim
        self._te = TaggedEchelon(self.field)
        for b in boundaries.basis:
            self._te.insert(b, {})
        reps = []
        for b in cycles.basis:
            if self._te.insert(b, {len(reps): self.field.one}) is not None:
                reps.append(b)
        self.reps = tuple(reps)

    @property
    def dim(self):
        return len(self.reps)

    def class_coordinates(self, vec):
        """Coordinates of [vec] on the representative classes."""
        acc = self._te.express(vec)
        if acc is None:
            raise PreconditionError("vector is not a cycle for this basis")
        return acc


def induced_quotient_map(f, src_cycles, src_boundaries, tgt_cycles, tgt_boundaries):
    """Matrix of the map induced by f on homology quotients.

    Raises NotAChainMapError unless f maps src cycles into tgt cycles
    and src boundaries into tgt boundaries.
    """
    if f.cols != src_cycles.ambient_dim or f.rows != tgt_cycles.ambient_dim:
        raise AmbientMismatchError("map shape does not match ambient spaces")
    for b in src_cycles.basis:
        if not tgt_cycles.contains(f.apply(b)):
            raise NotAChainMapError("not a chain map at this degree: cycles escape")
    for b in src_boundaries.basis:
        if not tgt_boundaries.contains(f.apply(b)):
            raise NotAChainMapError(
                "not a chain map at this degree: boundaries escape"
            )
    src_h = HomologyBasis(src_cycles, src_boundaries)
    tgt_h = HomologyBasis(tgt_cycles, tgt_boundaries)
    cols = [tgt_h.class_coordinates(f.apply(rep)) for rep in src_h.reps]
    return SparseMatrix(f.field, tgt_h.dim, src_h.dim, cols)
