"""Exact linear algebra over Q and prime fields.

Everything here is exact: rationals are arbitrary-precision
``fractions.Fraction`` values, prime-field elements are canonical int
representatives in ``[0, p)``.  Matrices are dense and immutable; subspaces
are stored by their reduced row-echelon basis, which makes RREF equality
the canonical equality test and makes every derived choice (quotient
coordinates, sections) deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, FieldMismatchError, NotAComplexError


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class Field:
    """Field descriptor; scalar values are plain Python objects it governs."""

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError


class RationalField(Field):
    """The rationals, backed by arbitrary-precision Fraction."""

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def neg(self, a):
        return -a

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def describe(self):
        return "Q"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    """F_p for a prime p < 2^31; elements are ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or p >= 2 ** 31:
            raise ValueError(f"prime field order out of range: {p}")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator not invertible mod {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return (a * pow(b, -1, self.p)) % self.p

    def neg(self, a):
        return (-a) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def describe(self):
        return f"F_{self.p}"

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"mixed field descriptors: {first!r} vs {f!r}")
    return first


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix; entries[r][c], all over one field."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence]) -> "Matrix":
        data = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise DimensionMismatchError("ragged rows")
        return Matrix(field, len(data), ncols, data)

    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def from_columns(field: Field, cols: Sequence[Sequence]) -> "Matrix":
        return Matrix.from_rows(field, cols).transpose()

    def row(self, r: int) -> tuple:
        return self.entries[r]

    def column(self, c: int) -> tuple:
        return tuple(self.entries[r][c] for r in range(self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols)))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for row in self.entries for x in row)

    def add(self, other: "Matrix") -> "Matrix":
        self._check_shape(other, same=True)
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(add(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.entries, other.entries)))

    def sub(self, other: "Matrix") -> "Matrix":
        self._check_shape(other, same=True)
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(sub(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.entries, other.entries)))

    def neg(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(neg(a) for a in row) for row in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(mul(c, a) for a in row) for row in self.entries))

    def mul(self, other: "Matrix") -> "Matrix":
        """Matrix product; skips zero entries (tables here are sparse)."""
        same_field(self.field, other.field)
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        zero, add, mul = f.zero, f.add, f.mul
        other_rows = other.entries
        out = []
        for r in range(self.rows):
            acc = [zero] * other.cols
            row = self.entries[r]
            for k in range(self.cols):
                a = row[k]
                if a == zero:
                    continue
                brow = other_rows[k]
                for c in range(other.cols):
                    b = brow[c]
                    if b != zero:
                        acc[c] = add(acc[c], mul(a, b))
            out.append(tuple(acc))
        return Matrix(f, self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector length {len(vector)} != cols {self.cols}")
        f = self.field
        zero, add, mul = f.zero, f.add, f.mul
        out = []
        for row in self.entries:
            s = zero
            for a, v in zip(row, vector):
                if a != zero and v != zero:
                    s = add(s, mul(a, v))
            out.append(s)
        return tuple(out)

    def hstack(self, other: "Matrix") -> "Matrix":
        same_field(self.field, other.field)
        if self.rows != other.rows:
            raise DimensionMismatchError("hstack row mismatch")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      tuple(ra + rb for ra, rb in zip(self.entries, other.entries)))

    def vstack(self, other: "Matrix") -> "Matrix":
        same_field(self.field, other.field)
        if self.cols != other.cols:
            raise DimensionMismatchError("vstack col mismatch")
        return Matrix(self.field, self.rows + other.rows, self.cols,
                      self.entries + other.entries)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; index order (i*other.rows + k, j*other.cols + l)."""
        same_field(self.field, other.field)
        f = self.field
        zero, mul = f.zero, f.mul
        out = []
        for i in range(self.rows):
            arow = self.entries[i]
            for k in range(other.rows):
                brow = other.entries[k]
                row = []
                for j in range(self.cols):
                    a = arow[j]
                    if a == zero:
                        row.extend((zero,) * other.cols)
                    else:
                        row.extend(mul(a, b) for b in brow)
                out.append(tuple(row))
        return Matrix(f, self.rows * other.rows, self.cols * other.cols, tuple(out))

    def _check_shape(self, other: "Matrix", same: bool = False):
        same_field(self.field, other.field)
        if same and (self.rows != other.rows or self.cols != other.cols):
            raise DimensionMismatchError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def to_lists(self):
        return [list(row) for row in self.entries]


def block_matrix(field: Field, row_dims: Sequence[int], col_dims: Sequence[int],
                 blocks: dict) -> Matrix:
    """Assemble a matrix from a sparse dict {(block_row, block_col): Matrix}."""
    row_off = _offsets(row_dims)
    col_off = _offsets(col_dims)
    total_r, total_c = sum(row_dims), sum(col_dims)
    grid = [[field.zero] * total_c for _ in range(total_r)]
    for (br, bc), m in blocks.items():
        if m.rows != row_dims[br] or m.cols != col_dims[bc]:
            raise DimensionMismatchError(f"block ({br},{bc}) has shape {m.rows}x{m.cols}")
        r0, c0 = row_off[br], col_off[bc]
        for r in range(m.rows):
            row = m.entries[r]
            grid[r0 + r][c0:c0 + m.cols] = list(row)
    return Matrix(field, total_r, total_c, tuple(tuple(r) for r in grid))


def _offsets(dims: Sequence[int]):
    out, acc = [], 0
    for d in dims:
        out.append(acc)
        acc += d
    return out


# ---------------------------------------------------------------------------
# Row reduction and derived operations
# ---------------------------------------------------------------------------

def _rref_rows(field: Field, rows: list) -> tuple[list, list]:
    """In-place RREF on a list of row lists; returns (rows, pivot_columns)."""
    zero = field.zero
    div, sub, mul = field.div, field.sub, field.mul
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if rows[i][c] != zero:
                pr = i
                break
        if pr < 0:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != field.one:
            rows[r] = [div(x, pv) for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            factor = rows[i][c]
            if factor != zero:
                ri = rows[i]
                rows[i] = [sub(x, mul(factor, y)) for x, y in zip(ri, prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form and rank (= number of nonzero rows)."""
    rows, pivots = _rref_rows(m.field, [list(r) for r in m.entries])
    return Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows)), len(pivots)


def rank(m: Matrix) -> int:
    _, pivots = _rref_rows(m.field, [list(r) for r in m.entries])
    return len(pivots)


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of k^ambient_dim by its RREF basis (rows = basis vectors).

    The RREF basis is the canonical representative: two subspaces are equal
    iff their basis matrices are identical.
    """

    ambient_dim: int
    basis: Matrix  # RREF, no zero rows

    @staticmethod
    def from_vectors(field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(field.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(f"vector length {len(v)} != ambient {ambient_dim}")
        if not vecs:
            return Subspace(ambient_dim, Matrix(field, 0, ambient_dim, ()))
        rows, pivots = _rref_rows(field, vecs)
        keep = tuple(tuple(rows[i]) for i in range(len(pivots)))
        return Subspace(ambient_dim, Matrix(field, len(pivots), ambient_dim, keep))

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix(field, 0, ambient_dim, ()))

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    def pivot_columns(self) -> tuple[int, ...]:
        zero = self.field.zero
        pivots = []
        for row in self.basis.entries:
            for c, x in enumerate(row):
                if x != zero:
                    pivots.append(c)
                    break
        return tuple(pivots)

    def contains(self, vector: Sequence) -> bool:
        """Membership by reducing against the RREF basis."""
        f = self.field
        v = [f.coerce(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector/ambient mismatch")
        zero, sub, mul = f.zero, f.sub, f.mul
        for row, p in zip(self.basis.entries, self.pivot_columns()):
            c = v[p]
            if c != zero:
                v = [sub(x, mul(c, y)) for x, y in zip(v, row)]
        return all(x == zero for x in v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis.entries)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.entries))


def kernel_basis(m: Matrix) -> Subspace:
    """Null space of m as a subspace of the domain k^cols."""
    f = m.field
    zero, one, neg = f.zero, f.one, f.neg
    rows, pivots = _rref_rows(f, [list(r) for r in m.entries])
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [zero] * m.cols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = neg(rows[r][fc])
        basis.append(v)
    return Subspace.from_vectors(f, m.cols, basis)


def image_basis(m: Matrix) -> Subspace:
    """Column space of m as a subspace of the codomain k^rows."""
    return Subspace.from_vectors(m.field, m.rows, [m.column(c) for c in range(m.cols)])


def row_space(m: Matrix) -> Subspace:
    return Subspace.from_vectors(m.field, m.cols, [m.row(r) for r in range(m.rows)])


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.from_vectors(u.field, u.ambient_dim,
                                 list(u.basis.entries) + list(v.basis.entries))


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    """Zassenhaus: RREF of [[U,U],[V,0]]; zero-left rows give the intersection."""
    _check_ambient(u, v)
    f = u.field
    n = u.ambient_dim
    zero = f.zero
    rows = []
    for r in u.basis.entries:
        rows.append(list(r) + list(r))
    for r in v.basis.entries:
        rows.append(list(r) + [zero] * n)
    if not rows:
        return Subspace.zero(f, n)
    reduced, pivots = _rref_rows(f, rows)
    out = []
    for i in range(len(pivots)):
        left = reduced[i][:n]
        if all(x == zero for x in left):
            out.append(reduced[i][n:])
    return Subspace.from_vectors(f, n, out)


def intersect_many(spaces: Sequence[Subspace]) -> Subspace:
    if not spaces:
        raise ValueError("need at least one subspace")
    acc = spaces[0]
    for s in spaces[1:]:
        acc = subspace_intersect(acc, s)
    return acc


def _check_ambient(u: Subspace, v: Subspace):
    same_field(u.field, v.field)
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatchError(
            f"ambient mismatch: {u.ambient_dim} vs {v.ambient_dim}")


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------

def quotient_map(ambient_dim: int, w: Subspace) -> Matrix:
    """Surjective map q: k^n -> k^(n - dim w) with kernel exactly w.

    Deterministic convention: codomain coordinates are the non-pivot columns
    of w's RREF basis; q(v) reads those coordinates after reducing v modulo w.
    """
    if w.ambient_dim != ambient_dim:
        raise DimensionMismatchError("subspace/ambient mismatch")
    f = w.field
    zero, one, neg = f.zero, f.one, f.neg
    pivots = w.pivot_columns()
    pivot_set = set(pivots)
    free = [c for c in range(ambient_dim) if c not in pivot_set]
    rows = []
    for fc in free:
        row = [zero] * ambient_dim
        row[fc] = one
        for r, pc in enumerate(pivots):
            row[pc] = neg(w.basis.entries[r][fc])
        rows.append(tuple(row))
    return Matrix(f, len(free), ambient_dim, tuple(rows))


def quotient_section(ambient_dim: int, w: Subspace) -> Matrix:
    """Section s of quotient_map: s sends unit t to the t-th non-pivot axis."""
    if w.ambient_dim != ambient_dim:
        raise DimensionMismatchError("subspace/ambient mismatch")
    f = w.field
    zero, one = f.zero, f.one
    pivot_set = set(w.pivot_columns())
    free = [c for c in range(ambient_dim) if c not in pivot_set]
    rows = []
    for r in range(ambient_dim):
        row = [zero] * len(free)
        if r in free:
            row[free.index(r)] = one
        rows.append(tuple(row))
    return Matrix(f, ambient_dim, len(free), tuple(rows))


def homology_dim(d_in: Matrix, d_out: Matrix) -> int:
    """dim ker(d_out) - rank(d_in) for consecutive maps with d_out.d_in = 0."""
    same_field(d_in.field, d_out.field)
    if d_out.cols != d_in.rows:
        raise DimensionMismatchError(
            f"middle-space mismatch: d_out expects {d_out.cols}, d_in lands in {d_in.rows}")
    if not d_out.mul(d_in).is_zero():
        raise NotAComplexError("not a complex: composite differential is nonzero", degree=0)
    return (d_out.cols - rank(d_out)) - rank(d_in)
