"""Matrices and subspaces over a finite field.

Vectors are tuples of field element codes. Linear maps act on row vectors,
``x -> x @ M``, so the rows of a matrix are the images of the standard basis.
The dual space is identified with the same coordinate space through the dot
product, which turns annihilators into null spaces and contragredients into
inverse transposes.

Over GF(2) rows are packed into Python ints and eliminated word-parallel; the
generic path handles every other field.
"""

from __future__ import annotations

from functools import cached_property

from .errors import DimensionError
from .gf import FieldSpec


# -- GF(2) bit-packed kernels ---------------------------------------------

def pack(row) -> int:
    """Pack a 0/1 tuple; column 0 becomes the most significant bit."""
    v = 0
    for x in row:
        v = (v << 1) | x
    return v


def unpack(v: int, n: int) -> tuple:
    return tuple((v >> (n - 1 - j)) & 1 for j in range(n))


def gf2_rank(rows) -> int:
    """Rank of packed GF(2) rows."""
    basis = []  # kept reduced by leading bit
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def gf2_rref(rows, n):
    """Reduced row echelon form of packed rows; returns (rows, pivots)."""
    work = [r for r in rows if r]
    out = []
    for col in range(n):
        bit = 1 << (n - 1 - col)
        idx = next((i for i, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        work = [r ^ piv if r & bit else r for r in work]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        work = [r for r in work if r]
    pivots = tuple(n - r.bit_length() for r in out)
    return out, pivots


# -- generic kernels --------------------------------------------------------

def _rref_generic(F: FieldSpec, rows, n):
    mul, add, neg, inv = F.mul, F.add, F.neg, F.inv
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            s = inv(lead)
            m[r] = [mul(s, x) for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg(m[i][c])
                row = m[i]
                m[i] = [add(x, mul(f, y)) if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], tuple(pivots)


def rref_rows(F: FieldSpec, rows, n):
    """RREF of a list of vectors of length n: (nonzero rows, pivot columns)."""
    if F.q == 2:
        packed, pivots = gf2_rref([pack(r) for r in rows], n)
        return [unpack(v, n) for v in packed], pivots
    return _rref_generic(F, rows, n)


def rank_rows(F: FieldSpec, rows, n) -> int:
    if F.q == 2:
        return gf2_rank([pack(r) for r in rows])
    return len(_rref_generic(F, rows, n)[1])


def vec_add(F, x, y):
    add = F.add
    return tuple(add(a, b) for a, b in zip(x, y))


def vec_scale(F, c, x):
    mul = F.mul
    return tuple(mul(c, a) for a in x)


def vec_combination(F, coeffs, rows, n):
    """sum_i coeffs[i] * rows[i]."""
    acc = [0] * n
    add, mul = F.add, F.mul
    for c, row in zip(coeffs, rows):
        if c:
            for j, y in enumerate(row):
                if y:
                    acc[j] = add(acc[j], mul(c, y))
    return tuple(acc)


def dot(F, x, y):
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def all_vectors(F: FieldSpec, n: int):
    """Every vector of F^n, in lexicographic order of the codes."""
    if n == 0:
        yield ()
        return
    for head in range(F.q):
        for tail in all_vectors(F, n - 1):
            yield (head,) + tail


def normalize(F: FieldSpec, x) -> tuple:
    """Scale x so its first nonzero coordinate is 1."""
    for a in x:
        if a:
            return vec_scale(F, F.inv(a), x) if a != 1 else tuple(x)
    return tuple(x)


class Matrix:
    """A dense matrix over a finite field."""

    __slots__ = ("field", "rows", "nrows", "ncols", "__dict__")

    def __init__(self, field: FieldSpec, rows, ncols=None):
        self.field = field
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise DimensionError("ncols is required for an empty matrix")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise DimensionError("ragged matrix rows")
            for x in r:
                if not 0 <= x < field.q:
                    raise DimensionError(f"{x} is not an element of {field.header()}")

    @classmethod
    def identity(cls, field, n):
        return cls(field, [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)], n)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, [(0,) * ncols for _ in range(nrows)], ncols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.field.header()}, {self.nrows}x{self.ncols}, {list(self.rows)})"

    def __getitem__(self, idx):
        return self.rows[idx]

    @cached_property
    def _rref(self):
        return rref_rows(self.field, self.rows, self.ncols)

    def rref(self):
        """(RREF matrix, rank, pivot columns). The RREF keeps the zero rows."""
        rows, pivots = self._rref
        full = list(rows) + [(0,) * self.ncols] * (self.nrows - len(rows))
        return Matrix(self.field, full, self.ncols), len(pivots), pivots

    def rank(self) -> int:
        return len(self._rref[1])

    def transpose(self):
        # row rank = column rank and (AB)^T = B^T A^T both use commutativity
        cols = [tuple(r[j] for r in self.rows) for j in range(self.ncols)]
        return Matrix(self.field, cols, self.nrows)

    def apply(self, x) -> tuple:
        """Row vector times matrix."""
        if len(x) != self.nrows:
            raise DimensionError(f"vector of length {len(x)} for a {self.nrows}-row matrix")
        return vec_combination(self.field, x, self.rows, self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise DimensionError("incompatible matrices")
        return Matrix(self.field, [other.apply(r) for r in self.rows], other.ncols)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        n = self.nrows
        if not self.is_invertible():
            raise DimensionError("matrix is singular")
        F = self.field
        aug = [r + tuple(1 if i == j else 0 for j in range(n)) for i, r in enumerate(self.rows)]
        red, pivots = rref_rows(F, aug, 2 * n)
        return Matrix(F, [r[n:] for r in red], n)

    def row_space(self) -> "Subspace":
        return Subspace.span(self.field, self.ncols, self.rows)


class Subspace:
    """A subspace of F^n held by its reduced row echelon basis.

    The RREF basis is canonical, so two Subspace values are equal exactly
    when they are the same subspace.
    """

    __slots__ = ("field", "n", "rows", "pivots", "_packed", "__weakref__")

    def __init__(self, field: FieldSpec, n: int, rows, pivots):
        self.field = field
        self.n = n
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self._packed = None

    @classmethod
    def span(cls, field: FieldSpec, n: int, vectors) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise DimensionError(f"vector of length {len(v)} in F^{n}")
        rows, pivots = rref_rows(field, vectors, n)
        return cls(field, n, rows, pivots)

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, (), ())

    @classmethod
    def whole(cls, field, n):
        return cls(field, n, [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)],
                   range(n))

    @classmethod
    def coordinate(cls, field, n, indices):
        """span{e_i : i in indices} (0-based)."""
        return cls.span(field, n, [tuple(1 if j == i else 0 for j in range(n)) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def packed(self):
        if self._packed is None:
            self._packed = [pack(r) for r in self.rows]
        return self._packed

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.n == other.n
                and self.rows == other.rows and self.field == other.field)

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim}, rows={list(self.rows)})"

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, self.rows, self.n)

    def _check(self, other):
        if self.n != other.n or self.field != other.field:
            raise DimensionError("subspaces live in different ambient spaces")

    def contains_vector(self, x) -> bool:
        if not any(x):
            return True
        return rank_rows(self.field, list(self.rows) + [tuple(x)], self.n) == self.dim

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim > other.dim:
            return False
        return sum_dim(self, other) == other.dim

    def __le__(self, other):
        return self.issubset(other)

    def coords(self, x) -> tuple:
        """Coordinates of x in the RREF basis (x must lie in the subspace)."""
        c = tuple(x[p] for p in self.pivots)
        if vec_combination(self.field, c, self.rows, self.n) != tuple(x):
            raise DimensionError(f"{x} is not in the subspace")
        return c

    def from_coords(self, c) -> tuple:
        return vec_combination(self.field, c, self.rows, self.n)

    def vectors(self):
        """All vectors of the subspace."""
        for c in all_vectors(self.field, self.dim):
            yield self.from_coords(c)

    def representative(self) -> tuple:
        """The normalized spanning vector of a 1-dimensional subspace."""
        if self.dim != 1:
            raise DimensionError("representative() needs a point (dimension 1)")
        return self.rows[0]


def point(field, vector) -> Subspace:
    return Subspace.span(field, len(vector), [vector])


def sum_dim(X: Subspace, Y: Subspace) -> int:
    if X.field.q == 2:
        return gf2_rank(X.packed + Y.packed)
    return rank_rows(X.field, list(X.rows) + list(Y.rows), X.n)


def subspace_sum(X: Subspace, Y: Subspace) -> Subspace:
    X._check(Y)
    return Subspace.span(X.field, X.n, list(X.rows) + list(Y.rows))


def subspace_sum_many(field, n, subspaces) -> Subspace:
    rows = [r for S in subspaces for r in S.rows]
    return Subspace.span(field, n, rows)


def intersection_dim(X: Subspace, Y: Subspace) -> int:
    X._check(Y)
    return X.dim + Y.dim - sum_dim(X, Y)


def subspace_intersection(X: Subspace, Y: Subspace) -> Subspace:
    """X ∩ Y, computed as (X^0 + Y^0)^0."""
    X._check(Y)
    if X.dim == 0 or Y.dim == 0:
        return Subspace.zero(X.field, X.n)
    return annihilator(subspace_sum(annihilator(X), annihilator(Y)))


def nullspace_rows(F: FieldSpec, rows, pivots, n):
    """Basis of {y : r . y = 0 for every row r} from RREF rows."""
    pivset = set(pivots)
    out = []
    for f in range(n):
        if f in pivset:
            continue
        y = [0] * n
        y[f] = 1
        for r, p in zip(rows, pivots):
            if r[f]:
                y[p] = F.neg(r[f])
        out.append(tuple(y))
    return out


def annihilator(X: Subspace) -> Subspace:
    """X^0 inside the dual space, identified with F^n by the dot product.

    The dot product is a bilinear form only because F is commutative.
    """
    return Subspace.span(X.field, X.n, nullspace_rows(X.field, X.rows, X.pivots, X.n))


def solve_combination(F: FieldSpec, rows, target, n):
    """Coefficients c with sum c_i rows[i] = target, or None.

    ``rows`` must be linearly independent.
    """
    k = len(rows)
    # columns of the augmented system: unknowns c_i, equations per coordinate
    aug = [tuple(rows[i][j] for i in range(k)) + (target[j],) for j in range(n)]
    red, pivots = rref_rows(F, aug, k + 1)
    if k in pivots:
        return None
    c = [0] * k
    for r, p in zip(red, pivots):
        c[p] = r[k]
    return tuple(c)


class QuotientStructure:
    """The quotient V/S with a fixed complement and coordinate maps.

    The complement is spanned by the standard basis vectors at the non-pivot
    columns of S's RREF basis. ``project`` sends an ambient vector to its coordinates (length
    n - dim S) along that complement; ``lift`` is the matching section.
    """

    def __init__(self, S: Subspace):
        F, n = S.field, S.n
        self.field = F
        self.S = S
        self.ambient = n
        pivset = set(S.pivots)
        # e_j for the non-pivot columns j of S complete the RREF basis of S
        self.complement_cols = tuple(j for j in range(n) if j not in pivset)
        self.complement_basis = Matrix(
            F, [tuple(1 if c == j else 0 for c in range(n)) for j in self.complement_cols], n)
        self.dim = len(self.complement_cols)

    def project(self, x) -> tuple:
        """Coordinates of x modulo S."""
        F = self.field
        x = list(x)
        # reduce x by the RREF basis of S: clears the pivot columns
        for r, p in zip(self.S.rows, self.S.pivots):
            if x[p]:
                c = F.neg(x[p])
                x = [F.add(a, F.mul(c, b)) for a, b in zip(x, r)]
        return tuple(x[j] for j in self.complement_cols)

    def lift(self, y) -> tuple:
        x = [0] * self.ambient
        for j, a in zip(self.complement_cols, y):
            x[j] = a
        return tuple(x)

    def project_subspace(self, W: Subspace) -> Subspace:
        return Subspace.span(self.field, self.dim, [self.project(r) for r in W.rows])

    def lift_subspace(self, Wbar: Subspace) -> Subspace:
        """π(W̄): the subspace of V containing S that corresponds to W̄."""
        return Subspace.span(self.field, self.ambient,
                             list(self.S.rows) + [self.lift(r) for r in Wbar.rows])


def quotient_make(S: Subspace) -> QuotientStructure:
    return QuotientStructure(S)


def rref(M: Matrix):
    return M.rref()
