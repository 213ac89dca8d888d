"""Dense linear algebra over a scalar field (exact or approximate)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DimensionError",
    "SingularMatrixError",
    "Matrix",
    "RankOneDecomposition",
    "SpectrumReport",
    "EchelonBasis",
    "rank",
    "kernel_basis",
    "is_pseudo_reflection",
    "centralizer_dim",
    "verify_semisimple_spectrum",
    "eigenspace_basis",
    "block_assemble",
    "direct_sum",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Immutable-by-convention dense matrix; ``rows`` is a list of lists."""

    __slots__ = ("field", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise DimensionError("ragged matrix rows")

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, field, m: int) -> Matrix:
        zero, one = field.zero(), field.one()
        return cls(field, [[one if i == j else zero for j in range(m)] for i in range(m)])

    @classmethod
    def zeros(cls, field, m: int, n: int | None = None) -> Matrix:
        zero = field.zero()
        return cls(field, [[zero] * (m if n is None else n) for _ in range(m)])

    @classmethod
    def diagonal(cls, field, values) -> Matrix:
        values = [field.coerce(v) for v in values]
        out = cls.zeros(field, len(values))
        for i, v in enumerate(values):
            out.rows[i][i] = v
        return out

    @classmethod
    def scalar(cls, field, value, m: int) -> Matrix:
        return cls.diagonal(field, [value] * m)

    @classmethod
    def from_values(cls, field, rows) -> Matrix:
        """Build from nested sequences of ints, Fractions, field elements or literals."""
        def conv(x):
            return field.parse(x) if isinstance(x, str) else field.coerce(x)
        return cls(field, [[conv(x) for x in row] for row in rows])

    @classmethod
    def from_columns(cls, field, columns) -> Matrix:
        columns = [list(c) for c in columns]
        return cls(field, [list(r) for r in zip(*columns)])

    # -- shape and access -------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def size(self) -> int:
        if self.nrows != self.ncols:
            raise DimensionError(f"matrix is not square: {self.shape}")
        return self.nrows

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def row(self, i: int) -> list:
        return list(self.rows[i])

    def copy(self) -> Matrix:
        return Matrix(self.field, self.rows)

    def transpose(self) -> Matrix:
        return Matrix(self.field, [list(c) for c in zip(*self.rows)])

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check_same(other)
        return Matrix(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows])

    def scale(self, c) -> Matrix:
        c = self.field.coerce(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows])

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        is_zero = self.field.is_zero
        zero = self.field.zero()
        cols = other.ncols
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * cols
            for t, a in enumerate(r):
                if is_zero(a):
                    continue
                brow = orows[t]
                for j in range(cols):
                    b = brow[j]
                    if not is_zero(b):
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, out)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, vector: Sequence) -> list:
        zero = self.field.zero()
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, vector):
                acc = acc + a * x
            out.append(acc)
        return out

    def __pow__(self, exponent: int) -> Matrix:
        base = self
        if exponent < 0:
            base, exponent = self.inverse(), -exponent
        result = Matrix.identity(self.field, self.size)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def inverse(self) -> Matrix:
        m = self.size
        f = self.field
        one, zero = f.one(), f.zero()
        aug = [list(r) + [one if i == j else zero for j in range(m)] for i, r in enumerate(self.rows)]
        for c in range(m):
            p = _choose_pivot(f, aug, c, c)
            if p is None:
                raise SingularMatrixError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            inv = one / aug[c][c]
            aug[c] = [x * inv for x in aug[c]]
            prow = aug[c]
            for i in range(m):
                if i != c and not f.is_zero(aug[i][c]):
                    factor = aug[i][c]
                    aug[i] = [x - factor * y for x, y in zip(aug[i], prow)]
        return Matrix(f, [r[m:] for r in aug])

    def det(self):
        return determinant(self)

    def trace(self):
        acc = self.field.zero()
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    # -- comparison -------------------------------------------------------
    def equals(self, other: Matrix) -> bool:
        if self.shape != other.shape:
            return False
        eq = self.field.eq
        return all(eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def is_zero(self) -> bool:
        z = self.field.is_zero
        return all(z(a) for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self.equals(Matrix.identity(self.field, self.nrows))

    def scalar_value(self):
        """The c with self == c*I, or None."""
        m = self.size
        c = self.rows[0][0]
        return c if self.equals(Matrix.scalar(self.field, c, m)) else None

    # -- rendering --------------------------------------------------------
    def to_literals(self) -> list[list[str]]:
        render = self.field.render
        return [[render(a) for a in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(", ".join(r) for r in self.to_literals())
        return f"Matrix([{body}])"


def _choose_pivot(field, rows, col, start):
    if field.exact:
        for i in range(start, len(rows)):
            if not field.is_zero(rows[i][col]):
                return i
        return None
    best, best_abs = None, field.tol
    for i in range(start, len(rows)):
        a = abs(rows[i][col])
        if a >= best_abs:
            best, best_abs = i, a
    return best


def determinant(M: Matrix):
    """Fraction-free (Bareiss) determinant in exact mode; pivoted LU otherwise."""
    f = M.field
    m = M.size
    a = [list(r) for r in M.rows]
    sign = 1
    if not f.exact:
        det = f.one()
        for c in range(m):
            p = _choose_pivot(f, a, c, c)
            if p is None:
                return f.zero()
            if p != c:
                a[c], a[p] = a[p], a[c]
                sign = -sign
            det = det * a[c][c]
            inv = f.one() / a[c][c]
            for i in range(c + 1, m):
                factor = a[i][c] * inv
                if not f.is_zero(factor):
                    a[i] = [x - factor * y for x, y in zip(a[i], a[c])]
        return det if sign > 0 else -det
    prev = f.one()
    for c in range(m - 1):
        p = _choose_pivot(f, a, c, c)
        if p is None:
            return f.zero()
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        inv_prev = prev.inverse() if prev != 1 else None
        for i in range(c + 1, m):
            aic = a[i][c]
            row_i = a[i]
            row_c = a[c]
            for j in range(c + 1, m):
                val = piv * row_i[j] - aic * row_c[j]
                row_i[j] = val if inv_prev is None else val * inv_prev
            row_i[c] = f.zero()
        prev = piv
    det = a[m - 1][m - 1]
    return det if sign > 0 else -det


def rank(M: Matrix) -> int:
    """Rank over the scalar field.

    Exact mode uses fraction-free elimination: each update is
    ``(p * a_ij - a_ic * a_rj) / p_prev``, which keeps entries as minors
    rather than letting nested quotients pile up.
    """
    f = M.field
    a = [list(r) for r in M.rows]
    nrows, ncols = M.shape
    r = 0
    prev = f.one()
    for c in range(ncols):
        if r == nrows:
            break
        p = _choose_pivot(f, a, c, r)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if f.exact:
            inv_prev = None if prev == 1 else prev.inverse()
            for i in range(r + 1, nrows):
                aic = a[i][c]
                row_i, row_r = a[i], a[r]
                for j in range(c + 1, ncols):
                    val = piv * row_i[j] - aic * row_r[j]
                    row_i[j] = val if inv_prev is None else val * inv_prev
                row_i[c] = f.zero()
            prev = piv
        else:
            inv = f.one() / piv
            for i in range(r + 1, nrows):
                factor = a[i][c] * inv
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _rref(M: Matrix):
    f = M.field
    a = [list(r) for r in M.rows]
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = _choose_pivot(f, a, c, r)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = f.one() / a[r][c]
        a[r] = [x * inv for x in a[r]]
        a[r][c] = f.one()
        for i in range(nrows):
            if i != r and not f.is_zero(a[i][c]):
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
                a[i][c] = f.zero()
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_basis(M: Matrix) -> list[list]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    f = M.field
    reduced, pivots = _rref(M)
    ncols = M.ncols
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for c in free:
        v = [f.zero()] * ncols
        v[c] = f.one()
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[c]
        basis.append(v)
    return basis


def eigenspace_basis(M: Matrix, value) -> list[list]:
    """Canonical eigenspace basis: reduced echelon form of the eigenvectors.

    Each vector has its first nonzero coordinate equal to 1, and vectors
    are ordered by the position of that coordinate.
    """
    f = M.field
    shifted = M - Matrix.scalar(f, value, M.size)
    vectors = kernel_basis(shifted)
    if not vectors:
        return []
    reduced, _ = _rref(Matrix(f, vectors))
    return [list(r) for r in reduced]


@dataclass(frozen=True)
class RankOneDecomposition:
    """``M = I - u * w`` where ``w`` is the row ``e_index`` of I, or ``v``."""

    u: tuple
    special: object
    e: int | None = None
    v: tuple | None = None

    def row(self, field) -> list:
        if self.e is not None:
            w = [field.zero()] * len(self.u)
            w[self.e] = field.one()
            return w
        return list(self.v)

    def matrix(self, field) -> Matrix:
        m = len(self.u)
        w = self.row(field)
        out = Matrix.identity(field, m)
        for i in range(m):
            for j in range(m):
                out.rows[i][j] = out.rows[i][j] - self.u[i] * w[j]
        return out

    @property
    def standard(self) -> bool:
        return self.e is not None


def is_pseudo_reflection(M: Matrix) -> RankOneDecomposition | None:
    f = M.field
    m = M.size
    det = M.det()
    if f.is_zero(det):
        raise SingularMatrixError("pseudo-reflection test needs an invertible matrix")
    D = M - Matrix.identity(f, m)
    if rank(D) != 1 or f.eq(det, f.one()):
        return None
    nonzero_cols = [j for j in range(m) if any(not f.is_zero(D.rows[i][j]) for i in range(m))]
    if len(nonzero_cols) == 1:
        e = nonzero_cols[0]
        u = tuple(-x for x in D.column(e))
        special = f.one() - u[e]
        return RankOneDecomposition(u=u, special=special, e=e)
    j0 = nonzero_cols[0]
    col = D.column(j0)
    r0 = next(i for i in range(m) if not f.is_zero(col[i]))
    pivot_inv = f.one() / col[r0]
    u = tuple(-x for x in col)
    v = tuple(x * pivot_inv for x in D.rows[r0])
    special = f.one()
    for a, b in zip(u, v):
        special = special - a * b
    return RankOneDecomposition(u=u, special=special, v=v)


class EchelonBasis:
    """Incremental row echelon basis of sparse vectors (dicts column -> value).

    Each stored row is normalized so its leading entry is 1.  ``add``
    reduces an incoming vector against the stored rows and keeps the
    remainder when it is nonzero.
    """

    def __init__(self, field):
        self.field = field
        self.pivots: dict[int, dict] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vector: dict) -> dict:
        f = self.field
        vec = {c: x for c, x in vector.items() if not f.is_zero(x)}
        pivots = self.pivots
        while vec:
            hits = [c for c in vec if c in pivots]
            if not hits:
                break
            c = min(hits)
            coef = vec[c]
            for j, x in pivots[c].items():
                y = vec.get(j)
                val = -(coef * x) if y is None else y - coef * x
                if f.is_zero(val):
                    vec.pop(j, None)
                else:
                    vec[j] = val
            vec.pop(c, None)
        return vec

    def add(self, vector: dict) -> bool:
        vec = self.reduce(vector)
        if not vec:
            return False
        c = min(vec)
        inv = self.field.one() / vec[c]
        row = {j: x * inv for j, x in vec.items()}
        row[c] = self.field.one()
        self.pivots[c] = row
        return True


def sylvester_rows(M: Matrix) -> list[dict]:
    """Rows of the map B -> MB - BM in the basis B[t][j] -> index t*m + j."""
    f = M.field
    m = M.size
    rows = []
    for i in range(m):
        for j in range(m):
            row: dict = {}
            for t in range(m):
                a = M.rows[i][t]
                if not f.is_zero(a):
                    key = t * m + j
                    row[key] = row[key] + a if key in row else a
                b = M.rows[t][j]
                if not f.is_zero(b):
                    key = i * m + t
                    row[key] = row[key] - b if key in row else -b
            rows.append(row)
    return rows


def _pivot_cost(field, x):
    if field.exact:
        return x.height()
    return -abs(x)


def sparse_rank(field, rows: Iterable[dict]) -> int:
    """Rank of a sparse matrix given as row dicts (column -> value).

    Pivots are chosen greedily: cheapest entry first (roots of unity cost
    nothing), ties broken by the Markowitz fill-in estimate.  Keeping
    pivots small keeps coefficient growth in check.
    """
    is_zero = field.is_zero
    live = {}
    col_rows: dict = {}
    for idx, row in enumerate(rows):
        row = {c: x for c, x in row.items() if not is_zero(x)}
        if row:
            live[idx] = row
            for c in row:
                col_rows.setdefault(c, set()).add(idx)
    r = 0
    while live:
        best, best_key = None, None
        for idx, row in live.items():
            rlen = len(row) - 1
            for c, x in row.items():
                key = (_pivot_cost(field, x), rlen * (len(col_rows[c]) - 1))
                if best_key is None or key < best_key:
                    best, best_key = (idx, c), key
        pidx, pc = best
        prow = live.pop(pidx)
        for c in prow:
            col_rows[c].discard(pidx)
        inv = field.one() / prow[pc]
        for idx in list(col_rows[pc]):
            row = live[idx]
            factor = row[pc] * inv
            for c, x in prow.items():
                if c == pc:
                    continue
                val = row.get(c)
                new = -(factor * x) if val is None else val - factor * x
                if is_zero(new):
                    if val is not None:
                        del row[c]
                        col_rows[c].discard(idx)
                else:
                    if val is None:
                        col_rows[c].add(idx)
                    row[c] = new
            del row[pc]
            col_rows[pc].discard(idx)
            if not row:
                del live[idx]
        r += 1
    return r


def centralizer_dim(M: Matrix) -> int:
    """dim {B : MB = BM} = m^2 - rank of the Sylvester operator."""
    m = M.size
    return m * m - sparse_rank(M.field, sylvester_rows(M))


@dataclass
class SpectrumReport:
    ok: bool
    annihilated: bool
    kernel_dims: list
    expected: list

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "annihilated": self.annihilated,
                "kernel_dims": self.kernel_dims, "expected": self.expected}


def verify_semisimple_spectrum(M: Matrix, spectrum: Iterable) -> SpectrumReport:
    """Check that M is diagonalizable with exactly the given eigenvalues.

    ``spectrum`` is a sequence of ``(eigenvalue, multiplicity)`` pairs with
    distinct eigenvalues.  Passing means the product of ``M - value*I``
    vanishes and each eigenspace has the claimed dimension.
    """
    f = M.field
    m = M.size
    spectrum = [(f.coerce(v), int(d)) for v, d in spectrum]
    if sum(d for _, d in spectrum) != m:
        raise DimensionError("multiplicities do not sum to the matrix size")
    values = [v for v, _ in spectrum]
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if f.eq(values[i], values[j]):
                raise ValueError("claimed eigenvalues must be pairwise distinct")
    I = Matrix.identity(f, m)
    product = I
    dims = []
    for v, _ in spectrum:
        shifted = M - I.scale(v)
        product = product * shifted
        dims.append(m - rank(shifted))
    annihilated = product.is_zero()
    expected = [d for _, d in spectrum]
    return SpectrumReport(ok=annihilated and dims == expected, annihilated=annihilated,
                          kernel_dims=dims, expected=expected)


def block_assemble(field, grid, sizes: Sequence[int] | None = None) -> Matrix:
    """Assemble a square block matrix.

    ``grid`` is a list of block rows.  Each entry is a Matrix, ``None``
    (zero block) or a scalar ``c`` (meaning ``c`` times the identity block).
    Block sizes are inferred from Matrix entries unless ``sizes`` is given.
    """
    nb = len(grid)
    if any(len(row) != nb for row in grid):
        raise DimensionError("block grid must be square")
    heights: list = [None] * nb
    widths: list = [None] * nb
    if sizes is not None:
        if len(sizes) != nb:
            raise DimensionError("sizes length does not match the grid")
        heights, widths = list(sizes), list(sizes)
    for bi, row in enumerate(grid):
        for bj, blk in enumerate(row):
            if isinstance(blk, Matrix):
                h, w = blk.shape
                if heights[bi] not in (None, h) or widths[bj] not in (None, w):
                    raise DimensionError(f"block ({bi},{bj}) has inconsistent shape {blk.shape}")
                heights[bi], widths[bj] = h, w
    for i in range(nb):
        if heights[i] is None and widths[i] is not None:
            heights[i] = widths[i]
        if widths[i] is None and heights[i] is not None:
            widths[i] = heights[i]
        if heights[i] is None:
            raise DimensionError(f"cannot infer size of block row {i}")
    if sum(heights) != sum(widths):
        raise DimensionError("assembled matrix would not be square")
    out = Matrix.zeros(field, sum(heights), sum(widths))
    r0 = 0
    for bi, row in enumerate(grid):
        c0 = 0
        for bj, blk in enumerate(row):
            if isinstance(blk, Matrix):
                for i in range(heights[bi]):
                    out.rows[r0 + i][c0:c0 + widths[bj]] = blk.rows[i]
            elif blk is not None:
                if heights[bi] != widths[bj]:
                    raise DimensionError(f"scalar block ({bi},{bj}) must be square")
                c = field.coerce(blk)
                for i in range(heights[bi]):
                    out.rows[r0 + i][c0 + i] = c
            c0 += widths[bj]
        r0 += heights[bi]
    return out


def direct_sum(*blocks: Matrix) -> Matrix:
    field = blocks[0].field
    grid = [[blk if i == j else None for j in range(len(blocks))] for i, blk in enumerate(blocks)]
    return block_assemble(field, grid)
