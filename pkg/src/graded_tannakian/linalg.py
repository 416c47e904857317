"""Exact linear algebra over the rationals.

Every routine here is exact; there is no floating point anywhere in the
package.  Bases are returned in one canonical convention: kernel vectors
come from the reduced row echelon form with pivots chosen left to right and
one vector per free variable (free variable set to 1, increasing index).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

try:  # compiled kernel when the extension was built
    from . import _kernels as _k
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build
    from . import _kernels_py as _k
    BACKEND = "python"

from . import _kernels_py

ZERO = Fraction(0)
ONE = Fraction(1)


def q(x) -> Fraction:
    """Parse a scalar (int, Fraction or ``"3/2"`` string) into a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QMatrix:
    """Immutable dense rational matrix."""

    __slots__ = ("nrows", "ncols", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: Optional[int] = None):
        rs = tuple(tuple(q(x) for x in r) for r in rows)
        if ncols is None:
            if not rs:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rs[0])
        for r in rs:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.nrows = len(rs)
        self.ncols = ncols
        self.rows = rs
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, m: int, n: int) -> "QMatrix":
        return cls._raw(tuple((ZERO,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "QMatrix":
        cols = [tuple(q(x) for x in c) for c in cols]
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)),
                        len(cols))

    @classmethod
    def _raw(cls, rows, ncols):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    # basic protocol -------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"QMatrix{self.nrows}x{self.ncols}[{body}]"

    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            x == (ONE if i == j else ZERO)
            for i, r in enumerate(self.rows) for j, x in enumerate(r))

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return QMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                  for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return QMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                  for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "QMatrix":
        c = q(c)
        return QMatrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return QMatrix._raw(tuple(_k.matmul(self.rows, other.columns())), other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        nz = [(k, q(v)) for k, v in enumerate(vec) if v]
        return tuple(sum((r[k] * v for k, v in nz), ZERO) for r in self.rows)

    @property
    def T(self) -> "QMatrix":
        return QMatrix._raw(tuple(zip(*self.rows)) if self.nrows else
                            tuple(() for _ in range(self.ncols)), self.nrows)

    def kron(self, other: "QMatrix") -> "QMatrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append(tuple(a * b for a in r for b in s))
        return QMatrix._raw(tuple(rows), self.ncols * other.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
                            len(cols))

    # linear algebra -----------------------------------------------------------
    def rref(self):
        red, piv = _k.rref([list(r) for r in self.rows], self.ncols)
        return QMatrix._raw(tuple(tuple(r) for r in red), self.ncols), tuple(piv)

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> "QMatrix":
        return kernel_basis(self)

    def inverse(self) -> "QMatrix":
        return inverse(self)


def hstack(blocks: Sequence[QMatrix], nrows: Optional[int] = None) -> QMatrix:
    if not blocks:
        return QMatrix.zeros(nrows or 0, 0)
    m = blocks[0].nrows
    for b in blocks:
        if b.nrows != m:
            raise ValueError("hstack row mismatch")
    rows = tuple(tuple(x for b in blocks for x in b.rows[i]) for i in range(m))
    return QMatrix._raw(rows, sum(b.ncols for b in blocks))


def vstack(blocks: Sequence[QMatrix], ncols: Optional[int] = None) -> QMatrix:
    if not blocks:
        return QMatrix.zeros(0, ncols or 0)
    n = blocks[0].ncols
    for b in blocks:
        if b.ncols != n:
            raise ValueError("vstack column mismatch")
    return QMatrix._raw(tuple(r for b in blocks for r in b.rows), n)


def block_matrix(grid: Sequence[Sequence[QMatrix]]) -> QMatrix:
    return vstack([hstack(list(row)) for row in grid])


def block_diag(blocks: Sequence[QMatrix]) -> QMatrix:
    n = sum(b.ncols for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((ZERO,) * off + r + (ZERO,) * (n - off - b.ncols))
        off += b.ncols
    return QMatrix._raw(tuple(rows), n)


def rank(m: QMatrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return len(_k.rref([list(r) for r in m.rows], m.ncols)[1])


def kernel_basis(m: QMatrix) -> QMatrix:
    """Columns spanning the null space, canonical (free variable = 1)."""
    n = m.ncols
    if m.nrows == 0:
        return QMatrix.identity(n)
    red, piv = _k.rref([list(r) for r in m.rows], n)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    cols = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(red, piv):
            v[p] = -r[f]
        cols.append(v)
    return QMatrix.from_columns(cols, n)


def solve(m: QMatrix, b: Sequence) -> Optional[tuple]:
    """Canonical particular solution of ``m x = b`` (free variables 0), or None."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has {len(b)} entries, matrix has {m.nrows} rows")
    n = m.ncols
    aug = [list(r) + [q(x)] for r, x in zip(m.rows, b)]
    red, piv = _k.rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for r, p in zip(red, piv):
        x[p] = r[n]
    return tuple(x)


def solve_matrix(m: QMatrix, b: QMatrix) -> Optional[QMatrix]:
    """Solve ``m X = b`` column by column; None if any column is inconsistent."""
    cols = []
    for c in b.columns():
        x = solve(m, c)
        if x is None:
            return None
        cols.append(x)
    return QMatrix.from_columns(cols, m.ncols)


def inverse(m: QMatrix) -> QMatrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    if n == 0:
        return m
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)]
           for i, r in enumerate(m.rows)]
    red, piv = _k.rref(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return QMatrix._raw(tuple(tuple(r[n:]) for r in red), n)


def is_invertible(m: QMatrix) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


def row_space(vectors: Sequence[Sequence], n: int):
    """rref of the span of ``vectors`` (each of length ``n``)."""
    red, piv = _k.rref([[q(x) for x in v] for v in vectors], n)
    return red, list(piv)


def reduce_vector(vec, red, piv):
    return _k.reduce_vector([q(x) for x in vec], red, piv)


class Quotient:
    """Canonical coordinates on ``span(ambient) / span(sub)``.

    ``ambient`` is a list of column vectors in ``Q^n`` (assumed independent,
    e.g. a kernel basis); ``sub`` vectors must lie in their span.  The
    quotient basis is the set of ambient-coordinate unit vectors at non-pivot
    positions of the rref of ``sub`` (expressed in ambient coordinates).
    """

    def __init__(self, ambient: Sequence[Sequence], sub: Sequence[Sequence], n: int):
        self.n = n
        self.ambient = [tuple(q(x) for x in v) for v in ambient]
        self.k = len(self.ambient)
        amb = QMatrix.from_columns(self.ambient, n) if self.k else QMatrix.zeros(n, 0)
        self._amb = amb
        sub_coords = []
        for v in sub:
            c = solve(amb, v)
            if c is None:
                raise ValueError("subspace vector outside ambient span")
            sub_coords.append(c)
        self.sub_red, self.sub_piv = row_space(sub_coords, self.k) if sub_coords else ([], [])
        pivset = set(self.sub_piv)
        self.free = [j for j in range(self.k) if j not in pivset]
        self.dim = len(self.free)

    def _left_inverse(self):
        # k independent rows of the ambient matrix give an invertible block
        li = self.__dict__.get("_li")
        if li is None:
            _, rows = row_space(self.ambient, self.n)
            block = QMatrix([[v[r] for v in self.ambient] for r in rows], self.k)
            li = self._li = (rows, inverse(block))
        return li

    def ambient_coords(self, vec) -> Optional[tuple]:
        if self.k == 0:
            return () if all(not x for x in vec) else None
        rows, inv = self._left_inverse()
        c = inv.apply([vec[r] for r in rows])
        acc = [ZERO] * self.n
        for x, v in zip(c, self.ambient):
            if x:
                for i, a in enumerate(v):
                    if a:
                        acc[i] += x * a
        if any(a != b for a, b in zip(acc, vec)):
            return None
        return c

    def coords(self, vec) -> tuple:
        """Quotient coordinates of ``vec`` (must lie in the ambient span)."""
        c = self.ambient_coords(vec)
        if c is None:
            raise ValueError("vector outside ambient span")
        return self.coords_from_ambient(c)

    def coords_from_ambient(self, c) -> tuple:
        r = reduce_vector(c, self.sub_red, self.sub_piv) if self.sub_red else list(c)
        return tuple(r[j] for j in self.free)

    def representative(self, i: int) -> tuple:
        """Ambient vector (in ``Q^n``) representing the i-th quotient basis element."""
        return self.ambient[self.free[i]]

    def representatives(self):
        return [self.representative(i) for i in range(self.dim)]


def cokernel_projection(m: QMatrix) -> QMatrix:
    """Canonical projection ``Q^rows -> coker(m)`` as a matrix."""
    n = m.nrows
    quot = Quotient([tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)],
                    m.columns(), n)
    cols = [quot.coords_from_ambient(tuple(ONE if i == j else ZERO for i in range(n)))
            for j in range(n)]
    return QMatrix.from_columns(cols, quot.dim) if n else QMatrix.zeros(0, 0)


def image_basis(m: QMatrix) -> QMatrix:
    """Columns: canonical basis of the column space (rref rows of m^T)."""
    red, _ = row_space(m.columns(), m.nrows)
    return QMatrix.from_columns(red, m.nrows) if red else QMatrix.zeros(m.nrows, 0)


__all__ = [
    "QMatrix", "Quotient", "rank", "kernel_basis", "solve", "solve_matrix", "inverse",
    "is_invertible", "hstack", "vstack", "block_matrix", "block_diag", "row_space",
    "reduce_vector", "cokernel_projection", "image_basis", "q", "BACKEND", "_kernels_py",
]
