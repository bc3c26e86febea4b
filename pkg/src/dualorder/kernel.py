"""Exact rational dense matrices.

Every entry is a :class:`fractions.Fraction`, so rank, equality and the
generalized inverses below are exact; no tolerance exists anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    IndexNotOne,
    InternalVerificationFailure,
    NotSquare,
    ShapeMismatch,
    SingularMatrix,
)

Rational = Fraction
Scalar = Union[int, Fraction, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_rational(x: Scalar) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: a float literal is already an approximation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact entry")


def _common_denominator(rows: tuple[tuple[Fraction, ...], ...]) -> tuple[int, list[list[int]]]:
    """Common denominator d and the integer rows d * rows."""
    d = 1
    for r in rows:
        for x in r:
            q = x.denominator
            if q != 1:
                d = math.lcm(d, q)
    if d == 1:
        return 1, [[x.numerator for x in r] for r in rows]
    return d, [[x.numerator * (d // x.denominator) for x in r] for r in rows]


class Matrix:
    """Immutable m x n matrix over Q.

    Construct with :meth:`from_rows`, :meth:`zeros`, :meth:`identity` or
    :meth:`block`. Supports ``+``, ``-``, ``@`` (and ``*`` by a scalar),
    ``.T``, equality and hashing.
    """

    __slots__ = ("_rows", "_nrows", "_ncols", "_hash")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence[Fraction]]):
        # Trusted constructor: data must already be tuples of Fractions.
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ShapeMismatch(f"data does not match declared shape {rows}x{cols}")
        init = object.__setattr__
        init(self, "_nrows", rows)
        init(self, "_ncols", cols)
        init(self, "_rows", tuple(tuple(r) for r in data))
        init(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Matrix is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Scalar]], cols: int | None = None) -> Matrix:
        data = [tuple(to_rational(x) for x in row) for row in rows]
        if not data:
            return cls(0, cols or 0, [])
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ShapeMismatch("rows have unequal lengths")
        if cols is not None and cols != width:
            raise ShapeMismatch(f"expected {cols} columns, got {width}")
        return cls(len(data), width, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        row = (_ZERO,) * cols
        return cls(rows, cols, [row] * rows)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, [tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)])

    @classmethod
    def diag(cls, values: Iterable[Scalar]) -> Matrix:
        vals = [to_rational(v) for v in values]
        n = len(vals)
        return cls(n, n, [tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n)])

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> Matrix:
        """Matrix unit e_ij (zero-based indices)."""
        data = [[_ZERO] * cols for _ in range(rows)]
        data[i][j] = _ONE
        return cls(rows, cols, data)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        """Assemble a block matrix; row heights and column widths must agree."""
        if not blocks or not blocks[0]:
            raise ShapeMismatch("empty block layout")
        ncb = len(blocks[0])
        if any(len(br) != ncb for br in blocks):
            raise ShapeMismatch("block rows have unequal block counts")
        heights = [br[0].nrows for br in blocks]
        widths = [b.ncols for b in blocks[0]]
        for bi, br in enumerate(blocks):
            for bj, b in enumerate(br):
                if b.nrows != heights[bi] or b.ncols != widths[bj]:
                    raise ShapeMismatch(
                        f"block ({bi},{bj}) is {b.nrows}x{b.ncols}, "
                        f"expected {heights[bi]}x{widths[bj]}"
                    )
        data = []
        for bi, br in enumerate(blocks):
            for i in range(heights[bi]):
                row: list[Fraction] = []
                for b in br:
                    row.extend(b._rows[i])
                data.append(tuple(row))
        return cls(sum(heights), sum(widths), data)

    # -- basic accessors ----------------------------------------------------

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._nrows, self._ncols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Row-major entries."""
        return tuple(x for r in self._rows for x in r)

    @property
    def is_square(self) -> bool:
        return self._nrows == self._ncols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        """Rows r0:r1, columns c0:c1 (half-open, zero-based)."""
        if not (0 <= r0 <= r1 <= self._nrows and 0 <= c0 <= c1 <= self._ncols):
            raise ShapeMismatch("submatrix bounds out of range")
        return Matrix(r1 - r0, c1 - c0, [r[c0:c1] for r in self._rows[r0:r1]])

    def is_zero(self) -> bool:
        return all(not x for r in self._rows for x in r)

    # -- arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: Matrix, op: str) -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot {op} {self._nrows}x{self._ncols} and {other._nrows}x{other._ncols}")

    def __add__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other, "add")
        return Matrix(self._nrows, self._ncols,
                      [tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other, "subtract")
        return Matrix(self._nrows, self._ncols,
                      [tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows)])

    def __neg__(self) -> Matrix:
        return Matrix(self._nrows, self._ncols, [tuple(-a for a in r) for r in self._rows])

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self._ncols != other._nrows:
            raise ShapeMismatch(
                f"cannot multiply {self._nrows}x{self._ncols} by {other._nrows}x{other._ncols}"
            )
        # Integer products over a common denominator; one normalization per entry.
        da, a_int = _common_denominator(self._rows)
        db, b_int = _common_denominator(other._rows)
        den = da * db
        cols = [[(k, v) for k, v in enumerate(c) if v] for c in zip(*b_int)] if other._nrows else [[]] * other._ncols
        data = []
        for r in a_int:
            if not any(r):
                data.append((_ZERO,) * other._ncols)
                continue
            data.append(tuple(Fraction(sum(r[k] * v for k, v in c), den) if c else _ZERO for c in cols))
        return Matrix(self._nrows, other._ncols, data)

    def scale(self, s: Scalar) -> Matrix:
        s = to_rational(s)
        return Matrix(self._nrows, self._ncols, [tuple(s * a for a in r) for r in self._rows])

    def __mul__(self, s: Scalar) -> Matrix:
        if isinstance(s, Matrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    @property
    def T(self) -> Matrix:
        if self._nrows == 0:
            return Matrix.zeros(self._ncols, 0)
        return Matrix(self._ncols, self._nrows, list(zip(*self._rows)))

    def transpose(self) -> Matrix:
        return self.T

    def __pow__(self, k: int) -> Matrix:
        if not self.is_square:
            raise NotSquare("matrix power needs a square matrix")
        out = Matrix.identity(self._nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self._nrows, self._ncols, self._rows)))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(_fmt(x) for x in r) + "]" for r in self._rows)
        return f"Matrix({self._nrows}x{self._ncols}, [{body}])"

    def pretty(self) -> str:
        if self._nrows == 0 or self._ncols == 0:
            return f"[] ({self._nrows}x{self._ncols})"
        cells = [[_fmt(x) for x in r] for r in self._rows]
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


RealMatrix = Matrix


@dataclass(frozen=True)
class FullRankFactorization:
    left: Matrix
    right: Matrix
    rank: int


# -- elimination ------------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry in the column, which makes the
    result deterministic.
    """
    a = [list(r) for r in m._rows]
    nr, nc = m.shape
    pivots: list[int] = []
    pr = 0
    for c in range(nc):
        if pr == nr:
            break
        p = next((i for i in range(pr, nr) if a[i][c]), None)
        if p is None:
            continue
        a[pr], a[p] = a[p], a[pr]
        inv = 1 / a[pr][c]
        a[pr] = [x * inv for x in a[pr]]
        prow = a[pr]
        for i in range(nr):
            f = a[i][c]
            if i != pr and f:
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        pr += 1
    return Matrix(nr, nc, a), pivots


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for r in m._rows:
        den = math.lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def rank(m: Matrix) -> int:
    """Rank over Q.

    Rows are cleared of denominators (a rank-preserving scaling) and reduced
    with fraction-free integer elimination, content-normalized per row.
    """
    rows = [r for r in _integer_rows(m) if any(r)]
    nc = m.ncols
    rk = 0
    for c in range(nc):
        if not rows:
            break
        p = next((i for i, r in enumerate(rows) if r[c]), None)
        if p is None:
            continue
        prow = rows.pop(p)
        pv = prow[c]
        rk += 1
        nxt = []
        for r in rows:
            f = r[c]
            if f:
                r = [pv * x - f * y for x, y in zip(r, prow)]
                g = math.gcd(*r)
                if g == 0:
                    continue
                if g > 1:
                    r = [x // g for x in r]
            nxt.append(r)
        rows = nxt
    return rk


def inverse(m: Matrix) -> Matrix:
    """Ordinary inverse by Gauss-Jordan; raises SingularMatrix."""
    if not m.is_square:
        raise NotSquare(f"cannot invert a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    aug = Matrix.block([[m, Matrix.identity(n)]])
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is singular")
    return red.submatrix(0, n, n, 2 * n)


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.nrows


def full_rank_factorization(m: Matrix) -> FullRankFactorization:
    """m = left @ right with left of full column rank, right of full row rank.

    ``right`` holds the nonzero rows of rref(m); ``left`` holds the pivot
    columns of m. A zero matrix yields r = 0 and empty factors.
    """
    red, piv = rref(m)
    r = len(piv)
    right = red.submatrix(0, r, 0, m.ncols)
    if r == 0:
        left = Matrix.zeros(m.nrows, 0)
    else:
        left = Matrix(m.nrows, r, [tuple(row[c] for c in piv) for row in m._rows])
    return FullRankFactorization(left, right, r)


# -- generalized inverses ---------------------------------------------------


def penrose_violations(e: Matrix, x: Matrix) -> list[str]:
    """Names of the Penrose equations that ``x`` fails for ``e``."""
    ex = e @ x
    xe = x @ e
    bad = []
    if ex @ e != e:
        bad.append("EXE = E")
    if xe @ x != x:
        bad.append("XEX = X")
    if ex.T != ex:
        bad.append("(EX)^T = EX")
    if xe.T != xe:
        bad.append("(XE)^T = XE")
    return bad


def moore_penrose(m: Matrix) -> Matrix:
    """Moore-Penrose inverse via a full-rank factorization.

    With m = BC, returns C^T (C C^T)^-1 (B^T B)^-1 B^T, then checks all four
    Penrose equations before returning.
    """
    f = full_rank_factorization(m)
    if f.rank == 0:
        return Matrix.zeros(m.ncols, m.nrows)
    b, c = f.left, f.right
    x = c.T @ inverse(c @ c.T) @ inverse(b.T @ b) @ b.T
    bad = penrose_violations(m, x)
    if bad:
        raise InternalVerificationFailure(f"Moore-Penrose result fails {', '.join(bad)}")
    return x


def matrix_index(m: Matrix) -> int:
    """Smallest k >= 0 with rk(m^(k+1)) = rk(m^k); 0 iff m is nonsingular."""
    if not m.is_square:
        raise NotSquare(f"index needs a square matrix, got {m.nrows}x{m.ncols}")
    n = m.nrows
    prev_rank = n
    power = Matrix.identity(n)
    for k in range(n + 1):
        nxt = power @ m
        r = rank(nxt)
        if r == prev_rank:
            return k
        prev_rank = r
        power = nxt
    raise AssertionError("matrix index exceeded dimension")  # pragma: no cover


def is_group_invertible(m: Matrix) -> bool:
    """Membership in R_n^CM: square with rk(m^2) = rk(m)."""
    return m.is_square and rank(m @ m) == rank(m)


def group_inverse(m: Matrix) -> Matrix:
    """Group inverse B (CB)^-2 C for m = BC; needs rk(m^2) = rk(m)."""
    if not m.is_square:
        raise NotSquare(f"group inverse needs a square matrix, got {m.nrows}x{m.ncols}")
    f = full_rank_factorization(m)
    if f.rank == 0:
        return Matrix.zeros(m.nrows, m.ncols)
    b, c = f.left, f.right
    cb = c @ b
    if rank(cb) != f.rank:
        raise IndexNotOne(f"rk(E^2) = {rank(m @ m)} != rk(E) = {f.rank}; E is not group invertible")
    cbi = inverse(cb)
    x = b @ cbi @ cbi @ c
    if m @ x @ m != m or x @ m @ x != x or m @ x != x @ m:
        raise InternalVerificationFailure("group inverse fails its defining equations")
    return x
