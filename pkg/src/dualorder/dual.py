"""Dual matrices E + eps*E0 (eps^2 = 0) and their generalized inverses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import (
    CharacterizationMismatch,
    DggiDoesNotExist,
    DmpgiDoesNotExist,
    IndexNotOne,
    InternalVerificationFailure,
    NotSquare,
    ShapeMismatch,
)
from .kernel import (
    Matrix,
    Scalar,
    group_inverse,
    is_group_invertible,
    moore_penrose,
    rank,
    rref,
)


@dataclass(frozen=True)
class DualMatrix:
    """Dual matrix with standard part ``std`` (E) and dual part ``dual`` (E0)."""

    std: Matrix
    dual: Matrix

    def __post_init__(self) -> None:
        if self.std.shape != self.dual.shape:
            raise ShapeMismatch(f"standard part is {self.std.shape}, dual part is {self.dual.shape}")

    @classmethod
    def real(cls, e: Matrix) -> DualMatrix:
        return cls(e, Matrix.zeros(*e.shape))

    @classmethod
    def from_rows(cls, std, dual) -> DualMatrix:
        return cls(Matrix.from_rows(std), Matrix.from_rows(dual))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DualMatrix:
        z = Matrix.zeros(rows, cols)
        return cls(z, z)

    @classmethod
    def identity(cls, n: int) -> DualMatrix:
        return cls(Matrix.identity(n), Matrix.zeros(n, n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.std.shape

    @property
    def is_square(self) -> bool:
        return self.std.is_square

    def __add__(self, other: DualMatrix) -> DualMatrix:
        return DualMatrix(self.std + other.std, self.dual + other.dual)

    def __sub__(self, other: DualMatrix) -> DualMatrix:
        return DualMatrix(self.std - other.std, self.dual - other.dual)

    def __neg__(self) -> DualMatrix:
        return DualMatrix(-self.std, -self.dual)

    def __matmul__(self, other: DualMatrix) -> DualMatrix:
        # (A + eps A0)(B + eps B0) = AB + eps (A B0 + A0 B)
        return DualMatrix(self.std @ other.std, self.std @ other.dual + self.dual @ other.std)

    def scale(self, s: Scalar) -> DualMatrix:
        return DualMatrix(self.std.scale(s), self.dual.scale(s))

    @property
    def T(self) -> DualMatrix:
        return DualMatrix(self.std.T, self.dual.T)

    def is_zero(self) -> bool:
        return self.std.is_zero() and self.dual.is_zero()

    def __repr__(self) -> str:
        return f"DualMatrix(std={self.std!r}, dual={self.dual!r})"


@dataclass(frozen=True)
class DualRankValue:
    """Rank data of a dual matrix.

    ``block_rank`` is rk[[E0, E], [E, O]]; ``dual_rank`` = block_rank - std_rank.
    """

    block_rank: int
    std_rank: int

    @property
    def dual_rank(self) -> int:
        return self.block_rank - self.std_rank

    def as_dict(self) -> dict[str, int]:
        return {"block_rank": self.block_rank, "std_rank": self.std_rank, "dual_rank": self.dual_rank}


def rank_block(e: DualMatrix) -> Matrix:
    """The 2x2 block matrix [[E0, E], [E, O]]."""
    m, n = e.shape
    return Matrix.block([[e.dual, e.std], [e.std, Matrix.zeros(m, n)]])


def dual_rank(e: DualMatrix) -> DualRankValue:
    return DualRankValue(rank(rank_block(e)), rank(e.std))


def mp_annihilator(e: DualMatrix) -> Matrix:
    """(I - E E^+) E0 (I - E^+ E); zero iff the DMPGI exists."""
    m, n = e.shape
    p = moore_penrose(e.std)
    return (Matrix.identity(m) - e.std @ p) @ e.dual @ (Matrix.identity(n) - p @ e.std)


def dmpgi_exists(e: DualMatrix) -> tuple[bool, DualRankValue]:
    """Decide DMPGI existence by three routes and require agreement.

    Routes: block rank = 2 rk(E); dual rank = rk(E); projector annihilation.
    """
    rv = dual_rank(e)
    by_block = rv.block_rank == 2 * rv.std_rank
    by_dual_rank = rv.dual_rank == rv.std_rank
    by_projector = mp_annihilator(e).is_zero()
    if not (by_block == by_dual_rank == by_projector):
        raise CharacterizationMismatch(
            "DMPGI existence routes disagree",
            routes={"block_rank": by_block, "dual_rank": by_dual_rank, "projector": by_projector},
        )
    return by_block, rv


def mpdgi(e: DualMatrix) -> DualMatrix:
    """E^+ - eps E^+ E0 E^+ (always exists)."""
    p = moore_penrose(e.std)
    return DualMatrix(p, -(p @ e.dual @ p))


def dmpgi_violations(e: DualMatrix, x: DualMatrix) -> list[str]:
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


def dggi_violations(e: DualMatrix, x: DualMatrix) -> list[str]:
    ex = e @ x
    xe = x @ e
    bad = []
    if ex @ e != e:
        bad.append("EXE = E")
    if xe @ x != x:
        bad.append("XEX = X")
    if ex != xe:
        bad.append("EX = XE")
    return bad


def dmpgi(e: DualMatrix) -> DualMatrix:
    """Dual Moore-Penrose generalized inverse.

    The dual part is
    -E^+ E0 E^+ + E^+ E^+T E0^T (I - E E^+) + (I - E^+ E) E0^T E^+T E^+,
    accepted only after exact substitution into all four dual Penrose
    equations.
    """
    ok, rv = dmpgi_exists(e)
    if not ok:
        raise DmpgiDoesNotExist(
            f"rk[[E0,E],[E,O]] = {rv.block_rank} != 2rk(E) = {2 * rv.std_rank}", evidence=rv
        )
    m, n = e.shape
    E, E0 = e.std, e.dual
    p = moore_penrose(E)
    pt = p.T
    x0 = (
        -(p @ E0 @ p)
        + p @ pt @ E0.T @ (Matrix.identity(m) - E @ p)
        + (Matrix.identity(n) - p @ E) @ E0.T @ pt @ p
    )
    x = DualMatrix(p, x0)
    bad = dmpgi_violations(e, x)
    if bad:
        raise InternalVerificationFailure(f"DMPGI candidate fails {', '.join(bad)}")
    return x


def gr_annihilator(e: DualMatrix) -> Matrix:
    """(I - E E^#) E0 (I - E^# E); E must be group invertible."""
    n = e.shape[0]
    g = group_inverse(e.std)
    i = Matrix.identity(n)
    return (i - e.std @ g) @ e.dual @ (i - g @ e.std)


def dual_index_one(e: DualMatrix) -> bool:
    """Membership in D_n^CM: rk(E^2) = rk(E) and the group annihilator vanishes.

    Nonsingular standard parts (index 0) are members, as in R_n^CM.
    """
    if not e.is_square:
        raise NotSquare(f"dual index needs a square dual matrix, got {e.shape}")
    if not is_group_invertible(e.std):
        return False
    return gr_annihilator(e).is_zero()


def gdgi(e: DualMatrix) -> DualMatrix:
    """E^# - eps E^# E0 E^#; exists whenever E is group invertible."""
    if not e.is_square:
        raise NotSquare(f"GDGI needs a square dual matrix, got {e.shape}")
    if not is_group_invertible(e.std):
        raise IndexNotOne("standard part is not group invertible")
    g = group_inverse(e.std)
    return DualMatrix(g, -(g @ e.dual @ g))


def dggi(e: DualMatrix) -> DualMatrix:
    """Dual group generalized inverse.

    Dual part -E^# E0 E^# + (E^#)^2 E0 (I - E E^#) + (I - E E^#) E0 (E^#)^2,
    verified against the three defining equations before returning.
    """
    if not e.is_square:
        raise NotSquare(f"DGGI needs a square dual matrix, got {e.shape}")
    if not is_group_invertible(e.std):
        raise DggiDoesNotExist("Ind(E) > 1: rk(E^2) != rk(E)")
    ann = gr_annihilator(e)
    if not ann.is_zero():
        raise DggiDoesNotExist("(I - EE^#)E0(I - E^#E) != 0", evidence=ann)
    n = e.shape[0]
    E, E0 = e.std, e.dual
    g = group_inverse(E)
    g2 = g @ g
    q = Matrix.identity(n) - E @ g
    x = DualMatrix(g, -(g @ E0 @ g) + g2 @ E0 @ q + q @ E0 @ g2)
    bad = dggi_violations(e, x)
    if bad:
        raise InternalVerificationFailure(f"DGGI candidate fails {', '.join(bad)}")
    return x


# -- linear-system route for the dual part ----------------------------------


@dataclass(frozen=True)
class DualPartSolution:
    """Solution set of the dual-part system: ``particular`` + span(nullity)."""

    particular: Matrix | None
    nullity: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.particular is not None and self.nullity == 0


def _dmpgi_dual_equations(e: DualMatrix, x_std: Matrix) -> Callable[[Matrix], list[Matrix]]:
    def residuals(x0: Matrix) -> list[Matrix]:
        x = DualMatrix(x_std, x0)
        ex = e @ x
        xe = x @ e
        return [
            (ex @ e - e).dual,
            (xe @ x - x).dual,
            (ex.T - ex).dual,
            (xe.T - xe).dual,
        ]

    return residuals


def _dggi_dual_equations(e: DualMatrix, x_std: Matrix) -> Callable[[Matrix], list[Matrix]]:
    def residuals(x0: Matrix) -> list[Matrix]:
        x = DualMatrix(x_std, x0)
        ex = e @ x
        xe = x @ e
        return [(ex @ e - e).dual, (xe @ x - x).dual, (ex - xe).dual]

    return residuals


def _solve_affine(residuals: Callable[[Matrix], list[Matrix]], rows: int, cols: int) -> DualPartSolution:
    """Solve residuals(X) = 0 where residuals is affine in X (rows x cols)."""
    nunk = rows * cols

    def flat(ms: list[Matrix]) -> list:
        return [x for m in ms for x in m.entries]

    base = flat(residuals(Matrix.zeros(rows, cols)))
    columns = []
    for k in range(nunk):
        unit = Matrix.unit(rows, cols, k // cols, k % cols)
        columns.append([a - b for a, b in zip(flat(residuals(unit)), base)])
    neq = len(base)
    aug = Matrix.from_rows([[columns[k][i] for k in range(nunk)] + [-base[i]] for i in range(neq)])
    red, piv = rref(aug)
    if nunk in piv:
        return DualPartSolution(None, nunk - len(piv) + 1)
    sol = [0] * nunk
    for r, c in enumerate(piv):
        sol[c] = red[r, nunk]
    part = Matrix.from_rows([sol[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)
    return DualPartSolution(part, nunk - len(piv))


def solve_dmpgi_dual_part(e: DualMatrix) -> DualPartSolution:
    """Solve the four dual Penrose equations for X0 with std part fixed at E^+."""
    m, n = e.shape
    return _solve_affine(_dmpgi_dual_equations(e, moore_penrose(e.std)), n, m)


def solve_dggi_dual_part(e: DualMatrix) -> DualPartSolution:
    """Solve the three DGGI equations for X0 with std part fixed at E^#."""
    n = e.shape[0]
    return _solve_affine(_dggi_dual_equations(e, group_inverse(e.std)), n, n)
