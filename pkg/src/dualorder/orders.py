"""Decision procedures for the ten matrix partial orders.

Every order is decided through each characterization known to be
equivalent to it. All route verdicts must coincide; a disagreement raises
:class:`CharacterizationMismatch` instead of producing a report.

Canonical-form characterizations (existence of U, V or P) are not used as
decision routes; they are exercised by :mod:`dualorder.canonical`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from .dual import DualMatrix, dggi, dmpgi, dmpgi_exists, dual_index_one, dual_rank, gdgi, mpdgi
from .errors import (
    CharacterizationMismatch,
    IndexNotOne,
    NotSquare,
    PreconditionUnmet,
    ShapeMismatch,
    TheoremViolation,
)
from .kernel import Matrix, group_inverse, is_group_invertible, moore_penrose, rank


class OrderKind(enum.Enum):
    MINUS = "minus"
    STAR = "star"
    SHARP = "sharp"
    DSTAR = "d-star"
    PSTAR = "p-star"
    DSHARP = "d-sharp"
    GSHARP = "g-sharp"
    DUAL_MINUS = "dual-minus"
    DM_SHARP = "dm-sharp"
    DM_STAR = "dm-star"

    @property
    def is_real(self) -> bool:
        return self in REAL_KINDS

    @property
    def sharp_family(self) -> bool:
        """Orders defined on square matrices of (dual) index one."""
        return self in (OrderKind.SHARP, OrderKind.DSHARP, OrderKind.GSHARP, OrderKind.DM_SHARP)

    @classmethod
    def parse(cls, name: str) -> OrderKind:
        key = name.strip().lower().replace("_", "-")
        for k in cls:
            if k.value == key or k.name.lower().replace("_", "-") == key:
                return k
        raise ValueError(f"unknown order {name!r}; choose from {', '.join(k.value for k in cls)}")


REAL_KINDS = (OrderKind.MINUS, OrderKind.STAR, OrderKind.SHARP)
DUAL_KINDS = (
    OrderKind.DSTAR,
    OrderKind.PSTAR,
    OrderKind.DSHARP,
    OrderKind.GSHARP,
    OrderKind.DUAL_MINUS,
    OrderKind.DM_SHARP,
    OrderKind.DM_STAR,
)

Value = Union[Matrix, DualMatrix, int]


@dataclass(frozen=True)
class Witness:
    """A violated equation with both sides evaluated."""

    equation: str
    lhs: Value
    rhs: Value


@dataclass(frozen=True)
class Route:
    name: str
    verdict: bool
    witnesses: tuple[Witness, ...] = ()


@dataclass(frozen=True)
class OrderReport:
    kind: OrderKind
    verdict: bool
    routes: tuple[Route, ...]
    rank_data: dict = field(default_factory=dict)

    @property
    def witnesses(self) -> list[Witness]:
        return [w for r in self.routes for w in r.witnesses]

    def witness(self, equation: str) -> Witness | None:
        return next((w for w in self.witnesses if w.equation == equation), None)


@dataclass(frozen=True)
class Unmet:
    """Marker for an order that is undefined on a pair."""

    precondition: str

    def __bool__(self) -> bool:  # pragma: no cover - guard against truthiness misuse
        raise TypeError("Unmet has no truth value; test with isinstance")


# -- evaluation context -------------------------------------------------------


class _Pair:
    """Lazily computed quantities shared by the routes of one (E, F) pair."""

    def __init__(self, e: DualMatrix, f: DualMatrix):
        self.e = e
        self.f = f
        self.E, self.E0 = e.std, e.dual
        self.F, self.F0 = f.std, f.dual

    @cached_property
    def diff(self) -> DualMatrix:
        return self.f - self.e

    @cached_property
    def D(self) -> Matrix:
        return self.F - self.E

    @cached_property
    def D0(self) -> Matrix:
        return self.F0 - self.E0

    @cached_property
    def Ep(self) -> Matrix:
        return moore_penrose(self.E)

    @cached_property
    def Fp(self) -> Matrix:
        return moore_penrose(self.F)

    @cached_property
    def Eg(self) -> Matrix:
        return group_inverse(self.E)

    @cached_property
    def r_e(self) -> int:
        return rank(self.E)

    @cached_property
    def r_f(self) -> int:
        return rank(self.F)

    @cached_property
    def r_d(self) -> int:
        return rank(self.D)

    @cached_property
    def rank_e(self):
        return dual_rank(self.e)

    @cached_property
    def rank_f(self):
        return dual_rank(self.f)

    @cached_property
    def rank_diff(self):
        return dual_rank(self.diff)


class _Eqs:
    """Collects violated equations."""

    def __init__(self) -> None:
        self.bad: list[Witness] = []

    def eq(self, name: str, lhs: Value, rhs: Value) -> _Eqs:
        if lhs != rhs:
            self.bad.append(Witness(name, lhs, rhs))
        return self

    def extend(self, ws) -> _Eqs:
        self.bad.extend(ws)
        return self

    def route(self, name: str) -> Route:
        return Route(name, not self.bad, tuple(self.bad))


# -- real-order conditions (each returns its violations) ----------------------


def _minus_rank(p: _Pair) -> list[Witness]:
    return _Eqs().eq("rk(F-E) = rk(F) - rk(E)", p.r_d, p.r_f - p.r_e).bad


def _minus_range(p: _Pair) -> list[Witness]:
    # R(E) in R(F), R(E^T) in R(F^T), E F^+ E = E
    E, F, Fp = p.E, p.F, p.Fp
    return (
        _Eqs()
        .eq("FF^+E = E", F @ Fp @ E, E)
        .eq("EF^+F = E", E @ Fp @ F, E)
        .eq("EF^+E = E", E @ Fp @ E, E)
        .bad
    )


def _star_transpose(p: _Pair) -> list[Witness]:
    E, F = p.E, p.F
    return _Eqs().eq("E^TE = E^TF", E.T @ E, E.T @ F).eq("EE^T = FE^T", E @ E.T, F @ E.T).bad


def _star_mp(p: _Pair) -> list[Witness]:
    E, F, Ep = p.E, p.F, p.Ep
    return _Eqs().eq("E^+E = E^+F", Ep @ E, Ep @ F).eq("EE^+ = FE^+", E @ Ep, F @ Ep).bad


def _symmetric_products(p: _Pair) -> list[Witness]:
    E, F = p.E, p.F
    eft = E @ F.T
    fte = F.T @ E
    return _Eqs().eq("EF^T = (EF^T)^T", eft, eft.T).eq("F^TE = (F^TE)^T", fte, fte.T).bad


def _sharp_power(p: _Pair) -> list[Witness]:
    E, F = p.E, p.F
    e2 = E @ E
    return _Eqs().eq("EF = E^2", E @ F, e2).eq("E^2 = FE", e2, F @ E).bad


def _sharp_group(p: _Pair) -> list[Witness]:
    E, F, Eg = p.E, p.F, p.Eg
    return _Eqs().eq("E^#E = E^#F", Eg @ E, Eg @ F).eq("EE^# = FE^#", E @ Eg, F @ Eg).bad


def _commute(p: _Pair) -> list[Witness]:
    return _Eqs().eq("EF = FE", p.E @ p.F, p.F @ p.E).bad


# -- dual-order conditions ----------------------------------------------------


def _diff_dmpgi(p: _Pair) -> list[Witness]:
    rv = p.rank_diff
    return _Eqs().eq("rk[[F0-E0,F-E],[F-E,O]] = 2rk(F-E)", rv.block_rank, 2 * rv.std_rank).bad


def _dual_minus_def(p: _Pair) -> list[Witness]:
    return _minus_rank(p) + _diff_dmpgi(p)


def _dual_rank_subtractive(p: _Pair) -> list[Witness]:
    lhs = p.rank_f.dual_rank - p.rank_e.dual_rank
    return _Eqs().eq("rk(F^) - rk(E^) = rk(F^-E^)", lhs, p.rank_diff.dual_rank).bad


def _block_minus(p: _Pair) -> list[Witness]:
    lhs = p.rank_diff.block_rank
    rhs = p.rank_f.block_rank - p.rank_e.block_rank
    return _Eqs().eq("rk(Fblk-Eblk) = rk(Fblk) - rk(Eblk)", lhs, rhs).bad


def _go_star_dual(p: _Pair) -> list[Witness]:
    E, E0, D0, Ep = p.E, p.E0, p.D0, p.Ep
    EtP = Ep.T  # (E^T)^+ = (E^+)^T
    return (
        _Eqs()
        .eq("EE^+(F0-E0) = (E^T)^+E0^T(E-F)", E @ Ep @ D0, EtP @ E0.T @ (-p.D))
        .eq("(F0-E0)E^+E = (E-F)E0^T(E^T)^+", D0 @ Ep @ E, (-p.D) @ E0.T @ EtP)
        .bad
    )


def _go_star_zero(p: _Pair) -> list[Witness]:
    E, D0, Ep = p.E, p.D0, p.Ep
    z = Matrix.zeros(*D0.shape)
    return _Eqs().eq("EE^+(F0-E0) = O", E @ Ep @ D0, z).eq("(F0-E0)E^+E = O", D0 @ Ep @ E, z).bad


def _go_sharp_dual(p: _Pair) -> list[Witness]:
    E, E0, D0, Eg = p.E, p.E0, p.D0, p.Eg
    return (
        _Eqs()
        .eq("(F0-E0)EE^# = (E-F)E0E^#", D0 @ E @ Eg, (-p.D) @ E0 @ Eg)
        .eq("EE^#(F0-E0) = E^#E0(E-F)", E @ Eg @ D0, Eg @ E0 @ (-p.D))
        .bad
    )


def _go_sharp_zero(p: _Pair) -> list[Witness]:
    E, D0, Eg = p.E, p.D0, p.Eg
    z = Matrix.zeros(*D0.shape)
    return _Eqs().eq("(F0-E0)EE^# = O", D0 @ E @ Eg, z).eq("EE^#(F0-E0) = O", E @ Eg @ D0, z).bad


def _dm_sharp_def(p: _Pair) -> list[Witness]:
    return _sharp_group(p) + _diff_dmpgi(p)


def _dm_star_def(p: _Pair) -> list[Witness]:
    return _star_transpose(p) + _diff_dmpgi(p)


def _inverse_induced(p: _Pair, x: DualMatrix, sym: str) -> list[Witness]:
    e, f = p.e, p.f
    return (
        _Eqs()
        .eq(f"E^{sym}E^ = E^{sym}F^", x @ e, x @ f)
        .eq(f"E^E^{sym} = F^E^{sym}", e @ x, f @ x)
        .bad
    )


# -- route tables -------------------------------------------------------------


def _routes_minus(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_minus_rank(p)).route("rank subtractivity"),
        _Eqs().extend(_minus_range(p)).route("range inclusion + inner inverse"),
    ]


def _routes_star(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_star_transpose(p)).route("transpose equations"),
        _Eqs().extend(_star_mp(p)).route("Moore-Penrose equations"),
        _Eqs().extend(_minus_rank(p) + _symmetric_products(p)).route("minus + symmetric products"),
    ]


def _routes_sharp(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_sharp_group(p)).route("group-inverse equations"),
        _Eqs().extend(_sharp_power(p)).route("EF = E^2 = FE"),
        _Eqs().extend(_minus_rank(p) + _commute(p)).route("minus + EF = FE"),
    ]


def _routes_dual_minus(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_dual_minus_def(p)).route("definition: E <= F and DMPGI(F^-E^) exists"),
        _Eqs().extend(_dual_rank_subtractive(p)).route("dual rank subtractivity"),
        _Eqs().extend(_block_minus(p)).route("block minus order"),
    ]


def _routes_dm_sharp(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_dm_sharp_def(p)).route("definition: E #<= F and DMPGI(F^-E^) exists"),
        _Eqs().extend(_dual_minus_def(p) + _commute(p)).route("dual-minus + EF = FE"),
    ]


def _routes_dm_star(p: _Pair) -> list[Route]:
    return [
        _Eqs().extend(_dm_star_def(p)).route("definition: E *<= F and DMPGI(F^-E^) exists"),
        _Eqs().extend(_dual_minus_def(p) + _symmetric_products(p)).route("dual-minus + symmetric products"),
    ]


def _routes_dstar(p: _Pair) -> list[Route]:
    e, f = p.e, p.f
    transpose = (
        _Eqs()
        .eq("E^TE^ = E^TF^", e.T @ e, e.T @ f)
        .eq("E^E^T = F^E^T", e @ e.T, f @ e.T)
        .route("dual transpose equations")
    )
    return [
        transpose,
        _Eqs().extend(_inverse_induced(p, dmpgi(e), "+")).route("DMPGI equations"),
        _Eqs().extend(_dual_minus_def(p) + _symmetric_products(p) + _go_star_dual(p)).route("dual-minus + go"),
        _Eqs().extend(_dm_star_def(p) + _go_star_dual(p)).route("dm-star + go-8"),
    ]


def _routes_pstar(p: _Pair) -> list[Route]:
    E, E0, F, F0 = p.E, p.E0, p.F, p.F0
    componentwise = (
        _Eqs()
        .eq("E^TE = E^TF", E.T @ E, E.T @ F)
        .eq("EE^T = FE^T", E @ E.T, F @ E.T)
        .eq("E^TE0 = E^TF0", E.T @ E0, E.T @ F0)
        .eq("E0E^T = F0E^T", E0 @ E.T, F0 @ E.T)
        .route("componentwise transpose equations")
    )
    return [
        componentwise,
        _Eqs().extend(_inverse_induced(p, mpdgi(p.e), "p")).route("MPDGI equations"),
        _Eqs().extend(_dual_minus_def(p) + _symmetric_products(p) + _go_star_zero(p)).route("dual-minus + go1"),
        _Eqs().extend(_dm_star_def(p) + _go_star_zero(p)).route("dm-star + go-10"),
    ]


def _routes_dsharp(p: _Pair) -> list[Route]:
    E, E0, F, F0 = p.E, p.E0, p.F, p.F0
    e2 = E @ E
    mid = E0 @ E + E @ E0
    componentwise = (
        _Eqs()
        .eq("EF = E^2", E @ F, e2)
        .eq("E^2 = FE", e2, F @ E)
        .eq("EF0+E0F = E0E+EE0", E @ F0 + E0 @ F, mid)
        .eq("E0E+EE0 = FE0+F0E", mid, F @ E0 + F0 @ E)
        .route("componentwise equations")
    )
    return [
        componentwise,
        _Eqs().extend(_inverse_induced(p, dggi(p.e), "#")).route("DGGI equations"),
        _Eqs().extend(_dual_minus_def(p) + _commute(p) + _go_sharp_dual(p)).route("dual-minus + go2"),
        _Eqs().extend(_dm_sharp_def(p) + _go_sharp_dual(p)).route("dm-sharp + perfect-1"),
    ]


def _routes_gsharp(p: _Pair) -> list[Route]:
    E, E0, F, F0 = p.E, p.E0, p.F, p.F0
    e2 = E @ E
    componentwise = (
        _Eqs()
        .eq("EF = E^2", E @ F, e2)
        .eq("E^2 = FE", e2, F @ E)
        .eq("E0E = F0E", E0 @ E, F0 @ E)
        .eq("EE0 = EF0", E @ E0, E @ F0)
        .route("componentwise equations")
    )
    return [
        componentwise,
        _Eqs().extend(_inverse_induced(p, gdgi(p.e), "g")).route("GDGI equations"),
        _Eqs().extend(_dual_minus_def(p) + _commute(p) + _go_sharp_zero(p)).route("dual-minus + gogo"),
        _Eqs().extend(_dm_sharp_def(p) + _go_sharp_zero(p)).route("dm-sharp + perfect-4"),
    ]


_ROUTES = {
    OrderKind.MINUS: _routes_minus,
    OrderKind.STAR: _routes_star,
    OrderKind.SHARP: _routes_sharp,
    OrderKind.DUAL_MINUS: _routes_dual_minus,
    OrderKind.DM_SHARP: _routes_dm_sharp,
    OrderKind.DM_STAR: _routes_dm_star,
    OrderKind.DSTAR: _routes_dstar,
    OrderKind.PSTAR: _routes_pstar,
    OrderKind.DSHARP: _routes_dsharp,
    OrderKind.GSHARP: _routes_gsharp,
}

# Routes that decompose an order as "base order + side conditions".
THEOREM_ROUTES = {
    OrderKind.DUAL_MINUS: ("dual rank subtractivity", "block minus order"),
    OrderKind.DM_SHARP: ("dual-minus + EF = FE",),
    OrderKind.DM_STAR: ("dual-minus + symmetric products",),
    OrderKind.DSTAR: ("dual-minus + go", "dm-star + go-8"),
    OrderKind.PSTAR: ("dual-minus + go1", "dm-star + go-10"),
    OrderKind.DSHARP: ("dual-minus + go2", "dm-sharp + perfect-1"),
    OrderKind.GSHARP: ("dual-minus + gogo", "dm-sharp + perfect-4"),
}


# -- preconditions -------------------------------------------------------------


def _as_dual(x: Matrix | DualMatrix) -> DualMatrix:
    return x if isinstance(x, DualMatrix) else DualMatrix.real(x)


def check_preconditions(kind: OrderKind, e: DualMatrix, f: DualMatrix) -> None:
    """Raise if ``kind`` is undefined on (e, f); return None otherwise."""
    if e.shape != f.shape:
        raise ShapeMismatch(f"pair shapes differ: {e.shape} vs {f.shape}")
    if kind.sharp_family and not e.is_square:
        raise NotSquare(f"{kind.value} needs square matrices, got {e.shape}")
    if kind is OrderKind.SHARP:
        for name, x in (("E", e.std), ("F", f.std)):
            if not is_group_invertible(x):
                raise IndexNotOne(f"Ind({name}) > 1: rk({name}^2) != rk({name})")
        return
    if kind.is_real:
        return
    if kind.sharp_family:
        for name, x in (("E", e), ("F", f)):
            if not dual_index_one(x):
                raise PreconditionUnmet(f"{name}^ is not of dual index one", f"{kind.value} is defined on D_n^CM")
        return
    for name, x in (("E", e), ("F", f)):
        ok, rv = dmpgi_exists(x)
        if not ok:
            raise PreconditionUnmet(
                f"DMPGI of {name}^ does not exist",
                f"rk[[{name}0,{name}],[{name},O]] = {rv.block_rank} != 2rk({name}) = {2 * rv.std_rank}",
            )


def _rank_data(kind: OrderKind, p: _Pair) -> dict:
    data = {"r_e": p.r_e, "r_f": p.r_f, "rk(F-E)": p.r_d}
    if not kind.is_real:
        data["dual_rank_e"] = p.rank_e.as_dict()
        data["dual_rank_f"] = p.rank_f.as_dict()
        data["dual_rank_diff"] = p.rank_diff.as_dict()
    return data


def evaluate_routes(kind: OrderKind, e, f) -> list[Route]:
    """Evaluate every characterization route of ``kind`` (no agreement check)."""
    e, f = _as_dual(e), _as_dual(f)
    check_preconditions(kind, e, f)
    return _ROUTES[kind](_Pair(e, f))


def _report(kind: OrderKind, e: DualMatrix, f: DualMatrix) -> OrderReport:
    check_preconditions(kind, e, f)
    p = _Pair(e, f)
    routes = _ROUTES[kind](p)
    verdicts = {r.verdict for r in routes}
    if len(verdicts) != 1:
        raise CharacterizationMismatch(
            f"{kind.value}: characterization routes disagree: "
            + ", ".join(f"{r.name}={r.verdict}" for r in routes),
            routes=routes,
        )
    return OrderReport(kind, routes[0].verdict, tuple(routes), _rank_data(kind, p))


def check_real_order(kind: OrderKind, e: Matrix, f: Matrix) -> OrderReport:
    if not kind.is_real:
        raise ValueError(f"{kind.value} is an order on dual matrices")
    return _report(kind, DualMatrix.real(e), DualMatrix.real(f))


def check_dual_order(kind: OrderKind, e: DualMatrix, f: DualMatrix) -> OrderReport:
    if kind.is_real:
        raise ValueError(f"{kind.value} is an order on real matrices")
    return _report(kind, e, f)


def check(kind: OrderKind, e, f) -> OrderReport:
    """Dispatch on the kind: real kinds accept real or dual inputs (std parts are used)."""
    if kind.is_real:
        e = e.std if isinstance(e, DualMatrix) else e
        f = f.std if isinstance(f, DualMatrix) else f
        return check_real_order(kind, e, f)
    return check_dual_order(kind, _as_dual(e), _as_dual(f))


def related(kind: OrderKind, e, f) -> bool:
    return check(kind, e, f).verdict


def characterization_routes(kind: OrderKind, e, f) -> list[tuple[str, bool]]:
    """Verdicts of the "base order + side conditions" routes of ``kind``.

    The caller asserts agreement; no mismatch is raised here.
    """
    names = THEOREM_ROUTES.get(kind, ())
    return [(r.name, r.verdict) for r in evaluate_routes(kind, e, f) if r.name in names]


# -- implication graph ---------------------------------------------------------

# Proven implications between orders on the same pair (Figures 1 and 2), plus
# the definitional ones from dual orders down to their standard parts.
IMPLICATIONS: tuple[tuple[OrderKind, OrderKind], ...] = (
    (OrderKind.DSHARP, OrderKind.DM_SHARP),
    (OrderKind.GSHARP, OrderKind.DM_SHARP),
    (OrderKind.DM_SHARP, OrderKind.DUAL_MINUS),
    (OrderKind.DSHARP, OrderKind.DUAL_MINUS),
    (OrderKind.GSHARP, OrderKind.DUAL_MINUS),
    (OrderKind.DSTAR, OrderKind.DM_STAR),
    (OrderKind.PSTAR, OrderKind.DM_STAR),
    (OrderKind.DM_STAR, OrderKind.DUAL_MINUS),
    (OrderKind.DSTAR, OrderKind.DUAL_MINUS),
    (OrderKind.PSTAR, OrderKind.DUAL_MINUS),
    (OrderKind.DUAL_MINUS, OrderKind.MINUS),
    (OrderKind.DM_SHARP, OrderKind.SHARP),
    (OrderKind.DM_STAR, OrderKind.STAR),
    (OrderKind.STAR, OrderKind.MINUS),
    (OrderKind.SHARP, OrderKind.MINUS),
)

# Non-implications witnessed by the worked examples.
NON_IMPLICATIONS: tuple[tuple[OrderKind, OrderKind], ...] = (
    (OrderKind.DUAL_MINUS, OrderKind.DM_SHARP),
    (OrderKind.DM_SHARP, OrderKind.DSHARP),
    (OrderKind.DM_SHARP, OrderKind.GSHARP),
)


def implication_matrix(e, f) -> dict[OrderKind, bool | Unmet]:
    """Evaluate every order on (e, f) and check the implication edges.

    Real kinds are evaluated on the standard parts. Raises TheoremViolation
    if a proven edge fails while both endpoints are decidable.
    """
    e, f = _as_dual(e), _as_dual(f)
    out: dict[OrderKind, bool | Unmet] = {}
    for kind in OrderKind:
        try:
            out[kind] = check(kind, e, f).verdict
        except (PreconditionUnmet, IndexNotOne, NotSquare) as exc:
            out[kind] = Unmet(str(exc))
    violated = [
        (a, b) for a, b in IMPLICATIONS
        if out[a] is True and out[b] is False
    ]
    if violated:
        raise TheoremViolation(
            "implication edges violated: " + ", ".join(f"{a.value} => {b.value}" for a, b in violated)
        )
    return out
