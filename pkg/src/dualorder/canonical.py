"""Generators of order-related pairs and chains from canonical block forms.

Every generator works forward only: it assembles the block matrices in
canonical coordinates, conjugates them by exact rational factors (orthogonal
U, V or a nonsingular P) and asserts that the order predicate accepts the
result.

Block layout is the 3x3 partition (r_e, r_f - r_e, remainder)::

    E  = diag(D1, O, O)            E0 = [[E1, E2, E3], [E4, O, O], [E7, O, O]]
    F  = [[D1 + R D2 S, R D2, O],  F0 = [[E1 + RM + NS - R F5 S, E2 + N, E3 + R F6],
          [D2 S,        D2,   O],        [E4 + M,               F5,     F6     ],
          [O,           O,    O]]        [E7 + F8 S,            F8,     O      ]]

Each order fixes some of R, S, M, N (see :func:`effective_blocks`).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterator

from .dual import DualMatrix
from .errors import BlockNotPerturbable, NonInvertibleBlock, ShapeMismatch, TheoremViolation
from .kernel import Matrix, inverse, is_invertible
from .orders import OrderKind, check

ENTRY_RANGE = 5


def _rand_matrix(rng: random.Random, rows: int, cols: int, lo: int = -ENTRY_RANGE, hi: int = ENTRY_RANGE) -> Matrix:
    return Matrix.from_rows([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols=cols)


def _rand_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        m = _rand_matrix(rng, n, n)
        if is_invertible(m):
            return m


# -- factors -------------------------------------------------------------------


def gen_orthogonal(n: int, seed: int) -> Matrix:
    """Rational orthogonal matrix (I - S)(I + S)^-1 J.

    S is a random skew-symmetric integer matrix and J a random +-1 diagonal,
    so reflections are reachable as well as rotations.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    rng = random.Random(seed)
    s = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-2, 2)
            s[i][j], s[j][i] = v, -v
    signs = [rng.choice((1, -1)) for _ in range(n)]
    return cayley(Matrix.from_rows(s), Matrix.diag(signs))


def cayley(skew: Matrix, signs: Matrix | None = None) -> Matrix:
    n = skew.nrows
    if skew.T != -skew:
        raise ValueError("Cayley transform needs a skew-symmetric matrix")
    i = Matrix.identity(n)
    q = (i - skew) @ inverse(i + skew)
    if signs is not None:
        q = q @ signs
    if q @ q.T != i:  # pragma: no cover - exact identity
        raise TheoremViolation("Cayley factor is not orthogonal")
    return q


@dataclass(frozen=True)
class FactorPair:
    """Conjugating factors: orthogonal (U, V) or similarity (P, P^-1).

    :meth:`apply` maps a canonical block matrix B to U B V^T or P B P^-1.
    """

    left: Matrix
    right: Matrix
    orthogonal: bool

    def __post_init__(self) -> None:
        if self.orthogonal:
            if self.left @ self.left.T != Matrix.identity(self.left.nrows) or \
                    self.right @ self.right.T != Matrix.identity(self.right.nrows):
                raise ValueError("orthogonal factors must satisfy QQ^T = I")
        elif self.left @ self.right != Matrix.identity(self.left.nrows):
            raise ValueError("similarity factors must satisfy P P^-1 = I")

    def apply(self, block: Matrix) -> Matrix:
        return self.left @ block @ (self.right.T if self.orthogonal else self.right)

    def unapply(self, m: Matrix) -> Matrix:
        if self.orthogonal:
            return self.left.T @ m @ self.right
        return self.right @ m @ self.left

    def apply_dual(self, std: Matrix, dual: Matrix) -> DualMatrix:
        return DualMatrix(self.apply(std), self.apply(dual))


def gen_nonsingular(n: int, seed: int) -> FactorPair:
    """Random integer P with det != 0, returned with its exact inverse."""
    if n < 1:
        raise ValueError("dimension must be positive")
    rng = random.Random(seed)
    while True:
        p = _rand_matrix(rng, n, n, -3, 3)
        if is_invertible(p):
            return FactorPair(p, inverse(p), orthogonal=False)


def orthogonal_factors(m: int, n: int, seed: int) -> FactorPair:
    return FactorPair(gen_orthogonal(m, seed), gen_orthogonal(n, seed + 7919), orthogonal=True)


# -- parameters ----------------------------------------------------------------


BLOCK_NAMES = ("D1", "D2", "R", "S", "M", "N", "E1", "E2", "E3", "E4", "E7", "F5", "F6", "F8")


@dataclass(frozen=True)
class GeneratorParams:
    """Block data for one canonical pair.

    ``factors`` is optional; when absent, factors are drawn from ``seed``.
    ``similarity`` selects the P-conjugated (index-one) variant for the
    Minus and DualMinus forms; the sharp family always uses P.
    """

    m: int
    n: int
    r_e: int
    r_f: int
    D1: Matrix
    D2: Matrix
    R: Matrix
    S: Matrix
    M: Matrix
    N: Matrix
    E1: Matrix
    E2: Matrix
    E3: Matrix
    E4: Matrix
    E7: Matrix
    F5: Matrix
    F6: Matrix
    F8: Matrix
    seed: int = 0
    factors: FactorPair | None = None
    similarity: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.r_e <= self.r_f <= min(self.m, self.n):
            raise ShapeMismatch(f"need 0 <= r_e <= r_f <= min(m, n), got {self.r_e}, {self.r_f}")
        for name, shape in self.block_shapes().items():
            got = getattr(self, name).shape
            if got != shape:
                raise ShapeMismatch(f"block {name} is {got}, expected {shape}")
        for name in ("D1", "D2"):
            if not is_invertible(getattr(self, name)):
                raise NonInvertibleBlock(f"{name} is singular")

    def block_shapes(self) -> dict[str, tuple[int, int]]:
        a = self.r_e
        b = self.r_f - self.r_e
        cr = self.m - self.r_f
        cc = self.n - self.r_f
        return {
            "D1": (a, a), "D2": (b, b), "R": (a, b), "S": (b, a), "M": (b, a), "N": (a, b),
            "E1": (a, a), "E2": (a, b), "E3": (a, cc), "E4": (b, a), "E7": (cr, a),
            "F5": (b, b), "F6": (b, cc), "F8": (cr, b),
        }

    @classmethod
    def random(cls, m: int, n: int, r_e: int, r_f: int, seed: int, *, similarity: bool = False) -> GeneratorParams:
        """Draw every block uniformly from [-5, 5] (D1, D2 redrawn until invertible)."""
        if not 0 <= r_e <= r_f <= min(m, n):
            raise ShapeMismatch(f"need 0 <= r_e <= r_f <= min(m, n), got {r_e}, {r_f}")
        rng = random.Random(seed)
        a, b = r_e, r_f - r_e
        blocks = {"D1": _rand_invertible(rng, a), "D2": _rand_invertible(rng, b)}
        shapes = {"R": (a, b), "S": (b, a), "M": (b, a), "N": (a, b),
                  "E1": (a, a), "E2": (a, b), "E3": (a, n - r_f), "E4": (b, a), "E7": (m - r_f, a),
                  "F5": (b, b), "F6": (b, n - r_f), "F8": (m - r_f, b)}
        for name, (r, c) in shapes.items():
            blocks[name] = _rand_matrix(rng, r, c)
        return cls(m, n, r_e, r_f, seed=seed, similarity=similarity, **blocks)

    def with_blocks(self, **blocks) -> GeneratorParams:
        return replace(self, **blocks)

    def zero_dual(self) -> GeneratorParams:
        """Same standard data with every free dual block zeroed."""
        zeros = {k: Matrix.zeros(*s) for k, s in self.block_shapes().items()
                 if k in ("M", "N", "E1", "E2", "E3", "E4", "E7", "F5", "F6", "F8")}
        return replace(self, **zeros)


def effective_blocks(kind: OrderKind, p: GeneratorParams) -> dict[str, Matrix]:
    """R, S, M, N after applying the constraints of ``kind``.

    D-star uses D1^-T where the printed lemma shows D1^-1; the two coincide
    for symmetric D1, and only the transposed version satisfies the D-star
    equations for general D1.
    """
    a, b = p.r_e, p.r_f - p.r_e
    zab, zba = Matrix.zeros(a, b), Matrix.zeros(b, a)
    R, S, M, N = p.R, p.S, p.M, p.N
    if kind in (OrderKind.MINUS, OrderKind.DUAL_MINUS):
        pass
    elif kind in (OrderKind.STAR, OrderKind.SHARP, OrderKind.DM_STAR, OrderKind.DM_SHARP):
        R, S = zab, zba
    elif kind in (OrderKind.PSTAR, OrderKind.GSHARP):
        R, S, M, N = zab, zba, zba, zab
    elif kind is OrderKind.DSTAR:
        d1it = inverse(p.D1).T
        R, S = zab, zba
        N = -(d1it @ p.E4.T @ p.D2)
        M = -(p.D2 @ p.E2.T @ d1it)
    elif kind is OrderKind.DSHARP:
        d1i = inverse(p.D1)
        R, S = zab, zba
        N = -(d1i @ p.E2 @ p.D2)
        M = -(p.D2 @ p.E4 @ d1i)
    else:  # pragma: no cover
        raise ValueError(kind)
    return {"R": R, "S": S, "M": M, "N": N}


def canonical_blocks(p: GeneratorParams, R: Matrix, S: Matrix, M: Matrix, N: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """(E, E0, F, F0) in canonical coordinates, assembled as displayed."""
    a, b = p.r_e, p.r_f - p.r_e
    cr, cc = p.m - p.r_f, p.n - p.r_f
    Z = Matrix.zeros
    D1, D2 = p.D1, p.D2
    E = Matrix.block([[D1, Z(a, b), Z(a, cc)], [Z(b, a), Z(b, b), Z(b, cc)], [Z(cr, a), Z(cr, b), Z(cr, cc)]])
    E0 = Matrix.block([
        [p.E1, p.E2, p.E3],
        [p.E4, Z(b, b), Z(b, cc)],
        [p.E7, Z(cr, b), Z(cr, cc)],
    ])
    F = Matrix.block([
        [D1 + R @ D2 @ S, R @ D2, Z(a, cc)],
        [D2 @ S, D2, Z(b, cc)],
        [Z(cr, a), Z(cr, b), Z(cr, cc)],
    ])
    F0 = Matrix.block([
        [p.E1 + R @ M + N @ S - R @ p.F5 @ S, p.E2 + N, p.E3 + R @ p.F6],
        [p.E4 + M, p.F5, p.F6],
        [p.E7 + p.F8 @ S, p.F8, Z(cr, cc)],
    ])
    return E, E0, F, F0


def uses_similarity(kind: OrderKind, p: GeneratorParams) -> bool:
    if kind.sharp_family:
        return True
    return p.similarity and kind in (OrderKind.MINUS, OrderKind.DUAL_MINUS)


def factors_for(kind: OrderKind, p: GeneratorParams) -> FactorPair:
    sim = uses_similarity(kind, p)
    if sim and p.m != p.n:
        raise ShapeMismatch(f"{kind.value} canonical form needs square matrices, got {p.m}x{p.n}")
    if p.factors is not None:
        if p.factors.orthogonal == sim:
            raise ValueError("supplied factors do not match the canonical form of this order")
        return p.factors
    if sim:
        return gen_nonsingular(p.n, p.seed)
    return orthogonal_factors(p.m, p.n, p.seed)


# -- pairs ---------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratedPair:
    """Output of :func:`gen_pair`; unpacks as ``(e, f), factors``."""

    kind: OrderKind
    e: Matrix | DualMatrix
    f: Matrix | DualMatrix
    factors: FactorPair
    params: GeneratorParams
    blocks: dict = field(default_factory=dict, compare=False)

    @property
    def pair(self):
        return (self.e, self.f)

    def __iter__(self) -> Iterator:
        yield self.pair
        yield self.factors


def _assert_related(kind: OrderKind, e, f, what: str) -> None:
    if not check(kind, e, f).verdict:
        raise TheoremViolation(f"{what}: generated {kind.value} pair is rejected by the order predicate")


def gen_pair(kind: OrderKind, params: GeneratorParams, *, verify: bool = True) -> GeneratedPair:
    """Synthesize an order-related pair from the canonical form of ``kind``.

    With ``verify`` (the default) the predicate is evaluated on the output and
    a rejection raises :class:`TheoremViolation`.
    """
    eff = effective_blocks(kind, params)
    E, E0, F, F0 = canonical_blocks(params, **eff)
    fac = factors_for(kind, params)
    if kind.is_real:
        e, f = fac.apply(E), fac.apply(F)
    else:
        e, f = fac.apply_dual(E, E0), fac.apply_dual(F, F0)
    if verify:
        _assert_related(kind, e, f, "gen_pair")
    return GeneratedPair(kind, e, f, fac, params, {"E": E, "E0": E0, "F": F, "F0": F0, **eff})


def corollary_params(params: GeneratorParams, target: OrderKind) -> GeneratorParams:
    """Specialize DualMinus parameters so the pair lands in a stronger order.

    D-star / P-star use orthogonal factors, D-sharp / G-sharp the index-one
    (similarity) variant; see :func:`effective_blocks` for the D-star transpose.
    """
    if target not in (OrderKind.DSTAR, OrderKind.PSTAR, OrderKind.DSHARP, OrderKind.GSHARP):
        raise ValueError(f"no corollary specialization targets {target.value}")
    eff = effective_blocks(target, params)
    return replace(params, similarity=target.sharp_family, **eff)


def random_pair(kind: OrderKind, seed: int, max_dim: int = 6, *, verify: bool = True) -> GeneratedPair:
    """Seeded draw of dims, ranks and blocks, then :func:`gen_pair`.

    Edge ranks (r_e = 0, r_e = r_f, r_f = min(m, n)) are deliberately frequent.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_dim)
    m = n if kind.sharp_family else rng.randint(1, max_dim)
    top = min(m, n)
    r_f = rng.choice([top, rng.randint(0, top)])
    r_e = rng.choice([0, r_f, rng.randint(0, r_f)])
    sim = kind in (OrderKind.MINUS, OrderKind.DUAL_MINUS) and m == n and rng.random() < 0.5
    params = GeneratorParams.random(m, n, r_e, r_f, seed=rng.getrandbits(32), similarity=sim)
    return gen_pair(kind, params, verify=verify)


# -- chains --------------------------------------------------------------------


@dataclass(frozen=True)
class ChainParams:
    """Two nested parameter sets: (E, F) as usual, then (F, G) with F as base.

    ``outer`` supplies D3 (as its D2) and the fresh blocks of G; its D1 and
    E-blocks are overwritten by the leading block and dual part of F.
    """

    inner: GeneratorParams
    outer: GeneratorParams

    @property
    def r_g(self) -> int:
        return self.outer.r_f

    @classmethod
    def random(cls, m: int, n: int, r_e: int, r_f: int, r_g: int, seed: int, *, similarity: bool = False) -> ChainParams:
        if not 0 <= r_e <= r_f <= r_g <= min(m, n):
            raise ShapeMismatch(f"need r_e <= r_f <= r_g <= min(m, n), got {r_e}, {r_f}, {r_g}")
        inner = GeneratorParams.random(m, n, r_e, r_f, seed, similarity=similarity)
        outer = GeneratorParams.random(m, n, r_f, r_g, seed + 104729, similarity=similarity)
        return cls(inner, outer)


def gen_chain(kind: OrderKind, params: ChainParams, *, verify: bool = True) -> tuple:
    """Triple (E, F, G) with E <= F <= G under ``kind``, in shared coordinates.

    The second step re-reads F in canonical coordinates as diag(K, O) with
    K = F[:r_f, :r_f] invertible, which is the nested layout of the
    transitivity argument. All three relations are asserted.
    """
    inner, outer = params.inner, params.outer
    if (inner.m, inner.n, inner.r_f) != (outer.m, outer.n, outer.r_e):
        raise ShapeMismatch("outer parameters must start at the inner r_f")
    E, E0, F, F0 = canonical_blocks(inner, **effective_blocks(kind, inner))
    rf, rg = inner.r_f, outer.r_f
    lifted = replace(
        outer,
        D1=F.submatrix(0, rf, 0, rf),
        E1=F0.submatrix(0, rf, 0, rf),
        E2=F0.submatrix(0, rf, rf, rg),
        E3=F0.submatrix(0, rf, rg, outer.n),
        E4=F0.submatrix(rf, rg, 0, rf),
        E7=F0.submatrix(rg, outer.m, 0, rf),
    )
    F_again, F0_again, G, G0 = canonical_blocks(lifted, **effective_blocks(kind, lifted))
    if F_again != F or F0_again != F0:  # pragma: no cover - layout invariant
        raise TheoremViolation("chain lift does not reproduce F")
    fac = factors_for(kind, inner)
    if kind.is_real:
        e, f, g = fac.apply(E), fac.apply(F), fac.apply(G)
    else:
        e, f, g = fac.apply_dual(E, E0), fac.apply_dual(F, F0), fac.apply_dual(G, G0)
    if verify:
        _assert_related(kind, e, f, "gen_chain (E, F)")
        _assert_related(kind, f, g, "gen_chain (F, G)")
        _assert_related(kind, e, g, "gen_chain (E, G)")
    return e, f, g


def random_chain(kind: OrderKind, seed: int, max_dim: int = 6, *, verify: bool = True) -> tuple:
    rng = random.Random(seed)
    n = rng.randint(1, max_dim)
    m = n if kind.sharp_family else rng.randint(1, max_dim)
    top = min(m, n)
    ranks = sorted(rng.randint(0, top) for _ in range(3))
    sim = kind in (OrderKind.MINUS, OrderKind.DUAL_MINUS) and m == n and rng.random() < 0.5
    cp = ChainParams.random(m, n, *ranks, seed=rng.getrandbits(32), similarity=sim)
    return gen_chain(kind, cp, verify=verify)


# -- perturbation --------------------------------------------------------------

# Blocks whose value is pinned by the canonical form; shifting one generically
# leaves the order. Free blocks are absent. "F0(i,j)" is a dual block,
# "F(i,j)" a standard block, 1-based in the (r_e, r_f - r_e, rest) partition.
_DUAL_PINNED = ("F0(1,1)", "F0(1,3)", "F0(3,1)")
_COUPLED = ("F0(1,2)", "F0(2,1)")
CONSTRAINED_BLOCKS: dict[OrderKind, tuple[str, ...]] = {
    OrderKind.MINUS: ("F(1,1)", "F(1,3)", "F(3,1)"),
    OrderKind.STAR: ("F(1,1)", "F(1,2)", "F(2,1)", "F(1,3)", "F(3,1)"),
    OrderKind.SHARP: ("F(1,1)", "F(1,2)", "F(2,1)", "F(1,3)", "F(3,1)"),
    OrderKind.DUAL_MINUS: ("F(1,1)",) + _DUAL_PINNED,
    OrderKind.DM_SHARP: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED,
    OrderKind.DM_STAR: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED,
    OrderKind.DSTAR: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED + _COUPLED,
    OrderKind.PSTAR: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED + _COUPLED,
    OrderKind.DSHARP: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED + _COUPLED,
    OrderKind.GSHARP: ("F(1,1)", "F(1,2)", "F(2,1)") + _DUAL_PINNED + _COUPLED,
}

_BLOCK_RE = re.compile(r"^\s*(E0|E|F0|F)\s*\(\s*([123])\s*,\s*([123])\s*\)\s*$")


def _block_bounds(p: GeneratorParams, i: int, j: int) -> tuple[int, int, int, int]:
    rcuts = (0, p.r_e, p.r_f, p.m)
    ccuts = (0, p.r_e, p.r_f, p.n)
    return rcuts[i - 1], rcuts[i], ccuts[j - 1], ccuts[j]


def perturb_pair(gp: GeneratedPair, block: str, delta: Matrix | int) -> GeneratedPair:
    """Shift one pinned canonical block of the pair by ``delta``.

    ``delta`` is a matrix of the block's shape or an integer (added to every
    entry). Raises :class:`BlockNotPerturbable` for free or empty blocks.
    """
    match = _BLOCK_RE.match(block)
    if not match:
        raise BlockNotPerturbable(f"cannot parse block name {block!r}; use e.g. 'F0(1,3)'")
    which, i, j = match.group(1), int(match.group(2)), int(match.group(3))
    name = f"{which}({i},{j})"
    if name not in CONSTRAINED_BLOCKS[gp.kind]:
        raise BlockNotPerturbable(f"{name} is a free block of the {gp.kind.value} form")
    if gp.kind.is_real and which == "F0":
        raise BlockNotPerturbable("real orders have no dual part")
    p = gp.params
    r0, r1, c0, c1 = _block_bounds(p, i, j)
    if r1 == r0 or c1 == c0:
        raise BlockNotPerturbable(f"{name} is empty for ranks r_e={p.r_e}, r_f={p.r_f}")
    if isinstance(delta, int):
        delta = Matrix.from_rows([[delta] * (c1 - c0) for _ in range(r1 - r0)])
    if delta.shape != (r1 - r0, c1 - c0):
        raise ShapeMismatch(f"delta is {delta.shape}, block {name} is {(r1 - r0, c1 - c0)}")
    pad = Matrix.block([
        [Matrix.zeros(r0, c0), Matrix.zeros(r0, c1 - c0), Matrix.zeros(r0, p.n - c1)],
        [Matrix.zeros(r1 - r0, c0), delta, Matrix.zeros(r1 - r0, p.n - c1)],
        [Matrix.zeros(p.m - r1, c0), Matrix.zeros(p.m - r1, c1 - c0), Matrix.zeros(p.m - r1, p.n - c1)],
    ])
    shift = gp.factors.apply(pad)
    f = gp.f
    if gp.kind.is_real:
        f = f + shift
    elif which == "F":
        f = DualMatrix(f.std + shift, f.dual)
    else:
        f = DualMatrix(f.std, f.dual + shift)
    return replace(gp, f=f)
