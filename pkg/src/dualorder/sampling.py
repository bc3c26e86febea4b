"""Seeded random matrices, unconstrained or built to meet an order's preconditions."""

from __future__ import annotations

import random

from .canonical import gen_nonsingular
from .dual import DualMatrix
from .kernel import Matrix, is_invertible
from .orders import OrderKind

SMALL = 3


def rand_int_matrix(rng: random.Random, rows: int, cols: int, bound: int = SMALL) -> Matrix:
    return Matrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def rand_low_rank(rng: random.Random, rows: int, cols: int, r: int, bound: int = 2) -> Matrix:
    """Product of random rows x r and r x cols factors; rank at most r."""
    return rand_int_matrix(rng, rows, r, bound) @ rand_int_matrix(rng, r, cols, bound)


def rand_dual(rng: random.Random, m: int, n: int) -> DualMatrix:
    """Unconstrained draw: low-rank standard part, dense dual part."""
    r = rng.randint(0, min(m, n))
    return DualMatrix(rand_low_rank(rng, m, n, r), rand_int_matrix(rng, m, n))


def rand_dual_with_dmpgi(rng: random.Random, m: int, n: int) -> DualMatrix:
    """E0 = EX + YE, so the annihilator (I - EE^+)E0(I - E^+E) vanishes."""
    r = rng.randint(0, min(m, n))
    e = rand_low_rank(rng, m, n, r)
    e0 = e @ rand_int_matrix(rng, n, n) + rand_int_matrix(rng, m, m) @ e
    return DualMatrix(e, e0)


def rand_group_invertible(rng: random.Random, n: int) -> Matrix:
    """P diag(K, O) P^-1 with K invertible."""
    r = rng.randint(0, n)
    fac = gen_nonsingular(n, rng.getrandbits(32))
    while True:
        k = rand_int_matrix(rng, r, r)
        if is_invertible(k):
            break
    core = Matrix.block([[k, Matrix.zeros(r, n - r)], [Matrix.zeros(n - r, r), Matrix.zeros(n - r, n - r)]])
    return fac.apply(core)


def rand_dual_index_one(rng: random.Random, n: int) -> DualMatrix:
    """Group-invertible E with E0 = EX + YE (dual index one)."""
    e = rand_group_invertible(rng, n)
    e0 = e @ rand_int_matrix(rng, n, n) + rand_int_matrix(rng, n, n) @ e
    return DualMatrix(e, e0)


def rand_for_kind(kind: OrderKind, rng: random.Random, m: int, n: int) -> DualMatrix:
    """A random dual matrix meeting the precondition of ``kind`` (square if sharp family)."""
    if kind.sharp_family:
        return rand_dual_index_one(rng, n)
    return rand_dual_with_dmpgi(rng, m, n)
