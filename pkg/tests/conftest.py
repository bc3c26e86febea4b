from __future__ import annotations

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dualorder.dual import DualMatrix
from dualorder.kernel import Matrix

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4), entries=st.integers(-5, 5)):
    """Integer matrices with the given shape strategies."""
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(
            st.lists(entries, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
        ).map(lambda rs: Matrix.from_rows(rs, cols=rc[1]))
    )


def square_matrices(n=st.integers(1, 4), entries=st.integers(-5, 5)):
    return n.flatmap(lambda k: matrices(st.just(k), st.just(k), entries))


def low_rank_matrices(max_dim: int = 4):
    """Products A @ B through an inner dimension r, so rank deficiency is common."""

    def build(dims):
        m, n, r = dims
        return st.tuples(
            matrices(st.just(m), st.just(r), st.integers(-2, 2)),
            matrices(st.just(r), st.just(n), st.integers(-2, 2)),
        ).map(lambda ab: ab[0] @ ab[1])

    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(build)


def dual_matrices(max_dim: int = 4):
    return low_rank_matrices(max_dim).flatmap(
        lambda e: matrices(st.just(e.nrows), st.just(e.ncols)).map(lambda e0: DualMatrix(e, e0))
    )


def rationals():
    return st.fractions(min_value=-20, max_value=20, max_denominator=12)


def rational_matrices(max_dim: int = 4):
    return matrices(st.integers(1, max_dim), st.integers(1, max_dim), rationals())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
