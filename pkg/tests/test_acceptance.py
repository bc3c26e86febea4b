"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary of any pytest run that
includes this module.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES
from dualorder.cli import main
from dualorder.fixtures import fixture_path, load_examples
from dualorder.orders import IMPLICATIONS, OrderKind
from dualorder.verifier import (
    BICONDITIONALS,
    run_axiom_suite,
    run_canonical_suite,
    run_equivalence_suite,
    run_existence_routes,
    run_implication_suite,
    run_inverse_oracles,
)

SEED = 20240101


@contextmanager
def criterion(number: int, title: str, limit_s: float | None = None):
    """Record a PASS/FAIL line; a time limit, when given, is part of the criterion."""
    start = time.perf_counter()
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit_s is not None:
            assert elapsed < limit_s, f"took {elapsed:.2f} s, limit {limit_s} s"
        detail = f"{elapsed:.2f} s"
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL criterion {number}: {title} ({type(exc).__name__}: {exc})")
        print(ACCEPTANCE_LINES[-1])
        raise
    ACCEPTANCE_LINES.append(f"PASS criterion {number}: {title} ({detail})")
    print(ACCEPTANCE_LINES[-1])


def _check(capsys, order: str, name: str) -> tuple[int, dict]:
    code = main(["--json", "check", order, str(fixture_path(name, "E")), str(fixture_path(name, "F"))])
    return code, json.loads(capsys.readouterr().out)["result"]


def _witness(result: dict) -> tuple[str, list, list]:
    w = result["witness"]
    return w["equation"], w["lhs"]["std"], w["rhs"]["std"]


def test_criterion_1_first_example(capsys):
    name = "dual-minus-not-dm-sharp"
    with criterion(1, "first example: dual-minus true, sharp and dm-sharp false with witness", 1.0):
        code, dm = _check(capsys, "dual-minus", name)
        assert code == 0 and dm["verdict"] is True
        code, sharp = _check(capsys, "sharp", name)
        assert code == 1 and sharp["verdict"] is False
        assert _witness(sharp) == ("E^#E = E^#F", [[1, 0, 0], [0, 0, 0], [0, 0, 0]], [[2, 1, 0], [0, 0, 0], [0, 0, 0]])
        code, dms = _check(capsys, "dm-sharp", name)
        assert code == 1 and dms["verdict"] is False
        assert dm["rank_data"]["rk(F-E)"] == 1
        assert dm["rank_data"]["dual_rank_diff"]["block_rank"] == 2


def test_criterion_2_d_sharp_example(capsys):
    name = "dm-sharp-not-d-sharp"
    with criterion(2, "second example: dm-sharp true, d-sharp false with witness", 1.0):
        code, dms = _check(capsys, "dm-sharp", name)
        assert code == 0 and dms["verdict"] is True
        code, ds = _check(capsys, "d-sharp", name)
        assert code == 1 and ds["verdict"] is False
        assert _witness(ds) == (
            "EF0+E0F = E0E+EE0",
            [[2, 8, 7], [2, 0, 0], [3, 0, 0]],
            [[2, 4, 7], [2, 0, 0], [3, 0, 0]],
        )


def test_criterion_3_g_sharp_example(capsys):
    name = "dm-sharp-not-g-sharp"
    with criterion(3, "third example: dm-sharp true, g-sharp false with witness", 1.0):
        code, dms = _check(capsys, "dm-sharp", name)
        assert code == 0 and dms["verdict"] is True
        code, gs = _check(capsys, "g-sharp", name)
        assert code == 1 and gs["verdict"] is False
        eq, lhs, rhs = _witness(gs)
        assert eq == "E0E = F0E"
        assert [row[0] for row in lhs] == [1, 2, 3]
        assert [row[0] for row in rhs] == [1, 6, 3]


def test_criterion_4_existence_routes():
    with criterion(4, "DMPGI existence routes agree on 500 matrices up to 5x5", 30.0):
        res = run_existence_routes(500, SEED)
        assert res.trials == 500 and res.passed, res.failures[:3]


@pytest.mark.slow
def test_criterion_5_equivalence_suite():
    with criterion(5, "12 biconditionals x 100 trials over in-order, random and perturbed pairs", 120.0):
        res = run_equivalence_suite(100, SEED)
        assert len(BICONDITIONALS) == 12
        assert res.trials == 1200 and res.passed, res.failures[:3]


@pytest.mark.slow
def test_criterion_6_canonical_forms():
    with criterion(6, "canonical forms: 10 kinds x 50 seeds plus the four specializations"):
        res = run_canonical_suite(50, SEED)
        assert res.trials == 500 and res.passed, res.failures[:3]


@pytest.mark.slow
def test_criterion_7_partial_order_axioms():
    with criterion(7, "reflexivity, antisymmetry and transitivity for every kind"):
        # Per kind and trial: one reflexivity probe, one strictly ranked pair,
        # one mutual-relation probe and one generated chain.
        res = run_axiom_suite(100, SEED)
        assert res.trials == 100 * len(OrderKind) and res.passed, res.failures[:3]


@pytest.mark.slow
def test_criterion_8_implication_graph():
    with criterion(8, "no proven edge violated; fixtures witness the three non-implications"):
        res = run_implication_suite(50, SEED)
        assert res.trials == 50 * len(OrderKind) + 3 and res.passed, res.failures[:3]
        assert len(load_examples()) == 3 and len(IMPLICATIONS) > 0


def test_criterion_9_inverse_substitution():
    with criterion(9, "DMPGI and DGGI outputs satisfy their defining equations on 200 inputs"):
        res = run_inverse_oracles(200, SEED)
        assert res.trials == 200 and res.passed, res.failures[:3]
