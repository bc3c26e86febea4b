from __future__ import annotations

import pytest

from dualorder.errors import InvalidTrials
from dualorder.orders import IMPLICATIONS, OrderKind
from dualorder.verifier import (
    BICONDITIONALS,
    CLAIMS,
    IMPLIED,
    REGISTRY,
    Failure,
    SuiteResult,
    digest,
    replay,
    run_suites,
    trial_seed,
)


def test_trial_seed_is_deterministic_and_keyed():
    assert trial_seed(1, "a", 0) == trial_seed(1, "a", 0)
    assert len({trial_seed(1, "a", i) for i in range(100)}) == 100
    assert trial_seed(1, "a", 0) != trial_seed(1, "b", 0) != trial_seed(2, "a", 0)


def test_digest_is_stable():
    assert digest(1, "x") == digest(1, "x") and len(digest(1)) == 16


@pytest.mark.parametrize("bad", [0, -3, True, 2.5])
def test_invalid_trials(bad):
    with pytest.raises(InvalidTrials):
        run_suites(["existence"], bad, seed=0)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(["nope"], 1, seed=0)


def test_registry_covers_every_claim_once():
    covered = [c for spec in REGISTRY.values() for c in spec.claims]
    assert sorted(covered) == sorted(CLAIMS)
    assert len(set(CLAIMS)) == len(CLAIMS)
    assert len(BICONDITIONALS) == 12


def test_implication_closure():
    for a, b in IMPLICATIONS:
        assert b in IMPLIED[a]
    assert OrderKind.DUAL_MINUS in IMPLIED[OrderKind.GSHARP]
    assert OrderKind.DM_SHARP not in IMPLIED[OrderKind.DUAL_MINUS]


def test_failures_sort_by_seed():
    res = SuiteResult("x", 3, [Failure(5, "b", "c", "w"), Failure(2, "a", "c", "w")])
    assert [f.seed for f in res.finalize().failures] == [2, 5]
    assert not res.passed and res.as_dict()["failures"][0]["seed"] == 2


def test_merge():
    a, b = SuiteResult("x", 2, skipped=1), SuiteResult("x", 3, [Failure(1, "d", "c", "w")])
    a.merge(b)
    assert (a.trials, a.skipped, len(a.failures)) == (5, 1, 1)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_small_runs_pass(name):
    (res,) = run_suites([name], 2, seed=11)
    assert res.passed, res.failures
    assert res.trials > 0


def test_runs_are_reproducible():
    a = run_suites(["equivalence"], 2, seed=3)[0].as_dict()
    b = run_suites(["equivalence"], 2, seed=3)[0].as_dict()
    assert a == b


@pytest.mark.parametrize("suite,key", [
    ("equivalence", BICONDITIONALS[0].key),
    ("axioms", "d-star"),
    ("implications", "g-sharp"),
    ("canonical", "dm-star"),
])
def test_replay_is_deterministic(suite, key):
    a, b = replay(suite, key, 1234), replay(suite, key, 1234)
    assert a.as_dict() == b.as_dict() and a.passed


def test_replay_rejects_aggregate_suites():
    with pytest.raises(KeyError):
        replay("existence", "x", 0)
