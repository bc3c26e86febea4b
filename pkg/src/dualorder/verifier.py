"""Seeded property campaigns over the proven claims about the orders.

Every suite returns a :class:`SuiteResult`. A trial is fully determined by its
integer trial seed, so a failure replays with :func:`replay`.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .canonical import (
    CONSTRAINED_BLOCKS,
    GeneratedPair,
    corollary_params,
    gen_pair,
    perturb_pair,
    random_chain,
    random_pair,
    GeneratorParams,
    _block_bounds,
)
from .dual import (
    DualMatrix,
    dggi,
    dggi_violations,
    dmpgi,
    dmpgi_exists,
    dmpgi_violations,
    dual_index_one,
    solve_dggi_dual_part,
    solve_dmpgi_dual_part,
)
from .errors import (
    CharacterizationMismatch,
    DualOrderError,
    IndexNotOne,
    InvalidTrials,
    NotSquare,
    PreconditionUnmet,
    TheoremViolation,
)
from .kernel import Matrix, is_group_invertible
from .orders import (
    IMPLICATIONS,
    NON_IMPLICATIONS,
    THEOREM_ROUTES,
    OrderKind,
    Unmet,
    check,
    evaluate_routes,
    implication_matrix,
)
from .sampling import rand_dual, rand_for_kind, rand_int_matrix

MAX_DIM = 6


@dataclass(frozen=True, order=True)
class Failure:
    seed: int
    digest: str
    claim: str
    witness: str


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list[Failure] = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: SuiteResult) -> None:
        self.trials += other.trials
        self.skipped += other.skipped
        self.failures.extend(other.failures)

    def finalize(self) -> SuiteResult:
        self.failures.sort()
        return self

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "skipped": self.skipped,
            "passed": self.passed,
            "failures": [asdict(f) for f in self.failures],
        }


# -- helpers -------------------------------------------------------------------


def _check_trials(trials: int) -> None:
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise InvalidTrials(f"trials must be a positive integer, got {trials!r}")


def trial_seed(seed: int, key: str, index: int) -> int:
    """Deterministic per-trial seed derived from the campaign seed."""
    h = hashlib.sha256(f"{seed}:{key}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big") >> 1


def _ser(x) -> object:
    if isinstance(x, DualMatrix):
        return {"std": _ser(x.std), "dual": _ser(x.dual)}
    if isinstance(x, Matrix):
        return [[str(v) for v in row] for row in x.tolist()]
    return str(x)


def digest(*xs) -> str:
    blob = json.dumps([_ser(x) for x in xs], sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _dims(rng: random.Random, square: bool, lo: int = 1) -> tuple[int, int]:
    n = rng.randint(lo, MAX_DIM)
    return (n, n) if square else (rng.randint(lo, MAX_DIM), n)


def _map(fn: Callable[[tuple], SuiteResult], tasks: list[tuple], jobs: int) -> list[SuiteResult]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [fn(t) for t in tasks]


def _collect(name: str, parts: Iterable[SuiteResult]) -> SuiteResult:
    out = SuiteResult(name)
    for p in parts:
        out.merge(p)
    return out.finalize()


# -- claim registry ------------------------------------------------------------


@dataclass(frozen=True)
class Biconditional:
    """kind holds iff its definition route and ``route`` agree."""

    key: str
    kind: OrderKind
    route: str


BICONDITIONALS: tuple[Biconditional, ...] = tuple(
    Biconditional(f"{kind.value} <=> {route}", kind, route)
    for kind, routes in THEOREM_ROUTES.items()
    for route in routes
)

# Every claim the suites must cover. Registry construction fails if a claim is
# listed here without a suite, or a suite registers an unlisted claim.
CLAIMS: tuple[str, ...] = (
    *(b.key for b in BICONDITIONALS),
    "partial order: dual-minus",
    "partial order: dm-sharp",
    "partial order: dm-star",
    *(f"partial order: {k.value}" for k in OrderKind
      if k not in (OrderKind.DUAL_MINUS, OrderKind.DM_SHARP, OrderKind.DM_STAR)),
    *(f"implication: {a.value} => {b.value}" for a, b in IMPLICATIONS),
    *(f"non-implication: {a.value} =/=> {b.value}" for a, b in NON_IMPLICATIONS),
    "canonical form: soundness of every kind",
    "canonical form: d-star specialization of dual-minus",
    "canonical form: p-star specialization of dual-minus",
    "canonical form: d-sharp specialization of dual-minus",
    "canonical form: g-sharp specialization of dual-minus",
    "DMPGI existence: block rank, dual rank and projector agree",
    "DMPGI existence: every dual index one matrix has a DMPGI",
    "DMPGI uniqueness",
    "DGGI uniqueness",
    "DMPGI satisfies the dual Penrose equations",
    "DGGI satisfies its three equations",
)


# -- equivalence suite ---------------------------------------------------------


def _definition_route(kind: OrderKind, routes) -> object:
    return routes[0]


def _compare(b: Biconditional, e, f, tseed: int, population: str, expect_true: bool) -> Failure | None:
    try:
        routes = evaluate_routes(b.kind, e, f)
    except (PreconditionUnmet, IndexNotOne, NotSquare):
        return None
    by_name = {r.name: r for r in routes}
    lhs = _definition_route(b.kind, routes)
    rhs = by_name[b.route]
    if lhs.verdict != rhs.verdict:
        w = (lhs.witnesses or rhs.witnesses)[0].equation
        return Failure(tseed, digest(e, f), b.key, f"{population}: {lhs.name}={lhs.verdict}, {rhs.name}={rhs.verdict}; {w}")
    if expect_true and not lhs.verdict:
        return Failure(tseed, digest(e, f), b.key, f"{population}: generated pair rejected")
    return None


def _random_population(kind: OrderKind, rng: random.Random) -> tuple:
    """Mostly unrelated pairs: independent draws, or pairs from a weaker kind."""
    choice = rng.random()
    if choice < 0.5:
        m, n = _dims(rng, kind.sharp_family)
        return rand_for_kind(kind, rng, m, n), rand_for_kind(kind, rng, m, n)
    weaker = OrderKind.DM_SHARP if kind.sharp_family else rng.choice([OrderKind.DUAL_MINUS, OrderKind.DM_STAR])
    if kind.sharp_family and choice < 0.75:
        weaker = OrderKind.DUAL_MINUS
    gp = random_pair(weaker, rng.getrandbits(32), verify=False)
    if kind.sharp_family and gp.e.shape[0] != gp.e.shape[1]:
        m, n = _dims(rng, True)
        return rand_for_kind(kind, rng, m, n), rand_for_kind(kind, rng, m, n)
    return gp.e, gp.f


def _perturbed_population(kind: OrderKind, rng: random.Random) -> GeneratedPair:
    """Generated pair (r_e >= 1) with one nonempty pinned block shifted."""
    m, n = _dims(rng, kind.sharp_family, lo=2)
    r_f = rng.randint(1, min(m, n))
    r_e = rng.randint(1, r_f)
    sim = kind in (OrderKind.MINUS, OrderKind.DUAL_MINUS) and m == n and rng.random() < 0.5
    gp = gen_pair(kind, GeneratorParams.random(m, n, r_e, r_f, rng.getrandbits(32), similarity=sim), verify=False)
    blocks = list(CONSTRAINED_BLOCKS[kind])
    rng.shuffle(blocks)
    for name in blocks:
        r0, r1, c0, c1 = _block_bounds(gp.params, int(name[-4]), int(name[-2]))
        if r1 > r0 and c1 > c0:
            return perturb_pair(gp, name, rand_int_matrix(rng, r1 - r0, c1 - c0))
    raise AssertionError("F(1,1) is nonempty when r_e >= 1")


def _equivalence_task(task: tuple[str, int]) -> SuiteResult:
    key, tseed = task
    b = next(x for x in BICONDITIONALS if x.key == key)
    rng = random.Random(tseed)
    res = SuiteResult(key, trials=1)
    gp = random_pair(b.kind, rng.getrandbits(32))
    pert = _perturbed_population(b.kind, rng)
    samples = [
        ("in-order", gp.e, gp.f, True),
        ("random", *_random_population(b.kind, rng), False),
        ("perturbed", pert.e, pert.f, False),
    ]
    for population, e, f, expect in samples:
        try:
            fail = _compare(b, e, f, tseed, population, expect)
        except CharacterizationMismatch as exc:
            fail = Failure(tseed, digest(e, f), b.key, f"{population}: {exc}")
        if fail is not None:
            res.failures.append(fail)
    return res


def run_equivalence_suite(trials: int, seed: int, *, jobs: int = 1, keys: Iterable[str] | None = None) -> SuiteResult:
    """Each biconditional over in-order, random and perturbed populations."""
    _check_trials(trials)
    selected = list(keys) if keys is not None else [b.key for b in BICONDITIONALS]
    tasks = [(k, trial_seed(seed, k, i)) for k in selected for i in range(trials)]
    return _collect("equivalence", _map(_equivalence_task, tasks, jobs))


# -- axiom suite ---------------------------------------------------------------


def _axiom_task(task: tuple[str, int]) -> SuiteResult:
    kind_value, tseed = task
    kind = OrderKind(kind_value)
    claim = f"partial order: {kind.value}"
    rng = random.Random(tseed)
    res = SuiteResult(claim, trials=1)

    def fail(what: str, *xs) -> None:
        res.failures.append(Failure(tseed, digest(*xs), claim, what))

    m, n = _dims(rng, kind.sharp_family)
    x = rand_for_kind(kind, rng, m, n)
    if kind is OrderKind.SHARP or kind.is_real:
        x = DualMatrix.real(x.std)
    try:
        if not check(kind, x, x).verdict:
            fail("reflexivity", x)
    except (PreconditionUnmet, IndexNotOne):
        res.skipped += 1

    gp = random_pair(kind, rng.getrandbits(32))
    if gp.params.r_e < gp.params.r_f and check(kind, gp.f, gp.e).verdict:
        fail("antisymmetry: strictly ranked pair related both ways", gp.e, gp.f)

    y = x if rng.random() < 0.3 else rand_for_kind(kind, rng, m, n)
    if kind.is_real:
        y = DualMatrix.real(y.std)
    try:
        both = check(kind, x, y).verdict and check(kind, y, x).verdict
        if both and x != y:
            fail("antisymmetry: mutual relation without equality", x, y)
    except (PreconditionUnmet, IndexNotOne):
        res.skipped += 1

    try:
        random_chain(kind, rng.getrandbits(32))
    except TheoremViolation as exc:
        fail(f"transitivity: {exc}")
    return res


def run_axiom_suite(trials: int, seed: int, *, jobs: int = 1, kinds: Iterable[OrderKind] | None = None) -> SuiteResult:
    """Reflexivity, antisymmetry (rank argument and mutual relation) and transitivity."""
    _check_trials(trials)
    kinds = list(kinds) if kinds is not None else list(OrderKind)
    tasks = [(k.value, trial_seed(seed, f"axioms: {k.value}", i)) for k in kinds for i in range(trials)]
    return _collect("axioms", _map(_axiom_task, tasks, jobs))


# -- implication suite ---------------------------------------------------------


def _closure() -> dict[OrderKind, set[OrderKind]]:
    reach = {k: {b for a, b in IMPLICATIONS if a is k} for k in OrderKind}
    changed = True
    while changed:
        changed = False
        for k in OrderKind:
            extra = set().union(*(reach[b] for b in reach[k])) - reach[k] if reach[k] else set()
            if extra:
                reach[k] |= extra
                changed = True
    return reach


IMPLIED = _closure()


def _implication_task(task: tuple[str, int]) -> SuiteResult:
    kind_value, tseed = task
    kind = OrderKind(kind_value)
    rng = random.Random(tseed)
    res = SuiteResult(kind.value, trials=1)
    gp = random_pair(kind, rng.getrandbits(32))
    try:
        verdicts = implication_matrix(gp.e, gp.f)
    except TheoremViolation as exc:
        res.failures.append(Failure(tseed, digest(gp.e, gp.f), f"implications from {kind.value}", str(exc)))
        return res
    for b in IMPLIED[kind]:
        if verdicts[b] is not True:
            v = verdicts[b]
            res.failures.append(Failure(
                tseed, digest(gp.e, gp.f), f"implication: {kind.value} => {b.value}",
                f"generated {kind.value} pair gives {b.value} = {v.precondition if isinstance(v, Unmet) else v}",
            ))
    return res


def fixture_pairs() -> dict[str, tuple[DualMatrix, DualMatrix]]:
    from .fixtures import load_examples

    return load_examples()


# Which fixture witnesses which non-implication.
NON_IMPLICATION_FIXTURES = {
    (OrderKind.DUAL_MINUS, OrderKind.DM_SHARP): "dual-minus-not-dm-sharp",
    (OrderKind.DM_SHARP, OrderKind.DSHARP): "dm-sharp-not-d-sharp",
    (OrderKind.DM_SHARP, OrderKind.GSHARP): "dm-sharp-not-g-sharp",
}


def run_implication_suite(trials: int, seed: int, *, jobs: int = 1) -> SuiteResult:
    """Proven edges on generated pairs; non-implications on the worked examples."""
    _check_trials(trials)
    tasks = [(k.value, trial_seed(seed, f"implications: {k.value}", i)) for k in OrderKind for i in range(trials)]
    out = _collect("implications", _map(_implication_task, tasks, jobs))
    fixtures = fixture_pairs()
    for (a, b), name in NON_IMPLICATION_FIXTURES.items():
        e, f = fixtures[name]
        out.trials += 1
        claim = f"non-implication: {a.value} =/=> {b.value}"
        try:
            verdicts = implication_matrix(e, f)
        except TheoremViolation as exc:
            out.failures.append(Failure(0, digest(e, f), claim, str(exc)))
            continue
        if not (verdicts[a] is True and verdicts[b] is False):
            out.failures.append(Failure(0, digest(e, f), claim, f"{name}: {a.value}={verdicts[a]}, {b.value}={verdicts[b]}"))
    return out.finalize()


# -- uniqueness and inverse oracles --------------------------------------------


def run_uniqueness_spotcheck(seed: int, cases: int = 60) -> SuiteResult:
    """Solve the dual-part linear systems on small shapes; the solution must be a point.

    Inputs without a DMPGI (or outside dual index one) are counted as skipped.
    """
    res = SuiteResult("uniqueness")
    for i in range(cases):
        tseed = trial_seed(seed, "uniqueness", i)
        rng = random.Random(tseed)
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        e = rand_dual(rng, m, n) if rng.random() < 0.5 else rand_for_kind(OrderKind.DUAL_MINUS, rng, m, n)
        res.trials += 1
        if dmpgi_exists(e)[0]:
            sol = solve_dmpgi_dual_part(e)
            if not sol.unique or sol.particular != dmpgi(e).dual:
                res.failures.append(Failure(tseed, digest(e), "DMPGI uniqueness", f"nullity {sol.nullity}"))
        else:
            res.skipped += 1
        sq = rand_for_kind(OrderKind.DSHARP, rng, n, n) if rng.random() < 0.5 else rand_dual(rng, n, n)
        if is_group_invertible(sq.std) and dual_index_one(sq):
            sol = solve_dggi_dual_part(sq)
            if not sol.unique or sol.particular != dggi(sq).dual:
                res.failures.append(Failure(tseed, digest(sq), "DGGI uniqueness", f"nullity {sol.nullity}"))
        else:
            res.skipped += 1
    return res.finalize()


def run_inverse_oracles(trials: int, seed: int) -> SuiteResult:
    """DMPGI / DGGI outputs substituted into their defining equations."""
    _check_trials(trials)
    res = SuiteResult("inverses")
    for i in range(trials):
        tseed = trial_seed(seed, "inverses", i)
        rng = random.Random(tseed)
        m, n = _dims(rng, False)
        e = rand_for_kind(OrderKind.DUAL_MINUS, rng, m, n)
        g = rand_for_kind(OrderKind.DSHARP, rng, n, n)
        res.trials += 1
        for claim, x, bad in (
            ("DMPGI satisfies the dual Penrose equations", e, lambda a: dmpgi_violations(a, dmpgi(a))),
            ("DGGI satisfies its three equations", g, lambda a: dggi_violations(a, dggi(a))),
        ):
            try:
                violated = bad(x)
            except DualOrderError as exc:
                violated = [f"{type(exc).__name__}: {exc}"]
            if violated:
                res.failures.append(Failure(tseed, digest(x), claim, ", ".join(violated)))
    return res.finalize()


def run_existence_routes(trials: int, seed: int) -> SuiteResult:
    """DMPGI existence routes must agree; dual index one must imply existence."""
    _check_trials(trials)
    res = SuiteResult("existence")
    for i in range(trials):
        tseed = trial_seed(seed, "existence", i)
        rng = random.Random(tseed)
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        e = rand_dual(rng, m, n) if rng.random() < 0.5 else rand_for_kind(OrderKind.DUAL_MINUS, rng, m, n)
        sq = rand_for_kind(OrderKind.DSHARP, rng, n, n)
        res.trials += 1
        try:
            dmpgi_exists(e)
            if not dmpgi_exists(sq)[0]:
                res.failures.append(Failure(tseed, digest(sq), "DMPGI existence: every dual index one matrix has a DMPGI",
                                            "dual index one but the annihilator is nonzero"))
        except CharacterizationMismatch as exc:
            res.failures.append(Failure(tseed, digest(e), "DMPGI existence: block rank, dual rank and projector agree",
                                        json.dumps(exc.routes, sort_keys=True)))
    return res.finalize()


def run_canonical_suite(trials: int, seed: int, *, jobs: int = 1) -> SuiteResult:
    """gen_pair soundness for every kind, plus the four corollary specializations."""
    _check_trials(trials)
    tasks = [(k.value, trial_seed(seed, f"canonical: {k.value}", i)) for k in OrderKind for i in range(trials)]
    return _collect("canonical", _map(_canonical_task, tasks, jobs))


def _canonical_task(task: tuple[str, int]) -> SuiteResult:
    kind_value, tseed = task
    kind = OrderKind(kind_value)
    rng = random.Random(tseed)
    res = SuiteResult(kind.value, trials=1)
    try:
        random_pair(kind, rng.getrandbits(32))
    except TheoremViolation as exc:
        res.failures.append(Failure(tseed, "", "canonical form: soundness of every kind", str(exc)))
    if kind in (OrderKind.DSTAR, OrderKind.PSTAR, OrderKind.DSHARP, OrderKind.GSHARP):
        n = rng.randint(1, MAX_DIM)
        r_f = rng.randint(0, n)
        r_e = rng.randint(0, r_f)
        p = corollary_params(GeneratorParams.random(n, n, r_e, r_f, rng.getrandbits(32)), kind)
        gp = gen_pair(OrderKind.DUAL_MINUS, p)
        if not check(kind, gp.e, gp.f).verdict:
            res.failures.append(Failure(tseed, digest(gp.e, gp.f),
                                        f"canonical form: {kind.value} specialization of dual-minus", "rejected"))
    return res


# -- registry ------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    claims: tuple[str, ...]
    run: Callable[..., SuiteResult]


def _build_registry() -> dict[str, SuiteSpec]:
    specs = [
        SuiteSpec("equivalence", tuple(b.key for b in BICONDITIONALS),
                  lambda trials, seed, jobs=1: run_equivalence_suite(trials, seed, jobs=jobs)),
        SuiteSpec("axioms", tuple(c for c in CLAIMS if c.startswith("partial order:")),
                  lambda trials, seed, jobs=1: run_axiom_suite(trials, seed, jobs=jobs)),
        SuiteSpec("implications", tuple(c for c in CLAIMS if "implication" in c),
                  lambda trials, seed, jobs=1: run_implication_suite(trials, seed, jobs=jobs)),
        SuiteSpec("canonical", tuple(c for c in CLAIMS if c.startswith("canonical form")),
                  lambda trials, seed, jobs=1: run_canonical_suite(trials, seed, jobs=jobs)),
        SuiteSpec("existence", ("DMPGI existence: block rank, dual rank and projector agree",
                                "DMPGI existence: every dual index one matrix has a DMPGI"),
                  lambda trials, seed, jobs=1: run_existence_routes(trials, seed)),
        SuiteSpec("uniqueness", ("DMPGI uniqueness", "DGGI uniqueness"),
                  lambda trials, seed, jobs=1: run_uniqueness_spotcheck(seed)),
        SuiteSpec("inverses", ("DMPGI satisfies the dual Penrose equations", "DGGI satisfies its three equations"),
                  lambda trials, seed, jobs=1: run_inverse_oracles(trials, seed)),
    ]
    covered = [c for s in specs for c in s.claims]
    missing = set(CLAIMS) - set(covered)
    unknown = set(covered) - set(CLAIMS)
    if missing or unknown or len(covered) != len(set(covered)):
        raise RuntimeError(f"suite registry out of sync: missing={sorted(missing)}, unknown={sorted(unknown)}")
    return {s.name: s for s in specs}


REGISTRY = _build_registry()


def run_suites(names: Iterable[str] | None, trials: int, seed: int, *, jobs: int = 1) -> list[SuiteResult]:
    _check_trials(trials)
    names = list(names) if names else list(REGISTRY)
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(REGISTRY)}")
    return [REGISTRY[n].run(trials, seed, jobs=jobs) for n in names]


_TASKS: dict[str, Callable[[tuple[str, int]], SuiteResult]] = {
    "equivalence": _equivalence_task,
    "axioms": _axiom_task,
    "implications": _implication_task,
    "canonical": _canonical_task,
}


def replay(suite: str, key: str, seed: int) -> SuiteResult:
    """Re-run one trial from a recorded failure.

    ``key`` is the biconditional key (equivalence) or the order name (other
    per-kind suites); ``seed`` is the failure's trial seed.
    """
    if suite not in _TASKS:
        raise KeyError(f"suite {suite!r} has no per-trial replay; rerun it with the campaign seed")
    return _TASKS[suite]((key, seed)).finalize()
