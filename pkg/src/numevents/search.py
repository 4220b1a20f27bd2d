"""Search back-ends: Boolean subalgebras of the two-valued cube, the
concrete embedding oracle, saturation refutation and the seeded MO_2
interpolation scan."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterator, Sequence

from .algebra import Budget, EventSet, Outcome, is_boolean, saturate, verify_axioms
from .construct import boolean_from_atoms, mo_n
from .core import Certificate, SProbability, StateSet, complement, is_proper, lt
from .errors import NotAnAlgebra, PreconditionError, StateSetTooLarge, UnsupportedSize

DEFAULT_STATE_CAP = 6
DEFAULT_DENOMINATOR_BOUND = 64


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """Partitions of range(n) as restricted growth strings, in lexicographic order."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for idx, b in enumerate(labels):
                blocks[b].append(idx)
            yield blocks
            return
        for b in range(top + 2):
            labels[i] = b
            yield from rec(i + 1, max(top, b))

    labels[0] = 0
    yield from rec(1, 0)


def _indicator(states: StateSet, block: Sequence[int]) -> SProbability:
    vals = [0] * len(states)
    for i in block:
        vals[i] = 1
    return SProbability(states, tuple(vals))


def partition_algebra(states: StateSet, blocks: list[list[int]]) -> EventSet:
    if len(blocks) == 1:
        return EventSet.of([], states)
    return boolean_from_atoms([_indicator(states, b) for b in blocks])


def enumerate_boolean_subalgebras(S: StateSet, cap: int = DEFAULT_STATE_CAP) -> Iterator[EventSet]:
    """One Boolean subalgebra of {0,1}^S per set partition of S."""
    if len(S) > cap:
        raise StateSetTooLarge(f"|S| = {len(S)} exceeds the cap {cap}")
    for blocks in set_partitions(len(S)):
        yield partition_algebra(S, blocks)


class OracleOutcome(enum.Enum):
    EMBEDDING_FOUND = "EmbeddingFound"
    NO_EMBEDDING = "NoEmbedding"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass
class OracleResult:
    outcome: OracleOutcome
    witness: EventSet | None = None
    searched: int = 0
    note: str = ""


ORACLE_SCOPE_NOTE = (
    "search restricted to Boolean subalgebras of the two-valued cube; "
    "non-concrete Boolean algebras are not examined"
)


def _canonical(E: EventSet) -> tuple:
    return tuple(sorted(e.values for e in E.events))


def boolean_embedding_concrete(events: Sequence[SProbability],
                               states: StateSet | None = None,
                               cap: int = DEFAULT_STATE_CAP) -> OracleResult:
    """Smallest Boolean subalgebra of the two-valued cube containing ``events``."""
    events = list(events)
    if states is None:
        if not events:
            raise PreconditionError("cannot infer the state set of an empty query")
        states = events[0].states
    if any(not e.is_two_valued() for e in events):
        return OracleResult(OracleOutcome.OUT_OF_SCOPE, note="query contains a value outside {0,1}")
    if len(states) > cap:
        return OracleResult(OracleOutcome.OUT_OF_SCOPE, note=f"|S| = {len(states)} exceeds the cap {cap}")
    wanted = set(events)
    best = None
    searched = 0
    for algebra in enumerate_boolean_subalgebras(states, cap):
        searched += 1
        if wanted <= algebra.as_set:
            key = (len(algebra), _canonical(algebra))
            if best is None or key < best[0]:
                best = (key, algebra)
    if best is None:
        return OracleResult(OracleOutcome.NO_EMBEDDING, searched=searched, note=ORACLE_SCOPE_NOTE)
    return OracleResult(OracleOutcome.EMBEDDING_FOUND, best[1], searched, ORACLE_SCOPE_NOTE)


def saturation_certificate(result) -> Certificate:
    steps = result.derivation()
    return Certificate(
        "SATURATION",
        {"trace": steps, "witness": result.contradiction_witness, "reason": result.explanation},
        result.explanation,
    )


def refute_by_saturation(E: EventSet, q: SProbability, budget: Budget | None = None) -> Certificate | None:
    if not verify_axioms(E).ok:
        raise NotAnAlgebra("refutation needs a verified algebra")
    result = saturate(E, [q], budget)
    if result.outcome is Outcome.CONTRADICTION:
        return saturation_certificate(result)
    return None


# -- MO_2 interpolation scan --------------------------------------------------


class Lcg:
    """64-bit linear congruential generator; choices come from the high 32 bits."""

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.MULTIPLIER * self.state + self.INCREMENT) & self.MASK
        return self.state

    def below(self, n: int) -> int:
        return (self.next_u64() >> 32) % n

    def rational(self, lo: Fraction, hi: Fraction, bound: int) -> Fraction:
        """A rational in [lo, hi] with denominator at most ``bound`` (lo if none fits)."""
        den = 1 + self.below(bound)
        first = -((-lo.numerator * den) // lo.denominator)  # ceil(lo * den)
        last = (hi.numerator * den) // hi.denominator
        if first > last:
            return lo
        return Fraction(first + self.below(last - first + 1), den)


@dataclass
class ScanReport:
    size: int
    trials: int
    denominator_bound: int
    seed: int
    mo2_instances: int = 0
    configurations: int = 0
    non_proper_candidates: int = 0
    closed_boolean: int = 0
    closed_non_boolean: int = 0
    refuted: int = 0
    budget_exceeded: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "trials": self.trials,
            "denominator_bound": self.denominator_bound,
            "seed": self.seed,
            "mo2_instances": self.mo2_instances,
            "configurations": self.configurations,
            "non_proper_candidates": self.non_proper_candidates,
            "closed_boolean": self.closed_boolean,
            "closed_non_boolean": self.closed_non_boolean,
            "refuted": self.refuted,
            "budget_exceeded": self.budget_exceeded,
            "counterexample_count": len(self.counterexamples),
            "counterexamples": self.counterexamples,
        }


_SCAN_BUDGET = Budget(max_elements=512, max_rounds=16)


def _mo2_or_none(g: SProbability, h: SProbability) -> EventSet | None:
    try:
        return mo_n([(g, complement(g)), (h, complement(h))])
    except PreconditionError:
        return None


def interpolation_config(P: EventSet, g, h, q, v) -> bool:
    """0 < q < g < v < 1 and 0 < q < h < v < 1, with q outside P."""
    states = P.states
    z = SProbability.constant(states, 0)
    o = SProbability.constant(states, 1)
    return (q not in P and lt(z, q) and lt(q, g) and lt(q, h)
            and lt(g, v) and lt(h, v) and lt(v, o))


def check_configuration(P: EventSet, g, h, q, v, report: ScanReport) -> None:
    """Look for a Boolean algebra containing P, q and v via saturation."""
    report.configurations += 1
    if not (is_proper(q) and is_proper(v)):
        report.non_proper_candidates += 1
        return
    result = saturate(P, [q, v], _SCAN_BUDGET)
    if result.outcome is Outcome.CONTRADICTION:
        report.refuted += 1
    elif result.outcome is Outcome.BUDGET_EXCEEDED:
        report.budget_exceeded += 1
    elif is_boolean(result.closure):
        report.closed_boolean += 1
        report.counterexamples.append({
            "P": [str(e) for e in P.events],
            "g": str(g), "h": str(h), "q": str(q), "v": str(v),
            "boolean_algebra": [str(e) for e in result.closure.events],
        })
    else:
        report.closed_non_boolean += 1


def _scan(size: int, trials: int, denominator_bound: int, seed: int) -> ScanReport:
    states = StateSet.default(size)
    rng = Lcg(seed)
    report = ScanReport(size, trials, denominator_bound, seed)
    zero_, one_ = Fraction(0), Fraction(1)
    for _ in range(trials):
        g = SProbability(states, tuple(rng.rational(zero_, one_, denominator_bound) for _ in range(size)))
        h = SProbability(states, tuple(rng.rational(zero_, one_, denominator_bound) for _ in range(size)))
        P = _mo2_or_none(g, h)
        if P is None:
            continue
        report.mo2_instances += 1
        low = [min(a, b) for a, b in zip(g.values, h.values)]
        high = [max(a, b) for a, b in zip(g.values, h.values)]
        q = SProbability(states, tuple(rng.rational(zero_, lo, denominator_bound) for lo in low))
        v = SProbability(states, tuple(rng.rational(hi, one_, denominator_bound) for hi in high))
        if not interpolation_config(P, g, h, q, v):
            continue
        check_configuration(P, g, h, q, v, report)
    return report


def mo2_interpolation_scan(S_size: int, trials: int, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
                          seed: int = 1) -> ScanReport:
    """Seeded random search for q, v interpolating an MO_2 inside a Boolean algebra.

    Only sizes 1 to 3 are accepted; there the configuration is impossible,
    so any counterexample in the report points at a bug.
    """
    if S_size not in (1, 2, 3):
        raise UnsupportedSize(f"scan supports |S| in 1..3, got {S_size}")
    if trials <= 0 or denominator_bound <= 0:
        raise PreconditionError("trials and denominator bound must be positive")
    return _scan(S_size, trials, denominator_bound, seed)


def exhaustive_two_valued_scan(S_size: int) -> ScanReport:
    """Every two-valued choice of g, h, q, v over |S| = S_size."""
    if S_size not in (1, 2, 3):
        raise UnsupportedSize(f"scan supports |S| in 1..3, got {S_size}")
    states = StateSet.default(S_size)
    vectors = [SProbability(states, v) for v in cartesian((0, 1), repeat=S_size)]
    report = ScanReport(S_size, 0, 1, 0)
    for g, h in cartesian(vectors, repeat=2):
        P = _mo2_or_none(g, h)
        if P is None:
            continue
        report.mo2_instances += 1
        for q, v in cartesian(vectors, repeat=2):
            report.trials += 1
            if interpolation_config(P, g, h, q, v):
                check_configuration(P, g, h, q, v, report)
    return report
