"""Finite event sets: axiom checks, order structure and saturation."""

from __future__ import annotations

import enum
import math
import os
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .core import (
    Certificate,
    SProbability,
    StateSet,
    complement,
    difference,
    is_proper,
    one,
    ortho_sum,
    zero,
)
from .errors import ElementNotInSet, NotAnAlgebra, PreconditionError, StateSetMismatch


@dataclass(frozen=True, eq=False)
class EventSet:
    """A duplicate-free collection of S-probabilities containing 0 and 1.

    The order of ``events`` is the construction order; it fixes report
    layout and tie-breaking but not equality, which is set equality.
    """

    states: StateSet
    events: tuple[SProbability, ...]
    duplicates_dropped: int = 0

    @classmethod
    def of(cls, events: Iterable[SProbability], states: StateSet | None = None) -> EventSet:
        events = list(events)
        if states is None:
            if not events:
                raise PreconditionError("cannot infer the state set of an empty event list")
            states = events[0].states
        seen = set()
        ordered = []
        dropped = 0
        for e in events:
            if e.states != states:
                raise StateSetMismatch(f"{e} is not over {states.names}")
            if e in seen:
                dropped += 1
                continue
            seen.add(e)
            ordered.append(e)
        z, o = zero(states), one(states)
        if z not in seen:
            ordered.insert(0, z)
        if o not in seen:
            ordered.append(o)
        return cls(states, tuple(ordered), dropped)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __contains__(self, p):
        return p in self._index

    def __eq__(self, other):
        if not isinstance(other, EventSet):
            return NotImplemented
        return self.states == other.states and self.as_set == other.as_set

    def __hash__(self):
        return hash((self.states, self.as_set))

    def __repr__(self):
        return "EventSet{" + ", ".join(str(e) for e in self.events) + "}"

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.events)

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.events)}

    def index(self, p: SProbability) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise ElementNotInSet(f"{p} is not in the event set") from None

    def sorted(self) -> list[SProbability]:
        return sorted(self.events, key=lambda e: e.values)

    def with_events(self, extra: Iterable[SProbability]) -> EventSet:
        return EventSet.of(list(self.events) + list(extra), self.states)

    def is_subset(self, other: EventSet) -> bool:
        return self.as_set <= other.as_set

    @cached_property
    def order(self) -> _Order:
        return _Order(self)


class _Order:
    """Bitmask encoding of (E, <=) with meet/join lookups.

    ``down[i]`` has bit j set iff events[j] <= events[i]. The meet of i and j
    exists iff some k has ``down[k] == down[i] & down[j]``, because the
    greatest lower bound is exactly the element whose down-set is the set of
    common lower bounds.
    """

    def __init__(self, E: EventSet):
        ev = E.events
        n = len(ev)
        # integer numerators over one common denominator: comparisons and
        # sums below never touch Fraction
        scale = 1
        for e in ev:
            for v in e.values:
                scale = math.lcm(scale, v.denominator)
        vals = [tuple(v.numerator * (scale // v.denominator) for v in e.values) for e in ev]
        down = [0] * n
        up = [0] * n
        orth = [0] * n
        for i in range(n):
            vi = vals[i]
            for j in range(n):
                vj = vals[j]
                if all(a <= b for a, b in zip(vj, vi)):
                    down[i] |= 1 << j
                    up[j] |= 1 << i
                if all(a + b <= scale for a, b in zip(vi, vj)):
                    orth[i] |= 1 << j
        self.n = n
        self.scale = scale
        self.ints = vals
        self.index_of_ints = {v: k for k, v in enumerate(vals)}
        self.down = down
        self.up = up
        self.orth = orth
        self.by_down = {m: k for k, m in enumerate(down)}
        self.by_up = {m: k for k, m in enumerate(up)}

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def meet(self, i: int, j: int) -> int | None:
        return self.by_down.get(self.down[i] & self.down[j])

    def join(self, i: int, j: int) -> int | None:
        return self.by_up.get(self.up[i] & self.up[j])


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class AxiomReport:
    holds_a: bool
    holds_b: bool
    holds_c: bool
    violations: list[Certificate]
    all_proper: bool
    non_proper_witnesses: list[SProbability]
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.holds_a and self.holds_b and self.holds_c


def verify_axioms(E: EventSet) -> AxiomReport:
    """Check 0 in E, closure under complement, and the orthogonal-triple axiom.

    Triples are taken with repetition, so ``p, p, p'`` is examined whenever
    ``p`` is orthogonal to itself.
    """
    violations = []
    z = zero(E.states)
    holds_a = z in E
    if not holds_a:
        violations.append(Certificate("AXIOM_A", {"missing": z}))

    holds_b = True
    for p in E.events:
        if complement(p) not in E:
            holds_b = False
            violations.append(Certificate("AXIOM_B", {"p": p, "complement": complement(p)}))

    holds_c = True
    order = E.order
    ev = E.events
    vals = order.ints
    scale = order.scale
    for i in range(order.n):
        for j in _bits(order.orth[i] >> i << i):
            common = order.orth[i] & order.orth[j]
            for k in _bits(common >> j << j):
                total = tuple(a + b + c for a, b, c in zip(vals[i], vals[j], vals[k]))
                if total in order.index_of_ints:
                    continue
                exact = tuple(Fraction(t, scale) for t in total)
                if any(t > scale for t in total):
                    holds_c = False
                    violations.append(Certificate(
                        "AXIOM_C",
                        {"p": ev[i], "q": ev[j], "r": ev[k], "sum": list(exact)},
                        "orthogonal triple sums above 1",
                    ))
                    continue
                s = SProbability(E.states, exact)
                if s not in E:
                    holds_c = False
                    violations.append(Certificate(
                        "AXIOM_C",
                        {"p": ev[i], "q": ev[j], "r": ev[k], "sum": s},
                        "sum of orthogonal triple missing",
                    ))

    non_proper = [p for p in ev if not is_proper(p)]
    warnings = []
    if E.duplicates_dropped:
        warnings.append(f"{E.duplicates_dropped} duplicate event(s) dropped")
    return AxiomReport(holds_a, holds_b, holds_c, violations, not non_proper, non_proper, warnings)


def _require_algebra(E: EventSet) -> None:
    report = verify_axioms(E)
    if not report.ok:
        first = report.violations[0]
        raise NotAnAlgebra(f"axiom check failed: {first.rule} {first.note}".strip())


def poset_meet(E: EventSet, p: SProbability, q: SProbability) -> SProbability | None:
    """Greatest lower bound of p and q inside (E, <=), not the pointwise min."""
    k = E.order.meet(E.index(p), E.index(q))
    return None if k is None else E.events[k]


def poset_join(E: EventSet, p: SProbability, q: SProbability) -> SProbability | None:
    k = E.order.join(E.index(p), E.index(q))
    return None if k is None else E.events[k]


def _meet_join_tables(E: EventSet):
    order = E.order
    n = order.n
    meet = [[order.meet(i, j) for j in range(n)] for i in range(n)]
    join = [[order.join(i, j) for j in range(n)] for i in range(n)]
    return meet, join


def is_lattice(E: EventSet) -> bool:
    order = E.order
    for i in range(order.n):
        for j in range(i + 1, order.n):
            if order.meet(i, j) is None or order.join(i, j) is None:
                return False
    return True


def is_orthomodular(E: EventSet) -> bool:
    """Orthomodular law via ``q = p + (q - p)`` with ``q - p = q meet p'``."""
    _require_algebra(E)
    order = E.order
    ints, find, scale = order.ints, order.index_of_ints, order.scale
    for j in range(order.n):
        q = ints[j]
        for i in _bits(order.down[j]):
            p = ints[i]
            d = find.get(tuple(b - a for a, b in zip(p, q)))
            pc = find.get(tuple(scale - a for a in p))
            if d is None or pc is None:
                return False
            if order.meet(j, pc) != d or order.join(i, d) != j:
                return False
    return True


def is_boolean(E: EventSet) -> bool:
    """Distributive lattice in which p' is the only lattice complement of p."""
    _require_algebra(E)
    if not is_lattice(E):
        return False
    meet, join = _meet_join_tables(E)
    n = len(E)
    for x in range(n):
        mx = meet[x]
        for y in range(n):
            jy = join[y]
            mxy = mx[y]
            for z in range(y + 1, n):
                if mx[jy[z]] != join[mxy][mx[z]]:
                    return False
    bottom = E.index(zero(E.states))
    top = E.index(one(E.states))
    for x in range(n):
        comps = [y for y in range(n) if meet[x][y] == bottom and join[x][y] == top]
        if comps != [E.index(complement(E.events[x]))]:
            return False
    return True


def is_concrete(E: EventSet) -> bool:
    return all(p.is_two_valued() for p in E.events)


def atoms(E: EventSet) -> list[SProbability]:
    """Minimal elements of E without 0, in E's order."""
    _require_algebra(E)
    order = E.order
    bottom = E.index(zero(E.states))
    nonzero = ((1 << order.n) - 1) & ~(1 << bottom)
    return [E.events[i] for i in _bits(nonzero) if order.down[i] & nonzero == 1 << i]


@dataclass
class StructureReport:
    is_algebra: bool
    is_lattice: bool
    is_orthomodular: bool
    is_boolean: bool
    is_concrete: bool
    atom_list: list[SProbability]


def structure(E: EventSet) -> StructureReport:
    algebra = verify_axioms(E).ok
    return StructureReport(
        is_algebra=algebra,
        is_lattice=is_lattice(E),
        is_orthomodular=algebra and is_orthomodular(E),
        is_boolean=algebra and is_boolean(E),
        is_concrete=is_concrete(E),
        atom_list=atoms(E) if algebra else [],
    )


# -- saturation ---------------------------------------------------------------


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"{name} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise PreconditionError(f"{name} must be positive")
    return value


@dataclass(frozen=True)
class Budget:
    max_elements: int = 4096
    max_rounds: int = 32

    def __post_init__(self):
        if self.max_elements <= 0 or self.max_rounds <= 0:
            raise PreconditionError("budget limits must be positive")

    @classmethod
    def from_env(cls) -> Budget:
        return cls(
            _env_int("NUMEVENTS_MAX_ELEMENTS", cls.max_elements),
            _env_int("NUMEVENTS_MAX_ROUNDS", cls.max_rounds),
        )


class Outcome(enum.Enum):
    CLOSED = "Closed"
    CONTRADICTION = "Contradiction"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class Step:
    op: str  # "given", "complement", "sum", "difference", "triple"
    operands: tuple[SProbability, ...]
    result: SProbability | None

    def replay(self) -> SProbability | None:
        """Recompute the result from the operands; None for a triple overflow."""
        if self.op == "given":
            return self.operands[0]
        if self.op == "complement":
            return complement(self.operands[0])
        if self.op == "sum":
            return ortho_sum(*self.operands)
        if self.op == "difference":
            return difference(*self.operands)
        raise ValueError(self.op)


@dataclass
class SaturationResult:
    outcome: Outcome
    closure: EventSet | None
    trace: list[Step]
    contradiction_witness: SProbability | None = None
    explanation: str = ""
    rounds: int = 0

    def derivation(self) -> list[Step]:
        """Trace steps the contradiction actually depends on, in order."""
        if self.outcome is not Outcome.CONTRADICTION:
            return []
        producer = {s.result: s for s in self.trace if s.result is not None}
        needed = set()
        last = self.trace[-1]
        stack = list(last.operands)
        while stack:
            x = stack.pop()
            step = producer.get(x)
            if step is None or step in needed or step is last:
                continue
            needed.add(step)
            stack.extend(step.operands)
        return [s for s in self.trace[:-1] if s in needed] + [last]


def _values_key(p: SProbability):
    return p.values


def saturate(E: EventSet, extra: Sequence[SProbability] = (), budget: Budget | None = None) -> SaturationResult:
    """Close E + extra under complement, orthogonal sums and differences.

    Rounds are breadth first: complements of everything known, then sums of
    orthogonal pairs, then differences of comparable pairs, each phase in
    canonical value order. The first derived element that is not proper, or
    the first orthogonal triple summing above 1, ends the run with a
    contradiction.
    """
    budget = budget or Budget()
    states = E.states
    known: list[SProbability] = list(E.events)
    seen = set(known)
    trace: list[Step] = []
    vals: list[tuple] = [e.values for e in known]

    def contradiction(step: Step, witness, why: str, rounds: int) -> SaturationResult:
        trace.append(step)
        return SaturationResult(Outcome.CONTRADICTION, None, trace, witness, why, rounds)

    for q in extra:
        if q.states != states:
            raise StateSetMismatch(f"{q} is not over {states.names}")
        if q in seen:
            continue
        if not is_proper(q):
            return contradiction(Step("given", (q,), q), q, "given element is not proper", 0)
        trace.append(Step("given", (q,), q))
        known.append(q)
        seen.add(q)
        vals.append(q.values)

    def add(step: Step):
        known.append(step.result)
        seen.add(step.result)
        vals.append(step.result.values)
        trace.append(step)

    # orthogonality / order masks are maintained incrementally
    orth: list[int] = []
    down: list[int] = []

    def extend_masks():
        for i in range(len(orth), len(known)):
            vi = vals[i]
            om = dm = 0
            for j in range(i + 1):
                vj = vals[j]
                if all(a + b <= 1 for a, b in zip(vi, vj)):
                    om |= 1 << j
                    if j < i:
                        orth[j] |= 1 << i
                if j < i:
                    if all(a <= b for a, b in zip(vj, vi)):
                        dm |= 1 << j
                    elif all(b <= a for a, b in zip(vj, vi)):
                        down[j] |= 1 << i
            orth.append(om)
            down.append(dm)

    checked_triples_upto = 0
    rounds = 0
    while True:
        if rounds >= budget.max_rounds:
            return SaturationResult(Outcome.BUDGET_EXCEEDED, None, trace,
                                    explanation=f"no fixpoint after {rounds} rounds", rounds=rounds)
        rounds += 1
        grew = False

        for x in sorted(known, key=_values_key):
            c = complement(x)
            if c not in seen:
                add(Step("complement", (x,), c))
                grew = True
        extend_masks()

        # orthogonal pairs; new triples only if they involve a fresh element
        n = len(known)
        order = sorted(range(n), key=lambda i: vals[i])
        sums: dict[SProbability, Step] = {}
        for a_pos, i in enumerate(order):
            for j in order[a_pos:]:
                if not orth[i] >> j & 1:
                    continue
                s = SProbability(states, tuple(x + y for x, y in zip(vals[i], vals[j])))
                if s not in seen and s not in sums:
                    sums[s] = Step("sum", (known[i], known[j]), s)
        for s in sorted(sums, key=_values_key):
            if not is_proper(s):
                return contradiction(sums[s], s, "orthogonal sum is not proper", rounds)
        for i in range(n):
            for j in _bits(orth[i] >> i << i):
                common = orth[i] & orth[j]
                for k in _bits(common >> j << j):
                    if k < checked_triples_upto and j < checked_triples_upto and i < checked_triples_upto:
                        continue
                    total = [x + y + z for x, y, z in zip(vals[i], vals[j], vals[k])]
                    if any(t > 1 for t in total):
                        step = Step("triple", (known[i], known[j], known[k]), None)
                        return contradiction(step, None, "orthogonal triple sums above 1", rounds)
        checked_triples_upto = n

        diffs: dict[SProbability, Step] = {}
        for i in order:
            for j in _bits(down[i]):
                d = SProbability(states, tuple(y - x for x, y in zip(vals[j], vals[i])))
                if d not in seen and d not in diffs and d not in sums:
                    diffs[d] = Step("difference", (known[i], known[j]), d)
        for d in sorted(diffs, key=_values_key):
            if not is_proper(d):
                return contradiction(diffs[d], d, "difference is not proper", rounds)

        for s in sorted(sums, key=_values_key):
            add(sums[s])
            grew = True
        for d in sorted(diffs, key=_values_key):
            add(diffs[d])
            grew = True
        extend_masks()

        if not grew:
            closure = EventSet(states, tuple(known))
            if __debug__:
                assert verify_axioms(closure).ok, "saturation closed on a non-algebra"
            return SaturationResult(Outcome.CLOSED, closure, trace, rounds=rounds)
        if len(known) > budget.max_elements:
            return SaturationResult(Outcome.BUDGET_EXCEEDED, None, trace,
                                    explanation=f"more than {budget.max_elements} elements",
                                    rounds=rounds)
