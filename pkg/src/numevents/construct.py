"""Constructions: 0,1-extensions, Boolean algebras from atoms, atom
splitting, MO_n builders and the Boolean completion of MO_2."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import EventSet, atoms, is_boolean, verify_axioms
from .core import (
    SProbability,
    StateSet,
    comparable,
    complement,
    from_values,
    is_proper,
    is_varying,
    lt,
    one,
    orthogonal,
    to_rational,
    zero,
)
from .errors import (
    AtomCountTooLarge,
    AtomsDontSumToOne,
    AtomsNotOrthogonal,
    AtomsNotVarying,
    AxiomCViolated,
    ComparableElements,
    DifferenceNotProper,
    DuplicateStateLabel,
    HypothesisViolated,
    NotAnAtom,
    NotBelowAtom,
    NotBoolean,
    NotComplementaryPair,
    NotMO2,
    NotVarying,
    PreconditionError,
    StateSetMismatch,
    ValueOutOfRange,
)

MAX_ATOMS = 16
_DEBUG_VERIFY_LIMIT = 1024


def _debug_verify(E: EventSet) -> EventSet:
    if __debug__ and len(E) <= _DEBUG_VERIFY_LIMIT:
        assert verify_axioms(E).ok, "construction produced a non-algebra"
    return E


def concat(p: SProbability, r: SProbability, states: StateSet) -> SProbability:
    return SProbability(states, p.values + r.values)


def product(E1: EventSet, E2: EventSet) -> EventSet:
    """Product of two event sets over disjoint state sets (values concatenated)."""
    clash = set(E1.states.names) & set(E2.states.names)
    if clash:
        raise DuplicateStateLabel(f"state labels shared by both factors: {sorted(clash)}")
    states = StateSet(E1.states.names + E2.states.names)
    return EventSet(states, tuple(concat(p, r, states) for p in E1.events for r in E2.events))


@dataclass(frozen=True)
class ExtensionMap:
    base: EventSet
    extended_states: StateSet
    new_state: str

    @property
    def base_states(self) -> StateSet:
        return self.base.states

    def pair(self, p: SProbability) -> tuple[SProbability, SProbability]:
        """The two lifts (p,0) and (p,1) of a base event."""
        return (lift_event(p, 0, self.new_state), lift_event(p, 1, self.new_state))

    @property
    def event_pairs(self) -> dict[SProbability, tuple[SProbability, SProbability]]:
        return {p: self.pair(p) for p in self.base.events}

    def split(self, qbar: SProbability) -> tuple[SProbability, object]:
        """Inverse of lift: (restriction to the base states, value at the new state)."""
        if qbar.states != self.extended_states:
            raise StateSetMismatch(f"{qbar} is not over {self.extended_states.names}")
        return SProbability(self.base_states, qbar.values[:-1]), qbar.values[-1]

    def lift(self, q: SProbability, c) -> SProbability:
        if q.states != self.base_states:
            raise StateSetMismatch(f"{q} is not over {self.base_states.names}")
        return lift_event(q, c, self.new_state)


def zero_one_extension(E: EventSet, new_state: str) -> tuple[EventSet, ExtensionMap]:
    """Double E by appending a state on which every event is either 0 or 1."""
    if new_state in E.states.names:
        raise DuplicateStateLabel(f"state {new_state!r} already present")
    two = EventSet.of([SProbability(StateSet((new_state,)), (v,)) for v in (0, 1)])
    extended = product(E, two)
    if verify_axioms(E).ok:
        _debug_verify(extended)
    return extended, ExtensionMap(E, extended.states, new_state)


def lift_event(q: SProbability, c, new_state: str = "s_new") -> SProbability:
    c = to_rational(c)
    if c < 0 or c > 1:
        raise ValueOutOfRange(f"lift value {c} outside [0, 1]")
    if new_state in q.states.names:
        raise DuplicateStateLabel(f"state {new_state!r} already present")
    return SProbability(StateSet(q.states.names + (new_state,)), q.values + (c,))


def boolean_from_atoms(atom_list: list[SProbability]) -> EventSet:
    """All sums of subsets of the atoms; index order follows the atom order.

    Element k of the result is the sum of the atoms whose bit is set in k.
    """
    n = len(atom_list)
    if n < 2:
        raise PreconditionError("need at least two atoms")
    if n > MAX_ATOMS:
        raise AtomCountTooLarge(f"{n} atoms exceed the cap of {MAX_ATOMS}")
    states = atom_list[0].states
    for a in atom_list:
        if a.states != states:
            raise StateSetMismatch("atoms are over different state sets")
    bad = [a for a in atom_list if not is_varying(a)]
    if bad:
        raise AtomsNotVarying(f"atoms not varying: {', '.join(map(str, bad))}")
    for a, b in combinations(atom_list, 2):
        if not orthogonal(a, b):
            raise AtomsNotOrthogonal(f"{a} and {b} are not orthogonal")
    total = [sum(col) for col in zip(*(a.values for a in atom_list))]
    if any(t != 1 for t in total):
        raise AtomsDontSumToOne(f"atoms sum to {tuple(map(str, total))}, not 1")

    zero_vals = (0,) * len(states)
    sums = [zero_vals]
    for a in atom_list:
        sums = sums + [tuple(x + y for x, y in zip(s, a.values)) for s in sums]
    return _debug_verify(EventSet(states, tuple(SProbability(states, s) for s in sums)))


def split_atom(E: EventSet, p1: SProbability, q: SProbability) -> EventSet:
    """Replace atom p1 of a Boolean E by the two atoms q and p1 - q."""
    if not verify_axioms(E).ok or not is_boolean(E):
        raise NotBoolean("split_atom needs a Boolean algebra")
    atom_list = atoms(E)
    if p1 not in atom_list:
        raise NotAnAtom(f"{p1} is not an atom")
    if not lt(q, p1):
        raise NotBelowAtom(f"{q} is not strictly below {p1}")
    rest = SProbability(q.states, tuple(a - b for a, b in zip(p1.values, q.values)))
    # the difference is checked first so a degenerate split names the piece
    # that breaks the atom, even when q itself is not varying either
    if not is_proper(rest):
        raise DifferenceNotProper(f"{p1} - {q} = {rest} is not proper")
    if not is_varying(q):
        raise NotVarying(f"{q} is not varying")
    new_atoms = [q, rest] + [a for a in atom_list if a != p1]
    return boolean_from_atoms(new_atoms)


def mo_n(pairs: list[tuple[SProbability, SProbability]]) -> EventSet:
    """{0, 1} plus n complementary pairs of pairwise incomparable events."""
    if not pairs:
        raise PreconditionError("need at least one complementary pair")
    elems = []
    for p, pc in pairs:
        if complement(p) != pc:
            raise NotComplementaryPair(f"{pc} is not the complement of {p}")
        elems += [p, pc]
    for x in elems:
        if not is_varying(x):
            raise NotVarying(f"{x} is not varying")
    for x, y in combinations(elems, 2):
        if x == y or comparable(x, y):
            raise ComparableElements(f"{x} and {y} are comparable")
    E = EventSet.of(elems)
    report = verify_axioms(E)
    if not report.ok:
        raise AxiomCViolated(f"axiom (c) fails: {report.violations[0].witnesses}")
    return E


def mo2_pairs(E: EventSet) -> tuple[tuple[SProbability, SProbability], tuple[SProbability, SProbability]]:
    """The two complementary pairs of a verified MO_2, in E's order."""
    z, o = zero(E.states), one(E.states)
    middle = [e for e in E.events if e != z and e != o]
    if len(E) != 6 or len(middle) != 4 or not verify_axioms(E).ok:
        raise NotMO2("not a six-element algebra of S-probabilities")
    for x, y in combinations(middle, 2):
        if comparable(x, y):
            raise NotMO2(f"{x} and {y} are comparable")
    first = middle[0]
    second = next(e for e in middle[1:] if e != complement(first))
    return (first, complement(first)), (second, complement(second))


def completion_atoms(q: SProbability, p1: SProbability, p2: SProbability):
    """The four would-be atoms q, p1-q, p2-q, 1+q-p1-p2 (None where out of range)."""
    states = q.states
    names = ("q", "p1-q", "p2-q", "1+q-p1-p2")
    raw = (
        q.values,
        tuple(a - b for a, b in zip(p1.values, q.values)),
        tuple(a - b for a, b in zip(p2.values, q.values)),
        tuple(1 + c - a - b for a, b, c in zip(p1.values, p2.values, q.values)),
    )
    return [(name, from_values(states, vals), vals) for name, vals in zip(names, raw)]


def completion_failures(q, p1, p2) -> list[str]:
    out = []
    for name, event, vals in completion_atoms(q, p1, p2)[1:]:
        if event is None:
            out.append(f"{name} has values outside [0,1]: ({','.join(map(str, vals))})")
        elif not is_varying(event):
            out.append(f"{name} = {event} is not varying")
    return out


def mo2_generator_choices(E: EventSet):
    """Unordered choices {p1, p2} of one element from each complementary pair."""
    (a, ac), (b, bc) = mo2_pairs(E)
    return [(x, y) for x in (a, ac) for y in (b, bc)]


def mo2_boolean_completion(E: EventSet, q: SProbability,
                           p1: SProbability | None = None,
                           p2: SProbability | None = None) -> EventSet:
    """Boolean algebra with atoms q, p1-q, p2-q, 1+q-p1-p2 containing E and q.

    Without explicit generators every choice of one element per
    complementary pair is tried in order and the first that satisfies the
    hypotheses is used.
    """
    choices = mo2_generator_choices(E)
    if p1 is not None or p2 is not None:
        if (p1, p2) not in choices and (p2, p1) not in choices:
            raise NotMO2("p1, p2 must come from different complementary pairs of E")
        choices = [(p1, p2)]
    if not is_varying(q):
        raise HypothesisViolated(f"{q} is not varying", ["q"])
    if q in E:
        raise HypothesisViolated(f"{q} already belongs to E", ["q"])
    first_failures = None
    for g, h in choices:
        failures = completion_failures(q, g, h)
        if not failures:
            algebra = boolean_from_atoms([ev for _, ev, _ in completion_atoms(q, g, h)])
            if __debug__:
                assert E.is_subset(algebra) and q in algebra
            return algebra
        if first_failures is None:
            first_failures = failures
    raise HypothesisViolated("; ".join(first_failures), first_failures)
