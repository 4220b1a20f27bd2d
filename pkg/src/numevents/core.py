"""Exact scalars, S-probabilities and the pointwise predicates on them.

Every value is a :class:`fractions.Fraction`; nothing in the package ever
touches a float.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import (
    NotComparable,
    NotOrthogonal,
    NotProper,
    PreconditionError,
    StateSetMismatch,
    ValueOutOfRange,
)

Rational = Fraction

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: Any) -> Fraction:
    """Convert ints, Fractions, Decimals and exact strings to a Fraction.

    Floats are refused: they would silently carry binary rounding error.
    """
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probability values")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a string or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class StateSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise PreconditionError("a state set must not be empty")
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate state labels in {names}")

    @classmethod
    def default(cls, n: int) -> StateSet:
        return cls(tuple(f"s{i}" for i in range(1, n + 1)))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class SProbability:
    """A numerical event: one exact value in [0, 1] per state."""

    states: StateSet
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(to_rational(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != len(self.states):
            raise PreconditionError(
                f"{len(values)} values for {len(self.states)} states"
            )
        for v in values:
            if v < 0 or v > 1:
                raise ValueOutOfRange(f"value {v} outside [0, 1]")

    @classmethod
    def constant(cls, states: StateSet, value) -> SProbability:
        return cls(states, (to_rational(value),) * len(states))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.values) + ")"

    def __repr__(self):
        return f"SProbability{self}"

    @property
    def sort_key(self) -> tuple[Fraction, ...]:
        return self.values

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def is_one(self) -> bool:
        return all(v == 1 for v in self.values)

    def is_two_valued(self) -> bool:
        return all(v == 0 or v == 1 for v in self.values)


def sprob(*values, states: StateSet | Sequence[str] | None = None) -> SProbability:
    """Shorthand constructor, e.g. ``sprob(1, "1/4", 0)`` over s1, s2, s3."""
    if len(values) == 1 and isinstance(values[0], (list, tuple)):
        values = tuple(values[0])
    if states is None:
        states = StateSet.default(len(values))
    elif not isinstance(states, StateSet):
        states = StateSet(tuple(states))
    return SProbability(states, tuple(values))


def zero(states: StateSet) -> SProbability:
    return SProbability.constant(states, 0)


def one(states: StateSet) -> SProbability:
    return SProbability.constant(states, 1)


def _same_states(p: SProbability, q: SProbability) -> None:
    if p.states != q.states:
        raise StateSetMismatch(
            f"state sets differ: {p.states.names} vs {q.states.names}"
        )


def leq(p: SProbability, q: SProbability) -> bool:
    _same_states(p, q)
    return all(a <= b for a, b in zip(p.values, q.values))


def lt(p: SProbability, q: SProbability) -> bool:
    return leq(p, q) and p != q


def comparable(p: SProbability, q: SProbability) -> bool:
    return leq(p, q) or leq(q, p)


def complement(p: SProbability) -> SProbability:
    return SProbability(p.states, tuple(1 - v for v in p.values))


def orthogonal(p: SProbability, q: SProbability) -> bool:
    _same_states(p, q)
    return all(a + b <= 1 for a, b in zip(p.values, q.values))


def ortho_sum(p: SProbability, q: SProbability) -> SProbability:
    if not orthogonal(p, q):
        raise NotOrthogonal(f"{p} and {q} are not orthogonal")
    return SProbability(p.states, tuple(a + b for a, b in zip(p.values, q.values)))


def difference(q: SProbability, p: SProbability) -> SProbability:
    """Return ``q - p``; requires ``p <= q``."""
    if not leq(p, q):
        raise NotComparable(f"{p} is not below {q}")
    return SProbability(q.states, tuple(a - b for a, b in zip(q.values, p.values)))


def from_values(states: StateSet, values: Iterable) -> SProbability | None:
    """Build an S-probability from arbitrary rationals, or None if out of range."""
    values = tuple(values)
    if any(v < 0 or v > 1 for v in values):
        return None
    return SProbability(states, values)


def is_varying(p: SProbability) -> bool:
    return any(v > HALF for v in p.values) and any(v < HALF for v in p.values)


def is_proper(p: SProbability) -> bool:
    return p.is_zero() or p.is_one() or is_varying(p)


class ReciprocityClass(enum.Enum):
    BELOW = "Below"
    ABOVE = "Above"
    BOTH = "Both"
    NEITHER = "Neither"

    @property
    def below(self) -> bool:
        return self in (ReciprocityClass.BELOW, ReciprocityClass.BOTH)

    @property
    def above(self) -> bool:
        return self in (ReciprocityClass.ABOVE, ReciprocityClass.BOTH)


def reciprocity(p: SProbability, q: SProbability) -> ReciprocityClass:
    """Classify a pair of proper events by where their pointwise min/max sit."""
    _same_states(p, q)
    for x in (p, q):
        if not is_proper(x):
            raise NotProper(f"{x} is not proper")
    below = all(min(a, b) <= HALF for a, b in zip(p.values, q.values))
    above = all(max(a, b) >= HALF for a, b in zip(p.values, q.values))
    if below and above:
        return ReciprocityClass.BOTH
    if below:
        return ReciprocityClass.BELOW
    if above:
        return ReciprocityClass.ABOVE
    return ReciprocityClass.NEITHER


@dataclass(frozen=True)
class Certificate:
    """Names the rule that produced a result and the witnesses it used.

    ``witnesses`` maps role names to SProbabilities, Fractions, state labels,
    EventSets or lists of those; :func:`numevents.classify.replay` re-checks
    the rule's hypothesis on them.
    """

    rule: str
    witnesses: dict = field(default_factory=dict)
    note: str = ""
