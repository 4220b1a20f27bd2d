"""Problem files and canonical JSON serialization of results.

A problem file is one JSON document::

    {
      "states": ["s1", "s2", "s3", "s4"],
      "events": {"p1": ["1", "0", "0", "1"], "p2": ["0", "1", "0", "1"]},
      "candidate": "q",
      "metadata": "free text"
    }

Values may be integers, fraction strings ("3/4") or finite decimals
("0.25", or a bare JSON number), all converted exactly.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .algebra import EventSet, Step
from .core import Certificate, SProbability, StateSet
from .errors import ParseError, RangeError, ShapeError

_LITERAL = re.compile(r"^\s*[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)\s*$")


def parse_rational(raw, field_name: str | None = None) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"boolean {raw!r} is not a probability", field=field_name)
    if isinstance(raw, int):
        value = Fraction(raw)
    elif isinstance(raw, Decimal):
        if not raw.is_finite():
            raise ParseError(f"non-finite value {raw}", field=field_name)
        value = Fraction(raw)
    elif isinstance(raw, str):
        if not _LITERAL.match(raw):
            raise ParseError(f"malformed rational literal {raw!r}", field=field_name)
        try:
            value = Fraction(raw.strip())
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {raw!r}", field=field_name) from None
    else:
        raise ParseError(f"expected a number or string, got {type(raw).__name__}", field=field_name)
    if value < 0 or value > 1:
        raise RangeError(f"value {value} outside [0, 1]", field=field_name)
    return value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class ProblemFile:
    states: StateSet
    events: dict[str, SProbability]
    candidate: str | None = None
    metadata: str = ""

    def base_events(self) -> list[SProbability]:
        return [e for name, e in self.events.items() if name != self.candidate]

    def event_set(self) -> EventSet:
        return EventSet.of(self.base_events(), self.states)

    def candidate_event(self) -> SProbability | None:
        return None if self.candidate is None else self.events[self.candidate]

    def event(self, name: str) -> SProbability:
        try:
            return self.events[name]
        except KeyError:
            raise ParseError(f"no event named {name!r}", field="events") from None

    def to_dict(self) -> dict:
        out = {
            "states": list(self.states.names),
            "events": {name: [format_rational(v) for v in e.values] for name, e in self.events.items()},
            "metadata": self.metadata,
        }
        if self.candidate is not None:
            out["candidate"] = self.candidate
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(canonical.encode()).hexdigest()


def parse_problem(text: str) -> ProblemFile:
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"states", "events", "candidate", "metadata"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")

    names = doc.get("states")
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise ParseError("states must be a non-empty list of labels", field="states")
    if len(set(names)) != len(names):
        raise ParseError("state labels must be unique", field="states")
    states = StateSet(tuple(names))

    raw_events = doc.get("events")
    if not isinstance(raw_events, dict):
        raise ParseError("events must be an object mapping names to value lists", field="events")
    events = {}
    for name, vector in raw_events.items():
        where = f"events.{name}"
        if not isinstance(vector, list):
            raise ParseError("event values must be a list", field=where)
        if len(vector) != len(states):
            raise ShapeError(f"{len(vector)} values for {len(states)} states", field=where)
        values = tuple(parse_rational(v, f"{where}[{i}]") for i, v in enumerate(vector))
        events[name] = SProbability(states, values)

    candidate = doc.get("candidate")
    if candidate is not None and candidate not in events:
        raise ParseError(f"candidate {candidate!r} is not an event name", field="candidate")
    metadata = doc.get("metadata", "")
    if not isinstance(metadata, str):
        metadata = json.dumps(metadata, sort_keys=True, default=str)
    return ProblemFile(states, events, candidate, metadata)


# -- canonical serialization --------------------------------------------------


def to_jsonable(obj):
    """Convert library values into plain JSON data with exact rational strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, SProbability):
        return [format_rational(v) for v in obj.values]
    if isinstance(obj, EventSet):
        return [to_jsonable(e) for e in obj.events]
    if isinstance(obj, Step):
        return {"op": obj.op, "operands": [to_jsonable(x) for x in obj.operands],
                "result": to_jsonable(obj.result)}
    if isinstance(obj, Certificate):
        return {"rule": obj.rule, "witnesses": to_jsonable(obj.witnesses), "note": obj.note}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(data) -> str:
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(data) -> str:
    return hashlib.sha256(
        json.dumps(to_jsonable(data), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()
    ).hexdigest()


@dataclass
class Report:
    command: str
    flags: dict
    input_digest: str | None
    result: dict
    certificates: list = field(default_factory=list)
    trace: list | None = None
    timing_ms: float = 0.0

    def body(self) -> dict:
        out = {
            "command": self.command,
            "flags": self.flags,
            "input_digest": self.input_digest,
            "result": self.result,
            "certificates": self.certificates,
        }
        if self.trace is not None:
            out["trace"] = self.trace
        return out

    def to_dict(self) -> dict:
        body = to_jsonable(self.body())
        body["report_digest"] = digest(body)
        body["timing"] = {"elapsed_ms": f"{self.timing_ms:.3f}"}
        return body

    def dumps(self) -> str:
        return canonical_json(self.to_dict())


def strip_timing(report_text: str) -> dict:
    data = json.loads(report_text)
    data.pop("timing", None)
    return data
