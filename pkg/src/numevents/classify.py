"""Verdict engine for newly observed events.

Rules run in a fixed order and the first one that applies decides the
verdict. :data:`RULE_ORDER` lists that order for Boolean and non-Boolean
inputs; every verdict records which rules were attempted before it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

from .algebra import Budget, EventSet, Outcome, atoms, is_boolean, is_concrete, saturate, verify_axioms
from .construct import (
    ExtensionMap,
    completion_atoms,
    mo2_boolean_completion,
    mo2_generator_choices,
    mo2_pairs,
    split_atom,
    zero_one_extension,
)
from .core import (
    HALF,
    Certificate,
    ReciprocityClass,
    SProbability,
    complement,
    comparable,
    is_proper,
    is_varying,
    lt,
    orthogonal,
    reciprocity,
)
from .errors import (
    BooleanInput,
    EventInSet,
    HypothesisViolated,
    InconsistentVerdict,
    NotAnAlgebra,
    NotBoolean,
    NotExtension,
    NotMO2,
    NotVarying,
    PreconditionError,
    StateSetMismatch,
)
from .search import (
    OracleOutcome,
    boolean_embedding_concrete,
    saturation_certificate,
)

DESTRUCTIVE_RULES = ("NON_PROPER", "TRIPLE_OVERFLOW", "REMARK_PROXIMITY", "TH3_DESTRUCTIVE", "SATURATION")
BOOLEAN_RULES = ("TH4", "TH2", "CONSTRUCTION", "ORACLE", "SATURATION_CLOSURE")
NON_BOOLEAN_RULES = ("TH5", "TH3_CRITICAL", "TH7", "ORACLE", "SATURATION_CLOSURE")
RULE_ORDER = {
    "boolean": DESTRUCTIVE_RULES + BOOLEAN_RULES,
    "non_boolean": DESTRUCTIVE_RULES + NON_BOOLEAN_RULES,
}

TO_NON_BOOLEAN = "Boolean P; no Boolean algebra contains P and q"
TO_BOOLEAN = "non-Boolean P; a Boolean algebra contains P and q"
STAYS_BOOLEAN = "Boolean P; a Boolean algebra contains P and q"
STAYS_NON_BOOLEAN = "non-Boolean P; no Boolean algebra contains P and q"


class VerdictKind(enum.Enum):
    DESTRUCTIVE = "Destructive"
    CRITICAL = "Critical"
    NOT_CRITICAL = "NotCritical"
    EMBEDDABLE = "Embeddable"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    kind: VerdictKind
    certificate: Certificate
    notes: str = ""
    rules_attempted: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ClassifyConfig:
    budget: Budget = Budget()
    oracle_enabled: bool = True
    extension: ExtensionMap | None = None


def _require_algebra(E: EventSet) -> None:
    if not verify_axioms(E).ok:
        raise NotAnAlgebra("the event set is not an algebra of S-probabilities")


def _require_new(E: EventSet, q: SProbability) -> None:
    if q.states != E.states:
        raise StateSetMismatch(f"{q} is not over {E.states.names}")
    if q in E:
        raise EventInSet(f"{q} already belongs to the event set")


# -- destructive rules --------------------------------------------------------


def check_non_proper(q: SProbability) -> Certificate | None:
    if is_proper(q):
        return None
    return Certificate("NON_PROPER", {"q": q}, "q is neither constant nor varying")


def check_triple_overflow(E: EventSet, q: SProbability) -> Certificate | None:
    """p1, p2 in E + {q}, both orthogonal to q and to each other, overflowing 1."""
    _require_algebra(E)
    _require_new(E, q)
    pool = [p for p in list(E.events) + [q] if orthogonal(p, q)]
    for i, p1 in enumerate(pool):
        for p2 in pool[i:]:
            if not orthogonal(p1, p2):
                continue
            total = [a + b + c for a, b, c in zip(p1.values, p2.values, q.values)]
            for name, t in zip(E.states.names, total):
                if t > 1:
                    return Certificate(
                        "TRIPLE_OVERFLOW",
                        {"p1": p1, "p2": p2, "q": q, "state": name, "sum": total},
                        f"p1 + p2 + q = {t} > 1 at {name}",
                    )
    return None


def check_proximity(E: EventSet, q: SProbability) -> Certificate | None:
    """q within 1/2 of some p in E, strictly below or strictly above it."""
    _require_algebra(E)
    _require_new(E, q)
    for p in E.events:
        if lt(q, p) and all(b >= a - HALF for a, b in zip(p.values, q.values)):
            derived = SProbability(q.states, tuple(1 - a + b for a, b in zip(p.values, q.values)))
            return Certificate("REMARK_PROXIMITY", {"p": p, "q": q, "side": "below", "derived": derived},
                               "p' + q lies in [1/2, 1) and is not proper")
        if lt(p, q) and all(b <= a + HALF for a, b in zip(p.values, q.values)):
            derived = SProbability(q.states, tuple(1 + a - b for a, b in zip(p.values, q.values)))
            return Certificate("REMARK_PROXIMITY", {"p": p, "q": q, "side": "above", "derived": derived},
                               "p + q' lies in [1/2, 1) and is not proper")
    return None


# -- extension rules ----------------------------------------------------------


def _require_extension(Ebar: EventSet, ext: ExtensionMap, qbar: SProbability):
    expected, _ = zero_one_extension(ext.base, ext.new_state)
    if Ebar != expected:
        raise NotExtension("the event set is not the 0,1-extension described by the map")
    if qbar.states != ext.extended_states:
        raise NotExtension(f"{qbar} is not over the extended state set")
    if qbar in Ebar:
        raise EventInSet(f"{qbar} already belongs to the extension")
    return ext.split(qbar)


def check_th2(Ebar: EventSet, ext: ExtensionMap, qbar: SProbability) -> Certificate | None:
    """Lifted event (q, c), 0 < c < 1, over a Boolean extension."""
    _require_algebra(Ebar)
    q, c = _require_extension(Ebar, ext, qbar)
    if not 0 < c < 1:
        raise NotExtension(f"value {c} at the new state must lie strictly between 0 and 1")
    if not is_boolean(Ebar):
        raise NotBoolean("the extension is not a Boolean algebra")
    base = ext.base
    inner = [p for p in base.events if not p.is_zero() and not p.is_one()]
    if any(comparable(p, q) for p in inner):
        return None
    for p in inner:
        if all(min(a, b) <= HALF for a, b in zip(p.values, q.values)):
            condition = "min"
        elif all(max(a, b) >= HALF for a, b in zip(p.values, q.values)):
            condition = "max"
        else:
            continue
        enlarged = Ebar.with_events([qbar, ext.lift(complement(q), 1 - c)])
        ok = verify_axioms(enlarged).ok
        note = f"{condition} condition; extension plus q, q* is an algebra: {ok}"
        if not ok:
            note += " (anomaly: the claimed enclosing algebra fails the axioms)"
        return Certificate("TH2", {"p": p, "q_base": q, "c": c, "qbar": qbar, "condition": condition,
                                   "enclosing_algebra_verified": ok,
                                   "direction": TO_NON_BOOLEAN}, note)
    return None


def check_th3(Ebar: EventSet, ext: ExtensionMap, qbar: SProbability) -> Verdict | None:
    _require_algebra(Ebar)
    q, c = _require_extension(Ebar, ext, qbar)
    base = ext.base
    if q in base and c not in (0, 1):
        p = q
        pc = complement(p)
        if c <= HALF:
            operands = (ext.lift(p, 0), ext.lift(pc, 1 - c))
        else:
            operands = (qbar, ext.lift(pc, 0))
        derived = SProbability(ext.extended_states,
                               tuple(a + b for a, b in zip(operands[0].values, operands[1].values)))
        cert = Certificate("TH3_DESTRUCTIVE",
                           {"p": p, "c": c, "qbar": qbar, "operands": list(operands), "derived": derived},
                           "the derived sum is >= 1/2 everywhere but not 1")
        return Verdict(VerdictKind.DESTRUCTIVE, cert)
    base_report = verify_axioms(base)
    if (base_report.ok and is_concrete(base) and not is_boolean(base)
            and qbar.is_two_valued()):
        cert = Certificate("TH3_CRITICAL",
                           {"qbar": qbar, "cube_size": 2 ** len(ext.extended_states),
                            "direction": TO_BOOLEAN},
                           "extension plus qbar lies in the two-valued cube over the extended states; "
                           "read with qbar two-valued")
        return Verdict(VerdictKind.CRITICAL, cert)
    return None


# -- reciprocity rules --------------------------------------------------------


def check_th4(E: EventSet, q: SProbability) -> Certificate | None:
    _require_algebra(E)
    if not is_boolean(E):
        raise NotBoolean("the TH4 rule applies to Boolean algebras")
    _require_new(E, q)
    if not is_varying(q):
        raise NotVarying(f"{q} is not varying")
    for p in E.events:
        rc = reciprocity(p, q)
        if rc is ReciprocityClass.BOTH:
            return Certificate("TH4_III", {"p": p, "q": q, "direction": TO_NON_BOOLEAN},
                               "p and q are reciprocal")
        if rc is ReciprocityClass.BELOW:
            for name, a, b in zip(E.states.names, p.values, q.values):
                if a + b > 1:
                    return Certificate("TH4_I", {"p": p, "q": q, "state": name, "direction": TO_NON_BOOLEAN},
                                       f"reciprocal below 1/2 and p + q > 1 at {name}")
        if rc is ReciprocityClass.ABOVE:
            for name, a, b in zip(E.states.names, p.values, q.values):
                if a + b < 1:
                    return Certificate("TH4_II", {"p": p, "q": q, "state": name, "direction": TO_NON_BOOLEAN},
                                       f"reciprocal above 1/2 and p + q < 1 at {name}")
    return None


def _pairwise_reciprocal(elems) -> bool:
    if len(set(elems)) != len(elems):
        return False
    return all(reciprocity(a, b) is ReciprocityClass.BOTH for a, b in combinations(elems, 2))


def _pairwise_below(elems) -> bool:
    if len(set(elems)) != len(elems) or any(e.is_zero() for e in elems):
        return False
    return all(reciprocity(a, b).below for a, b in combinations(elems, 2))


def _quadruples(pool, must_contain=None):
    """(p1, p2, p3, p4) from pool, pairwise below 1/2, p1+p2 = p3+p4 orthogonally."""
    pairs = {}
    for a, b in combinations(pool, 2):
        if orthogonal(a, b) and reciprocity(a, b).below:
            s = tuple(x + y for x, y in zip(a.values, b.values))
            pairs.setdefault(s, []).append((a, b))
    for s in sorted(pairs):
        for (p1, p2), (p3, p4) in combinations(pairs[s], 2):
            quad = (p1, p2, p3, p4)
            if must_contain is not None and must_contain not in quad:
                continue
            if _pairwise_below(quad):
                yield quad


def check_th5(E: EventSet, q: SProbability) -> Certificate | None:
    """Obstructions to any Boolean embedding of a non-Boolean E (and q).

    The conditions that depend on E alone, (ii) and (iii), are tried before
    those involving q, (i) and (iv).
    """
    _require_algebra(E)
    if is_boolean(E):
        raise BooleanInput("the TH5 rule needs a non-Boolean algebra")
    _require_new(E, q)
    inner = [p for p in E.events if not p.is_zero() and not p.is_one()]
    direction = STAYS_NON_BOOLEAN
    for p1, p2 in combinations(inner, 2):
        quad = [p1, p2, complement(p1), complement(p2)]
        if _pairwise_reciprocal(quad):
            return Certificate("TH5_II", {"p1": p1, "p2": p2, "direction": direction},
                               "p1, p2, p1', p2' pairwise different and pairwise reciprocal")
    for quad in _quadruples(inner):
        return Certificate("TH5_III", {"p1": quad[0], "p2": quad[1], "p3": quad[2], "p4": quad[3],
                                       "direction": direction},
                           "pairwise below 1/2 with p1 + p2 = p3 + p4")
    if is_proper(q):
        for p in inner:
            quad = [p, q, complement(p), complement(q)]
            if _pairwise_reciprocal(quad):
                return Certificate("TH5_I", {"p": p, "q": q, "direction": direction},
                                   "p, q, p', q' pairwise different and pairwise reciprocal")
        for quad in _quadruples(inner + [q], must_contain=q):
            return Certificate("TH5_IV", {"p1": quad[0], "p2": quad[1], "p3": quad[2], "p4": quad[3],
                                          "q": q, "direction": direction},
                               "condition (iii) with q among the four")
    return None


def check_th7(E: EventSet, q: SProbability) -> Verdict | None:
    _require_algebra(E)
    mo2_pairs(E)  # raises NotMO2
    _require_new(E, q)
    if not is_varying(q):
        raise NotVarying(f"{q} is not varying")
    try:
        algebra = mo2_boolean_completion(E, q)
    except HypothesisViolated:
        return None
    atom_list = atoms(algebra)
    p1, p2 = _completion_generators(E, q, atom_list)
    cert = Certificate("TH7", {"p1": p1, "p2": p2, "q": q, "atoms": atom_list, "algebra": algebra,
                               "direction": TO_BOOLEAN},
                       "q, p1-q, p2-q, 1+q-p1-p2 are varying and sum to 1")
    return Verdict(VerdictKind.CRITICAL, cert)


def _completion_generators(E, q, atom_list):
    for g, h in mo2_generator_choices(E):
        if all(ev is not None and ev in atom_list for _, ev, _ in completion_atoms(q, g, h)):
            return g, h
    raise AssertionError("completion produced without matching generators")


# -- embedding constructions --------------------------------------------------


def construction_embedding(E: EventSet, q: SProbability) -> Certificate | None:
    """Atom splitting for a Boolean E: q below an atom with a proper remainder."""
    if not is_varying(q):
        return None
    for p1 in atoms(E):
        if not lt(q, p1):
            continue
        rest = SProbability(q.states, tuple(a - b for a, b in zip(p1.values, q.values)))
        if not is_proper(rest):
            continue
        algebra = split_atom(E, p1, q)
        return Certificate("CONSTRUCTION", {"atom": p1, "q": q, "algebra": algebra,
                                            "direction": STAYS_BOOLEAN},
                           "split the atom into q and atom - q")
    return None


def _embedding_witnesses(E: EventSet, q: SProbability, boolean: bool, cfg: ClassifyConfig):
    """Every cheap embedding witness, used for the mutual-exclusion guard."""
    found = []
    if boolean:
        cert = construction_embedding(E, q)
        if cert:
            found.append(cert.rule)
    else:
        try:
            if is_varying(q) and check_th7(E, q):
                found.append("TH7")
        except NotMO2:
            pass
    if cfg.oracle_enabled:
        res = boolean_embedding_concrete(list(E.events) + [q], E.states)
        if res.outcome is OracleOutcome.EMBEDDING_FOUND:
            found.append("ORACLE")
    # a closed saturation is an algebra containing E and q
    if saturate(E, [q], cfg.budget).outcome is Outcome.CLOSED:
        found.append("SATURATION_CLOSURE")
    return found


# -- orchestration ------------------------------------------------------------


def classify(E: EventSet, q: SProbability, cfg: ClassifyConfig | None = None) -> Verdict:
    """Decide whether adding q to E is destructive, critical or neither.

    Returns Unknown when no rule applies; the rule conditions are only
    sufficient, so that outcome is expected for many inputs.
    """
    cfg = cfg or ClassifyConfig()
    _require_algebra(E)
    _require_new(E, q)
    if not is_varying(q):
        raise NotVarying(f"{q} is not varying")
    attempted: list[str] = []
    ext = cfg.extension
    boolean = is_boolean(E)

    def done(kind, cert, notes=""):
        return Verdict(kind, cert, notes, list(attempted))

    def destructive(cert):
        witnesses = _embedding_witnesses(E, q, boolean, cfg)
        if witnesses:
            raise InconsistentVerdict(
                f"{cert.rule} says destructive but embeddings were found by {witnesses}")
        return done(VerdictKind.DESTRUCTIVE, cert)

    attempted.append("NON_PROPER")
    cert = check_non_proper(q)
    if cert:
        return destructive(cert)
    attempted.append("TRIPLE_OVERFLOW")
    cert = check_triple_overflow(E, q)
    if cert:
        return destructive(cert)
    attempted.append("REMARK_PROXIMITY")
    cert = check_proximity(E, q)
    if cert:
        return destructive(cert)
    if ext is not None:
        attempted.append("TH3_DESTRUCTIVE")
        v = check_th3(E, ext, q)
        if v and v.kind is VerdictKind.DESTRUCTIVE:
            return destructive(v.certificate)
    attempted.append("SATURATION")
    sat = saturate(E, [q], cfg.budget)
    if sat.outcome is Outcome.CONTRADICTION:
        return destructive(saturation_certificate(sat))

    oracle = None
    if cfg.oracle_enabled:
        oracle = boolean_embedding_concrete(list(E.events) + [q], E.states)

    if boolean:
        attempted.append("TH4")
        cert = check_th4(E, q)
        if cert:
            return done(VerdictKind.CRITICAL, cert)
        if ext is not None:
            attempted.append("TH2")
            _, c = ext.split(q)
            if 0 < c < 1:
                cert = check_th2(E, ext, q)
                if cert:
                    return done(VerdictKind.CRITICAL, cert)
        attempted.append("CONSTRUCTION")
        cert = construction_embedding(E, q)
        if cert:
            return done(VerdictKind.NOT_CRITICAL, cert)
        if oracle is not None:
            attempted.append("ORACLE")
            if oracle.outcome is OracleOutcome.EMBEDDING_FOUND:
                return done(VerdictKind.NOT_CRITICAL, _oracle_cert(oracle, q, STAYS_BOOLEAN))
            if oracle.outcome is OracleOutcome.NO_EMBEDDING:
                return done(VerdictKind.CRITICAL, _oracle_cert(oracle, q, TO_NON_BOOLEAN),
                            oracle.note)
    else:
        attempted.append("TH5")
        cert = check_th5(E, q)
        if cert:
            return done(VerdictKind.NOT_CRITICAL, cert)
        if ext is not None:
            attempted.append("TH3_CRITICAL")
            v = check_th3(E, ext, q)
            if v and v.kind is VerdictKind.CRITICAL:
                return done(VerdictKind.CRITICAL, v.certificate)
        if _is_mo2(E):
            attempted.append("TH7")
            v = check_th7(E, q)
            if v:
                return done(VerdictKind.CRITICAL, v.certificate)
        if oracle is not None:
            attempted.append("ORACLE")
            if oracle.outcome is OracleOutcome.EMBEDDING_FOUND:
                return done(VerdictKind.CRITICAL, _oracle_cert(oracle, q, TO_BOOLEAN))
            if oracle.outcome is OracleOutcome.NO_EMBEDDING:
                return done(VerdictKind.EMBEDDABLE if sat.outcome is Outcome.CLOSED else VerdictKind.UNKNOWN,
                            _oracle_cert(oracle, q, "no set-representable Boolean embedding"),
                            oracle.note)

    if sat.outcome is Outcome.CLOSED:
        attempted.append("SATURATION_CLOSURE")
        closure = sat.closure
        closed_boolean = is_boolean(closure)
        if closed_boolean:
            kind = VerdictKind.NOT_CRITICAL if boolean else VerdictKind.CRITICAL
            direction = STAYS_BOOLEAN if boolean else TO_BOOLEAN
            note = "the generated algebra is Boolean"
        else:
            kind = VerdictKind.EMBEDDABLE
            direction = "undetermined"
            note = "the generated algebra exists but is not Boolean; criticality undetermined"
        return done(kind, Certificate("SATURATION_CLOSURE",
                                      {"q": q, "algebra": closure, "boolean": closed_boolean,
                                       "direction": direction}, note))

    return done(VerdictKind.UNKNOWN,
                Certificate("UNKNOWN", {"rules_attempted": list(attempted),
                                        "saturation": sat.outcome.value}),
                "no sufficient condition applied")


def _is_mo2(E: EventSet) -> bool:
    try:
        mo2_pairs(E)
    except NotMO2:
        return False
    return True


def _oracle_cert(oracle, q, direction) -> Certificate:
    w = {"q": q, "outcome": oracle.outcome.value, "searched": oracle.searched, "direction": direction}
    if oracle.witness is not None:
        w["algebra"] = oracle.witness
    return Certificate("ORACLE", w, oracle.note)


# -- replay -------------------------------------------------------------------


def _contains_all(algebra: EventSet, E: EventSet | None, q: SProbability | None) -> bool:
    if E is not None and not E.is_subset(algebra):
        return False
    return q is None or q in algebra


def replay(cert: Certificate, E: EventSet | None = None, q: SProbability | None = None) -> bool:
    """Re-check a certificate's hypothesis on its own witnesses.

    With E and q given, membership claims (witnesses drawn from E) are
    checked too.
    """
    w = cert.witnesses
    rule = cert.rule
    if q is not None and "q" in w and w["q"] != q:
        return False
    if q is not None and "qbar" in w and w["qbar"] != q:
        return False

    def member(*elems):
        return E is None or all(e in E or e == q for e in elems)

    if rule == "NON_PROPER":
        return not is_proper(w["q"])
    if rule == "TRIPLE_OVERFLOW":
        p1, p2, qq = w["p1"], w["p2"], w["q"]
        if not (orthogonal(p1, p2) and orthogonal(p1, qq) and orthogonal(p2, qq)):
            return False
        i = qq.states.index(w["state"])
        return p1.values[i] + p2.values[i] + qq.values[i] > 1 and member(p1, p2)
    if rule == "REMARK_PROXIMITY":
        p, qq = w["p"], w["q"]
        if w["side"] == "below":
            ok = lt(qq, p) and all(b >= a - HALF for a, b in zip(p.values, qq.values))
            derived = [1 - a + b for a, b in zip(p.values, qq.values)]
        else:
            ok = lt(p, qq) and all(b <= a + HALF for a, b in zip(p.values, qq.values))
            derived = [1 + a - b for a, b in zip(p.values, qq.values)]
        derived_ok = (tuple(derived) == w["derived"].values and not is_proper(w["derived"]))
        return ok and derived_ok and member(p)
    if rule == "SATURATION":
        return _replay_trace(w["trace"], E, q)
    if rule == "TH3_DESTRUCTIVE":
        a, b = w["operands"]
        if not orthogonal(a, b):
            return False
        total = tuple(x + y for x, y in zip(a.values, b.values))
        return total == w["derived"].values and not is_proper(w["derived"])
    if rule == "TH3_CRITICAL":
        qbar = w["qbar"]
        algebra_ok = E is None or (is_concrete(E) and not is_boolean(E))
        return qbar.is_two_valued() and algebra_ok
    if rule == "TH2":
        p, qq = w["p"], w["q_base"]
        if w["condition"] == "min":
            cond = all(min(a, b) <= HALF for a, b in zip(p.values, qq.values))
        else:
            cond = all(max(a, b) >= HALF for a, b in zip(p.values, qq.values))
        lifted = w["qbar"].values == qq.values + (w["c"],)
        return cond and lifted and not comparable(p, qq) and 0 < w["c"] < 1
    if rule in ("TH4_I", "TH4_II", "TH4_III"):
        p, qq = w["p"], w["q"]
        rc = reciprocity(p, qq)
        if rule == "TH4_III":
            ok = rc is ReciprocityClass.BOTH
        else:
            i = qq.states.index(w["state"])
            s = p.values[i] + qq.values[i]
            ok = (rc is ReciprocityClass.BELOW and s > 1) if rule == "TH4_I" else (
                rc is ReciprocityClass.ABOVE and s < 1)
        return ok and is_varying(qq) and member(p) and (E is None or is_boolean(E))
    if rule == "TH5_I":
        p, qq = w["p"], w["q"]
        return _pairwise_reciprocal([p, qq, complement(p), complement(qq)]) and member(p)
    if rule == "TH5_II":
        p1, p2 = w["p1"], w["p2"]
        return _pairwise_reciprocal([p1, p2, complement(p1), complement(p2)]) and member(p1, p2)
    if rule in ("TH5_III", "TH5_IV"):
        quad = [w["p1"], w["p2"], w["p3"], w["p4"]]
        sums_ok = (orthogonal(quad[0], quad[1]) and orthogonal(quad[2], quad[3])
                   and all(a + b == c + d for a, b, c, d in zip(*(x.values for x in quad))))
        q_ok = rule == "TH5_III" or w["q"] in quad
        return sums_ok and q_ok and _pairwise_below(quad) and member(*quad)
    if rule in ("TH7", "CONSTRUCTION", "ORACLE", "SATURATION_CLOSURE"):
        algebra = w.get("algebra")
        if algebra is None:
            return False
        if not (verify_axioms(algebra).ok and _contains_all(algebra, E, w.get("q"))):
            return False
        if rule == "SATURATION_CLOSURE":
            return is_boolean(algebra) == w["boolean"]
        if not is_boolean(algebra):
            return False
        if rule == "TH7":
            return len(algebra) == 16 and all(is_varying(a) for a in w["atoms"])
        if rule == "ORACLE":
            return is_concrete(algebra)
        return True
    return False


def _replay_trace(steps, E: EventSet | None, q: SProbability | None) -> bool:
    known = set(E.events) if E is not None else None
    for step in steps[:-1]:
        if step.op == "given":
            if q is not None and step.result != q:
                return False
        elif known is not None and not all(x in known for x in step.operands):
            return False
        try:
            if step.replay() != step.result:
                return False
        except PreconditionError:
            return False
        if known is not None:
            known.add(step.result)
    last = steps[-1]
    if known is not None and not all(x in known for x in last.operands):
        return False
    if last.op == "triple":
        a, b, c = last.operands
        if not (orthogonal(a, b) and orthogonal(b, c) and orthogonal(a, c)):
            return False
        return any(x + y + z > 1 for x, y, z in zip(a.values, b.values, c.values))
    try:
        result = last.replay()
    except PreconditionError:
        return False
    return result == last.result and not is_proper(result)
