import importlib
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from generators import corrected_th7_instance, random_algebra, random_split_triple, random_th7
from instances import (
    EX2_ALGEBRA,
    EX2_BASE,
    EX2_Q,
    EX4_BOOLEAN,
    EX4_MO2,
    EX4_P,
    EX4_Q,
    EX5_BASE,
    EX5_Q,
    MO2,
    MO2_Q,
    OVERFLOW_ATOMS,
    OVERFLOW_Q,
    cube,
    es,
)
from numevents.algebra import Budget, Outcome, is_boolean, saturate, verify_axioms
from numevents.classify import (
    ClassifyConfig,
    VerdictKind,
    check_non_proper,
    check_proximity,
    check_th2,
    check_th3,
    check_th4,
    check_th5,
    check_th7,
    check_triple_overflow,
    classify,
    replay,
)
from numevents.construct import boolean_from_atoms, lift_event, zero_one_extension
from numevents.core import Certificate, complement, is_varying, sprob
from numevents.errors import (
    BooleanInput,
    EventInSet,
    InconsistentVerdict,
    NotAnAlgebra,
    NotBoolean,
    NotExtension,
    NotMO2,
    NotVarying,
)
from numevents.search import enumerate_boolean_subalgebras

classify_mod = importlib.import_module("numevents.classify")
seeds = st.integers(0, 2**32 - 1)
OVERFLOW_ALGEBRA = boolean_from_atoms(OVERFLOW_ATOMS)


def pp(*values):
    """The four-element algebra {0, p, p', 1}."""
    p = sprob(*values)
    return es(p.values, complement(p).values)


# -- destructive rules ------------------------------------------------------------


def test_non_proper():
    cert = check_non_proper(sprob("1/4", "1/2"))
    assert cert.rule == "NON_PROPER" and replay(cert)
    assert check_non_proper(EX5_Q) is None


def test_triple_overflow_on_a_valid_algebra():
    cert = check_triple_overflow(OVERFLOW_ALGEBRA, OVERFLOW_Q)
    assert cert.rule == "TRIPLE_OVERFLOW"
    assert cert.witnesses["sum"] == [Fraction(9, 8)] * 3
    assert replay(cert, OVERFLOW_ALGEBRA, OVERFLOW_Q)


def test_triple_overflow_needs_an_algebra():
    E = es(("3/4", "1/4", "1/4"), ("1/4", "3/4", "1/4"))
    with pytest.raises(NotAnAlgebra):
        check_triple_overflow(E, sprob("1/4", "1/4", "3/4"))


def test_triple_overflow_absent():
    assert check_triple_overflow(es(n=2), EX5_Q) is None
    assert check_triple_overflow(pp("3/4", "1/4"), sprob("5/8", "1/8")) is None


def test_proximity_examples():
    cert = check_proximity(EX5_BASE, EX5_Q)
    assert cert.witnesses["p"] == sprob("1/8", "5/8")
    assert cert.witnesses["derived"] == sprob("3/4", "3/4")
    assert replay(cert, EX5_BASE, EX5_Q)
    assert check_proximity(es(n=2), EX5_Q) is None


# -- extension rules -----------------------------------------------------------------


def test_th2_example():
    base = pp("3/4", "1/4", "1/4")
    ext_set, ext = zero_one_extension(base, "t")
    qbar = lift_event(sprob("3/8", "1/2", "7/8"), "1/2", "t")
    cert = check_th2(ext_set, ext, qbar)
    assert cert.witnesses["p"] == sprob("3/4", "1/4", "1/4")
    assert cert.witnesses["condition"] == "min"
    assert cert.witnesses["enclosing_algebra_verified"] is True
    assert replay(cert, ext_set, qbar)


def test_th2_absent_and_errors():
    base = pp("3/4", "1/4", "1/4")
    ext_set, ext = zero_one_extension(base, "t")
    assert check_th2(ext_set, ext, lift_event(sprob("1/2", "1/4", "1/4"), "1/2", "t")) is None
    with pytest.raises(NotExtension):
        check_th2(ext_set, ext, lift_event(sprob("3/8", "1/2", "7/8"), 0, "t"))
    mo_ext, mo_map = zero_one_extension(MO2, "t")
    with pytest.raises(NotBoolean):
        check_th2(mo_ext, mo_map, lift_event(sprob("1/2", "1/4", "3/4", "1/8"), "1/2", "t"))


def test_th3_destructive_branch():
    ext_set, ext = zero_one_extension(MO2, "t")
    qbar = lift_event(sprob(1, 0, 0, 1), "1/2", "t")
    v = check_th3(ext_set, ext, qbar)
    assert v.kind is VerdictKind.DESTRUCTIVE
    assert v.certificate.witnesses["derived"] == sprob(1, 1, 1, 1, "1/2", states=ext_set.states)
    assert replay(v.certificate, ext_set, qbar)


def test_th3_critical_branch():
    ext_set, ext = zero_one_extension(MO2, "t")
    qbar = sprob(1, 1, 0, 0, 0, states=ext_set.states)
    v = check_th3(ext_set, ext, qbar)
    assert v.kind is VerdictKind.CRITICAL and replay(v.certificate)
    b_ext, b_map = zero_one_extension(EX2_BASE, "t")
    assert check_th3(b_ext, b_map, sprob(1, 1, 0, 0, 0, states=b_ext.states)) is None


def test_classify_uses_the_extension_rules():
    ext_set, ext = zero_one_extension(MO2, "t")
    cfg = ClassifyConfig(extension=ext)
    qbar = lift_event(sprob(1, 0, 0, 1), "1/2", "t")
    v = classify(ext_set, qbar, cfg)
    assert v.kind is VerdictKind.DESTRUCTIVE
    assert v.certificate.rule in ("REMARK_PROXIMITY", "TH3_DESTRUCTIVE")
    assert replay(v.certificate, ext_set, qbar)
    v = classify(ext_set, sprob(1, 1, 0, 0, 0, states=ext_set.states), cfg)
    assert v.kind is VerdictKind.CRITICAL and v.certificate.rule == "TH3_CRITICAL"


# -- reciprocity rules ------------------------------------------------------------------


def test_th4_examples():
    cert = check_th4(EX4_BOOLEAN, EX4_Q)
    assert cert.rule == "TH4_III" and cert.witnesses["p"] == EX4_P
    E = pp("3/4", "1/4", "1/4")
    q = sprob("1/4", "1/4", "7/8")
    cert = check_th4(E, q)
    assert cert.rule == "TH4_I" and cert.witnesses["p"] == sprob("3/4", "1/4", "1/4")
    assert replay(cert, E, q)
    with pytest.raises(EventInSet):
        check_th4(EX4_BOOLEAN, complement(EX4_P))
    with pytest.raises(NotBoolean):
        check_th4(MO2, MO2_Q)


def test_th4_ii():
    E = pp("3/4", "1/4", "1/4")
    q = sprob("3/4", "3/4", "1/8")
    cert = check_th4(E, q)
    assert cert.rule == "TH4_II" and replay(cert, E, q)


def test_th5_examples():
    cert = check_th5(EX4_MO2, sprob("3/8", "5/8", "1/4", "7/8"))
    assert cert.rule == "TH5_II"
    assert {cert.witnesses["p1"], cert.witnesses["p2"]} == {EX4_P, EX4_Q}
    assert replay(cert, EX4_MO2)
    assert check_th5(MO2, MO2_Q) is None
    with pytest.raises(BooleanInput):
        check_th5(EX2_BASE, EX2_Q)


def test_th5_iii_needs_distinct_nonzero_elements():
    # p1 = p2 = p3 = p4 = 0 would satisfy the letter of the condition
    z = MO2.events[0]
    assert not classify_mod._pairwise_below([z, z, z, z])
    assert not classify_mod._pairwise_below([z, MO2.events[1], MO2.events[2], MO2.events[3]])


# -- completion rule -------------------------------------------------------------------


def test_th7_on_the_corrected_instance():
    E, q = corrected_th7_instance()
    v = check_th7(E, q)
    assert v.kind is VerdictKind.CRITICAL
    assert len(v.certificate.witnesses["algebra"]) == 16
    assert replay(v.certificate, E, q)


def test_th7_absent_for_two_valued_q():
    assert check_th7(MO2, MO2_Q) is None
    with pytest.raises(NotMO2):
        check_th7(EX2_BASE, EX2_Q)


# -- the orchestrator ------------------------------------------------------------------


def test_classify_examples():
    v = classify(EX2_BASE, EX2_Q)
    assert v.kind is VerdictKind.NOT_CRITICAL and v.certificate.rule == "CONSTRUCTION"
    assert v.certificate.witnesses["algebra"] == EX2_ALGEBRA
    v = classify(EX4_BOOLEAN, EX4_Q)
    assert v.kind is VerdictKind.CRITICAL and v.certificate.rule == "TH4_III"
    assert saturate(EX4_BOOLEAN, [EX4_Q]).outcome is not Outcome.CONTRADICTION
    v = classify(EX5_BASE, EX5_Q)
    assert v.kind is VerdictKind.DESTRUCTIVE and v.certificate.rule == "REMARK_PROXIMITY"
    v = classify(MO2, MO2_Q)
    assert v.kind is VerdictKind.CRITICAL and v.certificate.rule == "ORACLE"
    assert v.certificate.witnesses["algebra"] == cube(4)
    v = classify(OVERFLOW_ALGEBRA, OVERFLOW_Q)
    assert v.kind is VerdictKind.DESTRUCTIVE and v.certificate.rule == "TRIPLE_OVERFLOW"


def test_classify_preconditions():
    with pytest.raises(NotAnAlgebra):
        classify(es(("3/4", "1/4", "1/4"), ("1/4", "3/4", "1/4")), sprob("1/4", "1/4", "3/4"))
    with pytest.raises(EventInSet):
        classify(EX2_BASE, sprob(1, 0, 0, 1))
    with pytest.raises(NotVarying):
        classify(EX2_BASE, sprob("1/4", 0, 0, 0))


def test_rules_attempted_are_recorded():
    v = classify(EX2_BASE, EX2_Q)
    assert v.rules_attempted[:4] == ["NON_PROPER", "TRIPLE_OVERFLOW", "REMARK_PROXIMITY", "SATURATION"]
    assert v.rules_attempted[-1] == "CONSTRUCTION"


def test_unknown_under_a_tight_budget():
    pairs = [("5/7", "1/4"), ("2/7", "3/4"), (0, 1), (1, 0), (0, 0), (1, 1)]
    E = es(*[(a, b, c) for a, b in pairs for c in (0, 1)])
    q = sprob("7/8", 0, "1/4")
    tight = ClassifyConfig(budget=Budget(max_elements=12, max_rounds=2), oracle_enabled=False)
    v = classify(E, q, tight)
    assert v.kind is VerdictKind.UNKNOWN
    assert v.certificate.witnesses["rules_attempted"] == v.rules_attempted
    assert v.certificate.witnesses["saturation"] == "BudgetExceeded"
    v = classify(E, q, ClassifyConfig(oracle_enabled=False))
    assert v.kind is VerdictKind.DESTRUCTIVE and v.certificate.rule == "SATURATION"
    assert replay(v.certificate, E, q)


def test_embeddable_when_the_closure_is_not_boolean():
    E = es((1, "1/12", 1), (0, "11/12", 0), ("1/3", "1/6", "11/12"), ("2/3", "5/6", "1/12"))
    q = sprob("1/2", "3/8", "7/8")
    v = classify(E, q)
    assert v.kind is VerdictKind.EMBEDDABLE and v.certificate.rule == "SATURATION_CLOSURE"
    assert not is_boolean(v.certificate.witnesses["algebra"])
    assert replay(v.certificate, E, q)


def test_mutual_exclusion_fails_loudly(monkeypatch):
    fake = Certificate("REMARK_PROXIMITY", {"p": EX2_BASE.events[1], "q": EX2_Q})
    monkeypatch.setattr(classify_mod, "check_proximity", lambda E, q: fake)
    with pytest.raises(InconsistentVerdict):
        classify(EX2_BASE, EX2_Q)


def test_tampered_certificates_do_not_replay():
    v = classify(EX5_BASE, EX5_Q)
    bad = replace(v.certificate, witnesses={**v.certificate.witnesses, "p": sprob("7/8", "3/8")})
    assert not replay(bad, EX5_BASE, EX5_Q)
    v = classify(EX2_BASE, EX2_Q)
    assert not replay(v.certificate, EX2_BASE, sprob("3/8", 0, 0, 1))
    assert not replay(Certificate("NO_SUCH_RULE", {}))


def test_classify_is_deterministic():
    for E, q in [(EX2_BASE, EX2_Q), (MO2, MO2_Q), (EX5_BASE, EX5_Q), (EX4_BOOLEAN, EX4_Q)]:
        a, b = classify(E, q), classify(E, q)
        assert a.kind is b.kind and a.certificate == b.certificate


# -- properties over generated instances ---------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_split_triples_are_not_critical(seed):
    E, p1, q = random_split_triple(random.Random(seed))
    v = classify(E, q)
    assert v.kind is VerdictKind.NOT_CRITICAL and v.certificate.rule == "CONSTRUCTION"
    alg = v.certificate.witnesses["algebra"]
    assert verify_axioms(alg).ok and is_boolean(alg) and E.is_subset(alg) and q in alg


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_completion_instances_are_critical(seed):
    E, q = random_th7(random.Random(seed))
    v = classify(E, q)
    assert v.kind is VerdictKind.CRITICAL and v.certificate.rule == "TH7"
    assert replay(v.certificate, E, q)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_verdicts_are_sound_and_replay(seed):
    rng = random.Random(seed)
    E = random_algebra(rng, 3)
    q = sprob(*[Fraction(rng.randint(0, 8), 8) for _ in E.states], states=E.states)
    assume(q not in E and is_varying(q))
    v = classify(E, q, ClassifyConfig(budget=Budget(max_elements=256, max_rounds=8)))
    if v.kind is VerdictKind.DESTRUCTIVE:
        assert saturate(E, [q]).outcome is not Outcome.CLOSED
    if v.kind is not VerdictKind.UNKNOWN:
        assert replay(v.certificate, E, q)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_th4_never_fires_on_two_valued_inputs(n):
    # the cube always embeds a two-valued E and q, so the TH4 rule cannot apply
    states = cube(n).states
    for E in enumerate_boolean_subalgebras(states):
        if not is_boolean(E):
            continue
        for q in cube(n).events:
            if q in E or not is_varying(q):
                continue
            assert check_th4(E, q) is None
