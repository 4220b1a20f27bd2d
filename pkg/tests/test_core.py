from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numevents.core import (
    ReciprocityClass,
    SProbability,
    StateSet,
    comparable,
    complement,
    difference,
    is_proper,
    is_varying,
    leq,
    ortho_sum,
    orthogonal,
    reciprocity,
    sprob,
    to_rational,
    zero,
)
from numevents.errors import (
    NotComparable,
    NotOrthogonal,
    NotProper,
    PreconditionError,
    StateSetMismatch,
    ValueOutOfRange,
)

F = Fraction


def values(n):
    return st.lists(
        st.builds(lambda d, k: F(k % (d + 1), d), st.integers(1, 16), st.integers(0, 16)),
        min_size=n, max_size=n,
    )


vec3 = values(3).map(lambda v: sprob(*v))


def proper_vec(n=3):
    return values(n).map(lambda v: sprob(*v)).filter(is_proper)


# -- construction -------------------------------------------------------------


def test_values_are_exact_and_normalised():
    p = sprob("2/8", 0, "0.5")
    assert p.values == (F(1, 4), F(0), F(1, 2))
    assert str(p) == "(1/4,0,1/2)"


def test_floats_are_refused():
    with pytest.raises(TypeError):
        to_rational(0.25)
    with pytest.raises(TypeError):
        sprob(0.5, 0.5)


@pytest.mark.parametrize("bad", ["-1/4", "5/4", 2])
def test_out_of_range(bad):
    with pytest.raises(ValueOutOfRange):
        sprob(0, bad)


def test_state_set_rules():
    with pytest.raises(PreconditionError):
        StateSet(())
    with pytest.raises(PreconditionError):
        StateSet(("a", "a"))
    with pytest.raises(PreconditionError):
        SProbability(StateSet.default(2), (0, 0, 0))


def test_mismatched_state_sets():
    p = sprob(1, 0)
    q = sprob(1, 0, states=["a", "b"])
    with pytest.raises(StateSetMismatch):
        leq(p, q)
    with pytest.raises(StateSetMismatch):
        orthogonal(sprob(1, 0), sprob(1, 0, 0))


# -- documented examples --------------------------------------------------------


def test_leq_examples():
    assert leq(sprob("1/4", 0, 0, 1), sprob(1, 0, 0, 1))
    p = sprob(1, 0, "3/4", "1/4")
    assert leq(p, p)
    assert not leq(p, sprob("3/4", "1/4", 1, 0))


def test_complement_examples():
    assert complement(sprob(1, 0, 0, 1)) == sprob(0, 1, 1, 0)
    assert complement(zero(StateSet.default(4))) == sprob(1, 1, 1, 1)
    assert complement(sprob("1/4", 0, 0, 1)) == sprob("3/4", 1, 1, 0)


def test_orthogonal_examples():
    assert orthogonal(sprob("3/4", "1/4", "1/4"), sprob("1/4", "3/4", "1/4"))
    assert orthogonal(sprob("3/4", "1/4", "1/4"), sprob("1/4", "1/4", "3/4"))
    p = sprob("3/8", "7/8")
    assert orthogonal(p, complement(p))


def test_ortho_sum_examples():
    assert ortho_sum(sprob("1/4", 0, 0, 1), sprob(0, 1, 1, 0)) == sprob("1/4", 1, 1, 1)
    assert ortho_sum(sprob("3/4", 0, 0, 0), sprob(0, 1, 1, 0)) == sprob("3/4", 1, 1, 0)
    with pytest.raises(NotOrthogonal):
        ortho_sum(sprob("3/4", "1/4"), sprob("1/2", "1/2"))


def test_difference_examples():
    q = sprob(1, 0, 0, 1)
    assert difference(q, sprob("1/4", 0, 0, 1)) == sprob("3/4", 0, 0, 0)
    assert difference(q, zero(q.states)) == q
    assert difference(q, q) == zero(q.states)
    with pytest.raises(NotComparable):
        difference(sprob("1/2", 0), sprob(0, "1/2"))


def test_varying_and_proper_examples():
    assert is_varying(sprob("3/8", "7/8"))
    assert not is_varying(sprob("3/4", "3/4"))
    assert not is_varying(sprob("1/2", "1/2"))
    assert is_proper(sprob(0, 0))
    assert is_proper(sprob("3/8", "7/8"))
    assert not is_proper(sprob("1/4", "1/2"))


def test_reciprocity_examples():
    assert reciprocity(sprob(1, 0, "1/2", "1/2"), sprob("1/2", "1/2", 0, 1)) is ReciprocityClass.BOTH
    assert reciprocity(sprob("3/4", "1/4", "1/4"), sprob("1/4", "1/4", "3/4")) is ReciprocityClass.BELOW
    with pytest.raises(NotProper):
        reciprocity(sprob("1/4", "1/2"), sprob(1, 0))


# -- invariants ---------------------------------------------------------------


@given(vec3)
def test_complement_is_an_involution(p):
    assert complement(complement(p)) == p


@given(vec3, vec3)
def test_complement_reverses_order(p, q):
    assert leq(p, q) == leq(complement(q), complement(p))


@given(vec3, vec3, vec3)
def test_leq_is_a_partial_order(p, q, r):
    assert leq(p, p)
    if leq(p, q) and leq(q, p):
        assert p == q
    if leq(p, q) and leq(q, r):
        assert leq(p, r)


@given(vec3, vec3)
def test_orthogonality_is_symmetric_and_sum_commutes(p, q):
    assert orthogonal(p, q) == orthogonal(q, p)
    assert orthogonal(p, q) == leq(p, complement(q))
    if orthogonal(p, q):
        assert ortho_sum(p, q) == ortho_sum(q, p)
        assert leq(p, ortho_sum(p, q))


@given(vec3, vec3)
def test_difference_inverts_sum(p, q):
    if leq(p, q):
        d = difference(q, p)
        assert orthogonal(d, p)
        assert ortho_sum(d, p) == q
        assert difference(q, d) == p
    else:
        with pytest.raises(NotComparable):
            difference(q, p)
    assert comparable(p, q) == (leq(p, q) or leq(q, p))


@settings(max_examples=200)
@given(proper_vec(), proper_vec())
def test_reciprocity_symmetry_and_duality(p, q):
    rc = reciprocity(p, q)
    assert rc is reciprocity(q, p)
    dual = reciprocity(complement(p), complement(q))
    assert dual.below == rc.above and dual.above == rc.below
    assert reciprocity(p, complement(p)) is ReciprocityClass.BOTH


@given(vec3)
def test_varying_is_complement_invariant(p):
    assert is_varying(p) == is_varying(complement(p))
    assert is_proper(p) == is_proper(complement(p))
