from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfspectra.exact import QuadIrr, quad_compare
from cfspectra.words import (
    ParseError,
    TailSpec,
    beta,
    cf,
    compare_tails,
    continuant,
    convergents,
    euler_split_check,
    format_cf,
    gap_length,
    lift,
    parse_cf,
    power,
    tail_value,
)

from oracles import cf_float, convergent_table, finite_cf, quad_float

words = st.lists(st.integers(1, 9), min_size=0, max_size=20).map(tuple)
nonempty = st.lists(st.integers(1, 9), min_size=1, max_size=20).map(tuple)
tails = st.builds(
    TailSpec,
    st.lists(st.integers(1, 6), max_size=5).map(tuple),
    st.lists(st.integers(1, 6), min_size=1, max_size=4).map(tuple),
)


def test_convergents_examples():
    c = convergents((1, 2))
    assert c.value == Fraction(2, 3)
    assert c.beta == Fraction(1, 3) == finite_cf((2, 1))
    e = convergents(())
    assert e.value == 0 and e.beta == 0
    assert (e.p_at(-1), e.q_at(-1), e.p_at(0), e.q_at(0)) == (1, 0, 0, 1)


def test_euler_split_examples():
    assert euler_split_check((1, 4, 1, 4), 2)
    assert euler_split_check((1, 2, 3), 1)
    with pytest.raises(ValueError):
        euler_split_check((1, 2), 2)


def test_power():
    assert power((1, 4), 2) == (1, 4, 1, 4)
    assert power((1, 4), 0) == ()


def test_tail_value_examples():
    assert tail_value(TailSpec.periodic(1)) == QuadIrr(-1, 1, 2, 5)
    assert tail_value(TailSpec.periodic(1, 4)) == QuadIrr(-2, 2, 1, 2)
    assert tail_value(TailSpec.periodic(4, 1)) == QuadIrr(-2, 2, 1, 2) / 4
    assert tail_value(TailSpec((2, 3))) == Fraction(3, 7)


@pytest.mark.parametrize("n", range(1, 21))
def test_A_B_relations(n):
    A = tail_value(TailSpec.periodic(n, 1))
    B = tail_value(TailSpec.periodic(1, n))
    assert B == QuadIrr(-n, 1, 2, n * n + 4 * n)
    assert A == B / n
    assert n * A + A * B == 1
    assert B + B * A == 1


def test_tail_canonical_form():
    assert TailSpec((1,), (3, 1)) == TailSpec.periodic(1, 3)
    assert TailSpec((), (1, 3, 1, 3)) == TailSpec.periodic(1, 3)
    assert TailSpec((2, 1)) == TailSpec((3,))
    assert TailSpec((1, 4), (1, 3)).shift(2) == TailSpec.periodic(1, 3)


def test_compare_tails_examples():
    one, two = TailSpec((1,), (5,)), TailSpec((2,), (5,))
    assert compare_tails((), one, two) == 1
    t = TailSpec.periodic(1, 3)
    assert compare_tails((1, 4), TailSpec((4,), (1, 3)), t) == -1
    assert compare_tails((1, 4), t, t) == 0


def test_gap_length_examples():
    t = TailSpec.periodic(1, 3)
    assert gap_length((1, 4), t, t).length == 0
    g = gap_length((1, 4), TailSpec((2,), (3, 1)), TailSpec((1,), (1, 3)))
    assert g.agrees()
    direct = cf("[0; 1 4 2 (3 1)~]") - cf("[0; 1 4 1 (1 3)~]")
    assert g.length == abs(direct)
    h = gap_length((1, 3), TailSpec((4,), (1, 3)), t)
    assert h.agrees() and h.length == cf("[0; 1 3 (1 3)~]") - cf("[0; 1 3 4 (1 3)~]")


def test_parse_examples():
    x = parse_cf("[0; 1 4 1 2 (1 3)~]")
    assert x.a0 == 0 and x.tail == TailSpec((1, 4, 1, 2), (1, 3))
    assert parse_cf("[0;1,2]").value() == Fraction(2, 3)
    assert parse_cf("[3]").value() == 3
    assert str(parse_cf("[0;(1 4)~]")) == "[0; (1 4)~]"


@pytest.mark.parametrize(
    "text, pos",
    [("[0; 1 x]", 6), ("0; 1]", 0), ("[0; (1 2]", 8), ("[0; 1 ()~]", 7), ("[0; 0 1]", 4), ("[0; 1] 2", 7)],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_cf(text)
    assert exc.value.pos == pos


def test_lift_mixed_fields():
    a, b = lift(cf("[0; (1)~]"), cf("[0; (2)~]"))
    s = a + b
    assert abs(float(s) - (float(a) + float(b))) < 1e-15


# ------------------------------------------------------------------ properties


@given(words)
def test_determinant_identity(w):
    c = convergents(w)
    for n in range(-1, len(w)):
        assert c.p_at(n + 1) * c.q_at(n) - c.p_at(n) * c.q_at(n + 1) == (-1) ** n


@given(nonempty)
def test_convergents_match_nested_fractions(w):
    c = convergents(w)
    assert [(c.p_at(i), c.q_at(i)) for i in range(1, len(w) + 1)] == convergent_table(w)
    assert continuant(w) == c.q_at(len(w))


@given(words)
def test_beta_is_value_of_reversal(w):
    assert beta(w) == finite_cf(w[::-1]) == convergents(w).beta
    if w:
        assert beta(w) == tail_value(TailSpec(w[::-1]))


@given(st.lists(st.integers(1, 9), min_size=2, max_size=20).map(tuple), st.data())
def test_euler_rule(w, data):
    m = data.draw(st.integers(1, len(w) - 1))
    assert euler_split_check(w, m)


@given(words, tails, tails)
def test_parity_rule_agrees_with_exact_comparison(prefix, t1, t2):
    full1, full2 = lift(tail_value(t1.prepend(prefix)), tail_value(t2.prepend(prefix)))
    expected = (full1 > full2) - (full1 < full2)
    assert compare_tails(prefix, t1, t2) == expected


@given(words, tails, tails)
def test_gap_formula_equals_direct_difference(prefix, t1, t2):
    g = gap_length(prefix, t1, t2)
    assert g.agrees()
    assert g.orientation == compare_tails(prefix, t1, t2)


@given(st.integers(0, 5), tails)
def test_tail_values_against_mpmath(a0, t):
    exact = QuadIrr.coerce(a0) + tail_value(t)
    with mpmath.workdps(60):
        assert abs(quad_float(exact, 60) - cf_float(a0, t.preperiod, t.period, dps=60)) < mpmath.mpf(10) ** -50


@given(st.integers(0, 5), tails)
def test_notation_round_trip(a0, t):
    text = format_cf(parse_cf(f"[{a0}; {t}]"))
    again = parse_cf(text)
    assert again.tail == t and again.a0 == a0
    assert quad_compare(again.value(), QuadIrr.coerce(a0) + tail_value(t)) == 0
