from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfspectra.exact import (
    NEG,
    POS,
    ZERO,
    CertInterval,
    Const,
    DivisionByZero,
    FieldMismatch,
    MultiQuad,
    QuadIrr,
    Sqrt,
    Undecided,
    certified_sign,
    enclose,
    quad_arith,
    quad_compare,
    squarefree_part,
)

from oracles import quad_float

small = st.integers(-60, 60)
radicand = st.sampled_from([0, 2, 3, 5, 6, 7, 8, 12, 20, 21, 32, 45])


@st.composite
def quads(draw, d=radicand):
    return QuadIrr(draw(small), draw(small), draw(st.integers(1, 40)), draw(d))


def test_normalisation_extracts_square_factors():
    b4 = QuadIrr(-4, 1, 2, 32)
    assert (b4.p, b4.q, b4.r, b4.d) == (-2, 2, 1, 2)
    assert str(b4) == "-2 + 2*sqrt(2)"


def test_rational_values_drop_the_radical():
    assert QuadIrr(3, 0, 6, 7) == QuadIrr(1, 0, 2)
    assert QuadIrr(1, 2, 1, 1) == QuadIrr(3)
    assert QuadIrr(3, 4, 2, 4).is_rational
    assert QuadIrr(3, 4, 2, 4) == QuadIrr(11, 0, 2)


def test_squarefree_part():
    assert [squarefree_part(n) for n in (1, 8, 12, 45, 72, 30)] == [1, 2, 3, 5, 2, 30]


def test_compare_examples():
    assert quad_compare(QuadIrr.sqrt(2), QuadIrr(3, 0, 2)) == -1
    x = QuadIrr(5, -3, 7, 11)
    assert quad_compare(x, x) == 0
    assert quad_compare(QuadIrr(-4, 1, 2, 32), 0) == 1


def test_arith_examples():
    phi_minus = QuadIrr(-1, 1, 2, 5)
    phi_plus = QuadIrr(1, 1, 2, 5)
    assert quad_arith("+", phi_minus, phi_plus) == QuadIrr.sqrt(5)
    assert quad_arith("*", QuadIrr(-1, 1, 1, 2), QuadIrr(1, 1, 1, 2)) == 1
    b4 = QuadIrr(-2, 2, 1, 2)
    assert quad_arith("+", b4, 4) == QuadIrr(2, 2, 1, 2)
    # the endpoint sqrt(32) is 2 B_4 + 4, not B_4 + 4
    assert quad_arith("+", 2 * b4, 4) == QuadIrr.sqrt(32)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        quad_arith("+", QuadIrr.sqrt(2), QuadIrr.sqrt(3))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        QuadIrr(1) / QuadIrr(0)


def test_enclose_examples():
    iv = enclose(QuadIrr.sqrt(2), 20)
    assert iv.width() <= Fraction(1, 2**20)
    assert iv.lo < Fraction(141421356, 10**8) < iv.hi
    assert enclose(QuadIrr(2, 0, 3), 7).lo == enclose(QuadIrr(2, 0, 3), 7).hi == Fraction(2, 3)
    assert enclose(QuadIrr(-2, 2, 1, 2), 30).contains(Fraction("0.82842712474"))


def test_certified_sign_examples():
    nested = Const(QuadIrr.sqrt(2)) + QuadIrr.sqrt(3) - Sqrt(QuadIrr(5, 2, 1, 6))
    try:
        assert certified_sign(nested, max_bits=1024) == ZERO
    except Undecided:
        pass
    x = Const(QuadIrr(7, -3, 5, 13))
    assert certified_sign(x - x) == ZERO
    assert certified_sign(Const(QuadIrr.sqrt(2)) + QuadIrr.sqrt(3) - Fraction(314, 100)) == POS
    with pytest.raises(DivisionByZero):
        certified_sign(Const(1) / (x - x))


def test_multiquad_mixed_fields():
    s = MultiQuad.coerce(QuadIrr.sqrt(2)) + QuadIrr.sqrt(3)
    iv = s.enclose(100)
    assert iv.width() <= Fraction(1, 2**100)
    with mpmath.workdps(60):
        ref = mpmath.sqrt(2) + mpmath.sqrt(3)
        assert abs(mpmath.mpf(iv.lo.numerator) / iv.lo.denominator - ref) < mpmath.mpf(2) ** -99
    assert (s - QuadIrr.sqrt(2)).to_quad() == QuadIrr.sqrt(3)
    assert s.sign() == POS and (-s).sign() == NEG


def test_parse_inverts_str():
    for x in (QuadIrr(3), QuadIrr(-2, 0, 7), QuadIrr(-2, 2, 1, 2), QuadIrr(3165, -44, 1887, 21), QuadIrr.sqrt(5)):
        assert QuadIrr.parse(str(x)) == x


# ------------------------------------------------------------------ properties


@given(quads())
def test_normalisation_idempotent(x):
    again = QuadIrr(x.p, x.q, x.r, x.d)
    assert (again.p, again.q, again.r, again.d) == (x.p, x.q, x.r, x.d)


@given(quads(), st.integers(8, 120), st.integers(1, 120))
def test_enclose_nested(x, bits, extra):
    coarse, fine = enclose(x, bits), enclose(x, bits + extra)
    assert fine.subset_of(coarse)
    assert coarse.width() <= Fraction(1, 2**bits)


@given(quads(), quads())
def test_compare_consistent_with_enclosures(a, b):
    c = quad_compare(a, b)
    ia, ib = enclose(a, 64), enclose(b, 64)
    if ia.hi < ib.lo:
        assert c == -1
    if ib.hi < ia.lo:
        assert c == 1
    with mpmath.workdps(60):
        diff = quad_float(a, 60) - quad_float(b, 60)
    if abs(diff) > mpmath.mpf(10) ** -40:
        assert c == (1 if diff > 0 else -1)
    else:
        assert c == 0


@given(quads(), quads(), quads())
def test_compare_is_a_total_order(a, b, c):
    assert quad_compare(a, b) == -quad_compare(b, a)
    if quad_compare(a, b) <= 0 and quad_compare(b, c) <= 0:
        assert quad_compare(a, c) <= 0


@settings(max_examples=10_000)
@given(st.data())
def test_certified_sign_matches_compare_on_one_field(data):
    d = data.draw(radicand)
    a, b = data.draw(quads(st.just(d))), data.draw(quads(st.just(d)))
    assert certified_sign(Const(a) - Const(b)) == quad_compare(a, b)


@given(quads(), quads())
def test_interval_arithmetic_encloses_exact_result(a, b):
    ia, ib = CertInterval.coerce(a, 80), CertInterval.coerce(b, 80)
    for op, iv in (("+", ia + ib), ("-", ia - ib), ("*", ia * ib)):
        try:
            exact = quad_arith(op, a, b)
        except FieldMismatch:
            exact = {"+": MultiQuad.coerce(a) + b, "-": MultiQuad.coerce(a) - b, "*": MultiQuad.coerce(a) * b}[op]
        e = enclose(exact, 80)
        assert iv.overlaps(e)
