"""Continued-fraction words, convergents and eventually periodic tails."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .exact import MultiQuad, QuadIrr

__all__ = [
    "Word",
    "Convergents",
    "TailSpec",
    "ContinuedFraction",
    "NoRootInUnitInterval",
    "ParseError",
    "convergents",
    "continuant",
    "beta",
    "euler_split_check",
    "tail_value",
    "cf_value",
    "compare_tails",
    "gap_length",
    "GapLength",
    "parse_cf",
    "format_cf",
    "cf",
    "lift",
    "power",
]

Word = Tuple[int, ...]


class NoRootInUnitInterval(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _check_word(w):
    w = tuple(int(a) for a in w)
    for a in w:
        if a < 1:
            raise ValueError(f"letters must be positive integers, got {a}")
    return w


def power(w, s):
    """The word w repeated s times, e.g. power((1, 4), 2) == (1, 4, 1, 4)."""
    return tuple(w) * s


@dataclass(frozen=True)
class Convergents:
    """Numerators and denominators of [0; a1, ..., an].

    p and q are indexed from -1: p[0] is p_{-1}, p[i + 1] is p_i.
    """

    word: Word
    p: Tuple[int, ...]
    q: Tuple[int, ...]

    @property
    def n(self):
        return len(self.word)

    def p_at(self, i):
        return self.p[i + 1]

    def q_at(self, i):
        return self.q[i + 1]

    @property
    def value(self):
        return Fraction(self.p[-1], self.q[-1])

    @property
    def beta(self):
        """q_{n-1} / q_n, which equals [0; a_n, ..., a_1]."""
        return Fraction(self.q[-2], self.q[-1])


def convergents(word):
    w = _check_word(word)
    p, q = [1, 0], [0, 1]  # indices -1 and 0
    for a in w:
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return Convergents(w, tuple(p), tuple(q))


def continuant(word):
    """q of the word; the empty word has continuant 1."""
    q0, q1 = 0, 1
    for a in word:
        q0, q1 = q1, a * q1 + q0
    return q1


def beta(word):
    q0, q1 = 0, 1
    for a in word:
        q0, q1 = q1, a * q1 + q0
    return Fraction(q0, q1)


def euler_split_check(word, m):
    """Check q(w) = q(a1..am) q(a_{m+1}..a_l) + q(a1..a_{m-1}) q(a_{m+2}..a_l)
    and invariance of q under reversal."""
    w = _check_word(word)
    if not 1 <= m < len(w):
        raise ValueError("split index out of range")
    lhs = continuant(w)
    rhs = continuant(w[:m]) * continuant(w[m:]) + continuant(w[: m - 1]) * continuant(w[m + 1 :])
    return lhs == rhs and lhs == continuant(w[::-1])


def _primitive(period):
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class TailSpec:
    """An eventually periodic (or finite) letter sequence.

    The sequence is preperiod followed by period repeated forever.  An empty
    period means a finite sequence.  Specs are canonicalised on construction
    (primitive period, shortest preperiod, finite words not ending in a
    removable 1), so equal sequences compare equal.
    """

    preperiod: Word = ()
    period: Word = ()

    def __post_init__(self):
        pre = _check_word(self.preperiod)
        per = _check_word(self.period)
        if not pre and not per:
            raise ValueError("a tail needs at least one letter")
        if per:
            per = _primitive(per)
            while pre and pre[-1] == per[-1]:
                per = (per[-1],) + per[:-1]
                pre = pre[:-1]
        elif len(pre) >= 2 and pre[-1] == 1:
            pre = pre[:-2] + (pre[-2] + 1,)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, *period):
        return cls((), tuple(period))

    @property
    def is_finite(self):
        return not self.period

    def letter(self, i):
        """Letter at 0-based position i, or None past the end of a finite tail."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        if not self.period:
            return None
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def head(self, n):
        out = []
        for i in range(n):
            a = self.letter(i)
            if a is None:
                break
            out.append(a)
        return tuple(out)

    def shift(self, k):
        """The tail with its first k letters removed."""
        if k <= len(self.preperiod):
            rest = self.preperiod[k:]
            if not rest and not self.period:
                raise ValueError("shift exhausts a finite tail")
            return TailSpec(rest, self.period)
        if not self.period:
            raise ValueError("shift exhausts a finite tail")
        j = (k - len(self.preperiod)) % len(self.period)
        return TailSpec((), self.period[j:] + self.period[:j])

    def prepend(self, word):
        return TailSpec(tuple(word) + self.preperiod, self.period)

    def value(self):
        return tail_value(self)

    def __str__(self):
        items = [str(a) for a in self.preperiod]
        if self.period:
            items.append("(" + " ".join(str(a) for a in self.period) + ")~")
        return " ".join(items)


def _mobius(word, x):
    """[0; word + x] for a tail value x in [0, 1]: (p_n + p_{n-1} x) / (q_n + q_{n-1} x)."""
    c = convergents(word)
    return (x * c.p[-2] + c.p[-1]) / (x * c.q[-2] + c.q[-1])


def _periodic_root(period):
    # x = [0; period, x]  =>  q_{n-1} x^2 + (q_n - p_{n-1}) x - p_n = 0
    c = convergents(period)
    A = c.q[-2]
    B = c.q[-1] - c.p[-2]
    C = c.p[-1]
    x = QuadIrr(-B, 1, 2 * A, B * B + 4 * A * C)
    if not (0 < x < 1):
        raise NoRootInUnitInterval(f"periodic root {x} outside (0, 1)")
    return x


def tail_value(tail):
    """[0; tail] as an exact QuadIrr (rational for finite tails)."""
    if tail.period:
        x = _periodic_root(tail.period)
        return _mobius(tail.preperiod, x) if tail.preperiod else x
    c = convergents(tail.preperiod)
    return QuadIrr(c.p[-1], 0, c.q[-1])


@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; tail] with an optional tail."""

    a0: int
    tail: Optional[TailSpec] = None

    def value(self):
        if self.tail is None:
            return QuadIrr(self.a0)
        return tail_value(self.tail) + self.a0

    def __str__(self):
        return format_cf(self)


def cf_value(a0, preperiod=(), period=()):
    if not preperiod and not period:
        return QuadIrr(a0)
    return tail_value(TailSpec(tuple(preperiod), tuple(period))) + a0


_TOKEN = re.compile(r"\s*(?:(\d+)|(\()|(\)~)|(;)|(\[)|(\])|(,))")


def parse_cf(text):
    """Parse '[a0; a1 a2 (p1 p2)~]' into a ContinuedFraction."""
    pos, tokens = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastindex
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    it = iter(tokens + [(0, "", len(text))])
    kind, val, at = next(it)
    if kind != 5:
        raise ParseError("expected '['", at)
    kind, val, at = next(it)
    if kind != 1:
        raise ParseError("expected integer part", at)
    a0 = int(val)
    kind, val, at = next(it)
    if kind == 6:
        kind, val, at = next(it)
        if kind != 0:
            raise ParseError("trailing input", at)
        return ContinuedFraction(a0)
    if kind != 4:
        raise ParseError("expected ';'", at)
    pre, per, in_period, closed = [], [], False, False
    while True:
        kind, val, at = next(it)
        if kind == 1:
            if closed:
                raise ParseError("letters after the periodic block", at)
            a = int(val)
            if a < 1:
                raise ParseError("letters must be positive", at)
            (per if in_period else pre).append(a)
        elif kind == 7:
            continue
        elif kind == 2:
            if in_period or closed:
                raise ParseError("nested or repeated periodic block", at)
            in_period = True
        elif kind == 3:
            if not in_period or not per:
                raise ParseError("empty or unopened periodic block", at)
            in_period, closed = False, True
        elif kind == 6:
            if in_period:
                raise ParseError("unterminated periodic block", at)
            break
        else:
            raise ParseError("unexpected token", at)
    kind, val, at = next(it)
    if kind != 0:
        raise ParseError("trailing input", at)
    if not pre and not per:
        return ContinuedFraction(a0)
    return ContinuedFraction(a0, TailSpec(tuple(pre), tuple(per)))


def format_cf(x):
    if isinstance(x, TailSpec):
        x = ContinuedFraction(0, x)
    if x.tail is None:
        return f"[{x.a0}]"
    return f"[{x.a0}; {x.tail}]"


def cf(text):
    """Exact value of a continued fraction written in bracket notation."""
    return parse_cf(text).value()


def lift(*xs):
    """Bring values into a common exact type (QuadIrr when the fields agree)."""
    ds = {x.d for x in xs if isinstance(x, QuadIrr) and x.d}
    if len(ds) <= 1 and not any(isinstance(x, MultiQuad) for x in xs):
        return tuple(QuadIrr.coerce(x) for x in xs)
    return tuple(MultiQuad.coerce(x) for x in xs)


def compare_tails(prefix, t1, t2):
    """Sign of [0; prefix, t1] - [0; prefix, t2] from the first differing letter.

    If the first difference is at letter index n+1 (a0 has index 0), the value
    with letter a is larger than the one with letter b exactly when
    (-1)^(n+1) (a - b) > 0.  A finite tail that runs out behaves as an
    infinitely large letter.
    """
    m = len(prefix)
    if t1 == t2:
        return 0
    bound = max(len(t1.preperiod), len(t2.preperiod)) + math.lcm(len(t1.period) or 1, len(t2.period) or 1) + 1
    for j in range(bound):
        a, b = t1.letter(j), t2.letter(j)
        if a == b:
            if a is None:
                return 0
            continue
        index = m + j + 1
        if a is None:
            diff = 1
        elif b is None:
            diff = -1
        else:
            diff = 1 if a > b else -1
        return diff if index % 2 == 0 else -diff
    return 0


@dataclass(frozen=True)
class GapLength:
    """Distance between two points sharing a prefix, by two routes."""

    length: object
    orientation: int
    formula: object

    def agrees(self):
        return self.length == self.formula


def gap_length(prefix, t1, t2):
    """|[0; prefix, t1] - [0; prefix, t2]| directly and via the convergent identity

    alpha - alpha~ = (-1)^n (alpha~_{n+1} - alpha_{n+1}) / (q_n^2 (beta_n + alpha_{n+1})(beta_n + alpha~_{n+1}))

    where alpha_{n+1} is the complete quotient 1/[0; t1].
    """
    prefix = _check_word(prefix)
    x1, x2 = lift(tail_value(t1), tail_value(t2))
    v1, v2 = lift(_mobius(prefix, x1), _mobius(prefix, x2))
    diff = v1 - v2
    s = _sign(diff)
    direct = diff if s >= 0 else -diff
    c = convergents(prefix)
    n = len(prefix)
    qn = c.q[-1]
    b = Fraction(c.q[-2], qn)
    y1, y2 = 1 / x1, 1 / x2
    num = (y2 - y1) if n % 2 == 0 else (y1 - y2)
    via = num / ((y1 + b) * (y2 + b) * (qn * qn))
    if _sign(via) != s:
        raise AssertionError("orientation mismatch between direct and identity routes")
    via = via if s >= 0 else -via
    return GapLength(direct, s, via)


def _sign(x):
    if isinstance(x, (QuadIrr, MultiQuad)):
        return x.sign()
    return (x > 0) - (x < 0)
