"""Exact arithmetic for quadratic irrationals and certified sign decisions.

Values of the form (p + q*sqrt(d)) / r with integer p, q, r and squarefree d
are held in canonical form by QuadIrr.  Mixed radicals are handled by
MultiQuad, an element of a multiquadratic field with rational coefficients.
CertInterval is a closed interval with rational endpoints.  certified_sign
decides the sign of an expression tree, first by interval refinement and then
by exact algebra when the interval cannot exclude zero.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

__all__ = [
    "ExactError",
    "FieldMismatch",
    "DivisionByZero",
    "Undecided",
    "QuadIrr",
    "MultiQuad",
    "CertInterval",
    "Expr",
    "Const",
    "Sqrt",
    "as_expr",
    "squarefree_part",
    "quad_compare",
    "quad_arith",
    "enclose",
    "certified_sign",
    "exact_sign",
    "to_multi",
    "POS",
    "NEG",
    "ZERO",
]

POS, NEG, ZERO = 1, -1, 0


class ExactError(ArithmeticError):
    pass


class FieldMismatch(ExactError):
    """Operands live in different quadratic fields."""


class DivisionByZero(ExactError, ZeroDivisionError):
    pass


class Undecided(ExactError):
    """Sign could not be decided within the precision cap."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


@lru_cache(maxsize=4096)
def _factor_square(d):
    """Return (f, m) with d == f*f*m and m squarefree."""
    if d < 0:
        raise ValueError("radicand must be non-negative")
    if d < 2:
        return 1, d
    f, m, p = 1, 1, 2
    n = d
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            f *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    return f, m * n


def squarefree_part(d):
    return _factor_square(d)[1]


@lru_cache(maxsize=4096)
def _primes_of(m):
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


def _sign_int(a):
    return (a > 0) - (a < 0)


def _sign_surd(a, b, d):
    """Sign of a + b*sqrt(d) for integers a, b and d >= 0 not a perfect square (or b == 0)."""
    sa, sb = _sign_int(a), _sign_int(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    lhs, rhs = a * a, b * b * d
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


class QuadIrr:
    """The number (p + q*sqrt(d)) / r, kept canonical.

    Canonical form: r > 0, d squarefree, gcd(p, q, r) == 1, and rational
    values carry q == 0 and d == 0.  Equality of canonical forms is equality
    of values.
    """

    __slots__ = ("p", "q", "r", "d")

    def __init__(self, p, q=0, r=1, d=0):
        if r == 0:
            raise DivisionByZero("zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if q and d > 1:
            f, m = _factor_square(d)
            q *= f
            d = m
        if q and d == 1:
            p, q, d = p + q, 0, 0
        if q == 0 or d == 0:
            q, d = 0, 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(p, q, r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p, self.q, self.r, self.d = p, q, r, d

    @classmethod
    def _raw(cls, p, q, r, d):
        # trusted constructor: d already squarefree and > 1 when q != 0
        obj = object.__new__(cls)
        if r < 0:
            p, q, r = -p, -q, -r
        if q == 0:
            d = 0
        g = math.gcd(p, q, r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        obj.p, obj.q, obj.r, obj.d = p, q, r, d
        return obj

    @classmethod
    def coerce(cls, x):
        if isinstance(x, QuadIrr):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1, 0)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator, 0)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadIrr")

    @classmethod
    def sqrt(cls, n):
        """sqrt(n) for a non-negative rational n."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("negative argument")
        # sqrt(a/b) = sqrt(a*b)/b
        return cls(0, 1, n.denominator, n.numerator * n.denominator)

    # -- predicates
    @property
    def is_rational(self):
        return self.q == 0

    def to_fraction(self):
        if self.q:
            raise ValueError("value is irrational")
        return Fraction(self.p, self.r)

    def conjugate(self):
        return QuadIrr._raw(self.p, -self.q, self.r, self.d)

    def _field(self, other):
        if self.d and other.d and self.d != other.d:
            raise FieldMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
        return self.d or other.d

    def sign(self):
        return _sign_surd(self.p, self.q, self.d)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, QuadIrr):
            try:
                other = QuadIrr.coerce(other)
            except TypeError:
                return NotImplemented
        d = self._field(other)
        return QuadIrr._raw(
            self.p * other.r + other.p * self.r,
            self.q * other.r + other.q * self.r,
            self.r * other.r,
            d,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadIrr._raw(-self.p, -self.q, self.r, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, QuadIrr):
            try:
                other = QuadIrr.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuadIrr):
            try:
                other = QuadIrr.coerce(other)
            except TypeError:
                return NotImplemented
        d = self._field(other)
        return QuadIrr._raw(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            self.r * other.r,
            d,
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.q == 0:
            if self.p == 0:
                raise DivisionByZero("inverse of zero")
            return QuadIrr._raw(self.r, 0, self.p, 0)
        # r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
        den = self.p * self.p - self.q * self.q * self.d
        return QuadIrr._raw(self.r * self.p, -self.r * self.q, den, self.d)

    def __truediv__(self, other):
        if not isinstance(other, QuadIrr):
            try:
                other = QuadIrr.coerce(other)
            except TypeError:
                return NotImplemented
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadIrr.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadIrr._raw(1, 0, 1, 0), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison
    def _cmp(self, other):
        other = QuadIrr.coerce(other)
        return quad_compare(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadIrr.coerce(other)
        if not isinstance(other, QuadIrr):
            return NotImplemented
        return (self.p, self.q, self.r, self.d) == (other.p, other.q, other.r, other.d)

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.r, self.d))

    def __lt__(self, other):
        if isinstance(other, MultiQuad):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, MultiQuad):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, MultiQuad):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, MultiQuad):
            return NotImplemented
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(enclose(self, 64).midpoint())

    def floor(self):
        """Exact floor."""
        bits = 32
        while True:
            iv = enclose(self, bits)
            lo, hi = math.floor(iv.lo), math.floor(iv.hi)
            if lo == hi:
                return lo
            # hi is an integer candidate; decide exactly
            return hi if self >= hi else lo

    def __repr__(self):
        if self.q == 0:
            return f"QuadIrr({self.p}, r={self.r})" if self.r != 1 else f"QuadIrr({self.p})"
        return f"QuadIrr({self.p}, {self.q}, {self.r}, {self.d})"

    def __str__(self):
        if self.q == 0:
            return str(Fraction(self.p, self.r))
        coef = {1: "", -1: "-"}.get(self.q, f"{self.q}*")
        surd = f"{coef}sqrt({self.d})"
        if self.p:
            sign = "+" if self.q > 0 else "-"
            surd = f"{self.p} {sign} {surd.lstrip('-')}"
        return f"({surd})/{self.r}" if self.r != 1 else surd

    @classmethod
    def parse(cls, text):
        """Inverse of str(): accepts 'p', 'p/r', '(p + q*sqrt(d))/r' and the
        shortened forms str() produces."""
        m = _QUAD_RE.fullmatch(text.replace(" ", ""))
        if not m:
            raise ValueError(f"not a quadratic irrational: {text!r}")
        if m.group("rat") is not None:
            return cls.coerce(Fraction(m.group("rat")))
        p = int(m.group("p") or 0)
        sign = -1 if m.group("sign") == "-" else 1
        q = m.group("q")
        q = sign * (int(q) if q else 1)
        r = int(m.group("r") or 1)
        return cls(p, q, r, int(m.group("d")))


_QUAD_RE = re.compile(
    r"(?P<rat>-?\d+(?:/\d+)?)"
    r"|\(?(?:(?P<p>-?\d+)(?=[+-]))?(?P<sign>[+-])?(?:(?P<q>\d+)\*)?sqrt\((?P<d>\d+)\)\)?(?:/(?P<r>\d+))?"
)


def quad_compare(a, b):
    """Exact comparison returning -1, 0 or 1.

    Works across different quadratic fields by squaring into a single-field
    sign test.
    """
    a, b = QuadIrr.coerce(a), QuadIrr.coerce(b)
    A = a.p * b.r - b.p * a.r
    B = a.q * b.r
    C = -b.q * a.r
    if a.d == b.d or B == 0 or C == 0:
        if a.d == b.d:
            return _sign_surd(A, B + C, a.d)
        if C == 0:
            return _sign_surd(A, B, a.d)
        return _sign_surd(A, C, b.d)
    # sign(u + C sqrt(d2)) with u = A + B sqrt(d1)
    su = _sign_surd(A, B, a.d)
    sv = _sign_int(C)
    if su == 0:
        return sv
    if su == sv:
        return su
    # u^2 - C^2 d2 = A^2 + B^2 d1 - C^2 d2 + 2AB sqrt(d1)
    st = _sign_surd(A * A + B * B * a.d - C * C * b.d, 2 * A * B, a.d)
    if st > 0:
        return su
    if st < 0:
        return sv
    return 0


def quad_arith(op, a, b):
    """Apply op in {'+', '-', '*', '/'}; FieldMismatch for different radicands."""
    a, b = QuadIrr.coerce(a), QuadIrr.coerce(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operator {op!r}")


# ---------------------------------------------------------------- intervals


class CertInterval:
    """Closed interval [lo, hi] with Fraction endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @classmethod
    def coerce(cls, x, bits=128):
        if isinstance(x, CertInterval):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, (QuadIrr, MultiQuad)):
            return enclose(x, bits)
        raise TypeError(f"cannot enclose {type(x).__name__}")

    def width(self):
        return self.hi - self.lo

    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def sign(self):
        """POS/NEG when the interval excludes zero, otherwise None."""
        if self.lo > 0:
            return POS
        if self.hi < 0:
            return NEG
        return None

    def overlaps(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def subset_of(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def hull(self, other):
        return CertInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        other = CertInterval.coerce(other)
        return CertInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return CertInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = CertInterval.coerce(other)
        return CertInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return CertInterval.coerce(other) - self

    def __mul__(self, other):
        other = CertInterval.coerce(other)
        c = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return CertInterval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CertInterval.coerce(other)
        if other.contains_zero():
            raise DivisionByZero("divisor interval contains zero")
        return self * CertInterval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return CertInterval.coerce(other) / self

    def __pow__(self, n):
        if n == 2:
            if self.lo >= 0:
                return CertInterval(self.lo**2, self.hi**2)
            if self.hi <= 0:
                return CertInterval(self.hi**2, self.lo**2)
            return CertInterval(0, max(self.lo**2, self.hi**2))
        out = CertInterval(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, CertInterval) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"CertInterval({float(self.lo)!r}, {float(self.hi)!r})"

    def to_json(self):
        return {"lo": str(self.lo), "hi": str(self.hi)}


def _sqrt_bounds(n, scale):
    """Integers (s, exact) with s = floor(sqrt(n) * scale)."""
    t = n * scale * scale
    s = math.isqrt(t)
    return s, s * s == t


def enclose(x, bits):
    """Dyadic enclosure of an exact value with width at most 2**-bits.

    Enclosures at increasing precision are nested.
    """
    if isinstance(x, (int, Fraction)):
        return CertInterval(x)
    if isinstance(x, MultiQuad):
        return x.enclose(bits)
    if not isinstance(x, QuadIrr):
        raise TypeError(f"cannot enclose {type(x).__name__}")
    if x.q == 0:
        return CertInterval(Fraction(x.p, x.r))
    # |q| sqrt(d) in [s, s+1] / 2^bits; dividing by r only narrows it
    scale = 1 << bits
    s, exact = _sqrt_bounds(x.q * x.q * x.d, scale)
    lo_t, hi_t = Fraction(s, scale), Fraction(s + (0 if exact else 1), scale)
    if x.q < 0:
        lo_t, hi_t = -hi_t, -lo_t
    return CertInterval((x.p + lo_t) / x.r, (x.p + hi_t) / x.r)


# ------------------------------------------------------------ multiquadratic


class MultiQuad:
    """Element of Q(sqrt(p1), ..., sqrt(pn)) as {squarefree m: coefficient of sqrt(m)}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def coerce(cls, x):
        if isinstance(x, MultiQuad):
            return x
        if isinstance(x, (int, Fraction)):
            return cls({1: x})
        if isinstance(x, QuadIrr):
            t = {1: Fraction(x.p, x.r)}
            if x.q:
                t[x.d] = Fraction(x.q, x.r)
            return cls(t)
        raise TypeError(f"cannot convert {type(x).__name__} to MultiQuad")

    @classmethod
    def sqrt(cls, n):
        n = Fraction(n)
        f, m = _factor_square(n.numerator * n.denominator)
        return cls({m: Fraction(f, n.denominator)})

    def to_quad(self):
        """QuadIrr when at most one radical is present, else None."""
        rad = [m for m in self.terms if m != 1]
        if len(rad) > 1:
            return None
        c0 = self.terms.get(1, Fraction(0))
        if not rad:
            return QuadIrr.coerce(c0)
        m = rad[0]
        c1 = self.terms[m]
        den = c0.denominator * c1.denominator
        return QuadIrr(c0.numerator * (den // c0.denominator), c1.numerator * (den // c1.denominator), den, m)

    def _primes(self):
        ps = set()
        for m in self.terms:
            if m > 1:
                ps.update(_primes_of(m))
        return ps

    def _split(self, p):
        """self = u + v*sqrt(p) with u, v free of p."""
        u, v = {}, {}
        for m, c in self.terms.items():
            if m % p == 0:
                v[m // p] = c
            else:
                u[m] = c
        return MultiQuad(u), MultiQuad(v)

    def is_zero(self):
        return not self.terms

    def sign(self):
        ps = self._primes()
        if not ps:
            c = self.terms.get(1, Fraction(0))
            return (c > 0) - (c < 0)
        p = max(ps)
        u, v = self._split(p)
        su, sv = u.sign(), v.sign()
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv if su == 0 else su
        t = u * u - v * v * p
        st = t.sign()
        if st > 0:
            return su
        if st < 0:
            return sv
        return 0

    def conjugate_at(self, p):
        u, v = self._split(p)
        return u - v * MultiQuad.sqrt(p)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        ps = self._primes()
        if not ps:
            return MultiQuad({1: 1 / self.terms[1]})
        p = max(ps)
        conj = self.conjugate_at(p)
        den = self * conj  # free of p
        return conj * den.inverse()

    def __add__(self, other):
        try:
            other = MultiQuad.coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return MultiQuad(t)

    __radd__ = __add__

    def __neg__(self):
        return MultiQuad({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = MultiQuad.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return MultiQuad.coerce(other) - self

    def __mul__(self, other):
        try:
            other = MultiQuad.coerce(other)
        except TypeError:
            return NotImplemented
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                g = math.gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                t[m] = t.get(m, 0) + c1 * c2 * g
        return MultiQuad(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * MultiQuad.coerce(other).inverse()

    def __rtruediv__(self, other):
        return MultiQuad.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = MultiQuad.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        q = self.to_quad()
        if q is not None:
            return hash(q)
        return hash(frozenset(self.terms.items()))

    def _cmp(self, other):
        return (self - MultiQuad.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.enclose(64).midpoint())

    def enclose(self, bits):
        out = CertInterval(0)
        n = max(1, len(self.terms))
        extra = n.bit_length() + 1
        for m, c in self.terms.items():
            if m == 1:
                out = out + CertInterval(c)
            else:
                out = out + enclose(QuadIrr(0, c.numerator, c.denominator, m), bits + extra)
        return out

    def __repr__(self):
        items = ", ".join(f"{m}: {c}" for m, c in sorted(self.terms.items()))
        return f"MultiQuad({{{items}}})"

    def __str__(self):
        parts = []
        for m, c in sorted(self.terms.items()):
            parts.append(str(c) if m == 1 else f"{c}*sqrt({m})")
        return " + ".join(parts) if parts else "0"


def to_multi(x):
    return MultiQuad.coerce(x)


def exact_sign(x):
    """Exact sign of a QuadIrr, MultiQuad or rational."""
    if isinstance(x, QuadIrr):
        return x.sign()
    if isinstance(x, MultiQuad):
        return x.sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


# ------------------------------------------------------------ expression trees


Number = Union[int, Fraction, QuadIrr, MultiQuad]


class Expr:
    """Expression tree over exact leaves, with operator overloading."""

    def interval(self, bits):
        raise NotImplementedError

    def exact(self):
        """Exact MultiQuad value, or None when not available."""
        raise NotImplementedError

    def __add__(self, other):
        return BinOp("+", self, as_expr(other))

    def __radd__(self, other):
        return BinOp("+", as_expr(other), self)

    def __sub__(self, other):
        return BinOp("-", self, as_expr(other))

    def __rsub__(self, other):
        return BinOp("-", as_expr(other), self)

    def __mul__(self, other):
        return BinOp("*", self, as_expr(other))

    def __rmul__(self, other):
        return BinOp("*", as_expr(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, as_expr(other))

    def __rtruediv__(self, other):
        return BinOp("/", as_expr(other), self)

    def __neg__(self):
        return BinOp("-", Const(0), self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def interval(self, bits):
        return enclose(self.value, bits)

    def exact(self):
        return MultiQuad.coerce(self.value)

    def __repr__(self):
        return f"Const({self.value!r})"


class BinOp(Expr):
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        self.op, self.left, self.right = op, left, right

    def interval(self, bits):
        a = self.left.interval(bits)
        b = self.right.interval(bits)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def exact(self):
        a = self.left.exact()
        b = self.right.exact()
        if a is None or b is None:
            return None
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b.is_zero():
            raise DivisionByZero("exact divisor is zero")
        return a / b

    def __repr__(self):
        return f"({self.left!r} {self.op} {self.right!r})"


class Sqrt(Expr):
    """Square root of a subexpression; interval-only, no exact path."""

    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = as_expr(arg)

    def interval(self, bits):
        a = self.arg.interval(bits + 2)
        if a.hi < 0:
            raise ValueError("square root of a negative value")
        lo = max(a.lo, Fraction(0))
        scale = 1 << (bits + 2)
        s_lo = math.isqrt(lo.numerator * scale * scale // lo.denominator)
        hn = a.hi.numerator * scale * scale
        s_hi = math.isqrt(-(-hn // a.hi.denominator)) + 1
        return CertInterval(Fraction(s_lo, scale), Fraction(s_hi, scale))

    def exact(self):
        return None


def as_expr(x):
    if isinstance(x, Expr):
        return x
    return Const(x)


def certified_sign(expr, start_bits=64, max_bits=4096, exact_after=256):
    """Sign of an expression: POS, NEG or ZERO.

    Interval refinement doubles the working precision until zero is excluded.
    Once the precision reaches exact_after bits the exact multiquadratic value
    is consulted; ZERO is returned only from that exact route.  Expressions
    without an exact route raise Undecided past max_bits.
    """
    expr = as_expr(expr)
    bits = start_bits
    tried_exact = False
    last = None
    while bits <= max_bits:
        try:
            iv = expr.interval(bits)
        except DivisionByZero:
            iv = None
        if iv is not None:
            last = iv
            s = iv.sign()
            if s is not None:
                return s
        if bits >= exact_after and not tried_exact:
            tried_exact = True
            value = expr.exact()
            if value is not None:
                return value.sign()
        bits *= 2
    if not tried_exact:
        value = expr.exact()
        if value is not None:
            return value.sign()
    raise Undecided(f"sign undecided at {max_bits} bits", last)
