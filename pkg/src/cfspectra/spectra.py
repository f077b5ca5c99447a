"""Markov and Lagrange values of eventually periodic bi-infinite sequences."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Tuple

from .cantor import CapExceeded, c_rules, node_interval
from .exact import MultiQuad, QuadIrr
from .words import TailSpec, cf, lift, tail_value
from .sums import b_word, c_word

__all__ = [
    "ConstraintViolation",
    "DominanceFailure",
    "BiInfSeq",
    "SpectrumPoint",
    "lambda_at",
    "markov_value",
    "lagrange_value",
    "candidate_sequence",
    "verify_lambda0_dominates",
    "DominanceReport",
    "enumerate_spectrum",
    "periodic_markov",
    "filter_bound",
    "spectrum_endpoint",
    "K3Report",
    "k3_gap_check",
    "PERIOD_CAP",
]

PERIOD_CAP = 8


class ConstraintViolation(ValueError):
    pass


class DominanceFailure(AssertionError):
    def __init__(self, index, message=""):
        super().__init__(f"position {index}: {message}" if message else f"position {index}")
        self.index = index


def _exact_sum(*xs):
    xs = lift(*xs)
    total = xs[0]
    for x in xs[1:]:
        total = total + x
    if isinstance(total, MultiQuad):
        q = total.to_quad()
        return q if q is not None else total
    return total


@dataclass(frozen=True)
class BiInfSeq:
    """... left[1] left[0] core[0] ... core[-1] right[0] right[1] ...

    The left tail is read outward from the core.  Position 0 is
    core[marker].  Both tails must be infinite (eventually periodic).
    """

    left: TailSpec
    core: Tuple[int, ...]
    right: TailSpec
    marker: int = 0

    def __post_init__(self):
        if self.left.is_finite or self.right.is_finite:
            raise ValueError("both tails of a bi-infinite sequence must be periodic eventually")
        if not 0 <= self.marker < len(self.core):
            raise ValueError("marker must index the core")
        if any(a < 1 for a in self.core):
            raise ValueError("letters must be positive")

    @classmethod
    def periodic(cls, period):
        period = tuple(period)
        return cls(TailSpec.periodic(*reversed(period)), period, TailSpec.periodic(*period), 0)

    def letter(self, i):
        c = i + self.marker
        if c < 0:
            return self.left.letter(-c - 1)
        if c >= len(self.core):
            return self.right.letter(c - len(self.core))
        return self.core[c]

    def forward(self, i):
        """The tail a_{i+1}, a_{i+2}, ..."""
        c = i + self.marker + 1
        n = len(self.core)
        if c < 0:
            word = tuple(self.letter(j) for j in range(i + 1, -self.marker))
            return TailSpec(word + self.core + self.right.preperiod, self.right.period)
        if c <= n:
            return TailSpec(self.core[c:] + self.right.preperiod, self.right.period)
        return self.right.shift(c - n)

    def backward(self, i):
        """The tail a_{i-1}, a_{i-2}, ..."""
        c = i + self.marker
        n = len(self.core)
        if c > n:
            word = tuple(self.letter(j) for j in range(i - 1, n - 1 - self.marker, -1))
            return TailSpec(word + tuple(reversed(self.core)) + self.left.preperiod, self.left.period)
        if c >= 0:
            return TailSpec(tuple(reversed(self.core[:c])) + self.left.preperiod, self.left.period)
        return self.left.shift(-c)

    def window(self):
        """Positions whose lambda values, together with the two periodic
        limits, determine the supremum: the core, both preperiods and two
        full periods beyond them on each side."""
        lo = -self.marker - len(self.left.preperiod) - 2 * len(self.left.period)
        hi = len(self.core) - self.marker + len(self.right.preperiod) + 2 * len(self.right.period)
        return range(lo, hi)

    def with_letter(self, i, a):
        """Copy with a_i replaced, the core widened to include position i."""
        lo, hi = min(i, -self.marker), max(i, len(self.core) - self.marker - 1)
        left = self.left.shift(max(0, -self.marker - lo))
        right = self.right.shift(max(0, hi - (len(self.core) - self.marker - 1)))
        core = [self.letter(j) for j in range(lo, hi + 1)]
        core[i - lo] = a
        return BiInfSeq(left, tuple(core), right, -lo)

    def to_json(self):
        return {
            "left": str(self.left),
            "core": list(self.core),
            "marker": self.marker,
            "right": str(self.right),
        }

    def __str__(self):
        core = [f"{a}*" if j == self.marker else str(a) for j, a in enumerate(self.core)]
        return f"({self.left})^t {' '.join(core)} {self.right}"


def lambda_at(seq, i):
    """a_i + [0; a_{i+1}, ...] + [0; a_{i-1}, ...], exactly."""
    return _exact_sum(QuadIrr(seq.letter(i)), tail_value(seq.forward(i)), tail_value(seq.backward(i)))


def periodic_markov(period):
    """(value, rotation) of the purely periodic sequence with this period."""
    period = tuple(period)
    best, arg = None, None
    for r in range(len(period)):
        rot = period[r:] + period[:r]
        v = _exact_sum(
            QuadIrr(rot[0]),
            tail_value(TailSpec.periodic(*(rot[1:] + rot[:1]))),
            tail_value(TailSpec.periodic(*reversed(rot))),
        )
        if best is None or v > best:
            best, arg = v, r
    return best, arg


@dataclass(frozen=True)
class SpectrumPoint:
    value: object
    witness: BiInfSeq
    argmax_index: Optional[int]
    kind: str
    attained: bool = True

    def to_json(self):
        return {
            "kind": self.kind,
            "value": str(self.value),
            "decimal": f"{float(self.value):.15g}",
            "argmax_index": self.argmax_index,
            "attained": self.attained,
            "witness": self.witness.to_json(),
        }


def _limits(seq):
    return [periodic_markov(seq.right.period)[0], periodic_markov(tuple(reversed(seq.left.period)))[0]]


def markov_value(seq):
    """Supremum of lambda_i over all i.

    Past the preperiods the lambda values along one residue class mod the
    period form a monotone sequence or two interleaved monotone ones
    converging to the periodic orbit's value, so the supremum is attained in
    the window or equals one of the two periodic limits.
    """
    best, arg = None, None
    for i in sorted(seq.window(), key=lambda j: (abs(j), j)):
        v = lambda_at(seq, i)
        if best is None or v > best:
            best, arg = v, i
    lim = max(_limits(seq))
    if lim > best:
        return SpectrumPoint(lim, seq, None, "markov", attained=False)
    return SpectrumPoint(best, seq, arg, "markov")


def lagrange_value(seq):
    """limsup of lambda_i as i grows: the Markov value of the right periodic orbit."""
    value, rot = periodic_markov(seq.right.period)
    period = seq.right.period
    return SpectrumPoint(value, BiInfSeq.periodic(period[rot:] + period[:rot]), 0, "lagrange")


# ------------------------------------------------------------------ witnesses


def _contains_pair(letters, pairs):
    return any((x, y) in pairs for x, y in zip(letters, letters[1:]))


def _tail_letters(t):
    return t.preperiod + t.period + t.period[:1]


def _check_tail(k, t, tilde, where):
    letters = _tail_letters(t)
    if t.is_finite:
        raise ConstraintViolation(f"{where} tail must be infinite")
    if k == 4:
        if max(letters) > 4:
            raise ConstraintViolation(f"{where} tail has a letter above 4")
        if _contains_pair(letters, {(1, 4), (2, 4)}):
            raise ConstraintViolation(f"{where} tail contains a forbidden transition (1,4) or (2,4)")
    elif max(letters) > k - 1:
        raise ConstraintViolation(f"{where} tail has a letter above {k - 1}")
    if tilde and t.head(2) == (1, k - 1):
        raise ConstraintViolation(f"{where} tail starts with (1, {k - 1})")


def candidate_sequence(k, s, theta_left, theta_right, kind="tilde_cross", strict=True):
    """The sequence realising k + [0; b, theta_right] + [0; c, theta_left] at position 0.

    tilde_cross: left of the marker (read outward) is c = (1,k)_{s-1},1,k-1
    followed by theta_left; right of it is b = (1,k)_s followed by
    theta_right, whose first two letters may not be (1, k-1).
    square: both sides carry b, so the core is (k,1)_s k* (1,k)_s.
    With strict=False the tail restrictions are not enforced.
    """
    if k < 4 or s < 1:
        raise ValueError("need k >= 4 and s >= 1")
    b = b_word(k, s)
    if kind == "tilde_cross":
        left_word = c_word(k, s)
        tilde = True
    elif kind == "square":
        left_word = b
        tilde = False
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if strict:
        _check_tail(k, theta_right, tilde, "right")
        _check_tail(k, theta_left, False, "left")
    core = tuple(reversed(left_word)) + (k,) + b
    return BiInfSeq(theta_left, core, theta_right, len(left_word))


@dataclass(frozen=True)
class DominanceReport:
    lambda0: object
    runner_up: object
    runner_up_index: Optional[int]
    margin: object

    def to_json(self):
        return {
            "lambda0": str(self.lambda0),
            "lambda0_decimal": float(self.lambda0),
            "runner_up_index": self.runner_up_index,
            "margin": float(self.margin),
        }


def verify_lambda0_dominates(seq, claimed=None):
    """Check lambda_0 > lambda_i for every i != 0, including the periodic limits.

    When claimed is given, lambda_0 must equal it as well.  Returns a
    DominanceReport; raises DominanceFailure at the first violating index
    (None stands for a periodic limit).
    """
    l0 = lambda_at(seq, 0)
    if claimed is not None and not _exact_sum(l0) == _exact_sum(claimed):
        raise DominanceFailure(0, "lambda_0 differs from the claimed value")
    runner, arg = None, None
    for i in sorted(seq.window(), key=lambda j: (abs(j), j)):
        if i == 0:
            continue
        v = lambda_at(seq, i)
        if not v < l0:
            raise DominanceFailure(i, "lambda_i is not below lambda_0")
        if runner is None or v > runner:
            runner, arg = v, i
    for lim in _limits(seq):
        if not lim < l0:
            raise DominanceFailure(None, "a periodic limit reaches lambda_0")
        if lim > runner:
            runner, arg = lim, None
    margin = _exact_sum(l0, -_exact_sum(runner))
    return DominanceReport(l0, runner, arg, margin)


# ------------------------------------------------------------------ spectra


def _necklaces(k, n):
    """Primitive words of length n over 1..k, one per rotation/reversal class,
    each the lexicographically least of its class."""
    for w in itertools.product(range(1, k + 1), repeat=n):
        rots = [w[r:] + w[:r] for r in range(n)]
        if w != min(rots):
            continue
        if len(set(rots)) != n:
            continue
        rw = tuple(reversed(w))
        if min(rw[r:] + rw[:r] for r in range(n)) < w:
            continue
        yield w


def enumerate_spectrum(k, period_max, threshold=None, cap=PERIOD_CAP):
    """Markov values of periodic sequences over 1..k with primitive period at
    most period_max, at most threshold, sorted and deduplicated by value."""
    if period_max > cap:
        raise CapExceeded(f"period {period_max} exceeds cap {cap}")
    seen = {}
    for n in range(1, period_max + 1):
        for w in _necklaces(k, n):
            v, r = periodic_markov(w)
            if threshold is not None and v > threshold:
                continue
            key = _exact_sum(v)
            if key not in seen:
                seen[key] = SpectrumPoint(v, BiInfSeq.periodic(w), r, "markov")
    return sorted(seen.values(), key=lambda p: _SortKey(p.value))


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v < other.v


def spectrum_endpoint(k):
    """sqrt(k^2 + 4k): the value of the periodic orbit (1, k)."""
    return QuadIrr(0, 1, 1, k * k + 4 * k)


def filter_bound(j):
    """j + 2 [0; (j 1)~], the least Lagrange value of a sequence with
    infinitely many letters at least j."""
    if j < 1:
        raise ValueError("j must be positive")
    return QuadIrr(j) + 2 * tail_value(TailSpec.periodic(j, 1))


# ------------------------------------------------------------------ k = 3


@dataclass(frozen=True)
class K3Report:
    a: QuadIrr
    b: QuadIrr
    depth: int
    disjoint: bool
    pairs_visited: int
    touching_pairs: int
    witness: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]

    def to_json(self):
        return {
            "a": str(self.a),
            "b": str(self.b),
            "a_decimal": float(self.a),
            "b_decimal": float(self.b),
            "depth": self.depth,
            "disjoint": self.disjoint,
            "pairs_visited": self.pairs_visited,
            "pairs_touching_an_endpoint": self.touching_pairs,
            "witness": None if self.witness is None else [list(w) for w in self.witness],
        }


def k3_gap_check(depth, cap=16):
    """Check that the depth-d cover of C(3) + C(3) misses the open interval (a, b).

    a = [0; (1 3)~] + [0; 1 3 1 2 (1 3)~] and b = 2 [0; 1 3 1 3 (3 1)~].
    Pairs of stage intervals whose sum lies outside (a, b) are pruned, so the
    search only descends where the sum still meets the interval.
    """
    if depth > cap:
        raise CapExceeded(f"depth {depth} exceeds cap {cap}")
    a = cf("[0; (1 3)~]") + cf("[0; 1 3 1 2 (1 3)~]")
    b = 2 * cf("[0; 1 3 1 3 (3 1)~]")
    rules = c_rules(3)
    iv = {}

    def node(w):
        if w not in iv:
            n = node_interval(rules, w)
            iv[w] = (n.lo, n.hi)
        return iv[w]

    visited = touching = 0
    stack = [((), ())]
    while stack:
        u, v = stack.pop()
        visited += 1
        lu, hu = node(u)
        lv, hv = node(v)
        lo, hi = lu + lv, hu + hv
        if not hi > a or not lo < b:
            if hi == a or lo == b:
                touching += 1
            continue
        if len(u) >= depth and len(v) >= depth:
            return K3Report(a, b, depth, False, visited, touching, (u, v))
        if len(u) <= len(v):
            stack.extend((u + (j,), v) for j in (1, 2, 3))
        else:
            stack.extend((u, v + (j,)) for j in (1, 2, 3))
    return K3Report(a, b, depth, True, visited, touching, None)
