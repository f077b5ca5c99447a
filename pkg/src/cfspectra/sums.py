"""Arithmetic sums of the Cantor sets: gap-lemma checks, gluing and brute force."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

from .cantor import (
    CantorSpec,
    K4_RULES,
    CapExceeded,
    brute_force_cover,
    cset,
    hull_and_extremes,
    k4,
    node_interval,
    thickness_lower_bound,
    tilde_c,
    union,
)
from .exact import QuadIrr
from .words import cf, power

__all__ = [
    "GlueFailure",
    "NewhouseFailure",
    "NewhouseCheck",
    "newhouse_applicable",
    "SumClaim",
    "SumResult",
    "sum_interval",
    "k4_claims",
    "c_claims",
    "ChainResult",
    "gluing_chain",
    "brute_force_sum",
    "GapScan",
    "sum_gap_scan",
    "b_word",
    "c_word",
    "PAIR_CAP",
]

PAIR_CAP = 400_000


class NewhouseFailure(ValueError):
    def __init__(self, piece, failures):
        super().__init__(f"{piece}: " + "; ".join(failures))
        self.piece, self.failures = piece, failures


class GlueFailure(ValueError):
    def __init__(self, left, right, margin):
        super().__init__(f"{left} and {right} do not overlap (margin {float(margin):.3e})")
        self.left, self.right, self.margin = left, right, margin


def b_word(k, s):
    """(1, k) repeated s times."""
    return power((1, k), s)


def c_word(k, s):
    """(1, k) repeated s-1 times followed by 1, k-1."""
    return power((1, k), s - 1) + (1, k - 1)


@dataclass(frozen=True)
class NewhouseCheck:
    applicable: bool
    tau_a: Fraction
    tau_b: Fraction
    hull_a: QuadIrr
    hull_b: QuadIrr
    gap_a: QuadIrr
    gap_b: QuadIrr
    lo: QuadIrr
    hi: QuadIrr
    failures: Tuple[str, ...] = ()

    def to_json(self):
        return {
            "applicable": self.applicable,
            "tau_a": float(self.tau_a),
            "tau_b": float(self.tau_b),
            "tau_product": float(self.tau_a * self.tau_b),
            "hull_a": float(self.hull_a),
            "hull_b": float(self.hull_b),
            "largest_gap_a": float(self.gap_a),
            "largest_gap_b": float(self.gap_b),
            "failures": list(self.failures),
        }


def newhouse_applicable(a, b, depth=3):
    """Gap-lemma hypotheses for A + B: thickness product at least 1 and each
    hull longer than the other set's largest gap.  When they hold the sum is
    the interval [min A + min B, max A + max B]."""
    ha, hb = hull_and_extremes(a), hull_and_extremes(b)
    ta = thickness_lower_bound(a, depth).tau_lower
    tb = ta if b == a else thickness_lower_bound(b, depth).tau_lower
    failures = []
    if ta * tb < 1:
        failures.append("thickness product below 1")
    if not ha.length > hb.largest_gap:
        failures.append("hull of first set not longer than largest gap of second")
    if not hb.length > ha.largest_gap:
        failures.append("hull of second set not longer than largest gap of first")
    return NewhouseCheck(
        not failures, ta, tb, ha.length, hb.length, ha.largest_gap, hb.largest_gap, ha.lo + hb.lo, ha.hi + hb.hi, tuple(failures)
    )


@dataclass(frozen=True)
class SumClaim:
    """A union of sums A_i + B_i claimed to be a single interval."""

    name: str
    pieces: Tuple[Tuple[str, CantorSpec, CantorSpec], ...]
    stated: Optional[Tuple[QuadIrr, QuadIrr]] = None


@dataclass(frozen=True)
class SumResult:
    name: str
    lo: QuadIrr
    hi: QuadIrr
    pieces: Tuple[Tuple[str, NewhouseCheck], ...]
    glue: Tuple[Tuple[str, str, QuadIrr], ...]
    stated: Optional[Tuple[QuadIrr, QuadIrr]] = None

    @property
    def matches_stated(self):
        if self.stated is None:
            return None
        return self.stated[0] == self.lo and self.stated[1] == self.hi

    def to_json(self):
        out = {
            "claim": self.name,
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_float": float(self.lo),
            "hi_float": float(self.hi),
            "pieces": [{"name": n, **c.to_json()} for n, c in self.pieces],
            "glue": [{"left": l, "right": r, "margin": float(m)} for l, r, m in self.glue],
        }
        if self.stated is not None:
            out["stated"] = [str(self.stated[0]), str(self.stated[1])]
            out["matches_stated"] = self.matches_stated
        return out


def _glue(named):
    """Merge (name, lo, hi) intervals; GlueFailure when a hole remains."""
    named = sorted(named, key=lambda t: (float(t[1]), float(t[2])))
    margins = []
    name, lo, hi = named[0]
    reach_name = name
    for n, a, b in named[1:]:
        margin = hi - a
        if margin < 0:
            raise GlueFailure(reach_name, n, margin)
        margins.append((reach_name, n, margin))
        if b > hi:
            hi, reach_name = b, n
    return lo, hi, tuple(margins)


def sum_interval(claim, depth=3):
    checks = []
    for name, a, b in claim.pieces:
        chk = newhouse_applicable(a, b, depth)
        if not chk.applicable:
            raise NewhouseFailure(name, chk.failures)
        checks.append((name, chk))
    lo, hi, glue = _glue([(n, c.lo, c.hi) for n, c in checks])
    return SumResult(claim.name, lo, hi, tuple(checks), glue, claim.stated)


def _v(*parts):
    return cf("[0; " + " ".join(" ".join(map(str, p)) if isinstance(p, tuple) else p for p in parts) + "]")


def _k4_stated(s):
    """Endpoints as printed in closed form, kept verbatim so that the
    printed tail templates are checked rather than trusted."""
    b, c = b_word(4, s), c_word(4, s)
    head = power((1, 4), s - 1)
    out = {
        "high-branches": (_v(b, "4 (1 3)~") + _v(c, "4 (1 3)~"), _v(b, "2 (3 1)~") + _v(c, "(1 3)~")),
        "tilde": (_v(c, "4 (1 3)~") + _v(b, "4 (1 3)~"), _v(c, "(1 3)~") + _v(b, "1 2 (1 3)~")),
        "pair+c1": (_v(b, "1 1 (3 1)~") + _v(c, "1 (1 3)~"), _v(b, "1 2 (1 3)~") + _v(c, "1 (3 1)~")),
        # lower tail printed as (1,4)_{s-1},1,2 with the letter 3 of c missing
        "pair+c1-upper": (_v(b, "1 1 (3 1)~") + _v(head, "1 2 (3 1)~"), _v(b, "1 2 (1 3)~") + _v(head, "1 3 (1 3)~")),
        "pair+c11": (_v(b, "1 1 (3 1)~") + _v(c, "1 1 (3 1)~"), _v(b, "1 2 (1 3)~") + _v(c, "1 1 (1 3)~")),
        "square": (2 * _v(b, "4 (1 3)~"), 2 * _v(b, "(1 3)~")),
    }
    for m in (2, 3, 4):
        top = "(3 1)~" if m == 2 else "4 (1 3)~"
        out[f"pair+c{m}"] = (_v(b, "1 1 (3 1)~") + _v(c, f"{m} (1 3)~"), _v(b, "1 2 (1 3)~") + _v(c, f"{m} {top}"))
        for l in (1, 2):
            # printed with the tail m,4,(1 3)~ for every m, including m = 2
            out[f"b1{l}+c{m}"] = (_v(b, f"1 {l} (3 1)~") + _v(c, f"{m} (1 3)~"), _v(b, f"1 {l} (1 3)~") + _v(c, f"{m} 4 (1 3)~"))
    return out


def _c_stated(k, s):
    b, c = b_word(k, s), c_word(k, s)
    return {
        "tilde": (_v(b, f"({k - 1} 1)~") + _v(c, f"({k - 1} 1)~"), _v(b, f"1 {k - 2} (1 {k - 1})~") + _v(c, f"(1 {k - 1})~")),
        "square": (2 * _v(b, f"({k - 1} 1)~"), 2 * _v(b, f"(1 {k - 1})~")),
    }


def k4_claims(s):
    """Sum claims for the prefixes b = (1,4)_s and c = (1,4)_{s-1},1,3.

    Pieces pairing K(b,1,1) or K(b,1,2) with a branch of K(c) are kept as
    single-node sums: the union K(b,1,1) | K(b,1,2) has thickness near 0.81,
    too thin for the gap lemma against sets of thickness about 1.06.
    """
    b, c = b_word(4, s), c_word(4, s)
    R = K4_RULES

    def name(t):
        return "".join(map(str, t))

    claims = {}
    claims["high-branches"] = SumClaim(
        "high-branches", (("high-branches", union(R, *(b + (j,) for j in (2, 3, 4))), k4(c)),)
    )
    for p in ((1, 1), (1, 2)):
        for m in (2, 3, 4):
            nm = f"b{name(p)}+c{m}"
            claims[nm] = SumClaim(nm, ((nm, k4(b + p), k4(c + (m,))),))
    for m in (2, 3, 4):
        nm = f"pair+c{m}"
        claims[nm] = SumClaim(nm, tuple(
            (f"b{name(p)}+c{m}", k4(b + p), k4(c + (m,))) for p in ((1, 1), (1, 2))
        ))
    for tag, qs in (("pair+c1-upper", ((1, 2), (1, 3))), ("pair+c11", ((1, 1),)), ("pair+c1", ((1, 1), (1, 2), (1, 3)))):
        claims[tag] = SumClaim(tag, tuple(
            (f"b{name(p)}+c{name(q)}", k4(b + p), k4(c + q)) for p in ((1, 1), (1, 2)) for q in qs
        ))
    tilde_pieces = claims["high-branches"].pieces + claims["pair+c1"].pieces
    for m in (2, 3, 4):
        tilde_pieces += claims[f"pair+c{m}"].pieces
    claims["tilde"] = SumClaim("tilde", tilde_pieces)
    claims["square"] = SumClaim("square", (("square", k4(b), k4(b)),))
    stated = _k4_stated(s)
    return {n: SumClaim(cl.name, cl.pieces, stated.get(n)) for n, cl in claims.items()}


def c_claims(k, s):
    """Sum claims for k >= 5 with tails bounded by k - 1."""
    b, c = b_word(k, s), c_word(k, s)
    stated = _c_stated(k, s)
    return {
        "tilde": SumClaim("tilde", (("tilde", tilde_c(b, k - 1), cset(c, k - 1)),), stated["tilde"]),
        "square": SumClaim("square", (("square", cset(b, k - 1), cset(b, k - 1)),), stated["square"]),
    }


@dataclass(frozen=True)
class ChainResult:
    k: int
    links: Tuple[Tuple[str, int, QuadIrr, QuadIrr], ...]
    margins: Tuple[QuadIrr, ...]
    covered_lo: QuadIrr
    covered_hi: QuadIrr
    target_lo: QuadIrr
    sup: QuadIrr

    @property
    def reaches_target(self):
        return self.covered_lo <= self.target_lo

    def to_json(self):
        return {
            "k": self.k,
            "links": [
                {"kind": n, "s": s, "lo": float(lo), "hi": float(hi)} for n, s, lo, hi in self.links
            ],
            "margins": [float(m) for m in self.margins],
            "covered": [str(self.covered_lo), str(self.covered_hi)],
            "covered_float": [float(self.covered_lo), float(self.covered_hi)],
            "target_lo": float(self.target_lo),
            "reaches_target": self.reaches_target,
            "sup": float(self.sup),
            "distance_to_sup": float(self.sup) - float(self.covered_hi),
        }


def gluing_chain(k, s_max, depth=3):
    """Verify that k + (tilde_s and square_s for s = 1..s_max) is one interval.

    Each link is checked with the gap lemma and consecutive links must
    overlap.  The interval should start at or below 1 + sqrt(k^2 + 2k - 3)
    and its right end tends to sqrt(k^2 + 4k).
    """
    links = []
    for s in range(1, s_max + 1):
        claims = k4_claims(s) if k == 4 else c_claims(k, s)
        for kind in ("tilde", "square"):
            r = sum_interval(claims[kind], depth)
            links.append((kind, s, r.lo, r.hi))
    margins = []
    for (n1, s1, lo1, hi1), (n2, s2, lo2, hi2) in zip(links, links[1:]):
        m = hi1 - lo2
        if m < 0 or not lo2 > lo1:
            raise GlueFailure(f"{n1}_{s1}", f"{n2}_{s2}", m)
        margins.append(m)
    lo = links[0][2] + k
    hi = max(l[3] for l in links) + k
    target = QuadIrr(1, 1, 1, k * k + 2 * k - 3)
    sup = QuadIrr(0, 1, 1, k * k + 4 * k)
    return ChainResult(k, tuple(links), tuple(margins), lo, hi, target, sup)


# ------------------------------------------------------------------ brute force


def brute_force_sum(a, b, depth, cap=PAIR_CAP):
    """Union of I + J over depth-d stage intervals of a and b, merged, exact."""
    ca, cb = brute_force_cover(a, depth), brute_force_cover(b, depth)
    if len(ca) * len(cb) > cap:
        raise CapExceeded(f"{len(ca) * len(cb)} interval pairs exceed cap {cap}")
    sums = sorted(((x.lo + y.lo, x.hi + y.hi) for x in ca for y in cb), key=lambda t: float(t[0]))
    merged = []
    for lo, hi in sums:
        if merged and not lo > merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


@dataclass(frozen=True)
class GapScan:
    """Certified bound on the internal gaps of A_d + B_d inside a window."""

    lo: Fraction
    hi: Fraction
    cell: Fraction
    cells: int
    empty_runs: Tuple[Tuple[int, int], ...]
    max_gap_upper: Fraction
    pairs_visited: int

    def to_json(self):
        return {
            "window": [float(self.lo), float(self.hi)],
            "cell": float(self.cell),
            "cells": self.cells,
            "empty_runs": [list(r) for r in self.empty_runs],
            "max_gap_upper": float(self.max_gap_upper),
            "pairs_visited": self.pairs_visited,
        }


@lru_cache(maxsize=200_000)
def _node_iv(rules, word):
    n = node_interval(rules, word)
    return n.lo, n.hi, float(n.lo), float(n.hi)


def _children_words(rules, word):
    last = word[-1] if word else None
    if last is not None and last > rules.alphabet:
        last = None
    return [word + (j,) for j in rules.successors(last)]


def sum_gap_scan(a, b, depth, lo, hi, resolution):
    """Cover [lo, hi] by cells of width resolution/3 and find, for each cell, a
    pair of depth-d stage intervals whose sum meets it.

    A gap of A_d + B_d longer than (r + 2) * cell, with r the longest run of
    cells met by no pair, would contain a whole met cell, so that quantity
    bounds every internal gap in the window.  Cells met by no pair lie in a
    genuine gap of A_d + B_d.
    """
    lo, hi, resolution = Fraction(lo), Fraction(hi), Fraction(resolution)
    cell = resolution / 3
    n = int((hi - lo) / cell) + 1
    ra, rb = a.rules, b.rules
    visited = 0

    def hit(c0, c1):
        nonlocal visited
        f0, f1 = float(c0) - 1e-9, float(c1) + 1e-9
        centre = float((c0 + c1) / 2)
        stack = [(wa, 0, wb, 0) for wa in a.nodes for wb in b.nodes]
        while stack:
            wa, da, wb, db = stack.pop()
            visited += 1
            la, ha, fla, fha = _node_iv(ra, wa)
            lb, hb, flb, fhb = _node_iv(rb, wb)
            if fla + flb > f1 or fha + fhb < f0:
                continue
            if la + lb > c1 or ha + hb < c0:
                continue
            if da >= depth and db >= depth:
                return True
            if da <= db:
                kids = [(x, da + 1, wb, db) for x in _children_words(ra, wa)]
            else:
                kids = [(wa, da, y, db + 1) for y in _children_words(rb, wb)]

            def distance(item):
                _, _, p, q = _node_iv(ra, item[0])
                _, _, u, v = _node_iv(rb, item[2])
                return -abs((p + q + u + v) / 2 - centre)

            kids.sort(key=distance)
            stack.extend(kids)
        return False

    empty = []
    for i in range(n):
        c0 = lo + i * cell
        c1 = min(hi, c0 + cell)
        if not hit(c0, c1):
            empty.append(i)
    runs = []
    for i in empty:
        if runs and runs[-1][1] == i - 1:
            runs[-1] = (runs[-1][0], i)
        else:
            runs.append((i, i))
    longest = max((r[1] - r[0] + 1 for r in runs), default=0)
    return GapScan(lo, hi, cell, n, tuple(runs), (longest + 2) * cell, visited)
