"""Catalog of the quantitative inequalities behind the thickness and sum
arguments, replayed with exact and certified interval arithmetic.

Each claim in data/claims.json names a family of rows.  A row is one of

* an exact comparison of two exact values (int, Fraction, QuadIrr, MultiQuad);
* a bound over a box of beta values, settled by branch and bound with
  CertInterval evaluation, and refuted by exact evaluation at a point;
* a composite check delegated to another module (sums, floors, dominance).

Families indexed by s are checked exactly for s = 1..s_max and once more over
the beta box that contains every s.  The beta values of the prefixes are
convergents of a single infinite continued fraction of one parity, so they
are monotone in s and lie between the s = 1 value and the limit.
"""

from __future__ import annotations

import heapq
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Tuple

from . import cantor, spectra, sums
from .cantor import K4_RULES, c_rules, k4, node_interval
from .exact import CertInterval, MultiQuad, QuadIrr, enclose
from .words import beta, cf, continuant, lift, parse_cf, power

__all__ = [
    "PASS",
    "FAIL",
    "UNDECIDED",
    "ClaimRecord",
    "CatalogReport",
    "load_catalog",
    "run_catalog",
    "evaluate_rows",
    "Row",
    "exact_row",
    "range_row",
    "computed_row",
]

PASS, FAIL, UNDECIDED = "PASS", "FAIL", "UNDECIDED"
RELATIONS = (">", "<", ">=", "<=", "=", "interval")
MAX_BOXES = 4000

F = Fraction


# ------------------------------------------------------------------ records


def _out_lo(x):
    f = float(x)
    return math.nextafter(f, -math.inf) if Fraction(f) > x else f


def _out_hi(x):
    f = float(x)
    return math.nextafter(f, math.inf) if Fraction(f) < x else f


def _show(x):
    if isinstance(x, str):
        return x
    if isinstance(x, CertInterval):
        return f"[{float(x.lo):.10g}, {float(x.hi):.10g}]"
    if isinstance(x, tuple):
        return "[" + ", ".join(_show(v) for v in x) + "]"
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class ClaimRecord:
    id: str
    group: str
    statement: str
    relation: str
    instance: str
    lhs: str
    rhs: str
    margin: CertInterval
    verdict: str
    note: str = ""

    def to_json(self):
        return {
            "id": self.id,
            "group": self.group,
            "statement": self.statement,
            "relation": self.relation,
            "instance": self.instance,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": {"lo": _out_lo(self.margin.lo), "hi": _out_hi(self.margin.hi)},
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass(frozen=True)
class CatalogReport:
    records: Tuple[ClaimRecord, ...]
    s_max: int

    @property
    def all_pass(self):
        return all(r.verdict == PASS for r in self.records)

    def counts(self):
        out = {PASS: 0, FAIL: 0, UNDECIDED: 0}
        for r in self.records:
            out[r.verdict] += 1
        return out

    def failing(self):
        return tuple(r for r in self.records if r.verdict != PASS)

    def failing_ids(self):
        return sorted({r.id for r in self.failing()})

    def to_json(self):
        return [r.to_json() for r in self.records]

    def to_text(self):
        lines = []
        for r in self.records:
            lines.append(
                f"{r.verdict:<9} {r.id:<40} {r.instance:<24} {r.lhs} {r.relation} {r.rhs}"
                f"  margin [{_out_lo(r.margin.lo):.6g}, {_out_hi(r.margin.hi):.6g}]"
            )
        c = self.counts()
        lines.append(f"{len(self.records)} rows: {c[PASS]} PASS, {c[FAIL]} FAIL, {c[UNDECIDED]} UNDECIDED")
        return "\n".join(lines)


# ------------------------------------------------------------------ rows


@dataclass(frozen=True)
class Row:
    instance: str
    kind: str
    payload: tuple
    relation: Optional[str] = None


def exact_row(instance, lhs, rhs, relation=None):
    return Row(instance, "exact", (lhs, rhs), relation)


def range_row(instance, fn, box, rhs, max_boxes=MAX_BOXES):
    """fn(*values) over the box, a sequence of (lo, hi) pairs of Fractions."""
    return Row(instance, "range", (fn, tuple(box), rhs, max_boxes))


def computed_row(instance, ok, margin, lhs="", rhs="", note=""):
    return Row(instance, "computed", (ok, margin, lhs, rhs, note))


def _signed(rel, lhs, rhs):
    return rhs - lhs if rel in ("<", "<=") else lhs - rhs


def _holds(rel, margin):
    if rel in (">", "<"):
        return margin > 0
    if rel in (">=", "<="):
        return margin >= 0
    return margin == 0


def _exact_types(*xs):
    return all(isinstance(x, (int, Fraction, QuadIrr, MultiQuad)) for x in xs)


def _eval_exact(rel, lhs, rhs, bits):
    a, b = lift(lhs, rhs) if _exact_types(lhs, rhs) else (lhs, rhs)
    m = _signed(rel, a, b)
    if rel == "=":
        m = -abs(m) if not isinstance(m, CertInterval) else m
    iv = CertInterval.coerce(m, bits)
    return (PASS if _holds(rel, m) else FAIL), iv, _show(lhs), _show(rhs), ""


def _eval_range(rel, fn, box, rhs, max_boxes, bits):
    """Branch and bound on the box.

    The margin enclosure reported is [certified lower bound of the infimum,
    smallest exact margin seen at a sample point].
    """
    def at_point(pt):
        return _signed(rel, fn(*pt), rhs)

    def on_box(b):
        return CertInterval.coerce(_signed(rel, fn(*(CertInterval(lo, hi) for lo, hi in b)), rhs), bits)

    best_point, witness = None, None

    def sample(b):
        nonlocal best_point, witness
        corners = [tuple(lo for lo, _ in b), tuple(hi for _, hi in b), tuple((lo + hi) / 2 for lo, hi in b)]
        for pt in corners:
            m = at_point(pt)
            if best_point is None or m < best_point:
                best_point, witness = m, pt
            if not _holds(rel, m):
                return True
        return False

    root = tuple((F(lo), F(hi)) for lo, hi in box)
    if sample(root):
        return _range_fail(best_point, witness, bits)
    strict = rel in (">", "<")
    heap = [(on_box(root).lo, 0, root)]
    counter = 1
    while True:
        # the heap is ordered by lower bound, so once its head is settled all boxes are
        lo, _, b = heap[0]
        if lo > 0 or (lo == 0 and not strict):
            break
        if counter >= max_boxes:
            hi = CertInterval.coerce(best_point, bits).hi
            return UNDECIDED, CertInterval(min(lo, hi), hi), "", "", f"unsettled after {counter} boxes"
        heapq.heappop(heap)
        i = max(range(len(b)), key=lambda j: b[j][1] - b[j][0])
        mid = (b[i][0] + b[i][1]) / 2
        for half in ((b[i][0], mid), (mid, b[i][1])):
            nb = b[:i] + (half,) + b[i + 1:]
            if sample(nb):
                return _range_fail(best_point, witness, bits)
            heapq.heappush(heap, (on_box(nb).lo, counter, nb))
            counter += 1
    hi = CertInterval.coerce(best_point, bits).hi
    return PASS, CertInterval(min(lo, hi), hi), "", "", f"{counter} boxes"


def _range_fail(m, pt, bits):
    iv = CertInterval.coerce(m, bits)
    where = ", ".join(f"{float(v):.6g}" for v in pt)
    return FAIL, iv, "", "", f"violated at ({where})"


def evaluate_rows(cid, meta, rows, bits=128):
    out = []
    for row in rows:
        rel = row.relation or meta["relation"]
        if row.kind == "exact":
            verdict, margin, lhs, rhs, note = _eval_exact(rel, *row.payload, bits)
        elif row.kind == "range":
            fn, box, rhs, max_boxes = row.payload
            verdict, margin, lhs, rhs_s, note = _eval_range(rel, fn, box, rhs, max_boxes, bits)
            lhs = "over " + " x ".join(f"[{float(a):.6g}, {float(b):.6g}]" for a, b in box)
            rhs = _show(rhs)
        else:
            ok, margin, lhs, rhs, note = row.payload
            margin = CertInterval.coerce(margin, bits)
            verdict = PASS if ok else FAIL
            lhs, rhs = _show(lhs), _show(rhs)
        out.append(ClaimRecord(cid, meta["group"], meta["statement"], rel, row.instance, lhs, rhs, margin, verdict, note))
    return out


# ------------------------------------------------------------------ helpers


def V(text):
    return cf(text)


def _sum(*xs):
    """Exact sum of values that may come from different quadratic fields."""
    xs = lift(*xs)
    total = xs[0]
    for x in xs[1:]:
        total = total + x
    return total


def _w(word):
    return " ".join(map(str, word))


def lo_of(x, bits=128):
    return enclose(x, bits).lo if isinstance(x, (QuadIrr, MultiQuad)) else F(x)


def hi_of(x, bits=128):
    return enclose(x, bits).hi if isinstance(x, (QuadIrr, MultiQuad)) else F(x)


def hull_box(*values):
    """Smallest rational box around a few exact values."""
    return (min(lo_of(v) for v in values), max(hi_of(v) for v in values))


def bb(k, s):
    """beta of (1,k)_s, zero for the empty word."""
    return beta(power((1, k), s)) if s > 0 else F(0)


def bc(s):
    """beta of (1,4)_{s-1},1,3."""
    return beta(sums.c_word(4, s))


BB_LIMIT = V("[0;(4 1)~]")
BC_LIMIT = V("[0;3 (1 4)~]")


def bb_range(k=4, s_from=1):
    return hull_box(bb(k, s_from), bb(k, s_from + 1), V(f"[0;({k} 1)~]"))


def bc_range(s_from=1):
    return hull_box(bc(s_from), bc(s_from + 1), BC_LIMIT)


def r_ratio(s):
    """q_{(1,4)_{s-1}} / q_{(1,4)_{s-1},1} = [0;1,(4,1)_{s-1}] written outward."""
    return beta(power((1, 4), s - 1) + (1,))


R_LIMIT = V("[0;(1 4)~]")


def r_range(s_from=1):
    return hull_box(r_ratio(s_from), r_ratio(s_from + 1), R_LIMIT)


def q_ratio_cb(r):
    """q_c / q_b for c = (1,4)_{s-1},1,3 and b = (1,4)_s in terms of r."""
    return (3 + r) / (4 + r)


def _gap_between(x, y):
    a, b = sorted((x, y), key=lambda iv: float(iv.lo))
    return b.lo - a.hi


def _hull_len(iv):
    return iv.hi - iv.lo


def _node(word):
    return node_interval(K4_RULES, tuple(word))


# ------------------------------------------------------------------ claim families
#
# Every family is a function (s_max) -> list of rows.  They are registered
# by id below and the ids must match the bundled catalog.

FAMILIES = {}


def family(cid):
    def deco(fn):
        FAMILIES[cid] = fn
        return fn
    return deco


# bridge exchange -----------------------------------------------------------

BRIDGE_TAILS = ("(1 3)~", "(3 1)~", "4 (1 3)~", "2 (3 1)~", "(1)~", "(5 2)~")
BRIDGE_PREFIXES = ((), (1, 4), (3, 2), (2, 1, 1, 3))


@family("bridges.sum-exchange")
def _bridges(s_max):
    rows = []
    for b in BRIDGE_PREFIXES:
        for j in (1, 2, 3):
            for t in BRIDGE_TAILS:
                for u in BRIDGE_TAILS:
                    pre = f"[0;{_w(b)} " if b else "[0;"
                    lhs = _sum(V(f"{pre}{j} {t}]"), V(f"{pre}{j + 2} {u}]"))
                    rhs = _sum(V(f"{pre}{j + 1} {t}]"), V(f"{pre}{j + 1} {u}]"))
                    rows.append(exact_row(f"b=({_w(b)}) j={j} {t} | {u}", lhs, rhs))
    return rows


# node gaps -----------------------------------------------------------------

C13, C31 = V("[0;(1 3)~]"), V("[0;(3 1)~]")
N1 = 1 + C31 - C13                      # numerator of the gap between branches 1 and 2
N3 = 1 + V("[0;4 (1 3)~]") - C13        # numerator of the gaps after branches 2 and 3
A2_31, A1_13 = V("[2;(3 1)~]"), V("[1;(1 3)~]")
A2_13, A3_4 = V("[2;(1 3)~]"), V("[3;4 (1 3)~]")
A4_4, A3_13 = V("[4;4 (1 3)~]"), V("[3;(1 3)~]")


def gap1(b):
    return N1 / ((A2_31 + b) * (A1_13 + b))


def gap2(b):
    return N3 / ((A2_13 + b) * (A3_4 + b))


def gap3(b):
    return N3 / ((A4_4 + b) * (A3_13 + b))


HIGH = (F(1, 5), F(1, 3))   # beta of a node whose last letter is 3 or 4
LOW = (F(1, 3), F(1))       # last letter 1 or 2


@family("gaps.first-type.order")
def _first_order(s_max):
    return [
        range_row("gap3 < gap2", lambda b: gap3(b) / gap2(b), [HIGH], 1),
        range_row("gap2 < gap1", lambda b: gap2(b) / gap1(b), [HIGH], 1),
    ]


@family("gaps.first-type.numerator-ratio")
def _first_num(s_max):
    return [exact_row("constant", N3 / N1, F("0.88"))]


def _first_beta_factor(b, bs):
    return ((A2_31 + b) * (A1_13 + b)) / ((A4_4 + bs) * (A3_13 + bs))


@family("gaps.first-type.beta-factor")
def _first_beta(s_max):
    rng = (F("0.2"), F("0.25"))
    return [range_row("both betas in [0.2, 0.25]", _first_beta_factor, [rng, rng], F("0.33"))]


@family("gaps.first-type.product")
def _first_product(s_max):
    return [exact_row("constant", 9 * F("0.88") * F("0.33"), 1)]


def _cross(a, parent_gap):
    # gap of the parent node ba* adjacent to the child ba over gap1 of ba,
    # with beta_ba = 1/(a + beta_ba*) and q_ba / q_ba* = a + beta_ba*
    def fn(bs):
        b = 1 / (a + bs)
        return (a + bs) * (a + bs) * parent_gap(bs) / gap1(b)
    return fn


@family("gaps.first-type.cross-depth")
def _first_cross(s_max):
    rows = []
    for a in (3, 4):
        rows.append(range_row(f"last={a}, parent ends 3/4", _cross(a, gap3), [HIGH], 1))
        rows.append(range_row(f"last={a}, parent ends 1/2", _cross(a, gap2), [LOW], 1))
    return rows


@family("gaps.second-type.order")
def _second_order(s_max):
    return [range_row("gap2 < gap1", lambda b: gap2(b) / gap1(b), [LOW], 1)]


@family("gaps.second-type.cross-depth")
def _second_cross(s_max):
    rows = []
    for a in (1, 2):
        rows.append(range_row(f"last={a}, parent ends 3/4", _cross(a, gap3), [HIGH], 1))
        rows.append(range_row(f"last={a}, parent ends 1/2", _cross(a, gap2), [LOW], 1))
    return rows


# node thickness ------------------------------------------------------------

A1_31 = V("[1;(3 1)~]")
A4_13 = V("[4;(1 3)~]")
BRANCH4_CONST = (C13 - V("[0;4 (1 3)~]")) / N3


def ratio1(b):
    return (A1_13 - A1_31) / N1 * (A2_31 + b) / (A1_31 + b)


def ratio2(b):
    return (A2_13 - V("[2;(3 1)~]")) / N3 * (A3_4 + b) / (A2_31 + b)


def ratio4_beta(b):
    return ((A4_4 + b) * (A3_13 + b)) / ((A4_13 + b) * (A4_4 + b))


def ratio3_beta(b):
    return ((A3_4 + b) * (A2_13 + b)) / ((A3_4 + b) * (A3_13 + b))


@family("thickness.first-type.branch1")
def _t_r1(s_max):
    return [range_row("last letter 3/4", ratio1, [HIGH], F("1.1"))]


@family("thickness.second-type.branch1")
def _t_r1b(s_max):
    return [range_row("last letter 1/2", ratio1, [LOW], F("1.1"))]


@family("thickness.first-type.branch2")
def _t_r2(s_max):
    return [range_row("last letter 3/4", ratio2, [HIGH], F("1.25"))]


@family("thickness.first-type.branch4-constant")
def _t_r4c(s_max):
    return [exact_row("constant", BRANCH4_CONST, F("1.39"))]


@family("thickness.first-type.branch4-beta")
def _t_r4b(s_max):
    return [range_row("last letter 3/4", ratio4_beta, [HIGH], F("0.78"))]


@family("thickness.first-type.branch4-product")
def _t_r4p(s_max):
    return [exact_row("constant", F("1.39") * F("0.78"), F("1.08"))]


@family("thickness.first-type.branch4")
def _t_r4(s_max):
    return [range_row("last letter 3/4", lambda b: BRANCH4_CONST * ratio4_beta(b), [HIGH], F("1.08"))]


@family("thickness.second-type.branch3-constant")
def _t_r3c(s_max):
    return [exact_row("constant", BRANCH4_CONST, F("1.395"))]


@family("thickness.second-type.branch3-beta")
def _t_r3b(s_max):
    return [range_row("last letter 1/2", ratio3_beta, [LOW], F("0.74"))]


@family("thickness.second-type.branch3-product")
def _t_r3p(s_max):
    return [exact_row("constant", F("1.395") * F("0.74"), F("1.03"))]


@family("thickness.second-type.branch3")
def _t_r3(s_max):
    return [range_row("last letter 1/2", lambda b: BRANCH4_CONST * ratio3_beta(b), [LOW], F("1.03"))]


@family("thickness.k4-floor")
def _t_floor(s_max):
    fb = cantor.closed_form_floor(K4_RULES)
    return [computed_row("all nodes", fb.monotone and fb.value > F("1.03"), fb.value - F("1.03"), fb.value, "1.03",
                         "" if fb.monotone else "adjacent-gap monotonicity not certified")]


# beta range ----------------------------------------------------------------


@family("beta.stated-range")
def _beta_range(s_max):
    rows = []
    for word in ((1,), (4,), (1, 4), (4, 1), (1, 3), (2, 1, 1, 3)):
        b = beta(word)
        ok = F("0.2") <= b <= F("0.25")
        m = min(b - F("0.2"), F("0.25") - b)
        rows.append(computed_row(f"c=({_w(word)})", ok, m, b, "[0.2, 0.25]"))
    return rows


# sums: convergent ratios ---------------------------------------------------


def _s_rows(s_max, value, rhs, start=1, label="s={}"):
    return [exact_row(label.format(s), value(s), rhs) for s in range(start, s_max + 1)]


@family("sums.convergent-ratio")
def _conv_ratio(s_max):
    rows = _s_rows(s_max, lambda s: F(continuant(sums.c_word(4, s)), continuant(sums.b_word(4, s))), F("0.79"))
    rows.append(range_row("all s", q_ratio_cb, [r_range()], F("0.79")))
    rows.append(exact_row("closed-form limit bound", q_ratio_cb(R_LIMIT), F("0.79")))
    return rows


@family("sums.convergent-ratio-squared")
def _conv_ratio2(s_max):
    rows = _s_rows(s_max, lambda s: F(continuant(sums.c_word(4, s)), continuant(sums.b_word(4, s))) ** 2, F("0.624"))
    rows.append(range_row("all s", lambda r: q_ratio_cb(r) * q_ratio_cb(r), [r_range()], F("0.624")))
    return rows


def _family_with_all_s(s_max, fn, rhs, betas, start=1):
    """Rows for s = start..s_max with exact betas and one row over the box of all s."""
    rows = [exact_row(f"s={s}", fn(*(f(s) for f, _ in betas)), rhs) for s in range(start, s_max + 1)]
    rows.append(range_row(f"all s>={start}", fn, [rng for _, rng in betas], rhs))
    return rows


def _bbeta(s):
    return bb(4, s)


# sums: high branches against K(c) -----------------------------------------

HB_X = (A4_13 - A2_31) / (A2_31 - A1_13)


def hb_y(b_c, b_b):
    return ((A2_31 + b_c) * (A1_13 + b_c)) / ((A4_13 + b_b) * (A2_31 + b_b))


@family("sums.high-branches.x")
def _hb_x(s_max):
    return [exact_row("constant", HB_X, F("5.349"))]


@family("sums.high-branches.y")
def _hb_y(s_max):
    # the stated argument only uses beta_c >= [0;3,1] and beta_b < [0;(4 1)~]
    rows = _family_with_all_s(s_max, hb_y, F("0.41"), [(bc, bc_range()), (_bbeta, bb_range())])
    rows.append(range_row("stated beta bounds", hb_y, [(F(1, 4), hi_of(BC_LIMIT)), (F(1, 5), hi_of(BB_LIMIT))], F("0.41")))
    return rows


@family("sums.high-branches.product")
def _hb_p(s_max):
    return [exact_row("constant", F("0.62") * F("5.349") * F("0.41"), F("1.38"))]


@family("sums.high-branches.direct")
def _hb_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        hull = cantor.hull_and_extremes(cantor.union(K4_RULES, *(b + (j,) for j in (2, 3, 4))))
        gap = cantor.hull_and_extremes(k4(c)).largest_gap
        rows.append(exact_row(f"s={s}", hull.length / gap, 1))
    return rows


# sums: K(b,1,l) + K(c,m) ----------------------------------------------------

B1_X = (V("[1;2 (3 1)~]") - V("[1;2 (1 3)~]")) / (V("[2;1 (1 3)~]") - V("[2;2 (3 1)~]"))


def b1_y(g, b_b):
    return ((V("[2;1 (1 3)~]") + g) * (V("[2;2 (3 1)~]") + g)) / (
        (V("[1;2 (3 1)~]") + b_b) * (V("[1;2 (1 3)~]") + b_b)
    )


def _gamma(s):
    # the printed beta [0;3,1,(4,1)_s]
    return beta(power((1, 4), s) + (1, 3))


@family("sums.b1-branches.x")
def _b1_x(s_max):
    return [exact_row("0.716", B1_X, F("0.716")), exact_row("0.71", B1_X, F("0.71"))]


@family("sums.b1-branches.y")
def _b1_y(s_max):
    g_rng = hull_box(_gamma(1), _gamma(2), BC_LIMIT)
    return _family_with_all_s(s_max, b1_y, F("2.75"), [(_gamma, g_rng), (_bbeta, bb_range())])


@family("sums.b1-branches.product")
def _b1_p(s_max):
    return [exact_row("constant", F("2.75") * F("0.71") * F("0.62"), F("1.2"))]


@family("sums.b1-branches.direct")
def _b1_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        hull = _hull_len(_node(b + (1, 2)))
        for m in (2, 3, 4):
            gap = cantor.hull_and_extremes(k4(c + (m,))).largest_gap
            rows.append(exact_row(f"s={s} m={m}", hull / gap, 1))
    return rows


# sums: both K(b,1,p) against K(c,m) -----------------------------------------

PAIR_X = (C13 - V("[0;4 (1 3)~]")) / (V("[0;1 (1 3)~]") - V("[0;2 (3 1)~]"))


def pair_y(b_b, b_c, m=4):
    return ((V("[1;1 (1 3)~]") + b_b) * (V("[1;2 (3 1)~]") + b_b)) / (
        (V(f"[{m};(1 3)~]") + b_c) * (V(f"[{m};4 (1 3)~]") + b_c)
    )


def _qbc(s):
    return F(continuant(sums.b_word(4, s)), continuant(sums.c_word(4, s)))


@family("sums.pair.x")
def _pair_x(s_max):
    return [exact_row("constant", PAIR_X, 5)]


@family("sums.pair.y-first")
def _pair_y1(s_max):
    return [exact_row("s=1 m=4", pair_y(_bbeta(1), bc(1)), F("1.284"))]


@family("sums.pair.y-later")
def _pair_y2(s_max):
    rows = [exact_row(f"s={s} m=4", pair_y(_bbeta(s), bc(s)), F("1.27")) for s in range(2, s_max + 1)]
    rows.append(range_row("all s>=2 m=4", pair_y, [bb_range(4, 2), bc_range(2)], F("1.27")))
    return rows


@family("sums.pair.q-first")
def _pair_q1(s_max):
    return [exact_row("s=1", _qbc(1) ** 2, F("1.25"))]


@family("sums.pair.q-later")
def _pair_q2(s_max):
    rows = [exact_row(f"s={s}", _qbc(s) ** 2, F("1.26")) for s in range(2, s_max + 1)]
    rows.append(range_row("all s>=2", lambda r: 1 / (q_ratio_cb(r) * q_ratio_cb(r)), [r_range(2)], F("1.26")))
    return rows


def _pair_ab(s, m):
    b, c = sums.b_word(4, s), sums.c_word(4, s)
    # A is the hull of K(c,m), B the gap between K(b,1,1) and K(b,1,2)
    return _hull_len(_node(c + (m,))), _gap_between(_node(b + (1, 1)), _node(b + (1, 2)))


@family("sums.pair.direct")
def _pair_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        for m in (2, 3, 4):
            A, B = _pair_ab(s, m)
            rows.append(exact_row(f"s={s} m={m}", A / B, F("1.003") if m > 2 else 1))
    return rows


@family("sums.pair.overlap")
def _pair_overlap(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        for m in (2, 3, 4):
            cm = _node(c + (m,))
            rows.append(exact_row(f"s={s} m={m}", _node(b + (1, 1)).hi + cm.hi, _node(b + (1, 2)).lo + cm.lo))
    return rows


# sums: Z -----------------------------------------------------------------

Z_X = (V("[1;2 (3 1)~]") - V("[1;2 (1 3)~]")) / (V("[1;2 (1 3)~]") - V("[1;3 4 (1 3)~]"))


def z_y(b_c, b_b):
    return ((V("[1;2 (1 3)~]") + b_c) * (V("[1;3 4 (1 3)~]") + b_c)) / (
        (V("[1;2 (3 1)~]") + b_b) * (V("[1;2 (1 3)~]") + b_b)
    )


@family("sums.z.x")
def _z_x(s_max):
    return [exact_row("constant", Z_X, F("1.79"))]


@family("sums.z.y")
def _z_y(s_max):
    return _family_with_all_s(s_max, z_y, F("0.97"), [(bc, bc_range()), (_bbeta, bb_range())])


@family("sums.z.product")
def _z_p(s_max):
    return [exact_row("constant", F("0.62") * F("1.79") * F("0.97"), F("1.08"))]


@family("sums.z.direct")
def _z_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        u = _gap_between(_node(c + (1, 2)), _node(c + (1, 3)))
        u2 = _gap_between(_node(b + (1, 1)), _node(b + (1, 2)))
        rows.append(exact_row(f"s={s} hull K(b,1,2) / U", _hull_len(_node(b + (1, 2))) / u, 1))
        rows.append(exact_row(f"s={s} hull K(c,1,2) / U'", _hull_len(_node(c + (1, 2))) / u2, 1))
    return rows


# sums: W -----------------------------------------------------------------

W_X = (V("[1;1 (3 1)~]") - V("[1;1 (1 3)~]")) / (V("[1;1 1 (1 3)~]") - V("[1;2 (3 1)~]"))


def w_y(b_b, b_c):
    return ((V("[1;1 1 (3 1)~]") + b_b) * (V("[1;2 (3 1)~]") + b_b)) / (
        (V("[1;1 (3 1)~]") + b_c) * (V("[1;1 (1 3)~]") + b_c)
    )


WH_X = (V("[1;1 (3 1)~]") - V("[1;2 (1 3)~]")) / (V("[1;1 (3 1)~]") - V("[1;1 (1 3)~]"))


def wh_y(b_c, b_b):
    return ((V("[1;1 (3 1)~]") + b_c) * (V("[1;1 (1 3)~]") + b_c)) / (
        (V("[1;1 (3 1)~]") + b_b) * (V("[1;2 (1 3)~]") + b_b)
    )


@family("sums.w.x")
def _w_x(s_max):
    return [exact_row("constant", W_X, 2)]


@family("sums.w.y")
def _w_y(s_max):
    return _family_with_all_s(s_max, w_y, F("0.77"), [(_bbeta, bb_range()), (bc, bc_range())])


@family("sums.w.q")
def _w_q(s_max):
    rows = _s_rows(s_max, _qbc, F("1.25"))
    rows.append(range_row("all s", lambda r: 1 + 1 / (3 + r), [r_range()], F("1.25")))
    return rows


@family("sums.w.product")
def _w_p(s_max):
    return [exact_row("constant", F("1.25") ** 2 * 2 * F("0.77"), F("2.4"))]


@family("sums.w.direct")
def _w_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        u = _gap_between(_node(b + (1, 1)), _node(b + (1, 2)))
        rows.append(exact_row(f"s={s}", _hull_len(_node(c + (1, 1))) / u, 1))
    return rows


@family("sums.w.hull-x")
def _wh_x(s_max):
    return [exact_row("constant", WH_X, F("1.858"))]


@family("sums.w.hull-y")
def _wh_y(s_max):
    return _family_with_all_s(s_max, wh_y, F("1.17996"), [(bc, bc_range()), (_bbeta, bb_range())])


@family("sums.w.hull-product")
def _wh_p(s_max):
    return [exact_row("constant", F("0.624") * F("1.858") * F("1.17996"), F("1.368"))]


@family("sums.w.hull-direct")
def _wh_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        n11, n12 = _node(b + (1, 1)), _node(b + (1, 2))
        hull = max(n11.hi, n12.hi) - min(n11.lo, n12.lo)
        rows.append(exact_row(f"s={s}", hull / _hull_len(_node(c + (1, 1))), 1))
    return rows


# sums: K(b,1,1) | K(b,1,2) + K(c,1) ------------------------------------------

C1_X = (V("[1;1 (3 1)~]") - V("[1;2 (1 3)~]")) / (V("[1;1 (1 3)~]") - V("[1;2 (3 1)~]"))


def c1_y(b_c, b_b):
    return ((V("[1;1 (1 3)~]") + b_c) * (V("[1;2 (3 1)~]") + b_c)) / (
        (V("[1;1 (3 1)~]") + b_b) * (V("[1;2 (1 3)~]") + b_b)
    )


@family("sums.c1.x")
def _c1_x(s_max):
    return [exact_row("constant", C1_X, F("3.716"))]


@family("sums.c1.y")
def _c1_y(s_max):
    return _family_with_all_s(s_max, c1_y, F("0.977"), [(bc, bc_range()), (_bbeta, bb_range())])


@family("sums.c1.product")
def _c1_p(s_max):
    return [exact_row("constant", F("3.716") * F("0.624") * F("0.977"), F("2.265"))]


@family("sums.c1.direct")
def _c1_direct(s_max):
    rows = []
    for s in range(1, s_max + 1):
        b, c = sums.b_word(4, s), sums.c_word(4, s)
        b11, b12, c11, c12 = (_node(w) for w in (b + (1, 1), b + (1, 2), c + (1, 1), c + (1, 2)))
        rows.append(exact_row(f"s={s}", b12.hi + c11.hi, b11.lo + c12.lo))
    return rows


# sums: endpoints -----------------------------------------------------------


@family("sums.k13-window")
def _window(s_max):
    r = sums.sum_interval(sums.k4_claims(1)["tilde"])
    tol = F(1, 10**5)
    return [
        exact_row("lower end near 1.57041", tol - abs(r.lo - F("1.57041")), 0),
        exact_row("upper end near 1.61695", tol - abs(r.hi - F("1.61695")), 0),
    ]


def _template_rows(claims_for_s, label, s_max):
    rows = []
    for s in range(1, s_max + 1):
        for name, claim in sorted(claims_for_s(s).items()):
            if claim.stated is None:
                continue
            inst = f"{label} s={s} {name}"
            try:
                r = sums.sum_interval(claim)
            except (sums.NewhouseFailure, sums.GlueFailure) as exc:
                rows.append(computed_row(inst, False, -1, "", "", f"not an interval: {exc}"))
                continue
            dlo, dhi = r.lo - claim.stated[0], r.hi - claim.stated[1]
            ok = dlo == 0 and dhi == 0
            err = abs(dlo) + abs(dhi)
            rows.append(computed_row(inst, ok, -err, (r.lo, r.hi), claim.stated, "" if ok else "stated endpoint differs"))
    return rows


@family("sums.endpoint-templates")
def _templates(s_max):
    rows = _template_rows(sums.k4_claims, "k=4", s_max)
    for k in (5, 6, 7):
        rows += _template_rows(lambda s, k=k: sums.c_claims(k, s), f"k={k}", min(s_max, 3))
    return rows


# gluing --------------------------------------------------------------------


def _gluing1(s):
    b, c = sums.b_word(4, s), sums.c_word(4, s)
    return V(f"[0;{_w(b)} 1 2 (1 3)~]") + V(f"[0;{_w(c)} (1 3)~]"), 2 * V(f"[0;{_w(b)} 4 (1 3)~]")


def _gluing2(s):
    b, b1, c1 = sums.b_word(4, s), sums.b_word(4, s + 1), sums.c_word(4, s + 1)
    return 2 * V(f"[0;{_w(b)} (1 3)~]"), V(f"[0;{_w(b1)} 4 (1 3)~]") + V(f"[0;{_w(c1)} 4 (1 3)~]")


@family("gluing.first-instance")
def _glue_first(s_max):
    lhs, rhs = _gluing1(1)
    return [
        exact_row("left sum vs 1.6169", lhs, F("1.6169")),
        exact_row("1.6169 vs 1.6161", F("1.6169"), F("1.6161")),
        exact_row("1.6161 vs right side", F("1.6161"), rhs),
    ]


@family("gluing.overlap-tilde-square")
def _glue1(s_max):
    return [exact_row(f"s={s}", *_gluing1(s)) for s in range(1, s_max + 1)]


@family("gluing.overlap-square-next")
def _glue2(s_max):
    return [exact_row(f"s={s}", *_gluing2(s)) for s in range(1, s_max + 1)]


GL_X = (A4_13 - V("[1;2 (1 3)~]")) / (A1_31 - V("[1;4 4 (1 3)~]"))


def gl_y(b_prev, b_b):
    return ((A1_31 + b_prev) * (V("[1;4 4 (1 3)~]") + b_prev)) / (
        (A4_13 + b_b) * (V("[1;2 (1 3)~]") + b_b)
    )


@family("gluing.q-ratio")
def _gl_q(s_max):
    rows = [exact_row(f"s={s}", F(continuant(sums.b_word(4, s - 1)), continuant(sums.b_word(4, s))), F("0.1715"))
            for s in range(2, s_max + 1)]
    rows.append(range_row("all s>=2", lambda r: r / (4 + r), [r_range(2)], F("0.1715")))
    return rows


@family("gluing.x")
def _gl_x(s_max):
    return [exact_row("constant", GL_X, 131)]


@family("gluing.y")
def _gl_y(s_max):
    return _family_with_all_s(
        s_max, gl_y, F("0.268"), [(lambda s: bb(4, s - 1), bb_range(4, 1)), (_bbeta, bb_range(4, 2))], start=2
    )


@family("gluing.product")
def _gl_p(s_max):
    return [exact_row("constant", F("0.1715") ** 2 * 131 * F("0.268"), F("1.03"))]


@family("gluing.chain")
def _gl_chain(s_max):
    rows = []
    for k, smax in ((4, s_max), (5, min(s_max, 5)), (6, min(s_max, 5)), (7, min(s_max, 5))):
        try:
            ch = sums.gluing_chain(k, smax)
        except (sums.GlueFailure, sums.NewhouseFailure) as exc:
            rows.append(computed_row(f"k={k} s<={smax}", False, -1, "", "", str(exc)))
            continue
        rows.append(computed_row(
            f"k={k} s<={smax}", ch.reaches_target, ch.target_lo - ch.covered_lo,
            (ch.covered_lo, ch.covered_hi), f"starts at or below {float(ch.target_lo):.10g}",
        ))
    return rows


# thickness of C(b,k) --------------------------------------------------------


def thick_f(k):
    return (V(f"[0;(1 {k})~]") - V(f"[0;({k} 1)~]")) / (V(f"[1;({k} 1)~]") - V(f"[0;(1 {k})~]"))


def thick_g(k):
    def fn(b):
        return (V(f"[{k - 1};(1 {k})~]") + b) / (V(f"[{k};({k} 1)~]") + b)
    return fn


@family("thickness.bounded.f")
def _tb_f(s_max):
    rows = [exact_row("F(4) vs 1.6", thick_f(4), F("1.6"))]
    rows += [exact_row(f"F({k}) vs F(4)", thick_f(k), thick_f(4)) for k in range(5, 10)]
    return rows


@family("thickness.bounded.g")
def _tb_g(s_max):
    return [range_row(f"k={k}", thick_g(k), [(F(0), F(1))], F("0.9")) for k in range(4, 10)]


@family("thickness.bounded.floor")
def _tb_floor(s_max):
    rows = []
    for k in range(4, 9):
        fb = cantor.closed_form_floor(c_rules(k))
        rows.append(computed_row(f"k={k}", fb.monotone and fb.value > 1, fb.value - 1, fb.value, "1"))
    return rows


def tc_x(k):
    return (V(f"[1;{k - 2} ({k - 1} 1)~]") - V(f"[1;{k - 2} (1 {k - 1})~]")) / (
        V(f"[1;{k - 3} (1 {k - 1})~]") - V(f"[1;{k - 2} ({k - 1} 1)~]")
    )


def tc_y(k):
    def fn(b):
        return (V(f"[1;{k - 3} (1 {k - 1})~]") + b) / (V(f"[1;{k - 2} ({k - 1} 1)~]") + b)
    return fn


@family("tilde-bounded.x")
def _tc_x(s_max):
    return [exact_row(f"k={k}", tc_x(k), 1) for k in range(5, 10)]


@family("tilde-bounded.y")
def _tc_y(s_max):
    return [range_row(f"k={k}", tc_y(k), [(F(0), F(1))], 1) for k in range(5, 10)]


# dominance, k = 4 -----------------------------------------------------------

D4_X = (V("[1;2 (1 3)~]") - V("[1;4 4 (1 3)~]")) / (V("[1;3 4 (1 3)~]") - V("[1;4 (1 3)~]"))


def d4_y(b):
    return ((V("[1;3 4 (1 3)~]") + b) * (V("[1;4 (1 3)~]") + b)) / (
        (V("[1;2 (1 3)~]") + b) * (V("[1;4 4 (1 3)~]") + b)
    )


@family("dominance.k4.x")
def _d4_x(s_max):
    return [exact_row("constant", D4_X, F("1.172"))]


@family("dominance.k4.y")
def _d4_y(s_max):
    rows = [exact_row(f"s={s}", d4_y(bb(4, s - 1)), F("0.943")) for s in range(1, s_max + 1)]
    rows.append(range_row("all s>=2", d4_y, [bb_range(4, 1)], F("0.943")))
    return rows


@family("dominance.k4.product")
def _d4_p(s_max):
    return [exact_row("constant", F("1.172") * F("0.943"), F("1.105"))]


X_RANGE = hull_box(A1_31, A4_13)


def _shifted(x):
    # [1;4,x] for x >= 1
    return 1 + x / (4 * x + 1)


@family("dominance.k4.f-bound")
def _d4_f(s_max):
    return [range_row("x over the tail range", lambda x: (x - _shifted(x)) / (F("1.5") * (x + F("0.21"))),
                      [X_RANGE], F("0.05"))]


@family("dominance.k4.g-bound")
def _d4_g(s_max):
    def fn(x, b):
        return (x - _shifted(x)) / (F("1.4") * (x + b))
    return [
        range_row("beta_d = 0", lambda x: fn(x, 0), [X_RANGE], F("1.0072")),
        range_row("beta_d in prefix range", fn, [X_RANGE, bb_range(4, 1)], F("1.0072")),
    ]


@family("dominance.k4.q-ratio")
def _d4_q(s_max):
    rows = []
    for s in range(1, s_max + 1):
        for shift in range(1, s + 1):
            r = F(continuant(sums.b_word(4, s)), continuant(sums.b_word(4, s - shift))) ** 2
            rows.append(exact_row(f"s={s} shift={shift}", r, 33))
    rows.append(range_row("all s>=2 shift=1", lambda b: (5 + 4 * b) * (5 + 4 * b), [bb_range(4, 1)], 33))
    return rows


DOMINANCE_TAILS_K4 = ("4 (1 3)~", "(3 1)~", "2 (1 3)~", "3 (3 1)~", "(2)~", "4 4 (3 1)~")


@family("dominance.candidates")
def _dom(s_max):
    rows = []
    for k in (4, 5, 6):
        tails = DOMINANCE_TAILS_K4 if k == 4 else (f"({k - 1} 1)~", f"1 {k - 2} (1 {k - 1})~", "(2)~", f"{k - 1} (1 2)~")
        for s in (1, 2, 3):
            for kind in ("tilde_cross", "square"):
                for tl in tails[:3]:
                    for tr in tails[-3:]:
                        inst = f"k={k} s={s} {kind} {tl} | {tr}"
                        try:
                            seq = spectra.candidate_sequence(k, s, _tail(tl), _tail(tr), kind)
                        except spectra.ConstraintViolation:
                            continue
                        try:
                            rep = spectra.verify_lambda0_dominates(seq)
                            rows.append(computed_row(inst, True, rep.margin, rep.lambda0, rep.runner_up))
                        except spectra.DominanceFailure as exc:
                            rows.append(computed_row(inst, False, -1, "", "", str(exc)))
    return rows


def _tail(text):
    return parse_cf(f"[0;{text}]").tail


# dominance, k >= 5 -----------------------------------------------------------


def d5_x(k):
    return (V(f"[1;{k - 2} (1 {k - 1})~]") - V(f"[1;{k} 1 {k - 2} (1 {k - 1})~]")) / (
        V(f"[1;{k - 1} ({k - 1} 1)~]") - V(f"[1;{k} ({k - 1} 1)~]")
    )


def d5_y(k):
    def fn(b):
        return ((V(f"[1;{k - 1} ({k - 1} 1)~]") + b) * (V(f"[1;{k} ({k - 1} 1)~]") + b)) / (
            (V(f"[1;{k - 2} (1 {k - 1})~]") + b) * (V(f"[1;{k} 1 {k - 2} (1 {k - 1})~]") + b)
        )
    return fn


@family("dominance.bounded.bracket-values")
def _d5_brackets(s_max):
    rows = []
    for k in range(5, 10):
        rows += [
            exact_row(f"k={k} [1;k-2,1,k-1,1]", V(f"[1;{k - 2} 1 {k - 1} 1]"), 1 + F(k + 1, k * k - 2)),
            exact_row(f"k={k} [1;k,1,k-2]", V(f"[1;{k} 1 {k - 2}]"), 1 + F(k - 1, k * k - 2)),
            exact_row(f"k={k} [1;k-1,k-1,1]", V(f"[1;{k - 1} {k - 1} 1]"), 1 + F(k, k * k - k + 1)),
            exact_row(f"k={k} [1;k,k-1]", V(f"[1;{k} {k - 1}]"), 1 + F(k - 1, k * k - k + 1)),
        ]
    return rows


@family("dominance.bounded.brackets")
def _d5_ineq(s_max):
    rows = []
    for k in range(5, 10):
        rows += [
            exact_row(f"k={k} first", V(f"[1;{k - 2} (1 {k - 1})~]") - V(f"[1;{k - 2} 1 {k - 1} 1]"), 0),
            exact_row(f"k={k} second", V(f"[1;{k} 1 {k - 2}]") - V(f"[1;{k} 1 {k - 2} (1 {k - 1})~]"), 0),
            exact_row(f"k={k} third", V(f"[1;{k - 1} {k - 1} 1]") - V(f"[1;{k - 1} ({k - 1} 1)~]"), 0),
            exact_row(f"k={k} fourth", V(f"[1;{k} ({k - 1} 1)~]") - V(f"[1;{k} {k - 1}]"), 0),
        ]
    return rows


@family("dominance.bounded.x")
def _d5_x(s_max):
    rows = [exact_row(f"k={k}", d5_x(k), F(3, 2)) for k in range(5, 10)]
    rows += [exact_row(f"k={k} closed form", F(2 * (k * k - k + 1), k * k - 2), F(3, 2)) for k in range(5, 10)]
    return rows


@family("dominance.bounded.y")
def _d5_y(s_max):
    return [range_row(f"k={k}", d5_y(k), [(F(0), F(1, k))], F(2, 3)) for k in range(5, 10)]


# endpoints and constants ------------------------------------------------------


def _a_b(n):
    return V(f"[0;({n} 1)~]"), V(f"[0;(1 {n})~]")


@family("endpoints.maximum")
def _ends(s_max):
    rows = []
    for n in range(1, 10):
        a, b = _a_b(n)
        rows.append(exact_row(f"N={n}", n + 2 * b, QuadIrr(0, 1, 1, n * n + 4 * n)))
    return rows


@family("endpoints.identities")
def _ends_id(s_max):
    rows = []
    for n in range(1, 10):
        a, b = _a_b(n)
        rows.append(exact_row(f"N={n} A=B/N", a, b / n))
        rows.append(exact_row(f"N={n} N*A + A*B", n * a + a * b, 1))
        rows.append(exact_row(f"N={n} B + B*A", b + b * a, 1))
    return rows


@family("endpoints.enumerated")
def _ends_enum(s_max):
    rows = []
    for n in range(1, 10):
        period = 4 if n <= 5 else 2
        pts = spectra.enumerate_spectrum(n, period)
        top = max(p.value for p in pts)
        rows.append(exact_row(f"N={n} period<={period}", top, spectra.spectrum_endpoint(n)))
    return rows


@family("filter.case-one")
def _filter(s_max):
    v = spectra.filter_bound(5)
    return [
        exact_row("closed form", v, (20 + QuadIrr(0, 1, 1, 45)) / 5),
        exact_row("rounded to 10 places", _round_scaled(v, 10), 53416407865),
        exact_row("first 10 places of the expansion", _floor_scaled(v, 10), 53416407865),
        exact_row("above 5.34", v, F("5.34"), ">"),
    ]


def _round_scaled(x, places):
    return _floor_scaled(x + Fraction(1, 2 * 10**places), places)


def _floor_scaled(x, places):
    iv = enclose(x, 96)
    scale = 10**places
    lo, hi = math.floor(iv.lo * scale), math.floor(iv.hi * scale)
    if lo != hi:
        raise ValueError("enclosure too wide")
    return lo


@family("k3.gap")
def _k3(s_max):
    rep = spectra.k3_gap_check(10)
    cf_const = (2221564096 + QuadIrr(0, 283748, 1, 462)) / 491993569
    return [
        exact_row("a < b", rep.b - rep.a, 0),
        computed_row("cover misses (a, b)", rep.disjoint, rep.b - rep.a, (rep.a, rep.b), "depth 10 cover"),
        exact_row("3 + a above Freiman constant", 3 + rep.a, cf_const),
        exact_row("3 + b below sqrt(21)", QuadIrr(0, 1, 1, 21), 3 + rep.b),
    ]


# ------------------------------------------------------------------ catalog


def load_catalog():
    text = resources.files("cfspectra").joinpath("data/claims.json").read_text()
    return json.loads(text)


def _evaluate_claim(meta, s_max, bits):
    return evaluate_rows(meta["id"], meta, FAMILIES[meta["id"]](s_max), bits)


def run_catalog(prefix: Optional[str] = None, s_max: int = 8, bits: int = 128, catalog=None, workers: int = 1):
    """Evaluate every claim whose id starts with prefix, ordered by id.

    With workers > 1 claims run in a process pool; the report is the same.
    """
    catalog = catalog if catalog is not None else load_catalog()
    chosen = [m for m in sorted(catalog, key=lambda m: m["id"]) if not prefix or m["id"].startswith(prefix)]
    if workers > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_evaluate_claim, chosen, [s_max] * len(chosen), [bits] * len(chosen)))
    else:
        parts = [_evaluate_claim(m, s_max, bits) for m in chosen]
    return CatalogReport(tuple(r for part in parts for r in part), s_max)
