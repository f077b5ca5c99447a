"""Dynamically defined Cantor sets of continued fractions.

A Restriction fixes the alphabet and forbidden transitions.  A node is a
finite word w; its stage interval is the closed hull of all [0; w, theta]
with theta an admissible tail after the last letter of w.  The children of
a node are the one-letter extensions of w and the gaps are the open
intervals between consecutive children.

Most lengths are computed in the complete-quotient coordinate y, where
x = [0; w, y] and, with beta = q_{n-1}/q_n, a y-segment [y1, y2] has
x-length |y2 - y1| / (q_n^2 (y1 + beta)(y2 + beta)).  Ratios of lengths inside
one node only depend on beta.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .exact import CertInterval, QuadIrr, enclose
from .words import TailSpec, Word, convergents, tail_value

__all__ = [
    "Restriction",
    "K4_RULES",
    "c_rules",
    "CantorSpec",
    "k4",
    "cset",
    "tilde_k4",
    "tilde_c",
    "union",
    "StageInterval",
    "Gap",
    "root_interval",
    "node_interval",
    "subdivide",
    "brute_force_cover",
    "hull_and_extremes",
    "HullInfo",
    "gap_monotonicity_check",
    "MonotonicityReport",
    "thickness_lower_bound",
    "ThicknessBound",
    "closed_form_floor",
    "FloorBound",
    "global_thickness",
    "CapExceeded",
    "COVER_DEPTH_CAP",
]

COVER_DEPTH_CAP = 14


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Restriction:
    """Letters 1..alphabet with some forbidden consecutive pairs."""

    alphabet: int
    forbidden: frozenset = frozenset()
    name: str = ""

    def successors(self, last):
        """Letters allowed after `last` (None or an out-of-alphabet letter allows all)."""
        return _successors(self, last)

    def admissible(self, word, after=None):
        prev = after
        for a in word:
            if a < 1 or a > self.alphabet or (prev, a) in self.forbidden:
                return False
            prev = a
        return True

    def extremal_tails(self, last):
        """(min tail, max tail) of [0; theta] over admissible theta after `last`."""
        return _extremal_tails(self, last)

    def itype(self, last):
        if not self.forbidden:
            return "cstyle"
        return "second" if len(self.successors(last)) < self.alphabet else "first"


@lru_cache(maxsize=None)
def _successors(rule, last):
    return tuple(a for a in range(1, rule.alphabet + 1) if (last, a) not in rule.forbidden)


@lru_cache(maxsize=None)
def _extremal_tails(rule, last):
    def greedy(maximise):
        # maximising [0; theta] wants small letters at odd positions
        seq, seen = [], {}
        prev, pos = last, 0
        while True:
            state = (prev, pos % 2)
            if state in seen:
                start = seen[state]
                return TailSpec(tuple(seq[:start]), tuple(seq[start:]))
            seen[state] = len(seq)
            options = rule.successors(prev)
            small = (pos % 2 == 0) == maximise
            a = min(options) if small else max(options)
            seq.append(a)
            prev, pos = a, pos + 1

    return greedy(False), greedy(True)


K4_RULES = Restriction(4, frozenset({(1, 4), (2, 4)}), "K4")


@lru_cache(maxsize=None)
def c_rules(bound):
    return Restriction(bound, frozenset(), f"C{bound}")


# ------------------------------------------------------------------ specs


@dataclass(frozen=True)
class CantorSpec:
    """A finite union of node sets K(w) under one restriction."""

    rules: Restriction
    nodes: Tuple[Word, ...]
    variant: str = "union"
    prefix: Word = ()

    def to_json(self):
        return {
            "variant": self.variant,
            "rules": self.rules.name,
            "prefix": list(self.prefix),
            "nodes": [list(w) for w in self.nodes],
        }


def k4(prefix):
    prefix = tuple(prefix)
    return CantorSpec(K4_RULES, (prefix,), "K4", prefix)


def cset(prefix, bound):
    """Continued fractions [0; prefix, theta] with every letter of theta at most bound."""
    prefix = tuple(prefix)
    return CantorSpec(c_rules(bound), (prefix,), "C", prefix)


def _drop_branch(rules, prefix, excluded):
    # components of K(prefix) with the branch prefix+excluded removed
    out = []
    w = prefix
    for i, letter in enumerate(excluded):
        last = w[-1] if w else None
        for a in rules.successors(last):
            if a != letter:
                out.append(w + (a,))
        w = w + (letter,)
    return tuple(out)


def tilde_k4(prefix):
    """K4 points after prefix whose first two tail letters are not (1, 3)."""
    prefix = tuple(prefix)
    return CantorSpec(K4_RULES, _drop_branch(K4_RULES, prefix, (1, 3)), "TildeK", prefix)


def tilde_c(prefix, bound):
    """Letters at most bound after prefix, first two tail letters not (1, bound)."""
    prefix = tuple(prefix)
    rules = c_rules(bound)
    return CantorSpec(rules, _drop_branch(rules, prefix, (1, bound)), "TildeC", prefix)


def union(rules, *words):
    return CantorSpec(rules, tuple(tuple(w) for w in words), "union")


# ------------------------------------------------------------------ geometry


@dataclass(frozen=True)
class StageInterval:
    word: Word
    lo: QuadIrr
    hi: QuadIrr
    itype: str

    @property
    def length(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class Gap:
    word: Word
    label: int  # the gap between children label and label + 1
    lo: QuadIrr
    hi: QuadIrr

    @property
    def length(self):
        return self.hi - self.lo


class _Letters:
    """Per-restriction constants: y-ranges [A_j, B_j] of children with first letter j."""

    _cache: Dict[Restriction, "_Letters"] = {}

    def __init__(self, rules):
        self.rules = rules
        self.A, self.B = {}, {}
        self.Aiv, self.Biv = {}, {}
        for j in range(1, rules.alphabet + 1):
            tmin, tmax = rules.extremal_tails(j)
            self.A[j] = tail_value(tmin) + j
            self.B[j] = tail_value(tmax) + j
            self.Aiv[j] = enclose(self.A[j], 96)
            self.Biv[j] = enclose(self.B[j], 96)
        self._groups = {}

    @classmethod
    def get(cls, rules):
        if rules not in cls._cache:
            cls._cache[rules] = cls(rules)
        return cls._cache[rules]

    def group(self, last):
        """Successor letters and (y_lo, y_hi) hull of a node ending in `last`."""
        key = last if last is not None and last <= self.rules.alphabet else None
        g = self._groups.get(key)
        if g is None:
            succ = self.rules.successors(key)
            g = (succ, self.A[succ[0]], self.B[succ[-1]])
            self._groups[key] = g
        return g


def _node_state(word):
    c = convergents(word)
    return c.p[-1], c.p[-2], c.q[-1], c.q[-2]


def _y_to_x(state, y):
    pn, pm, qn, qm = state
    return (y * pn + pm) / (y * qn + qm)


def _y_pair_to_x(state, word, y1, y2):
    a, b = _y_to_x(state, y1), _y_to_x(state, y2)
    return (a, b) if len(word) % 2 == 1 else (b, a)


def node_interval(rules, word):
    word = tuple(word)
    L = _Letters.get(rules)
    last = word[-1] if word else None
    succ, ylo, yhi = L.group(last)
    if not word:
        # [0; y] = 1/y
        lo, hi = 1 / yhi, 1 / ylo
        return StageInterval(word, lo, hi, rules.itype(last))
    lo, hi = _y_pair_to_x(_node_state(word), word, ylo, yhi)
    return StageInterval(word, lo, hi, rules.itype(last))


def root_interval(spec):
    """Stage interval of the first component (the whole set for single-node specs)."""
    if len(spec.nodes) == 1:
        return node_interval(spec.rules, spec.nodes[0])
    parts = [node_interval(spec.rules, w) for w in spec.nodes]
    lo = min(p.lo for p in parts)
    hi = max(p.hi for p in parts)
    return StageInterval(spec.prefix, lo, hi, "union")


def subdivide(rules, node):
    """Children in increasing value order and the gaps between them."""
    word = node.word if isinstance(node, StageInterval) else tuple(node)
    L = _Letters.get(rules)
    last = word[-1] if word else None
    succ = L.group(last)[0]
    children = [node_interval(rules, word + (j,)) for j in succ]
    gaps = []
    for j, nxt in zip(succ, succ[1:]):
        if word:
            lo, hi = _y_pair_to_x(_node_state(word), word, L.B[j], L.A[nxt])
        else:
            lo, hi = 1 / L.A[nxt], 1 / L.B[j]
        gaps.append(Gap(word, j, lo, hi))
    if len(word) % 2 == 0:
        children.reverse()
        gaps.reverse()
    return children, gaps


def brute_force_cover(spec, depth):
    """All stage intervals at the given depth below each component, in value order."""
    if depth > COVER_DEPTH_CAP:
        raise CapExceeded(f"depth {depth} exceeds cap {COVER_DEPTH_CAP}")
    out = []
    for w in spec.nodes:
        out.extend(_leaves(spec.rules, w, depth))
    out.sort(key=lambda s: float(s.lo))
    return out


def _leaves(rules, word, depth):
    words = [tuple(word)]
    for _ in range(depth):
        nxt = []
        for w in words:
            last = w[-1] if w else None
            for j in rules.successors(last if last is None or last <= rules.alphabet else None):
                nxt.append(w + (j,))
        words = nxt
    return [node_interval(rules, w) for w in words]


# ------------------------------------------------------------------ hulls


@dataclass(frozen=True)
class HullInfo:
    lo: QuadIrr
    hi: QuadIrr
    largest_gap: QuadIrr
    largest_gap_at: Tuple
    components: Tuple[StageInterval, ...]

    @property
    def length(self):
        return self.hi - self.lo


def _ordered_components(spec):
    comps = sorted((node_interval(spec.rules, w) for w in spec.nodes), key=lambda s: float(s.lo))
    for a, b in zip(comps, comps[1:]):
        if not a.hi < b.lo:
            raise ValueError(f"components {a.word} and {b.word} overlap")
    return comps


def hull_and_extremes(spec):
    """Hull endpoints and the largest bounded gap.

    The largest gap is found among the gaps between components and the
    top-level gaps of each component; deeper gaps are shorter than the gaps
    flanking their node, which gap_monotonicity_check verifies.
    """
    comps = _ordered_components(spec)
    best, where = None, None
    for a, b in zip(comps, comps[1:]):
        g = b.lo - a.hi
        if best is None or g > best:
            best, where = g, ("between", a.word, b.word)
    for c in comps:
        _, gaps = subdivide(spec.rules, c)
        for g in gaps:
            if best is None or g.length > best:
                best, where = g.length, ("inside", g.word, g.label)
    return HullInfo(comps[0].lo, comps[-1].hi, best, where, tuple(comps))


# ------------------------------------------------------------------ node-local ratios


def _seg(y1, y2, b):
    # scaled x-length of the y-segment [y1, y2] at a node with beta = b
    return (y2 - y1) / ((y1 + b) * (y2 + b))


def _node_gaps(L, succ, b):
    return [_seg(L.B[j], L.A[nxt], b) for j, nxt in zip(succ, succ[1:])]


def _bridge_ends(gaps, ge):
    """For each gap index, the nearest index on each side holding a gap at
    least as large (None means the node boundary).  `ge(x, y)` decides x >= y."""
    n = len(gaps)
    out = []
    for i in range(n):
        left = None
        for k in range(i - 1, -1, -1):
            if ge(gaps[k], gaps[i]):
                left = k
                break
        right = None
        for k in range(i + 1, n):
            if ge(gaps[k], gaps[i]):
                right = k
                break
        out.append((left, right))
    return out


def _node_ratios(L, succ, b, gaps):
    """Bridge/gap ratios for each gap of a node, in y-order (exact)."""
    ends = _bridge_ends(gaps, lambda x, y: x >= y)
    ratios = []
    for i, (lft, rgt) in enumerate(ends):
        j = succ[i]
        y_from = L.A[succ[0]] if lft is None else L.A[succ[lft + 1]]
        y_to = L.B[succ[-1]] if rgt is None else L.B[succ[rgt]]
        low = _seg(y_from, L.B[j], b)
        high = _seg(L.A[succ[i + 1]], y_to, b)
        g = gaps[i]
        ratios.append((low / g, high / g))
    return ratios


@dataclass
class MonotonicityReport:
    ok: bool
    nodes_checked: int
    violation: Optional[dict] = None
    beta_ranges_ok: bool = True
    beta_violation: Optional[dict] = None


@dataclass(frozen=True)
class ThicknessBound:
    tau_lower: Fraction
    depth_explored: int
    method: str
    finite_min: Optional[QuadIrr] = None
    finite_argmin: Optional[Tuple] = None
    floor: Optional[Fraction] = None
    nodes: int = 0

    def to_json(self):
        return {
            "tau_lower": str(self.tau_lower),
            "tau_lower_float": float(self.tau_lower),
            "depth_explored": self.depth_explored,
            "method": self.method,
            "finite_min": None if self.finite_min is None else float(self.finite_min),
            "finite_argmin": None if self.finite_argmin is None else list(self.finite_argmin[0]),
            "floor": None if self.floor is None else str(self.floor),
            "nodes": self.nodes,
        }


def _explore(rules, root, depth, check=True):
    """Walk the tree below `root`, returning the exact minimal bridge ratio,
    its location and a monotonicity report."""
    L = _Letters.get(rules)
    best, arg = None, None
    report = MonotonicityReport(True, 0)
    stack = [(tuple(root), convergents(root).beta, 0, None)]
    while stack:
        word, b, level, flank = stack.pop()
        last = word[-1] if word else None
        succ = L.group(last)[0]
        if len(succ) < 2:
            continue
        gaps = _node_gaps(L, succ, b)
        report.nodes_checked += 1
        if check and flank is not None:
            # every gap of this node must be shorter than the adjacent parent gaps
            gmax = max(gaps)
            if not gmax < flank:
                report.ok = False
                if report.violation is None:
                    report.violation = {"word": list(word), "max_gap_scaled": float(gmax), "flank_scaled": float(flank)}
        if check and word and last <= rules.alphabet and len(word) > len(root):
            lo_b, hi_b = Fraction(1, last + 1), Fraction(1, last)
            if not lo_b <= b <= hi_b:
                report.beta_ranges_ok = False
                if report.beta_violation is None:
                    report.beta_violation = {"word": list(word), "beta": str(b)}
        for i, (rl, rh) in enumerate(_node_ratios(L, succ, b, gaps)):
            r = rl if rl <= rh else rh
            if best is None or r < best:
                best, arg = r, (word, succ[i])
        if level < depth - 1:
            for idx, j in enumerate(succ):
                adj = []
                if idx > 0:
                    adj.append(gaps[idx - 1])
                if idx < len(succ) - 1:
                    adj.append(gaps[idx])
                scale = (j + b) ** 2
                flank_child = min(adj) * scale
                stack.append((word + (j,), 1 / (j + b), level + 1, flank_child))
    return best, arg, report


def gap_monotonicity_check(spec, depth):
    """Check, at every explored node, that its gaps are shorter than the gaps
    adjacent to it in the parent, and that beta lies in [1/(a+1), 1/a] for
    the node's last letter a."""
    total = MonotonicityReport(True, 0)
    for w in spec.nodes:
        _, _, rep = _explore(spec.rules, w, depth + 1)
        total.nodes_checked += rep.nodes_checked
        if not rep.ok and total.ok:
            total.ok, total.violation = False, rep.violation
        if not rep.beta_ranges_ok and total.beta_ranges_ok:
            total.beta_ranges_ok, total.beta_violation = False, rep.beta_violation
    return total


# ------------------------------------------------------------------ closed-form floor


@dataclass(frozen=True)
class FloorBound:
    """Certified lower bound on every node-local bridge ratio, for nodes whose
    last letter lies in the alphabet, together with a certificate that the
    adjacent-gap monotonicity holds for every such parent/child pair."""

    value: Fraction
    per_letter: Tuple[Tuple[int, Fraction], ...]
    monotone: bool
    pieces: int


def _iv_seg(L, y1, y2, blo, bhi):
    a, b = _L_iv(L, y1), _L_iv(L, y2)
    dy = b - a
    lo = dy.lo / ((a.hi + bhi) * (b.hi + bhi))
    hi = dy.hi / ((a.lo + blo) * (b.lo + blo))
    return CertInterval(lo, hi)


def _L_iv(L, key):
    kind, j = key
    return L.Aiv[j] if kind == "A" else L.Biv[j]


def _iv_gaps(L, succ, blo, bhi):
    return [_iv_seg(L, ("B", j), ("A", nxt), blo, bhi) for j, nxt in zip(succ, succ[1:])]


def _iv_ratio_lower(L, succ, blo, bhi):
    """Lower bound of the minimal node-local ratio for beta in [blo, bhi].

    When the order of two gaps is not decided on the piece the bridge is
    assumed to stop there, which can only shorten it.
    """
    gaps = _iv_gaps(L, succ, blo, bhi)
    ends = _bridge_ends(gaps, lambda x, y: x.hi >= y.lo)
    out = None
    for i, (lft, rgt) in enumerate(ends):
        j = succ[i]
        y_from = ("A", succ[0]) if lft is None else ("A", succ[lft + 1])
        y_to = ("B", succ[-1]) if rgt is None else ("B", succ[rgt])
        low = _iv_seg(L, y_from, ("B", j), blo, bhi) / gaps[i]
        high = _iv_seg(L, ("A", succ[i + 1]), y_to, blo, bhi) / gaps[i]
        v = min(low.lo, high.lo)
        out = v if out is None else min(out, v)
    return out


def _exact_ratio_min(L, succ, b):
    gaps = _node_gaps(L, succ, b)
    return min(min(pair) for pair in _node_ratios(L, succ, b, gaps))


def _letter_floor(L, succ, blo, bhi, tol, max_pieces):
    """Branch and bound for the minimal ratio over beta in [blo, bhi].

    Returns (lower, upper): a certified lower bound and an exact value
    attained at some rational beta, with upper - lower <= tol unless the
    piece budget runs out.
    """
    upper = min(enclose(_exact_ratio_min(L, succ, b), 64).hi for b in (blo, bhi))
    heap = [(_iv_ratio_lower(L, succ, blo, bhi), blo, bhi)]
    pieces = 1
    while True:
        lower, lo, hi = heap[0]
        if upper - lower <= tol or pieces >= max_pieces:
            return lower, upper, pieces
        heapq.heappop(heap)
        mid = (lo + hi) / 2
        upper = min(upper, enclose(_exact_ratio_min(L, succ, mid), 64).hi)
        for a, b in ((lo, mid), (mid, hi)):
            heapq.heappush(heap, (_iv_ratio_lower(L, succ, a, b), a, b))
            pieces += 1


def _monotone_pair(L, parent, child, succ_p, succ_c, blo, bhi, depth=0):
    # child beta = 1/(child + parent beta); compare child's largest gap with
    # the adjacent parent gaps scaled by (child + beta)^2
    cb_lo, cb_hi = 1 / (child + bhi), 1 / (child + blo)
    pg = _iv_gaps(L, succ_p, blo, bhi)
    cg = _iv_gaps(L, succ_c, cb_lo, cb_hi)
    idx = succ_p.index(child)
    adj = []
    if idx > 0:
        adj.append(pg[idx - 1])
    if idx < len(succ_p) - 1:
        adj.append(pg[idx])
    scale = CertInterval(child + blo, child + bhi) ** 2
    flank_lo = min(a.lo for a in adj) * scale.lo
    cmax_hi = max(g.hi for g in cg)
    if cmax_hi < flank_lo:
        return True
    if depth > 12:
        return False
    mid = (blo + bhi) / 2
    return _monotone_pair(L, parent, child, succ_p, succ_c, blo, mid, depth + 1) and _monotone_pair(
        L, parent, child, succ_p, succ_c, mid, bhi, depth + 1
    )


@lru_cache(maxsize=None)
def closed_form_floor(rules, tol=Fraction(1, 10**4), max_pieces=4000):
    """Certified floor over all nodes whose last letter is in the alphabet.

    For last letter a, beta ranges over [1/(a+1), 1/a].
    """
    L = _Letters.get(rules)
    per, pieces, floor = [], 0, None
    for a in range(1, rules.alphabet + 1):
        succ = L.group(a)[0]
        if len(succ) < 2:
            continue
        v, _, n = _letter_floor(L, succ, Fraction(1, a + 1), Fraction(1, a), tol, max_pieces)
        per.append((a, v))
        pieces += n
        floor = v if floor is None else min(floor, v)
    monotone = True
    for a in range(1, rules.alphabet + 1):
        succ_p = L.group(a)[0]
        for c in succ_p:
            succ_c = L.group(c)[0]
            if len(succ_c) < 2:
                continue
            if not _monotone_pair(L, a, c, succ_p, succ_c, Fraction(1, a + 1), Fraction(1, a)):
                monotone = False
    return FloorBound(floor, tuple(per), monotone, pieces)


# ------------------------------------------------------------------ thickness


def thickness_lower_bound(spec, depth, floor=True):
    """Certified lower bound on the thickness of the set.

    Every gap up to the explored depth contributes its exact bridge ratio;
    deeper gaps are covered by the closed-form floor, which is valid because
    bridges stay inside their node once the adjacent-gap monotonicity is
    certified.  For unions the ratios of gaps between components are computed
    from the global gap list.
    """
    if len(spec.nodes) == 1:
        # depth >= 2 so the root's children are checked against the root's gaps
        best, arg, rep = _explore(spec.rules, spec.nodes[0], max(depth, 2))
        if not rep.ok:
            raise ValueError(f"gap monotonicity fails at {rep.violation}")
        nodes = rep.nodes_checked
        method = "node-local"
    else:
        best, arg, nodes = global_thickness(spec, depth)
        method = "global"
    tau = enclose(best, 64).lo
    fb = None
    if floor:
        fb = closed_form_floor(spec.rules)
        if not fb.monotone:
            raise ValueError(f"adjacent-gap monotonicity not certified for {spec.rules.name}")
        tau = min(tau, fb.value)
    # round down to a readable grid; still a lower bound
    tau = Fraction(math.floor(tau * 10**12), 10**12)
    return ThicknessBound(
        tau,
        depth,
        method + ("+floor" if fb else ""),
        best,
        arg,
        fb.value if fb else None,
        nodes,
    )


def _inorder_gaps(rules, word, depth):
    """Gaps of the node tree to the given depth, in increasing position."""
    out = []

    def walk(w, level):
        children, gaps = subdivide(rules, w)
        for i, ch in enumerate(children):
            if level < depth - 1:
                walk(ch.word, level + 1)
            if i < len(gaps):
                out.append((gaps[i].lo, gaps[i].hi, (w, gaps[i].label)))

    walk(tuple(word), 0)
    return out


def global_thickness(spec, depth):
    """Exact minimal bridge ratio over all gaps up to `depth` below each component,
    plus the gaps between components, with bridges found on the global gap list.

    Also checks that each gap between components is at least as long as the
    largest gap inside either neighbouring component.
    """
    info = hull_and_extremes(spec)
    comps = info.components
    items = []
    for i, c in enumerate(comps):
        inner = _inorder_gaps(spec.rules, c.word, depth)
        items.extend(inner)
        if i + 1 < len(comps):
            nxt = comps[i + 1]
            items.append((c.hi, nxt.lo, ("between", c.word, nxt.word)))
            g = nxt.lo - c.hi
            for comp in (c, nxt):
                _, gaps = subdivide(spec.rules, comp)
                if gaps and not max(x.length for x in gaps) <= g:
                    raise ValueError(f"gap between components shorter than a gap inside {comp.word}")
    lengths = [hi - lo for lo, hi, _ in items]
    n = len(items)
    left = [None] * n
    stack = []
    for i in range(n):
        while stack and lengths[stack[-1]] < lengths[i]:
            stack.pop()
        left[i] = stack[-1] if stack else None
        stack.append(i)
    right = [None] * n
    stack = []
    for i in range(n - 1, -1, -1):
        while stack and lengths[stack[-1]] < lengths[i]:
            stack.pop()
        right[i] = stack[-1] if stack else None
        stack.append(i)
    best, arg = None, None
    for i, (lo, hi, tag) in enumerate(items):
        lb = lo - (info.lo if left[i] is None else items[left[i]][1])
        rb = (info.hi if right[i] is None else items[right[i]][0]) - hi
        r = min(lb, rb) / lengths[i]
        if best is None or r < best:
            best, arg = r, tag
    return best, arg, n
