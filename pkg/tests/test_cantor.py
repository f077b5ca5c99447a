import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfspectra import cantor
from cfspectra.cantor import K4_RULES, CapExceeded, c_rules
from cfspectra.exact import QuadIrr
from cfspectra.words import TailSpec, beta, cf, compare_tails, tail_value

from oracles import cf_float

k4_words = st.lists(st.integers(1, 4), min_size=1, max_size=7).map(tuple)


def admissible_k4(w):
    return K4_RULES.admissible(w[1:], after=w[0]) if w else True


def hull_oracle(rules, word, depth=9):
    """min and max of [0; word, theta] over admissible continuations of a fixed length."""
    conts = [()]
    for _ in range(depth):
        nxt = []
        for c in conts:
            last = c[-1] if c else (word[-1] if word else None)
            nxt.extend(c + (a,) for a in rules.successors(last))
        conts = nxt
    with mpmath.workdps(30):
        vals = [cf_float(0, tuple(word) + c) for c in conts]
        return min(vals), max(vals)


def test_root_interval_first_type():
    iv = cantor.root_interval(cantor.k4((1, 3)))
    assert iv.itype == "first"
    assert iv.lo == cf("[0; 1 3 4 (1 3)~]")
    assert iv.hi == cf("[0; 1 3 (1 3)~]")
    assert cantor.root_interval(cantor.k4((1, 4))).itype == "first"
    assert cantor.root_interval(cantor.k4((1, 4, 1))).itype == "second"


def test_root_interval_cstyle():
    iv = cantor.root_interval(cantor.cset((1, 4), 4))
    assert iv.itype == "cstyle"
    assert iv.lo == cf("[0; 1 4 (4 1)~]")
    assert iv.hi == cf("[0; 1 4 (1 4)~]")


def test_subdivide_first_type_even_length():
    children, gaps = cantor.subdivide(K4_RULES, (1, 3))
    assert [c.word[-1] for c in children] == [4, 3, 2, 1]
    assert [g.label for g in gaps] == [3, 2, 1]
    o1 = gaps[-1]
    ends = {cf("[0; 1 3 2 (3 1)~]"), cf("[0; 1 3 1 (1 3)~]")}
    assert {o1.lo, o1.hi} == ends


def test_subdivide_second_type():
    children, gaps = cantor.subdivide(K4_RULES, (1, 4, 1))
    assert sorted(c.word[-1] for c in children) == [1, 2, 3]
    assert len(gaps) == 2
    assert all(c.itype == ("second" if c.word[-1] in (1, 2) else "first") for c in children)


def test_subdivide_cstyle():
    children, gaps = cantor.subdivide(c_rules(5), (2,))
    assert len(children) == 5 and len(gaps) == 4


def test_tilde_sets_are_unions_of_nodes():
    assert cantor.tilde_k4((1, 4)).nodes == ((1, 4, 2), (1, 4, 3), (1, 4, 4), (1, 4, 1, 1), (1, 4, 1, 2))
    assert (1, 5, 1, 4) not in cantor.tilde_c((1, 5), 4).nodes


def test_hull_of_c4_reaches_B4():
    h = cantor.hull_and_extremes(cantor.cset((), 4))
    assert h.hi == QuadIrr(-2, 2, 1, 2)
    assert h.lo == tail_value(TailSpec.periodic(4, 1))


def test_largest_gap_of_k13():
    h = cantor.hull_and_extremes(cantor.k4((1, 3)))
    assert h.largest_gap_at == ("inside", (1, 3), 1)
    gap = cf("[0; 1 3 1 (1 3)~]") - cf("[0; 1 3 2 (3 1)~]")
    assert h.largest_gap == abs(gap)


def test_monotonicity_examples():
    for w in ((1, 4, 3), (1, 4, 1), (1, 3)):
        rep = cantor.gap_monotonicity_check(cantor.k4(w), 3)
        assert rep.ok and rep.beta_ranges_ok


def test_cover_depth_one_matches_subdivide():
    spec = cantor.k4((1, 3))
    cover = cantor.brute_force_cover(spec, 1)
    children, _ = cantor.subdivide(K4_RULES, (1, 3))
    assert [(c.lo, c.hi) for c in cover] == [(c.lo, c.hi) for c in children]


def test_cover_cap():
    with pytest.raises(CapExceeded):
        cantor.brute_force_cover(cantor.k4((1,)), cantor.COVER_DEPTH_CAP + 1)


def test_covers_are_nested_and_avoid_gaps():
    spec = cantor.k4((1, 4))
    shallow, deep = cantor.brute_force_cover(spec, 2), cantor.brute_force_cover(spec, 4)
    for iv in deep:
        assert any(s.lo <= iv.lo and iv.hi <= s.hi for s in shallow)
    gaps = []
    for w in [()] + [c.word[len(spec.prefix):] for c in shallow]:
        gaps += cantor.subdivide(K4_RULES, spec.prefix + w)[1]
    for g in gaps:
        assert not any(iv.lo < g.hi and g.lo < iv.hi for iv in deep)


@pytest.mark.parametrize("word", [(1, 3), (1, 4), (1, 4, 1), (2,), (4, 1, 2), (1, 4, 1, 4)])
def test_node_interval_against_continuation_oracle(word):
    iv = cantor.node_interval(K4_RULES, word)
    lo, hi = hull_oracle(K4_RULES, word)
    assert abs(float(iv.lo) - float(lo)) < 1e-7
    assert abs(float(iv.hi) - float(hi)) < 1e-7


def test_thickness_examples():
    tb = cantor.thickness_lower_bound(cantor.k4((1, 4)), 6)
    assert tb.tau_lower > 1.03
    for k in (4, 5, 6):
        assert cantor.thickness_lower_bound(cantor.cset((1, 2), k), 6).tau_lower > 1


def test_thickness_against_deep_cover():
    """Bridge ratios of the top-level gaps, measured on a float cover of depth 8,
    never fall below the certified bound."""
    spec = cantor.k4((1, 4))
    tau = float(cantor.thickness_lower_bound(spec, 6).tau_lower)
    cover = [(float(c.lo), float(c.hi)) for c in cantor.brute_force_cover(spec, 8)]
    merged = []
    for lo, hi in cover:
        if merged and lo <= merged[-1][1] + 1e-15:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    gaps = [(a[1], b[0]) for a, b in zip(merged, merged[1:])]
    lengths = [g[1] - g[0] for g in gaps]
    big = sorted(range(len(gaps)), key=lambda i: -lengths[i])[:40]
    for i in big:
        left = next((gaps[j][1] for j in range(i - 1, -1, -1) if lengths[j] >= lengths[i]), merged[0][0])
        right = next((gaps[j][0] for j in range(i + 1, len(gaps)) if lengths[j] >= lengths[i]), merged[-1][1])
        ratio = min(gaps[i][0] - left, right - gaps[i][1]) / lengths[i]
        assert ratio > tau - 1e-6


def test_union_thickness_is_global():
    spec = cantor.union(K4_RULES, (1, 4, 1, 1), (1, 4, 1, 2))
    tb = cantor.thickness_lower_bound(spec, 4)
    assert tb.method.startswith("global")
    assert 0.8 < float(tb.tau_lower) < 0.82


# ------------------------------------------------------------------ properties


def _check_partition(rules, word):
    node = cantor.node_interval(rules, word)
    children, gaps = cantor.subdivide(rules, word)
    total = sum((c.length for c in children), QuadIrr(0)) + sum((g.length for g in gaps), QuadIrr(0))
    assert total == node.length
    assert children[0].lo == node.lo and children[-1].hi == node.hi
    for c, g, nxt in zip(children, gaps, children[1:]):
        assert c.hi == g.lo and g.hi == nxt.lo and g.lo < g.hi


@given(k4_words)
def test_partition_k4(word):
    if admissible_k4(word):
        _check_partition(K4_RULES, word)


@given(st.integers(3, 8), st.lists(st.integers(1, 8), max_size=6).map(tuple))
def test_partition_cstyle(k, word):
    word = tuple(min(a, k) for a in word)
    _check_partition(c_rules(k), word)


@given(k4_words)
def test_orientation_follows_parity_rule(word):
    if not admissible_k4(word):
        return
    children, _ = cantor.subdivide(K4_RULES, word)
    t_small, t_large = TailSpec.periodic(1, 3), TailSpec.periodic(3, 1)
    for a, b in zip(children, children[1:]):
        # representatives of two neighbouring children, compared by the parity rule
        ta, tb = t_small.prepend((a.word[-1],)), t_large.prepend((b.word[-1],))
        assert compare_tails(word, ta, tb) == -1


@settings(max_examples=200)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3).map(tuple))
def test_monotonicity_and_beta_bracket_everywhere(word):
    rep = cantor.gap_monotonicity_check(cantor.k4(word), 3)
    assert rep.ok and rep.beta_ranges_ok


@given(k4_words)
def test_beta_in_stated_range_for_words_ending_in_4(word):
    if word[-1] == 4:
        assert Fraction(1, 5) <= beta(word) <= Fraction(1, 4)


def test_finite_component_monotone_in_depth():
    spec = cantor.k4((1, 4))
    prev = None
    for d in range(2, 7):
        tb = cantor.thickness_lower_bound(spec, d)
        if prev is not None:
            assert tb.finite_min <= prev
        prev = tb.finite_min
        assert tb.finite_min >= tb.floor >= tb.tau_lower


def test_all_prefixes_depth_two_are_thick():
    for s in (1, 2):
        for w in itertools.product(range(1, 5), repeat=s):
            assert cantor.thickness_lower_bound(cantor.k4(w), 2).tau_lower > 1.03
