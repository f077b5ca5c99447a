"""
Sums of Cantor sets
===================

When the thickness product of two Cantor sets is at least 1 and neither
lies in a gap of the other, their sum is the interval between the sums of
the extreme points.  Chaining such intervals covers a window just below
sqrt(32).
"""

from fractions import Fraction

from cfspectra import cantor, sums
from cfspectra.cantor import CantorSpec, Restriction

claim = sums.k4_claims(1)["tilde"]
r = sums.sum_interval(claim)
print("K(1,3) + K~(1,4) =", f"[{float(r.lo):.6f}, {float(r.hi):.6f}]")
print("   exactly", r.lo, "and", r.hi)

for s_max in (1, 2, 4, 8):
    ch = sums.gluing_chain(4, s_max)
    print(s_max, "links", len(ch.links), "right end", float(ch.covered_hi))

# sample the depth-6 sum on a grid: every cell is met by some pair of stage intervals
scan = sums.sum_gap_scan(cantor.k4((1, 3)), cantor.tilde_k4((1, 4)), 6, Fraction("1.5705"), Fraction("1.6169"), Fraction(1, 500))
print("largest possible hole at depth 6:", float(scan.max_gap_upper))

# letters 1 and 4 only: far too thin, and the sum keeps a hole at every depth
sparse = Restriction(4, frozenset((x, y) for x in (None, 1, 2, 3, 4) for y in (2, 3)), "sparse")
a = CantorSpec(sparse, ((1,),), "sparse", (1,))
print(sums.newhouse_applicable(a, a).failures)
for d in (2, 3, 4):
    merged = sums.brute_force_sum(a, a, d)
    print(d, "widest hole", float(max(y[0] - x[1] for x, y in zip(merged, merged[1:]))))
