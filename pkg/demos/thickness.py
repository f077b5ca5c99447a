"""
Thickness of restricted Cantor sets
===================================

Certified lower bounds for the thickness of K(b), the continued fractions
starting with b whose letters are at most 4 and avoid the transitions 1-4
and 2-4, and for the C-style sets with letters below k.
"""

import itertools

import numpy as np

from cfspectra import cantor

# the certified bound is the smaller of the worst explored node and a closed-form
# floor for everything deeper; here the floor decides every prefix
local = np.zeros((4, 4))
for i, j in itertools.product(range(1, 5), repeat=2):
    tb = cantor.thickness_lower_bound(cantor.k4((i, j)), 4)
    local[i - 1, j - 1] = tb.finite_min
print("worst node ratio, rows: first letter, columns: second letter")
print(np.round(local, 4))
print("floor", float(tb.floor), " certified bound", float(tb.tau_lower))

# the C-style sets get thicker as k grows
for k in range(4, 9):
    tb = cantor.thickness_lower_bound(cantor.cset((1, 2), k), 4)
    print(k, round(float(tb.tau_lower), 4), tb.method)

# a union of two thin pieces is only as thick as its widest hole allows
thin = cantor.union(cantor.K4_RULES, (1, 4, 1, 1), (1, 4, 1, 2))
print("union", float(cantor.thickness_lower_bound(thin, 4).tau_lower))
