"""
Continued fractions with periodic tails
=======================================

Exact values of eventually periodic expansions, and the parity rule for
comparing two of them.
"""

from cfspectra.words import TailSpec, cf, compare_tails, gap_length, parse_cf

# a repeating block is written ( ... )~
x = parse_cf("[0; 1 4 1 2 (1 3)~]")
print(x, "=", x.value(), "~", float(x.value()))

# [0; (1 4)~] = -2 + 2 sqrt(2), and 4 + 2 of it is sqrt(32)
b4 = cf("[0; (1 4)~]")
print("B_4 =", b4, "   4 + 2 B_4 =", 4 + 2 * b4)

# after a common prefix of even length, the larger next letter gives the smaller value
t = TailSpec.periodic(1, 3)
print(compare_tails((1, 4), TailSpec((2,), (3, 1)), TailSpec((1,), (1, 3))))   # -1

# gap length from convergents, checked against direct subtraction
g = gap_length((1, 4), TailSpec((2,), (3, 1)), TailSpec((1,), (1, 3)))
print("gap", g.length, "agrees with subtraction:", g.agrees())
