"""
Markov values of periodic and eventually periodic sequences
===========================================================
"""

from cfspectra import spectra
from cfspectra.words import TailSpec

# periodic Markov values with letters at most 4, the largest is sqrt(32)
pts = spectra.enumerate_spectrum(4, 4)
for p in pts[-5:]:
    print(f"{float(p.value):.10f}  {p.value}  period {p.witness.right.period}")

# a witness whose Markov value sits at position 0
seq = spectra.candidate_sequence(4, 2, TailSpec.periodic(1, 3), TailSpec.periodic(3, 1))
print(seq)
rep = spectra.verify_lambda0_dominates(seq)
print("lambda_0 =", float(rep.lambda0), " runner-up at", rep.runner_up_index, " margin", float(rep.margin))

# letters of size j force a Lagrange value of at least j + 2 [0; (j 1)~]
for j in range(1, 6):
    print(j, float(spectra.filter_bound(j)))

# with letters at most 3 the sum C(3) + C(3) misses a small interval
k3 = spectra.k3_gap_check(10)
print("gap", float(k3.a), float(k3.b), k3.disjoint)
