"""
The plane maps behind the dynamical spectra
===========================================

Numeric checks at high precision: the conjugation between T and psi, area
preservation of T, and the coding of phi orbits by bi-infinite sequences.
"""

from cfspectra import dynamics
from cfspectra.spectra import BiInfSeq

conj = dynamics.check_conjugation(2000, 128, seed=1)
print("h T = psi h up to", conj.max_residual, f"({conj.excluded} points near a jump skipped)")

print("Jacobian of T:", dynamics.symbolic_jacobian_det())
area = dynamics.check_area_preservation(points=200, seed=1)
print("finite differences:", area.max_fd_error)

# x + y along the phi orbit of the coded point reproduces lambda_n
for period in ((1,), (1, 4), (1, 1, 2)):
    print(period, dynamics.orbit_coding_check(BiInfSeq.periodic(period), 8, bits=128))
