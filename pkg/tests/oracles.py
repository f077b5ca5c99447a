"""Independent reference computations used by the tests.

Nothing here imports the package's arithmetic: values come from mpmath
floats at high precision or from plain Fraction recursion.
"""

from fractions import Fraction

import mpmath

DPS = 80


def cf_float(a0, pre=(), per=(), terms=400, dps=DPS):
    """[a0; pre, per, per, ...] by backward evaluation of a long truncation."""
    letters = list(pre)
    if per:
        while len(letters) < terms:
            letters.extend(per)
    with mpmath.workdps(dps):
        x = mpmath.mpf(0)
        for a in reversed(letters):
            x = 1 / (a + x)
        return +(a0 + x)


def quad_float(x, dps=DPS):
    with mpmath.workdps(dps):
        return (x.p + x.q * mpmath.sqrt(x.d)) / x.r


def finite_cf(word):
    """[0; word] by nested Fractions."""
    x = Fraction(0)
    for a in reversed(word):
        x = 1 / (a + x)
    return x


def convergent_table(word):
    """(p_i, q_i) for i = 1..n, each read off [0; a_1..a_i] in lowest terms."""
    out = []
    for i in range(1, len(word) + 1):
        v = finite_cf(word[:i])
        out.append((v.numerator, v.denominator))
    return out


def lambda_float(letter, i, terms=300, dps=DPS):
    """a_i + [0; a_{i+1}, ...] + [0; a_{i-1}, ...] from a letter function on Z."""
    fwd = [letter(i + j) for j in range(1, terms)]
    bwd = [letter(i - j) for j in range(1, terms)]
    with mpmath.workdps(dps):
        return letter(i) + cf_float(0, fwd, dps=dps) + cf_float(0, bwd, dps=dps)
