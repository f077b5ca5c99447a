"""High-precision numeric checks of the plane maps behind the spectra.

Nothing here is certified: the identities are checked with mpmath at a
chosen precision, away from the discontinuities of the Gauss map.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
import sympy

from .exact import QuadIrr, enclose
from .spectra import lambda_at
from .words import tail_value

__all__ = [
    "DomainViolation",
    "GUARD",
    "apply_map",
    "ConjugationReport",
    "check_conjugation",
    "AreaReport",
    "check_area_preservation",
    "orbit_coding_check",
    "gauss_shift_check",
    "coded_point",
    "to_mpf",
]

GUARD = mpmath.mpf("1e-6")


class DomainViolation(ValueError):
    pass


def to_mpf(x, bits):
    """An exact value (int, Fraction, QuadIrr, MultiQuad) as an mpf at bits precision."""
    if isinstance(x, (int, mpmath.mpf)):
        return mpmath.mpf(x)
    iv = enclose(x, bits + 8) if isinstance(x, QuadIrr) else x.enclose(bits + 8)
    mid = (iv.lo + iv.hi) / 2
    return mpmath.mpf(mid.numerator) / mid.denominator


def _partial_quotient(x, guard):
    if not 0 < x < 1:
        raise DomainViolation(f"x = {mpmath.nstr(x, 8)} outside (0, 1)")
    inv = 1 / x
    n = int(mpmath.floor(inv))
    if guard and min(abs(x - mpmath.mpf(1) / n), abs(x - mpmath.mpf(1) / (n + 1))) < guard:
        raise DomainViolation(f"x = {mpmath.nstr(x, 8)} within the guard band of 1/{n}")
    return n, inv - n


def apply_map(name, p, guard=GUARD):
    """Evaluate gauss, phi, psi, T or h at p (a real for gauss, a pair otherwise)."""
    if name == "gauss":
        return _partial_quotient(mpmath.mpf(p), guard)[1]
    x, y = (mpmath.mpf(c) for c in p)
    if name == "h":
        if x * y >= 1:
            raise DomainViolation("h needs xy < 1")
        return x, y / (1 - x * y)
    n, frac = _partial_quotient(x, guard)
    if name == "phi":
        if y == 0:
            raise DomainViolation("phi needs y != 0")
        return frac, n + 1 / y
    if name == "psi":
        return frac, 1 / (y + n)
    if name == "T":
        return frac, x - x * x * y
    raise ValueError(f"unknown map {name!r}")


@dataclass(frozen=True)
class ConjugationReport:
    max_residual: float
    samples: int
    excluded: int
    bits: int

    def to_json(self):
        return {
            "max_residual": self.max_residual,
            "samples": self.samples,
            "excluded_in_guard_band": self.excluded,
            "precision_bits": self.bits,
        }


def _sample_sigma(rng, n):
    # uniform in {0 < x < 1, 0 < y < 1/(1+x)} by rejection from the unit square
    out = np.empty((0, 2))
    while len(out) < n:
        pts = rng.random((2 * n, 2))
        keep = (pts[:, 0] > 0) & (pts[:, 1] > 0) & (pts[:, 1] < 1 / (1 + pts[:, 0]))
        out = np.vstack([out, pts[keep]])
    return out[:n]


def _samples(seed, n):
    # endless stream of sample points, drawn in batches of n
    rng = np.random.default_rng(seed)
    while True:
        yield from _sample_sigma(rng, n)


def check_conjugation(samples=10_000, bits=128, seed=0):
    """max |h(T(p)) - psi(h(p))| over random p in the strip below y = 1/(1+x)."""
    stream = _samples(seed, samples)
    worst = mpmath.mpf(0)
    done = excluded = 0
    with mpmath.workprec(bits):
        while done < samples:
            x, y = next(stream)
            p = (mpmath.mpf(float(x)), mpmath.mpf(float(y)))
            try:
                lhs = apply_map("h", apply_map("T", p))
                rhs = apply_map("psi", apply_map("h", p))
            except DomainViolation:
                excluded += 1
                continue
            worst = max(worst, abs(lhs[0] - rhs[0]), abs(lhs[1] - rhs[1]))
            done += 1
    return ConjugationReport(float(worst), done, excluded, bits)


@dataclass(frozen=True)
class AreaReport:
    symbolic_det: str
    symbolic_ok: bool
    max_fd_error: float
    points: int
    excluded: int

    @property
    def ok(self):
        return self.symbolic_ok and self.max_fd_error < 1e-8

    def to_json(self):
        return {
            "symbolic_det": self.symbolic_det,
            "symbolic_ok": self.symbolic_ok,
            "max_finite_difference_error": self.max_fd_error,
            "points": self.points,
            "excluded_in_guard_band": self.excluded,
            "ok": self.ok,
        }


def symbolic_jacobian_det():
    """Jacobian determinant of T on the branch where floor(1/x) = n."""
    x, y, n = sympy.symbols("x y n", positive=True)
    T = sympy.Matrix([1 / x - n, x - x ** 2 * y])
    return sympy.simplify(T.jacobian([x, y]).det())


def check_area_preservation(points=1000, step=1e-6, seed=0, bits=128):
    det = symbolic_jacobian_det()
    stream = _samples(seed, points)
    worst = mpmath.mpf(0)
    done = excluded = 0
    with mpmath.workprec(bits):
        h = mpmath.mpf(step)
        guard = GUARD + 4 * h

        def T(u, v):
            return apply_map("T", (u, v), guard)

        def diff(f):
            # five-point central stencil, error O(h^4)
            a, b, c, d = f(2 * h), f(h), f(-h), f(-2 * h)
            return [(-a[i] + 8 * b[i] - 8 * c[i] + d[i]) / (12 * h) for i in (0, 1)]

        while done < points:
            x, y = (mpmath.mpf(float(c)) for c in next(stream))
            try:
                dx = diff(lambda t: T(x + t, y))
                dy = diff(lambda t: T(x, y + t))
            except DomainViolation:
                excluded += 1
                continue
            worst = max(worst, abs(dx[0] * dy[1] - dy[0] * dx[1] - 1))
            done += 1
    return AreaReport(str(det), det == 1, float(worst), done, excluded)


def coded_point(theta):
    """Exact (x, y) with x = [0; a_1, a_2, ...] and y = a_0 + [0; a_{-1}, ...]."""
    return tail_value(theta.forward(0)), QuadIrr(theta.letter(0)) + tail_value(theta.backward(0))


def orbit_coding_check(theta, n_steps, bits=128):
    """max_n |f(phi^n(x, y)) - lambda_n(theta)| for 0 <= n < n_steps, f = x + y."""
    x0, y0 = coded_point(theta)
    worst = mpmath.mpf(0)
    with mpmath.workprec(bits):
        p = (to_mpf(x0, bits), to_mpf(y0, bits))
        for n in range(n_steps):
            lam = to_mpf(lambda_at(theta, n), bits)
            worst = max(worst, abs(p[0] + p[1] - lam))
            p = apply_map("phi", p, guard=0)
    return float(worst)


def gauss_shift_check(tail):
    """Exactly: g([0; a_1, a_2, ...]) == [0; a_2, a_3, ...]."""
    x = tail_value(tail)
    inv = 1 / x
    return inv - inv.floor() == tail_value(tail.shift(1))
