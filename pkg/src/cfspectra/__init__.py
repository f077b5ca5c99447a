"""Exact continued-fraction arithmetic, dynamically defined Cantor sets and
certified checks on sums of them and on Markov and Lagrange spectra."""

from .exact import CertInterval, MultiQuad, QuadIrr, enclose
from .words import TailSpec, beta, continuant, convergents, parse_cf, tail_value
from .cantor import CantorSpec, cset, k4, thickness_lower_bound, tilde_c, tilde_k4
from .sums import SumClaim, k4_claims, sum_interval
from .spectra import BiInfSeq, enumerate_spectrum, lagrange_value, markov_value
from .certify import run_catalog

__version__ = "0.1.0"

__all__ = [
    "BiInfSeq",
    "CantorSpec",
    "CertInterval",
    "MultiQuad",
    "QuadIrr",
    "SumClaim",
    "TailSpec",
    "beta",
    "continuant",
    "convergents",
    "cset",
    "enclose",
    "enumerate_spectrum",
    "k4",
    "k4_claims",
    "lagrange_value",
    "markov_value",
    "parse_cf",
    "run_catalog",
    "sum_interval",
    "tail_value",
    "thickness_lower_bound",
    "tilde_c",
    "tilde_k4",
]
