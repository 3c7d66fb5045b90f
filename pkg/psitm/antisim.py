"""
Anti-simulation threshold: s = n^beta calls at depth k-1 carry as much
information budget as one call at depth k iff beta >= log2(k/(k-1)) / log2 n.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas


log = logging.getLogger('psitm.antisim')


# Largest exponent numerator / denominator for which the violation predicate
# is evaluated with exact integer arithmetic
EXACT_MAX_DENOMINATOR = 4096
EXACT_MAX_NUMERATOR = 4096


def _check(k, n):
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")


@dataclass(frozen=True)
class SimulationAttempt:
    """
    Simulation of one depth-k call by s = n^beta calls at depth k-1.

    Parameters
    ----------
    k : int
        Depth, >= 2
    n : int
        Input length, >= 2
    beta : float or Fraction
        Exponent, > 0
    """
    k: int
    n: int
    beta: float

    def __post_init__(self):
        _check(self.k, self.n)
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")

    @property
    def s(self):
        """ Number of depth-(k-1) calls n^beta """
        return float(np.exp2(float(self.beta) * np.log2(self.n)))


def antisim_threshold(k, n):
    """ Threshold exponent log2(k/(k-1)) / log2(n) """
    _check(k, n)
    return float(np.log2(k / (k - 1)) / np.log2(n))


def antisim_ratio(a):
    """
    Budget violation ratio n^beta * (k-1)/k. The ratio is >= 1 exactly when
    beta >= antisim_threshold(k, n).
    """
    return float(np.exp2(float(a.beta) * np.log2(a.n)) * (a.k - 1) / a.k)


def _as_fraction(beta):
    if isinstance(beta, (int, Fraction)):
        return Fraction(beta)
    # Decimal reading of the float, e.g. 0.005 -> 1/200
    return Fraction(repr(float(beta)))


def antisim_violates(a):
    """
    True iff the attempt reaches the threshold, i.e. n^beta >= k/(k-1).

    For a rational beta = p/q with small p and q, this is decided exactly as
    n^p * (k-1)^q >= k^q; otherwise by comparing beta to the threshold in
    floating point.
    """
    beta = _as_fraction(a.beta)
    p, q = beta.numerator, beta.denominator
    if p <= EXACT_MAX_NUMERATOR and q <= EXACT_MAX_DENOMINATOR:
        return a.n ** p * (a.k - 1) ** q >= a.k ** q
    return float(a.beta) >= antisim_threshold(a.k, a.n)


def antisim_ratio_curve(ks=(2, 3, 4), betas=None, n=1024):
    """
    Tabulate the budget violation ratio against beta for several depths,
    including one row per k exactly at the threshold.

    Parameters
    ----------
    ks : sequence of int
    betas : sequence of float or None
        Exponent grid; defaults to 0.005, 0.010, ..., 0.200
    n : int

    Returns
    -------
    df : pandas.DataFrame
        Columns: k, beta, ratio, threshold (bool), violates (bool),
        sorted by k then beta
    """
    if betas is None:
        betas = [Fraction(i, 200) for i in range(1, 41)]
    rows = []
    for k in ks:
        beta_star = antisim_threshold(k, n)
        on_grid = False
        for beta in betas:
            a = SimulationAttempt(k, n, beta)
            at_threshold = bool(np.isclose(float(beta), beta_star, rtol=1e-12, atol=0.0))
            on_grid = on_grid or at_threshold
            violates = at_threshold or antisim_violates(a)
            rows.append((k, float(beta), antisim_ratio(a), at_threshold, violates))
        # A grid point that hits the threshold already is the threshold row
        if not on_grid:
            a = SimulationAttempt(k, n, beta_star)
            rows.append((k, beta_star, antisim_ratio(a), True, True))
    df = pandas.DataFrame(rows, columns=['k', 'beta', 'ratio', 'threshold', 'violates'])
    return df.sort_values(['k', 'beta'], kind='mergesort').reset_index(drop=True)
