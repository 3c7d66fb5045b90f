"""
Figure datasets. Each figure id maps to a function returning the series as a
pandas DataFrame with a fixed column schema; rendering is left to any
plotting tool.

- foolingcurves: d, n, logM, budget, T_real, T
- antisim: k, beta, ratio, threshold, violates
- lk_logM: m, alpha, logM
- fanocompare: logM, epsilon, budget, T_fooling, T_fano
"""
import logging

import numpy as np
import pandas

from ..antisim import antisim_ratio_curve
from ..bounds import (
    BoundQuery, fooling_bound, fano_bound, budget_for, CEIL_LOG, DEFAULT_ALPHA)
from ..timing import timing


log = logging.getLogger('psitm.workbench.figures')


FOOLING_DEPTHS = (1, 2, 3)
FOOLING_N = 1000
FOOLING_LOGM = range(1, 121)

ANTISIM_KS = (2, 3, 4)
ANTISIM_N = 1024

LK_M = range(10, 210, 10)

FANO_LOGM = range(40, 241, 10)
FANO_EPSILON = 0.1


def foolingcurves(convention=CEIL_LOG):
    """ Fooling step bound against log2 M for d = 1, 2, 3 at n = 1000 """
    rows = []
    for d in FOOLING_DEPTHS:
        for logM in FOOLING_LOGM:
            r = fooling_bound(BoundQuery(c=1, d=d, n=FOOLING_N, logM=float(logM), convention=convention))
            rows.append((d, FOOLING_N, logM, r.query.budget, r.bound_value, r.integer_bound))
    return pandas.DataFrame(rows, columns=['d', 'n', 'logM', 'budget', 'T_real', 'T'])


def antisim(convention=CEIL_LOG):
    """ Budget violation ratio against beta for k = 2, 3, 4 """
    return antisim_ratio_curve(ks=ANTISIM_KS, n=ANTISIM_N)


def lk_logM(convention=CEIL_LOG):
    """ Entropy of the L_k fooling family, log2 M = alpha * m """
    m = np.asarray(LK_M, dtype=np.int64)
    return pandas.DataFrame({
        'm': m,
        'alpha': DEFAULT_ALPHA,
        'logM': DEFAULT_ALPHA * m,
    })


def fanocompare(convention=CEIL_LOG):
    """ Worst-case (fooling) against average-case (Fano) step bounds at B(2,1000) """
    budget = budget_for(1, 2, FOOLING_N, convention)
    rows = []
    for logM in FANO_LOGM:
        q = BoundQuery(c=1, d=2, n=FOOLING_N, logM=float(logM), epsilon=FANO_EPSILON, convention=convention)
        rows.append((logM, FANO_EPSILON, budget, fooling_bound(q).bound_value, fano_bound(q).bound_value))
    return pandas.DataFrame(rows, columns=['logM', 'epsilon', 'budget', 'T_fooling', 'T_fano'])


FIGURES = {
    'foolingcurves': foolingcurves,
    'antisim': antisim,
    'lk_logM': lk_logM,
    'fanocompare': fanocompare,
}


@timing
def cmd_figure_data(which, convention=CEIL_LOG):
    """
    Compute the data series of a figure.

    Parameters
    ----------
    which : str
        Figure id, one of 'foolingcurves', 'antisim', 'lk_logM', 'fanocompare'
    convention : str
        Budget convention used by the bound calculators

    Returns
    -------
    df : pandas.DataFrame
    """
    try:
        func = FIGURES[which]
    except KeyError:
        raise ValueError(f"Unknown figure id {which!r}, choose from {sorted(FIGURES)}") from None
    df = func(convention=convention)
    log.info(f"Figure {which!r}: {len(df)} data points")
    return df
