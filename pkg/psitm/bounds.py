"""
Closed-form calculators for the lower-bound toolkit: fooling and Fano step
bounds, the relaxation-adjusted variants, the decision-tree depth and
information-complexity transfer bounds, and the L_k lower-bound estimate.

Every calculator returns a BoundResult that carries the instantiated formula
terms in its 'trace', from which the bound value can be recomputed.
"""
import logging
import math
import typing
from dataclasses import dataclass

import numpy as np

from .bitutils import ceil_log2
from .budget import IotaSpec, budget_bits, budget_bits_exact


log = logging.getLogger('psitm.bounds')


CEIL_LOG = 'ceil-log'
EXACT_REAL = 'exact-real'
CONVENTIONS = (CEIL_LOG, EXACT_REAL)

BOUND_ROW_COLUMNS = [
    'tool', 'convention', 'c', 'd_or_k', 'n', 'logM', 'epsilon', 'extra_params', 'bound_real', 'bound_int'
]

# Default entropy rate of the L_k fooling family
DEFAULT_ALPHA = 0.9


def budget_for(c, d, n, convention=CEIL_LOG):
    """ Per-step budget B(d,n) under the given convention """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    spec = IotaSpec(c, d)
    if convention == CEIL_LOG:
        return budget_bits(spec, n)
    return budget_bits_exact(spec, n)


@dataclass(frozen=True)
class BoundQuery:
    """
    Inputs of a bound calculator.

    Parameters
    ----------
    c : int
        Budget coefficient, >= 1
    d : int
        Introspection depth (or k-1 for the L_k tools), >= 1
    n : int
        Input length, >= 2
    logM : float
        log2 of the size of the distinguishable set, >= 1
    epsilon : float or None
        Error probability in (0, 1), for the Fano bound only
    convention : str
        'ceil-log' (metered integer budget) or 'exact-real'
    """
    c: int = 1
    d: int = 1
    n: int = 2
    logM: float = 1.0
    epsilon: typing.Optional[float] = None
    convention: str = CEIL_LOG

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not self.logM >= 1:
            raise ValueError(f"logM must be >= 1, got {self.logM}")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be strictly between 0 and 1, got {self.epsilon}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")
        # Validates c and d
        IotaSpec(self.c, self.d)

    @property
    def budget(self):
        return budget_for(self.c, self.d, self.n, self.convention)


class BoundResult(typing.NamedTuple):
    """
    Certified output of a bound calculator.

    'trace' holds the instantiated formula terms: at least 'numerator' and
    'denominator', and for the Fano bound the 'logM', 'entropy_term' and
    'epsilon_term' that make up the numerator.
    """
    tool: str
    label: str
    convention: str
    bound_value: float
    integer_bound: typing.Optional[int]
    trace: dict
    query: BoundQuery
    extra_params: dict

    def recompute(self):
        """ Re-derive bound_value from the formula trace """
        t = self.trace
        numerator = t['numerator']
        if 'entropy_term' in t:
            numerator = t['logM'] - t['entropy_term'] - t['epsilon_term']
        return numerator / t['denominator']

    def summary_dict(self):
        """ One CSV row of the bound result table """
        q = self.query
        extra = ';'.join(f'{k}={v}' for k, v in self.extra_params.items())
        return {
            'tool': self.tool,
            'convention': self.convention,
            'c': q.c,
            'd_or_k': q.d,
            'n': q.n,
            'logM': q.logM,
            'epsilon': q.epsilon if q.epsilon is not None else '',
            'extra_params': extra,
            'bound_real': self.bound_value,
            'bound_int': self.integer_bound if self.integer_bound is not None else '',
        }


def _ceil(x):
    # Quotients of exactly representable integers are exact in floating point,
    # so integral bound values are never pushed up by rounding
    return int(math.ceil(x))


def _ratio_result(tool, label, q, numerator, denominator, extra_params=None, **trace):
    value = numerator / denominator
    trace = dict(trace, numerator=numerator, denominator=denominator)
    return BoundResult(
        tool, label, q.convention, float(value), _ceil(value), trace, q, dict(extra_params or {}))


def fooling_bound(q):
    """
    Fooling-set step bound T >= ceil(log2 M / B(d,n)).

    Parameters
    ----------
    q : BoundQuery

    Returns
    -------
    result : BoundResult
    """
    return _ratio_result('fooling', 'fooling set', q, q.logM, q.budget)


def dt_depth_bound(q):
    """
    Decision-tree depth bound depth >= ceil(log2 M / B(d,n)), the platform
    transfer of the fooling bound
    """
    return _ratio_result('dt', 'decision-tree depth', q, q.logM, q.budget)


def binary_entropy(epsilon):
    """
    Binary entropy h(eps) = -eps log2 eps - (1 - eps) log2 (1 - eps), in bits.

    Parameters
    ----------
    epsilon : float or array_like
        Values strictly between 0 and 1

    Returns
    -------
    h : float or ndarray
    """
    eps = np.asarray(epsilon, dtype=float)
    if not ((eps > 0) & (eps < 1)).all():
        raise ValueError(f"binary_entropy() requires 0 < epsilon < 1, got {epsilon}")
    h = -(eps * np.log2(eps) + (1.0 - eps) * np.log2(1.0 - eps))
    return float(h) if h.ndim == 0 else h


def log2_m_minus_one(logM):
    """
    log2(M - 1) given log2 M, computed as logM + log1p(-2^-logM) / ln 2
    which stays accurate for large logM
    """
    return logM + math.log1p(-2.0 ** -logM) / math.log(2.0)


def fano_bound(q):
    """
    Average-case step bound with error tolerance epsilon:

        T >= [log2 M - h(eps) - eps log2(M - 1)] / B(d,n)

    Requires 0 < eps < 1 - 1/M.
    """
    eps = q.epsilon
    if eps is None:
        raise ValueError("fano_bound() requires a query with epsilon set")
    eps_max = 1.0 - 2.0 ** -q.logM
    if not 0 < eps < eps_max:
        raise ValueError(f"fano_bound() requires 0 < epsilon < 1 - 1/M = {eps_max:.12g}, got {eps}")
    entropy_term = binary_entropy(eps)
    epsilon_term = eps * log2_m_minus_one(q.logM)
    numerator = q.logM - entropy_term - epsilon_term
    return _ratio_result(
        'fano', 'Fano average-case', q, numerator, q.budget,
        logM=q.logM, entropy_term=entropy_term, epsilon_term=epsilon_term)


@dataclass(frozen=True)
class RelaxationParams:
    """
    Parameters of the controlled relaxations.

    Parameters
    ----------
    H : float
        Entropy budget of random bits (R1)
    P : int
        Number of passes (R2), >= 1
    m : float
        Per-pass overhead bits (R2)
    c0 : float
        Query-to-entropy conversion constant (R2)
    adv : float
        Advice bits (R3)
    delta_bw : int
        Signed per-step budget shift in bits (R4)
    r1_additive_budget : bool
        If True, R1 adds H to the per-step budget instead of removing H from
        the distinguishable entropy
    """
    H: float = 0.0
    P: int = 1
    m: float = 0.0
    c0: float = 1.0
    adv: float = 0.0
    delta_bw: int = 0
    r1_additive_budget: bool = False

    def __post_init__(self):
        for name in ('H', 'm', 'c0', 'adv'):
            if getattr(self, name) < 0:
                raise ValueError(f"RelaxationParams.{name} must be >= 0, got {getattr(self, name)}")
        if self.P < 1:
            raise ValueError(f"RelaxationParams.P must be >= 1, got {self.P}")


def relaxed_bounds(q, r):
    """
    Relaxation-adjusted bounds.

    - R1 (randomness): logM -> max(0, logM - H), or B -> B + H with
      r1_additive_budget
    - R2 (multi-pass): minimal P >= 1 with P * (m + B) >= c0 * logM
    - R3 (advice): logM -> max(0, logM - adv)
    - R4 (budget shift): B -> B + delta_bw, which must stay >= 1

    Returns
    -------
    results : dict
        {'R1': BoundResult, 'R2': ..., 'R3': ..., 'R4': ...}
    """
    B = q.budget

    if r.r1_additive_budget:
        r1 = _ratio_result('relax-R1', 'randomness (additive budget)', q, q.logM, B + r.H, {'H': r.H})
    else:
        r1 = _ratio_result('relax-R1', 'randomness', q, max(0.0, q.logM - r.H), B, {'H': r.H})

    r2 = _ratio_result('relax-R2', 'multi-pass', q, r.c0 * q.logM, r.m + B, {'m': r.m, 'c0': r.c0, 'P': r.P})
    passes = max(1, r2.integer_bound)
    r2 = r2._replace(
        integer_bound=passes,
        trace=dict(r2.trace, given_passes=r.P, given_passes_suffice=r.P * (r.m + B) >= r.c0 * q.logM))

    r3 = _ratio_result('relax-R3', 'advice', q, max(0.0, q.logM - r.adv), B, {'adv': r.adv})

    shifted = B + r.delta_bw
    if shifted < 1:
        raise ValueError(
            f"R4 budget shift of {r.delta_bw} bits drives the budget {B} below 1 bit")
    r4 = _ratio_result('relax-R4', 'budget shift', q, q.logM, shifted, {'delta_bw': r.delta_bw})

    return {'R1': r1, 'R2': r2, 'R3': r3, 'R4': r4}


def ic_gate_bound(k, n, c=1, c_lb=1.0, convention=CEIL_LOG):
    """
    Information-complexity transfer: minimal number of queries Q with
    Q * B(k-1, n) >= c_lb * n / k.

    Parameters
    ----------
    k : int
        Depth of the target language, >= 2
    n : int
        Input length, >= 2
    c : int
        Budget coefficient
    c_lb : float
        Hidden constant of the Omega(n/k) lower bound, > 0

    Returns
    -------
    result : BoundResult
        'integer_bound' is the minimal Q
    """
    if k < 2:
        raise ValueError(f"ic_gate_bound() requires k >= 2, got {k}")
    if not c_lb > 0:
        raise ValueError(f"c_lb must be > 0, got {c_lb}")
    q = BoundQuery(c=c, d=k - 1, n=n, logM=max(1.0, c_lb * n / k), convention=convention)
    return _ratio_result('ic', 'information-complexity queries', q, c_lb * n / k, q.budget, {'k': k, 'c_lb': c_lb})


def lk_length_fixed_point(k, n, max_iter=64):
    """
    Universe size m consistent with an L_k encoding of length n, by fixed
    point iteration of m = floor(n / (k * ceil(log2 m) + 1)) from m = floor(n/k)
    """
    m = n // k
    seen = []
    for __ in range(max_iter):
        if m < 2:
            break
        m_next = n // (k * ceil_log2(m) + 1)
        if m_next == m:
            return m
        if m_next in seen:
            # Oscillation: keep the smaller universe
            return min(m, m_next)
        seen.append(m)
        m = m_next
    return m


def lk_lb_estimate(k, n=None, alpha=DEFAULT_ALPHA, c=1, m=None):
    """
    Lower-bound estimate T >= alpha * m / (c * (k-1) * ceil(log2 n)) for
    deciding L_k at depth k-1. An estimate, not a certified bound.

    Parameters
    ----------
    k : int
        Number of layers, >= 2
    n : int or None
        Encoded input length. If None, derived from m by the encoding
        length law.
    alpha : float
        Entropy rate of the fooling family, in (0, 1]
    c : int
        Budget coefficient
    m : int or None
        Universe size. If None, solved from n by fixed-point iteration.

    Returns
    -------
    estimate : float
    """
    if k < 2:
        raise ValueError(f"lk_lb_estimate() requires k >= 2, got {k}")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if n is None and m is None:
        raise ValueError("lk_lb_estimate() requires n or m")
    if n is None:
        n = k * m * ceil_log2(m) + m + ceil_log2(m)
    if m is None:
        m = lk_length_fixed_point(k, n)
    if m < 2:
        raise ValueError(f"Parameters k = {k}, n = {n} yield a universe size m = {m} < 2")
    return alpha * m / (c * (k - 1) * ceil_log2(n))
