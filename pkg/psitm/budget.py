import logging
from dataclasses import dataclass

import numpy as np

from .bitutils import ceil_log2


log = logging.getLogger('psitm.budget')


@dataclass(frozen=True)
class IotaSpec:
    """
    Parameters of the introspection interface: budget coefficient c and
    introspection depth d. The per-step budget is B(d,n) = c * d * log2(n).

    Parameters
    ----------
    c : int
        Budget coefficient, >= 1
    d : int
        Introspection depth, >= 1
    """
    c: int = 1
    d: int = 1

    def __post_init__(self):
        for name in ('c', 'd'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ValueError(f"IotaSpec.{name} must be an integer >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))

    def to_dict(self):
        return {'c': self.c, 'd': self.d}

    @classmethod
    def from_dict(cls, items):
        return cls(items['c'], items['d'])


def _check_length(n):
    n = int(n)
    if n < 2:
        raise ValueError(f"Input length n must be >= 2, got {n}")
    return n


def budget_bits(spec, n):
    """
    Metered per-step introspection budget c * d * ceil(log2(n)), in bits.

    Parameters
    ----------
    spec : IotaSpec
    n : int
        Input length, >= 2

    Returns
    -------
    bits : int
    """
    n = _check_length(n)
    return spec.c * spec.d * ceil_log2(n)


def budget_bits_exact(spec, n):
    """
    Real-valued per-step budget c * d * log2(n), used by the bound
    calculators under the 'exact-real' convention
    """
    n = _check_length(n)
    return float(spec.c * spec.d * np.log2(n))
