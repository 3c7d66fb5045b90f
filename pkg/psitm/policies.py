"""
Built-in introspection policies. A policy is called exactly once per machine
step and returns the Payload injected into the transition function.

Every policy is a callable with signature

    policy(machine, cfg, n, spec) -> Payload

and is looked up by name with get_policy().
"""
import logging

from .bitutils import ceil_log2
from .budget import budget_bits
from .payload import Payload, PayloadLayout, cell_code, window_centre, WINDOW_RADIUS
from .prng import LCG64, DEFAULT_SEED


log = logging.getLogger('psitm.policies')


class NullPolicy(object):
    """ Always returns the empty payload; the machine runs as a standard one """
    name = 'none'

    def __call__(self, machine, cfg, n, spec):
        return Payload('')


class StatePolicy(object):
    """ State id only """
    name = 'state'

    def __call__(self, machine, cfg, n, spec):
        width = ceil_log2(len(machine.states))
        sid = machine.state_index(cfg.state)
        return Payload(format(sid, f'0{width}b') if width else '')


class HeadPolicy(object):
    """ Head position field only """
    name = 'head'

    def __call__(self, machine, cfg, n, spec):
        width = ceil_log2(n)
        return Payload(format(cfg.head % (1 << width), f'0{width}b'))


class CanonicalPolicy(object):
    """
    Canonical packed record: state id, head field and one local window per
    depth, with trailing fields dropped to fit the budget.
    """
    name = 'canonical'

    def layout(self, machine, n, spec):
        return PayloadLayout(len(machine.states), n, spec)

    def __call__(self, machine, cfg, n, spec):
        layout = self.layout(machine, n, spec)
        windows = []
        for depth in range(1, spec.d + 1):
            centre = window_centre(cfg.head, depth)
            windows.append(tuple(
                cell_code(cfg.read(pos), machine.blank)
                for pos in range(centre - WINDOW_RADIUS, centre + WINDOW_RADIUS + 1)
            ))
        return layout.encode(machine.state_index(cfg.state), cfg.head, windows)


class ConfigurationSlicePolicy(object):
    """
    Payload-maximizing policy: at step t, emits bits [t*B, (t+1)*B) of the
    tape encoding of cells 0 .. n-1 (one bit per cell, 1 iff the cell holds
    '1'), zero-filled past the end. Distinct tapes therefore produce distinct
    transcripts as soon as T*B >= n.
    """
    name = 'configuration_slice'

    def __call__(self, machine, cfg, n, spec):
        B = budget_bits(spec, n)
        start = cfg.step_index * B
        bits = ''.join(
            '1' if (pos < n and cfg.read(pos) == '1') else '0'
            for pos in range(start, start + B)
        )
        return Payload(bits)


class AdvicePolicy(CanonicalPolicy):
    """
    Canonical record zero-filled to the full budget, followed by a fixed
    advice string of 'advice_bits' bits. Any advice at all therefore exceeds
    the budget and the run fails with BudgetViolation.
    """
    name = 'advice'

    def __init__(self, advice_bits=1):
        if advice_bits < 0:
            raise ValueError(f"advice_bits must be >= 0, got {advice_bits}")
        self.advice_bits = int(advice_bits)

    def __call__(self, machine, cfg, n, spec):
        record = super(AdvicePolicy, self).__call__(machine, cfg, n, spec)
        filled = record.bits.ljust(budget_bits(spec, n), '0')
        advice = ('10' * self.advice_bits)[:self.advice_bits]
        return Payload(filled + advice)


class OverflowPolicy(object):
    """ Emits budget + 1 bits at every step """
    name = 'overflow'

    def __call__(self, machine, cfg, n, spec):
        return Payload('1' * (budget_bits(spec, n) + 1))


class StochasticPolicy(object):
    """
    Emits B(d,n) coin flips drawn from a generator that persists across runs.
    Two runs of the same machine on the same input generally produce
    different transcripts, which the determinism replay detects.
    """
    name = 'stochastic'

    def __init__(self, seed=DEFAULT_SEED):
        self.rng = LCG64(seed)

    def __call__(self, machine, cfg, n, spec):
        B = budget_bits(spec, n)
        return Payload(''.join(str(self.rng.randbit()) for __ in range(B)))


POLICIES = {
    cls.name: cls
    for cls in (
        NullPolicy,
        StatePolicy,
        HeadPolicy,
        CanonicalPolicy,
        ConfigurationSlicePolicy,
        AdvicePolicy,
        OverflowPolicy,
        StochasticPolicy,
    )
}


def get_policy(name, **kwargs):
    """
    Instantiate a built-in policy by name. Keyword arguments are passed to
    the policy constructor (e.g. advice_bits for 'advice', seed for
    'stochastic').
    """
    try:
        cls = POLICIES[name]
    except KeyError:
        raise ValueError(f"Unknown iota policy {name!r}, choose from {sorted(POLICIES)}") from None
    return cls(**kwargs)
