"""
Built-in machines, written in the declarative machine text format.
"""
import logging

from .machine import MachineSpec
from .reading.machine_text import text2dict


log = logging.getLogger('psitm.library')


ALWAYS_ACCEPT = """
name: always_accept
states: start, accept, reject
initial: start
accept: accept
reject: reject
policy: none
single_pass: true
(start, *, *) -> (accept, *, S)
"""

# Reads the input once from left to right, accepts on the first blank
RIGHT_SCANNER = """
name: right_scanner
states: scan, accept, reject
initial: scan
accept: accept
reject: reject
policy: canonical
single_pass: true
(scan, 0, *) -> (scan, 0, R)
(scan, 1, *) -> (scan, 1, R)
(scan, _, *) -> (accept, _, S)
"""

# Accepts iff the input holds an even number of ones
PARITY = """
name: parity
states: even, odd, accept, reject
initial: even
accept: accept
reject: reject
policy: state
single_pass: true
(even, 0, *) -> (even, 0, R)
(even, 1, *) -> (odd, 1, R)
(odd, 0, *) -> (odd, 0, R)
(odd, 1, *) -> (even, 1, R)
(even, _, *) -> (accept, _, S)
(odd, _, *) -> (reject, _, S)
"""

# Scans the input, walks back to the start and scans it a second time
RESCANNER = """
name: rescanner
states: first, back, second, accept, reject
initial: first
accept: accept
reject: reject
policy: canonical
single_pass: false
(first, 0, *) -> (first, 0, R)
(first, 1, *) -> (first, 1, R)
(first, _, *) -> (back, _, L)
(back, 0, *) -> (back, 0, L)
(back, 1, *) -> (back, 1, L)
(back, _, *) -> (second, _, R)
(second, 0, *) -> (second, 0, R)
(second, 1, *) -> (second, 1, R)
(second, _, *) -> (accept, _, S)
"""

# Accepts iff the first bit of the state field seen by the iota call is 0,
# i.e. the machine branches on its payload rather than on the tape
PAYLOAD_BRANCH = """
name: payload_branch
states: start, accept, reject
initial: start
accept: accept
reject: reject
policy: state
single_pass: true
(start, *, 0?) -> (accept, *, S)
(start, *, 1?) -> (reject, *, S)
"""

MACHINES = {
    'always_accept': ALWAYS_ACCEPT,
    'right_scanner': RIGHT_SCANNER,
    'parity': PARITY,
    'rescanner': RESCANNER,
    'payload_branch': PAYLOAD_BRANCH,
}


def get_machine(name, policy=None, policy_params=None, single_pass=None):
    """
    Build one of the built-in machines, optionally overriding its iota
    policy and its single-pass declaration.

    Parameters
    ----------
    name : str
        One of the keys of MACHINES
    policy : str or None
        Name of an iota policy to use instead of the machine's own
    policy_params : dict or None
        Keyword arguments for the policy constructor
    single_pass : bool or None
        Overrides the single-pass declaration

    Returns
    -------
    machine : MachineSpec
    """
    try:
        text = MACHINES[name]
    except KeyError:
        raise ValueError(f"Unknown built-in machine {name!r}, choose from {sorted(MACHINES)}") from None

    items = text2dict(text)
    if policy is not None:
        items['policy'] = policy
        items['policy_params'] = dict(policy_params or {})
    elif policy_params is not None:
        items['policy_params'] = dict(policy_params)
    if single_pass is not None:
        items['single_pass'] = single_pass
    log.debug(f"Building machine {name!r} with policy {items.get('policy', 'none')!r}")
    return MachineSpec(**items)
