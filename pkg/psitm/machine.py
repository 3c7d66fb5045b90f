"""
Deterministic one-tape machine with a once-per-step introspection call.

At every step the machine's iota policy computes a Payload from the current
configuration; the payload length is checked against the per-step budget
B(d,n) and the payload is then passed to the transition function as an
auxiliary argument.
"""
import enum
import logging
import typing
from dataclasses import dataclass

from .budget import budget_bits
from .exceptions import BudgetViolation, HaltedMachineError
from .payload import Payload
from .policies import get_policy


log = logging.getLogger('psitm.machine')


MOVES = {'L': -1, 'R': +1, 'S': 0}

# Wildcard for both the scanned symbol and the payload pattern. As a written
# symbol, it means "write back the scanned symbol".
WILDCARD = '*'


class Verdict(str, enum.Enum):
    ACCEPT = 'accept'
    REJECT = 'reject'
    TIMEOUT = 'timeout'

    def __str__(self):
        return self.value


class TransitionRow(typing.NamedTuple):
    """ One row (q, a, pattern) -> (q', b, move) of a transition table """
    state: str
    symbol: str
    pattern: str
    next_state: str
    write: str
    move: str

    def matches(self, state, symbol, payload_bits):
        if state != self.state:
            return False
        if self.symbol != WILDCARD and symbol != self.symbol:
            return False
        return pattern_matches(self.pattern, payload_bits)


def pattern_matches(pattern, bits):
    """
    Payload pattern matching: '*' matches any payload; otherwise the pattern
    must have the payload's length, with '0'/'1' matching exactly and '?'
    matching either bit.
    """
    if pattern == WILDCARD:
        return True
    if len(pattern) != len(bits):
        return False
    return all(p == '?' or p == b for p, b in zip(pattern, bits))


class MachineSpec(object):
    """
    Immutable description of a machine and its iota policy.

    Rows are tried in order and the first matching row wins, which keeps the
    transition a function. A non-halting (state, symbol, payload) triple with
    no matching row sends the machine to its reject state, without writing
    or moving.

    Parameters
    ----------
    states : sequence of str
        Ordered state names; the order defines state ids used by policies
    initial, accept, reject : str
        Designated states. accept and reject are absorbing.
    rows : sequence of TransitionRow or tuple
    alphabet : sequence of str
        Tape alphabet; must contain '0', '1' and the blank
    blank : str
        Blank symbol
    policy : str
        Name of a built-in iota policy (see psitm.policies)
    policy_params : dict or None
        Keyword arguments passed to the policy constructor
    single_pass : bool
        Declares that the head never moves left; audited by run()
    name : str
    """
    def __init__(self, states, initial, accept, reject, rows, alphabet=('0', '1', '_'),
                 blank='_', policy='none', policy_params=None, single_pass=False, name='machine'):
        self.name = str(name)
        self.states = tuple(states)
        self.initial = initial
        self.accept = accept
        self.reject = reject
        self.blank = blank
        self.alphabet = tuple(alphabet)
        self.single_pass = bool(single_pass)
        self.policy_name = policy
        self.policy_params = dict(policy_params or {})
        self.policy = get_policy(policy, **self.policy_params)
        self.rows = tuple(TransitionRow(*row) for row in rows)
        self._state_ids = {q: ii for ii, q in enumerate(self.states)}
        self._validate()

    def _validate(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"Machine {self.name!r}: duplicate state names")
        for role in ('initial', 'accept', 'reject'):
            q = getattr(self, role)
            if q not in self._state_ids:
                raise ValueError(f"Machine {self.name!r}: {role} state {q!r} is not in the state list")
        if self.accept == self.reject:
            raise ValueError(f"Machine {self.name!r}: accept and reject states must differ")
        for sym in ('0', '1', self.blank):
            if sym not in self.alphabet:
                raise ValueError(f"Machine {self.name!r}: tape alphabet must contain {sym!r}")

        seen = set()
        for row in self.rows:
            if row.state in (self.accept, self.reject):
                raise ValueError(f"Machine {self.name!r}: halting state {row.state!r} must be absorbing")
            for q in (row.state, row.next_state):
                if q not in self._state_ids:
                    raise ValueError(f"Machine {self.name!r}: unknown state {q!r} in row {row}")
            for sym in (row.symbol, row.write):
                if sym != WILDCARD and sym not in self.alphabet:
                    raise ValueError(f"Machine {self.name!r}: symbol {sym!r} not in tape alphabet")
            if row.move not in MOVES:
                raise ValueError(f"Machine {self.name!r}: move must be one of L, R, S, got {row.move!r}")
            if row.pattern != WILDCARD and row.pattern.strip('01?'):
                raise ValueError(f"Machine {self.name!r}: invalid payload pattern {row.pattern!r}")
            key = (row.state, row.symbol, row.pattern)
            if key in seen:
                raise ValueError(f"Machine {self.name!r}: duplicate transition row for {key}")
            seen.add(key)

    def state_index(self, q):
        return self._state_ids[q]

    def is_halting(self, q):
        return q == self.accept or q == self.reject

    def lookup(self, state, symbol, payload_bits):
        """ First matching transition row, or None """
        for row in self.rows:
            if row.matches(state, symbol, payload_bits):
                return row
        return None

    def __str__(self):
        name = type(self).__name__
        return (f"{name}(name={self.name!r}, states={len(self.states)}, rows={len(self.rows)}, "
                f"policy={self.policy_name!r}, single_pass={self.single_pass})")

    def __repr__(self):
        return str(self)


@dataclass(frozen=True)
class Configuration:
    """
    Immutable machine configuration. The tape is unbounded in both directions
    and blank-filled; 'right_tape' holds cells 0, 1, 2, ... and 'left_tape'
    holds cells -1, -2, ... in that order. The head always lies within the
    stored extent.
    """
    state: str
    left_tape: tuple
    right_tape: tuple
    head: int = 0
    step_index: int = 0
    blank: str = '_'

    @classmethod
    def initial(cls, machine, word):
        """ Initial configuration with 'word' written from cell 0 """
        cells = tuple(str(word)) or (machine.blank,)
        return cls(machine.initial, (), cells, 0, 0, machine.blank)

    def read(self, pos):
        if pos >= 0:
            return self.right_tape[pos] if pos < len(self.right_tape) else self.blank
        ii = -pos - 1
        return self.left_tape[ii] if ii < len(self.left_tape) else self.blank

    @property
    def scanned(self):
        return self.read(self.head)

    def _written(self, pos, symbol):
        """ (left_tape, right_tape) after writing 'symbol' at 'pos' """
        left, right = self.left_tape, self.right_tape
        if self.read(pos) == symbol:
            return left, right
        if pos >= 0:
            right = right + (self.blank,) * (pos + 1 - len(right))
            return left, right[:pos] + (symbol,) + right[pos + 1:]
        ii = -pos - 1
        left = left + (self.blank,) * (ii + 1 - len(left))
        return left[:ii] + (symbol,) + left[ii + 1:], right

    def advance(self, state, symbol, move):
        """ Configuration after writing 'symbol', moving and entering 'state' """
        left, right = self._written(self.head, symbol)
        head = self.head + MOVES[move]
        # Keep the head inside the stored extent
        if head >= len(right):
            right = right + (self.blank,)
        elif head < -len(left):
            left = left + (self.blank,)
        return Configuration(state, left, right, head, self.step_index + 1, self.blank)

    def tape_string(self):
        return ''.join(reversed(self.left_tape)) + ''.join(self.right_tape)


class StepRecord(typing.NamedTuple):
    """ Ledger entry of one executed step """
    step_index: int
    payload: Payload
    state_before: str
    state_after: str
    head_move: str
    head_position: int


def step(m, cfg, spec, n):
    """
    Execute one step: evaluate the iota policy exactly once, check the
    payload against the budget, then apply the transition.

    Parameters
    ----------
    m : MachineSpec
    cfg : Configuration
    spec : IotaSpec
    n : int
        Input length used for metering, >= 2

    Returns
    -------
    cfg : Configuration
        Next configuration
    record : StepRecord

    Raises
    ------
    HaltedMachineError
        If cfg is in an absorbing state
    BudgetViolation
        If the payload is longer than budget_bits(spec, n)
    """
    if m.is_halting(cfg.state):
        raise HaltedMachineError(
            f"Machine {m.name!r} is halted in state {cfg.state!r} at step {cfg.step_index}")

    payload = m.policy(m, cfg, n, spec)
    budget = budget_bits(spec, n)
    if payload.length > budget:
        raise BudgetViolation(cfg.step_index, payload.length, budget)

    symbol = cfg.scanned
    row = m.lookup(cfg.state, symbol, payload.bits)
    if row is None:
        next_state, write, move = m.reject, symbol, 'S'
    else:
        next_state = row.next_state
        write = symbol if row.write == WILDCARD else row.write
        move = row.move

    new = cfg.advance(next_state, write, move)
    record = StepRecord(cfg.step_index, payload, cfg.state, next_state, move, new.head)
    return new, record
