import hashlib
import logging

import pandas

from .budget import IotaSpec, budget_bits
from .depth import Word
from .exceptions import BudgetViolation, SinglePassViolation
from .machine import Configuration, StepRecord, Verdict, step
from .payload import Payload
from .timing import timing


log = logging.getLogger('psitm.ledger')


LEDGER_COLUMNS = ['step', 'payload_bits', 'payload_hex', 'state_before', 'state_after', 'move']


class BudgetLedger(object):
    """
    Cumulative accounting of introspection bits over one run, against the
    per-step budget B(d,n).

    Parameters
    ----------
    n : int
        Input length used for metering, >= 2
    spec : IotaSpec
    steps : list of StepRecord, optional
    """
    def __init__(self, n, spec, steps=()):
        self.n = int(n)
        self.spec = spec
        self.budget = budget_bits(spec, n)
        self.steps = []
        for record in steps:
            self.append(record)

    def append(self, record):
        """ Append the record of the next executed step """
        if record.step_index != len(self.steps):
            raise ValueError(
                f"Expected record for step {len(self.steps)}, got step {record.step_index}")
        if record.payload.length > self.budget:
            raise BudgetViolation(record.step_index, record.payload.length, self.budget)
        self.steps.append(record)

    @property
    def num_steps(self):
        return len(self.steps)

    @property
    def total_bits(self):
        return sum(r.payload.length for r in self.steps)

    @property
    def transcript(self):
        """ Tuple of payload bit strings, one per executed step """
        return tuple(r.payload.bits for r in self.steps)

    @property
    def head_positions(self):
        return [r.head_position for r in self.steps]

    def within_budget(self):
        """ True if total_bits <= T * B(d,n) and every step is within budget """
        return (
            all(r.payload.length <= self.budget for r in self.steps)
            and self.total_bits <= self.num_steps * self.budget
        )

    def is_single_pass(self):
        """ True if the head never moved left """
        return all(r.head_move != 'L' for r in self.steps)

    def to_dataframe(self):
        rows = [
            (r.step_index, r.payload.length, r.payload.to_hex(), r.state_before, r.state_after, r.head_move)
            for r in self.steps
        ]
        return pandas.DataFrame(rows, columns=LEDGER_COLUMNS)

    def to_csv(self, fname=None):
        """ Write the ledger as CSV; returns the CSV text if fname is None """
        return self.to_dataframe().to_csv(fname, sep=',', index=False)

    def digest(self):
        """ SHA-256 hex digest of the full ledger, used by determinism replays """
        h = hashlib.sha256()
        for r in self.steps:
            h.update(repr(tuple(r)).encode())
        return h.hexdigest()

    def to_dict(self):
        return {
            'n': self.n,
            'spec': self.spec,
            'steps': [
                [r.step_index, r.payload.bits, r.state_before, r.state_after, r.head_move, r.head_position]
                for r in self.steps
            ]
        }

    @classmethod
    def from_dict(cls, items):
        spec = items['spec']
        if isinstance(spec, dict):
            spec = IotaSpec.from_dict(spec)
        steps = [
            StepRecord(int(t), Payload(bits), qb, qa, mv, int(hp))
            for t, bits, qb, qa, mv, hp in items['steps']
        ]
        return cls(items['n'], spec, steps)

    def __str__(self):
        name = type(self).__name__
        return (f"{name}(n={self.n}, spec={self.spec}, steps={self.num_steps}, "
                f"total_bits={self.total_bits}, budget={self.budget})")

    def __repr__(self):
        return str(self)


def metered_length(word):
    """ Input length used for budget metering; inputs shorter than 2 are metered as n = 2 """
    return max(len(word), 2)


def run(m, word, spec, max_steps, audit=True):
    """
    Run a machine on an input word for at most max_steps steps.

    Parameters
    ----------
    m : MachineSpec
    word : Word, str or array_like
    spec : IotaSpec
    max_steps : int
        Step horizon, >= 1
    audit : bool
        If True and the machine is declared single-pass, raise
        SinglePassViolation as soon as the head moves left

    Returns
    -------
    verdict : Verdict
    ledger : BudgetLedger

    Raises
    ------
    BudgetViolation
    SinglePassViolation
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    word = Word.coerce(word)
    n = metered_length(word)
    cfg = Configuration.initial(m, str(word))
    ledger = BudgetLedger(n, spec)

    while not m.is_halting(cfg.state) and ledger.num_steps < max_steps:
        cfg, record = step(m, cfg, spec, n)
        ledger.append(record)
        if audit and m.single_pass and record.head_move == 'L':
            raise SinglePassViolation(
                f"Machine {m.name!r} is declared single-pass but moved left at step {record.step_index}")

    if cfg.state == m.accept:
        verdict = Verdict.ACCEPT
    elif cfg.state == m.reject:
        verdict = Verdict.REJECT
    else:
        verdict = Verdict.TIMEOUT
    log.debug(f"Run of {m.name!r} on n = {len(word)}: {verdict} after {ledger.num_steps} steps")
    return verdict, ledger


@timing
def count_transcripts(m, inputs, spec, T):
    """
    Number of distinct transcript prefixes of length <= T over a family of
    inputs of common length. The result is at most
    2^(T * budget_bits(spec, n)).

    Parameters
    ----------
    m : MachineSpec
    inputs : iterable of Word, str or array_like
    spec : IotaSpec
    T : int
        Step horizon, >= 1

    Returns
    -------
    count : int
    """
    words = [Word.coerce(w) for w in inputs]
    lengths = {w.length for w in words}
    if len(lengths) > 1:
        raise ValueError(f"count_transcripts() requires inputs of a single length, got lengths {sorted(lengths)}")
    transcripts = set()
    for w in words:
        __, ledger = run(m, w, spec, T)
        transcripts.add(ledger.transcript)
    log.debug(f"{len(transcripts)} distinct transcripts over {len(words)} inputs, T = {T}")
    return len(transcripts)
