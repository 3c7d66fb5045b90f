import logging
import typing

from ..bitutils import as_bits
from ..exceptions import SinglePassViolation


log = logging.getLogger('psitm.languages.streaming')


class StreamedDecision(typing.NamedTuple):
    """ Verdict of a streamed decider together with its resource audit """
    verdict: object
    n: int
    reads: int
    phases: int
    workspace_bits: int

    def summary_dict(self):
        return {
            'verdict': str(self.verdict),
            'n': self.n,
            'reads': self.reads,
            'phases': self.phases,
            'workspace_bits': self.workspace_bits,
        }


class BitStream(object):
    """
    Read-only input tape accessed in left-to-right phases. Within a phase,
    every read must be strictly to the right of the previous one; the number
    of reads and of phases is recorded.

    Parameters
    ----------
    bits : str or array_like
    """
    def __init__(self, bits):
        self._bits = as_bits(bits)
        self.reads = 0
        self.phases = 0
        self._last = None
        self.registers = {}

    @property
    def n(self):
        return int(self._bits.size)

    def begin_phase(self):
        """ Rewind the head to the left end for a new pass """
        self.phases += 1
        self._last = None

    def read(self, pos):
        if self.phases == 0:
            raise SinglePassViolation("read() called before the first phase began")
        if not 0 <= pos < self.n:
            raise IndexError(f"read position {pos} outside the input (n = {self.n})")
        if self._last is not None and pos <= self._last:
            raise SinglePassViolation(
                f"Phase {self.phases}: read at position {pos} is not after the previous read at {self._last}")
        self._last = pos
        self.reads += 1
        return int(self._bits[pos])

    def read_uint(self, start, width):
        """ Read 'width' consecutive bits from 'start' as a big-endian integer """
        value = 0
        for pos in range(start, start + width):
            value = (value << 1) | self.read(pos)
        return value

    def declare_register(self, name, width):
        """ Record a workspace register of the given bit width """
        self.registers[name] = int(width)

    @property
    def workspace_bits(self):
        return sum(self.registers.values())

    def decision(self, verdict):
        return StreamedDecision(verdict, self.n, self.reads, self.phases, self.workspace_bits)
