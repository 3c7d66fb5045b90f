"""
Introspection payloads and their canonical packed layout.

A canonical payload is a fixed-width record made of the following fields,
in order:

- state : id of the current state, on ceil(log2 |Q|) bits
- head  : head position modulo 2^ceil(log2 n), on ceil(log2 n) bits
- win1 .. wind : one local window per depth j = 1..d. Window j covers the 3
  cells centred on position head + 3 * (j - 1), each cell on 2 bits
  (0 -> 00, 1 -> 01, blank -> 10, any other symbol -> 11)

When the budget B(d,n) is smaller than the full record, whole fields are
dropped from the tail; the corresponding views are then unavailable.
"""
import logging
import typing

from .bitutils import ceil_log2, bits_to_hex
from .budget import budget_bits
from .exceptions import IntrospectionDepthError, ViewUnavailable, MalformedEncoding


log = logging.getLogger('psitm.payload')


# Window geometry
WINDOW_RADIUS = 1
WINDOW_CELLS = 2 * WINDOW_RADIUS + 1
CELL_BITS = 2

# Cell codes inside a window
CODE_ZERO = 0
CODE_ONE = 1
CODE_BLANK = 2
CODE_OTHER = 3


class Payload(typing.NamedTuple):
    """ Bit string returned by one introspection call """
    bits: str = ''

    @property
    def length(self):
        return len(self.bits)

    def to_hex(self):
        return bits_to_hex(self.bits)


def cell_code(symbol, blank):
    """ 2-bit code of a tape symbol inside a window """
    if symbol == '0':
        return CODE_ZERO
    if symbol == '1':
        return CODE_ONE
    if symbol == blank:
        return CODE_BLANK
    return CODE_OTHER


def window_centre(head, depth):
    """ Tape position at the centre of the window of given depth (1-based) """
    return head + WINDOW_CELLS * (depth - 1)


class PayloadLayout(object):
    """
    Canonical field layout of the payload for a given machine size, input
    length and introspection interface.

    Parameters
    ----------
    num_states : int
        Number of machine states |Q|, >= 1
    n : int
        Input length, >= 2
    spec : IotaSpec
    """
    def __init__(self, num_states, n, spec):
        if num_states < 1:
            raise ValueError(f"num_states must be >= 1, got {num_states}")
        self.num_states = int(num_states)
        self.n = int(n)
        self.spec = spec
        self.budget = budget_bits(spec, n)
        self.state_bits = ceil_log2(self.num_states)
        self.head_bits = ceil_log2(self.n)

        full = [('state', self.state_bits), ('head', self.head_bits)]
        full += [(f'win{j}', WINDOW_CELLS * CELL_BITS) for j in range(1, spec.d + 1)]

        self.fields = []
        used = 0
        for name, width in full:
            if used + width > self.budget:
                break
            self.fields.append((name, used, width))
            used += width
        self.dropped = [name for name, __ in full[len(self.fields):]]
        self.width = used
        if self.dropped:
            log.debug(
                f"Budget of {self.budget} bits too small for full payload record, "
                f"dropped fields: {self.dropped}")

    def has_field(self, name):
        return any(f == name for f, __, __ in self.fields)

    def encode(self, state_id, head, windows=()):
        """
        Pack a view tuple into a Payload. 'windows' is a sequence of 3-tuples
        of cell codes, one per depth 1..d; only the fields kept by the layout
        are written.
        """
        values = {'state': int(state_id), 'head': int(head) % (1 << self.head_bits)}
        for j, window in enumerate(windows, start=1):
            window = tuple(window)
            if len(window) != WINDOW_CELLS or not all(0 <= c <= CODE_OTHER for c in window):
                raise ValueError(f"window {j} must be {WINDOW_CELLS} cell codes in [0, 3], got {window}")
            code = 0
            for c in window:
                code = (code << CELL_BITS) | c
            values[f'win{j}'] = code

        if not 0 <= values['state'] < self.num_states:
            raise ValueError(f"state id {state_id} out of range for {self.num_states} states")

        chunks = []
        for name, __, width in self.fields:
            if name not in values:
                raise ValueError(f"missing value for payload field {name!r}")
            chunks.append(format(values[name], f'0{width}b') if width else '')
        return Payload(''.join(chunks))

    def decode(self, y):
        """ Split a canonical payload into its fields; returns SelectorViews """
        bits = y.bits if isinstance(y, Payload) else str(y)
        if len(bits) != self.width or bits.strip('01'):
            raise MalformedEncoding(
                f"canonical payload must be {self.width} bits over {{0,1}}, got {len(bits)} symbols")
        values = {}
        for name, offset, width in self.fields:
            chunk = bits[offset:offset + width]
            values[name] = int(chunk, 2) if width else 0
        return SelectorViews(self, values)

    def __str__(self):
        name = type(self).__name__
        fields = ', '.join(f'{f}:{w}' for f, __, w in self.fields)
        return f"{name}(budget={self.budget}, fields=[{fields}])"

    def __repr__(self):
        return str(self)


class SelectorViews(object):
    """
    Read-only selector views on a decoded payload. Views of depth greater
    than the interface depth d cannot be obtained.
    """
    def __init__(self, layout, values):
        self._layout = layout
        self._values = dict(values)

    @property
    def depth(self):
        return self._layout.spec.d

    def _get(self, name):
        if name not in self._values:
            raise ViewUnavailable(
                f"view {name!r} was dropped from the payload (budget {self._layout.budget} bits)")
        return self._values[name]

    def view_state(self):
        """ Encoded state id """
        return self._get('state')

    def view_head(self):
        """ Head position field, modulo 2^ceil(log2 n) """
        return self._get('head')

    def view_win(self, depth):
        """
        Local window of the given depth, as a tuple of 3 cell codes.
        Raises IntrospectionDepthError if depth is not in [1, d].
        """
        if not 1 <= depth <= self.depth:
            raise IntrospectionDepthError(
                f"window depth must be between 1 and the interface depth {self.depth}, got {depth}")
        code = self._get(f'win{depth}')
        mask = (1 << CELL_BITS) - 1
        shifts = range(CELL_BITS * (WINDOW_CELLS - 1), -1, -CELL_BITS)
        return tuple((code >> s) & mask for s in shifts)


def decode_payload(y, spec, num_states, n):
    """
    Decode a payload produced by the canonical policy.

    Parameters
    ----------
    y : Payload or str
    spec : IotaSpec
    num_states : int
        Number of states of the machine that produced the payload
    n : int
        Input length of the run

    Returns
    -------
    views : SelectorViews
    """
    return PayloadLayout(num_states, n, spec).decode(y)
