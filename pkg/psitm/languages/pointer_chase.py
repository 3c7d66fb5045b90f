"""
Pointer-chase language L_k.

An instance holds k function tables T_1..T_k over [m] = {1..m}, a tail
b : [m] -> {0,1} and a start s in [m]. With u_0 = s and u_j = T_j(u_{j-1}),
the instance belongs to L_k iff b(u_k) = 1.

Wire format, with w = ceil(log2 m):

    T_1 || T_2 || ... || T_k || b || s

Each table is m entries of w bits (value - 1, big-endian), b is m bits and
s is value - 1 on w bits, for a total length of k*m*w + m + w bits.
"""
import logging
import typing
from math import ceil

import numpy as np

from ..bitutils import as_bits, bits_to_str, bits_to_int, ceil_log2, int_to_bits
from ..exceptions import MalformedEncoding
from ..machine import Verdict
from ..prng import LCG64, DEFAULT_SEED
from ..timing import timing
from .streaming import BitStream


log = logging.getLogger('psitm.languages.pointer_chase')


def lk_encoded_length(k, m):
    w = ceil_log2(m)
    return k * m * w + m + w


class PointerChaseInstance(object):
    """
    Parameters
    ----------
    tables : array_like
        Integer array of shape (k, m) with 1-based values in [1, m];
        row j-1 is the table T_j
    tail : array_like
        Array of m bits; tail[x-1] = b(x)
    start : int
        Start index s in [1, m]
    """
    def __init__(self, tables, tail, start):
        tables = np.array(tables, dtype=np.int64)
        if tables.ndim != 2:
            raise ValueError(f"tables must be a 2D array of shape (k, m), got shape {tables.shape}")
        k, m = tables.shape
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        if m < 2:
            raise ValueError(f"m must be >= 2, got {m}")
        if ((tables < 1) | (tables > m)).any():
            raise ValueError(f"table entries must lie in [1, {m}]")
        tail = as_bits(tail)
        if tail.size != m:
            raise ValueError(f"tail must have m = {m} bits, got {tail.size}")
        start = int(start)
        if not 1 <= start <= m:
            raise ValueError(f"start must lie in [1, {m}], got {start}")

        tables.setflags(write=False)
        tail.setflags(write=False)
        self.tables = tables
        self.tail = tail
        self.start = start

    @property
    def k(self):
        return self.tables.shape[0]

    @property
    def m(self):
        return self.tables.shape[1]

    @property
    def width(self):
        """ Bits per table entry, ceil(log2 m) """
        return ceil_log2(self.m)

    @property
    def length(self):
        return lk_encoded_length(self.k, self.m)

    def chain(self):
        """ Pointer chain [u_0, u_1, ..., u_k] """
        u = [self.start]
        for j in range(self.k):
            u.append(int(self.tables[j, u[-1] - 1]))
        return u

    def replace(self, tables=None, tail=None, start=None):
        """ Copy of the instance with some components replaced """
        return PointerChaseInstance(
            self.tables if tables is None else tables,
            self.tail if tail is None else tail,
            self.start if start is None else start
        )

    def __eq__(self, other):
        if not isinstance(other, PointerChaseInstance):
            return NotImplemented
        return (
            np.array_equal(self.tables, other.tables)
            and np.array_equal(self.tail, other.tail)
            and self.start == other.start
        )

    def to_dict(self):
        return {'tables': self.tables, 'tail': self.tail, 'start': self.start}

    @classmethod
    def from_dict(cls, items):
        return cls(items['tables'], items['tail'], items['start'])

    def __str__(self):
        name = type(self).__name__
        return f"{name}(k={self.k}, m={self.m}, start={self.start}, n={self.length})"

    def __repr__(self):
        return str(self)


def lk_encode(inst):
    """
    Canonical bit string of an L_k instance

    Returns
    -------
    bits : str
        String over {'0', '1'} of length k*m*w + m + w
    """
    w = inst.width
    parts = [
        int_to_bits(inst.tables - 1, w).ravel(),
        inst.tail,
        int_to_bits(inst.start - 1, w).ravel()
    ]
    return bits_to_str(np.concatenate(parts))


def lk_decode(bits, k, m):
    """
    Inverse of lk_encode(). Raises MalformedEncoding if the length does not
    match (k, m) or an entry lies outside [1, m].
    """
    if k < 2 or m < 2:
        raise ValueError(f"lk_decode() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    bits = as_bits(bits)
    expected = lk_encoded_length(k, m)
    if bits.size != expected:
        raise MalformedEncoding(f"L_k encoding for k = {k}, m = {m} must have {expected} bits, got {bits.size}")

    w = ceil_log2(m)
    nt = k * m * w
    tables = bits_to_int(bits[:nt].reshape(k, m, w)) + 1
    tail = bits[nt:nt + m]
    start = int(bits_to_int(bits[nt + m:])) + 1
    if (tables > m).any() or start > m:
        raise MalformedEncoding(f"L_k encoding has indices outside [1, {m}]")
    return PointerChaseInstance(tables, tail, start)


def lk_decide(inst):
    """ In-memory decider: accept iff b(u_k) = 1 """
    u_k = inst.chain()[-1]
    return Verdict.ACCEPT if inst.tail[u_k - 1] else Verdict.REJECT


def lk_decide_streamed(bits, k, m):
    """
    Streamed decider over the wire format, in k + 1 left-to-right phases.
    The start index s is the last field of the wire, so phase 0 is a
    leading pass that skips to the end and reads it; phase j = 1..k then
    scans table T_j and keeps the entry at the current pointer, and the
    last phase continues into the tail b. The workspace is a constant
    number of w-bit registers.

    Returns
    -------
    decision : StreamedDecision
    """
    if k < 2 or m < 2:
        raise ValueError(f"lk_decide_streamed() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    stream = BitStream(bits)
    expected = lk_encoded_length(k, m)
    if stream.n != expected:
        raise MalformedEncoding(f"L_k encoding for k = {k}, m = {m} must have {expected} bits, got {stream.n}")

    w = ceil_log2(m)
    for name, width in (('pointer', w), ('index', w), ('entry', w), ('phase', ceil_log2(k + 2)), ('bit', 1)):
        stream.declare_register(name, width)

    tail_start = k * m * w
    stream.begin_phase()
    u = stream.read_uint(tail_start + m, w)
    if u >= m:
        raise MalformedEncoding(f"start index {u + 1} outside [1, {m}]")

    for j in range(k):
        stream.begin_phase()
        base = j * m * w
        nxt = None
        for index in range(m):
            entry = stream.read_uint(base + index * w, w)
            if entry >= m:
                raise MalformedEncoding(f"entry {index + 1} of table {j + 1} is outside [1, {m}]")
            if index == u:
                nxt = entry
        u = nxt

    accept = False
    for index in range(m):
        bit = stream.read(tail_start + index)
        if index == u:
            accept = bool(bit)
    verdict = Verdict.ACCEPT if accept else Verdict.REJECT
    return stream.decision(verdict)


def lk_generate(k, m, seed=DEFAULT_SEED):
    """
    Seeded L_k instance: table entries, tail bits and start are drawn in
    that order from an LCG64 seeded with 'seed'.
    """
    if k < 2 or m < 2:
        raise ValueError(f"lk_generate() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    rng = LCG64(seed)
    tables = rng.integers(1, m + 1, k * m).reshape(k, m)
    tail = rng.bits(m)
    start = 1 + rng.randbelow(m)
    return PointerChaseInstance(tables, tail, start)


class FoolingFamilyParams(typing.NamedTuple):
    """
    Parameters of an L_k fooling family.

    base : PointerChaseInstance
        Instance providing T_1..T_{k-1}, s and the components outside S
    S : sequence of int or None
        Varying set, 1-based; by default the routed positions u_{k-1} and
        u_k followed by the smallest other indices, up to ceil(alpha * m)
    alpha : float
        Target entropy rate
    rate : str
        'symbol' for a target log2|F| = alpha * m, 'bit' for alpha * m * w
    vary_tables : bool
        Also vary T_k on S (except at u_{k-1}, which keeps the routing)
    seed : int
        Seed for the T_k variations
    """
    base: PointerChaseInstance
    S: typing.Optional[tuple] = None
    alpha: float = 0.9
    rate: str = 'symbol'
    vary_tables: bool = False
    seed: int = DEFAULT_SEED


def min_varying_size(m):
    """ Smallest admissible varying set size, ceil(0.9 m), in integer arithmetic """
    return (9 * m + 9) // 10


class FoolingCertificate(typing.NamedTuple):
    """ Verification report of a fooling family """
    size: int
    varying_set: tuple
    agree_outside: bool
    accepts: int
    rejects: int
    variation_log2: float
    target_log2: float

    @property
    def valid(self):
        both = self.accepts > 0 and self.rejects > 0
        return self.agree_outside and (self.size < 2 or both)

    def summary_dict(self):
        d = self._asdict()
        d['varying_set'] = ' '.join(map(str, self.varying_set))
        d['valid'] = self.valid
        return d


def default_varying_set(base, alpha=0.9):
    chain = base.chain()
    routed = [chain[-1], chain[-2]]
    size = max(ceil(alpha * base.m), min_varying_size(base.m), 2)
    S = list(dict.fromkeys(routed))
    S += [x for x in range(1, base.m + 1) if x not in S][:size - len(S)]
    return tuple(S)


def certify_family(base, members, S, target_log2=0.0, variation_log2=0.0):
    """
    Check that all members agree with 'base' on T_1..T_{k-1}, on s, and on
    (T_k, b) outside S, and count their verdicts
    """
    outside = np.ones(base.m, dtype=bool)
    outside[np.asarray(S, dtype=np.int64) - 1] = False
    agree = True
    for inst in members:
        agree &= (
            np.array_equal(inst.tables[:-1], base.tables[:-1])
            and inst.start == base.start
            and np.array_equal(inst.tables[-1][outside], base.tables[-1][outside])
            and np.array_equal(inst.tail[outside], base.tail[outside])
        )
    verdicts = [lk_decide(inst) for inst in members]
    accepts = sum(v == Verdict.ACCEPT for v in verdicts)
    return FoolingCertificate(
        len(members), tuple(S), bool(agree), accepts, len(members) - accepts,
        float(variation_log2), float(target_log2))


@timing
def lk_fooling_family(p, count):
    """
    Build 'count' L_k instances that differ only inside the varying set S.

    Member i sets b on S from the bits of i, the least significant bit going
    to the routed position u_k, so that consecutive members answer
    differently. With vary_tables, T_k is also redrawn on S except at u_{k-1}.

    Parameters
    ----------
    p : FoolingFamilyParams
    count : int
        Number of members, 1 <= count <= 2^|S|

    Returns
    -------
    members : list of PointerChaseInstance
    certificate : FoolingCertificate
    """
    base = p.base
    m, w = base.m, base.width
    if p.rate not in ('symbol', 'bit'):
        raise ValueError(f"rate must be 'symbol' or 'bit', got {p.rate!r}")

    S = default_varying_set(base, p.alpha) if p.S is None else tuple(int(x) for x in p.S)
    if len(set(S)) != len(S) or not all(1 <= x <= m for x in S):
        raise ValueError(f"varying set must contain distinct indices in [1, {m}]")
    if len(S) < min_varying_size(m):
        raise ValueError(f"varying set must have at least ceil(0.9 m) = {min_varying_size(m)} elements")
    if not 1 <= count <= 2 ** len(S):
        raise ValueError(f"count must be between 1 and 2^|S| = 2^{len(S)}, got {count}")

    chain = base.chain()
    u_prev, u_k = chain[-2], chain[-1]
    order = ([u_k] if u_k in S else []) + [x for x in S if x != u_k]
    free_rows = [x for x in S if x != u_prev]

    members = []
    for i in range(count):
        tail = base.tail.copy()
        for bit, x in enumerate(order):
            tail[x - 1] = (i >> bit) & 1
        tables = base.tables
        if p.vary_tables and free_rows:
            tables = base.tables.copy()
            rng = LCG64(p.seed + i)
            for x in free_rows:
                tables[-1, x - 1] = 1 + rng.randbelow(m)
        members.append(base.replace(tables=tables, tail=tail))

    target = p.alpha * m * (w if p.rate == 'bit' else 1)
    variation = len(S) + (len(free_rows) * w if p.vary_tables else 0)
    cert = certify_family(base, members, S, target_log2=target, variation_log2=variation)
    log.debug(f"Fooling family k = {base.k}, m = {m}, |S| = {len(S)}: {cert}")
    return members, cert
