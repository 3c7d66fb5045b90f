"""
Phase-locked language L_k^phase.

An instance holds k snapshots S_1..S_k, each a map [m] -> {0,1}^l with
l = ceil(log2 m). For the query index q (a global constant, not part of the
encoding) let v_j = S_j(q); the instance is accepted iff f(v_1, ..., v_k) = 1
for the acceptor f.

Wire format: S_1 || ... || S_k, each snapshot as m entries of l bits
(big-endian), for a total length of k*m*l bits.

Snapshot S_j is only visible through introspection of depth j, so a decider
restricted to depth k-1 is blind to S_k.
"""
import hashlib
import logging
import typing

import numpy as np

from ..bitutils import as_bits, bits_to_int, bits_to_str, ceil_log2, int_to_bits
from ..exceptions import MalformedEncoding
from ..machine import Verdict
from ..prng import LCG64, DEFAULT_SEED
from .streaming import BitStream


log = logging.getLogger('psitm.languages.phase_locked')


###############################################################################
# Acceptors
###############################################################################

class DefaultAcceptor(object):
    """ f = LSB(v_k) XOR MSB(v_1): balanced, and depends on the last phase """
    kind = 'default'

    def __call__(self, values, ell):
        return (values[-1] & 1) ^ ((values[0] >> (ell - 1)) & 1)

    def to_dict(self):
        return {'kind': self.kind}


class ConstantAcceptor(object):
    kind = 'constant'

    def __init__(self, value=0):
        self.value = int(bool(value))

    def __call__(self, values, ell):
        return self.value

    def to_dict(self):
        return {'kind': self.kind, 'value': self.value}


class TableAcceptor(object):
    """
    Acceptor given by its truth table over the k*l bits v_1 || ... || v_k,
    read as a big-endian index into 'table'
    """
    kind = 'table'

    def __init__(self, table):
        self.table = as_bits(table)

    def __call__(self, values, ell):
        index = 0
        for v in values:
            index = (index << ell) | int(v)
        if index >= self.table.size:
            raise ValueError(
                f"acceptor truth table has {self.table.size} entries, needs 2^{len(values) * ell}")
        return int(self.table[index])

    def to_dict(self):
        return {'kind': self.kind, 'table': bits_to_str(self.table)}


ACCEPTORS = {
    cls.kind: cls for cls in (DefaultAcceptor, ConstantAcceptor, TableAcceptor)
}


def acceptor_from_dict(items):
    items = dict(items)
    cls = ACCEPTORS[items.pop('kind')]
    return cls(**items)


###############################################################################
# Instances
###############################################################################

def lkphase_encoded_length(k, m):
    return k * m * ceil_log2(m)


class PhaseLockedInstance(object):
    """
    Parameters
    ----------
    snapshots : array_like
        Integer array of shape (k, m) with values in [0, 2^l); row j-1 is S_j
    q : int
        Query index in [1, m]
    acceptor : callable or None
        f(values, ell) -> 0 or 1; DefaultAcceptor if None
    """
    def __init__(self, snapshots, q, acceptor=None):
        snapshots = np.array(snapshots, dtype=np.int64)
        if snapshots.ndim != 2:
            raise ValueError(f"snapshots must be a 2D array of shape (k, m), got shape {snapshots.shape}")
        k, m = snapshots.shape
        if k < 2 or m < 2:
            raise ValueError(f"L_k^phase requires k >= 2 and m >= 2, got k = {k}, m = {m}")
        ell = ceil_log2(m)
        if ((snapshots < 0) | (snapshots >= 1 << ell)).any():
            raise ValueError(f"snapshot entries must lie in [0, 2^{ell})")
        q = int(q)
        if not 1 <= q <= m:
            raise ValueError(f"q must lie in [1, {m}], got {q}")
        snapshots.setflags(write=False)
        self.snapshots = snapshots
        self.q = q
        self.acceptor = acceptor if acceptor is not None else DefaultAcceptor()

    @property
    def k(self):
        return self.snapshots.shape[0]

    @property
    def m(self):
        return self.snapshots.shape[1]

    @property
    def ell(self):
        return ceil_log2(self.m)

    @property
    def length(self):
        return lkphase_encoded_length(self.k, self.m)

    def values(self):
        """ Tuple (v_1, ..., v_k) with v_j = S_j(q) """
        return tuple(int(v) for v in self.snapshots[:, self.q - 1])

    def replace(self, snapshots=None, q=None, acceptor=None):
        return PhaseLockedInstance(
            self.snapshots if snapshots is None else snapshots,
            self.q if q is None else q,
            self.acceptor if acceptor is None else acceptor
        )

    def with_value(self, phase, value):
        """ Copy with S_phase(q) set to 'value' (phase is 1-based) """
        snapshots = self.snapshots.copy()
        snapshots[phase - 1, self.q - 1] = value
        return self.replace(snapshots=snapshots)

    def to_dict(self):
        return {'snapshots': self.snapshots, 'q': self.q, 'acceptor': self.acceptor.to_dict()}

    @classmethod
    def from_dict(cls, items):
        return cls(items['snapshots'], items['q'], acceptor_from_dict(items['acceptor']))

    def __str__(self):
        name = type(self).__name__
        return f"{name}(k={self.k}, m={self.m}, q={self.q}, acceptor={self.acceptor.kind!r})"

    def __repr__(self):
        return str(self)


def lkphase_encode(inst):
    """ Wire bit string of the snapshots, k*m*l bits """
    return bits_to_str(int_to_bits(inst.snapshots, inst.ell).ravel())


def lkphase_decode(bits, k, m, q, acceptor=None):
    """ Inverse of lkphase_encode(); q and the acceptor are supplied by the caller """
    if k < 2 or m < 2:
        raise ValueError(f"lkphase_decode() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    bits = as_bits(bits)
    expected = lkphase_encoded_length(k, m)
    if bits.size != expected:
        raise MalformedEncoding(f"L_k^phase encoding for k = {k}, m = {m} must have {expected} bits, got {bits.size}")
    snapshots = bits_to_int(bits.reshape(k, m, ceil_log2(m)))
    return PhaseLockedInstance(snapshots, q, acceptor)


def lkphase_generate(k, m, seed=DEFAULT_SEED, q=None, acceptor=None):
    """
    Seeded instance: snapshot entries then (if not given) q are drawn from
    an LCG64 seeded with 'seed'
    """
    if k < 2 or m < 2:
        raise ValueError(f"lkphase_generate() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    rng = LCG64(seed)
    ell = ceil_log2(m)
    snapshots = rng.integers(0, 1 << ell, k * m).reshape(k, m)
    if q is None:
        q = 1 + rng.randbelow(m)
    return PhaseLockedInstance(snapshots, q, acceptor)


###############################################################################
# Deciders
###############################################################################

def _verdict(bit):
    return Verdict.ACCEPT if bit else Verdict.REJECT


def lkphase_decide(inst):
    """ Accept iff f(v_1, ..., v_k) = 1 """
    return _verdict(inst.acceptor(inst.values(), inst.ell))


def lkphase_decide_blind(inst):
    """
    Decider restricted to depth k-1: phase k is locked, so S_k(q) is
    unreadable and taken as 0. Wrong on at least one member of any pair that
    differs only in S_k(q) and whose verdicts differ.
    """
    values = inst.values()[:-1] + (0,)
    return _verdict(inst.acceptor(values, inst.ell))


def lkphase_decide_streamed(bits, k, m, q, acceptor=None):
    """
    Streamed decider: phase j = 1..k scans snapshot S_j left to right up to
    the entry of q and stores v_j. Workspace: k*l bits of values plus an
    index counter.

    Returns
    -------
    decision : StreamedDecision
    """
    if k < 2 or m < 2:
        raise ValueError(f"lkphase_decide_streamed() requires k >= 2 and m >= 2, got k = {k}, m = {m}")
    if not 1 <= q <= m:
        raise ValueError(f"q must lie in [1, {m}], got {q}")
    acceptor = acceptor if acceptor is not None else DefaultAcceptor()
    stream = BitStream(bits)
    expected = lkphase_encoded_length(k, m)
    if stream.n != expected:
        raise MalformedEncoding(f"L_k^phase encoding for k = {k}, m = {m} must have {expected} bits, got {stream.n}")

    ell = ceil_log2(m)
    stream.declare_register('values', k * ell)
    stream.declare_register('index', ceil_log2(m + 1))

    values = []
    for j in range(k):
        stream.begin_phase()
        base = j * m * ell
        for index in range(q):
            entry = stream.read_uint(base + index * ell, ell)
        values.append(entry)
    return stream.decision(_verdict(acceptor(tuple(values), ell)))


###############################################################################
# Projections and transcript collisions
###############################################################################

class ViewFingerprint(typing.NamedTuple):
    """ Canonical fingerprint of everything visible through depths 1..depth """
    depth: int
    digest: str
    view: tuple


def lkphase_projection(inst, depth):
    """
    Fingerprint of the view S_1..S_depth of an instance: a SHA-256 digest of
    (k, m, depth, snapshots) plus the raw view.

    Parameters
    ----------
    inst : PhaseLockedInstance
    depth : int
        1 <= depth <= k

    Returns
    -------
    fingerprint : ViewFingerprint
    """
    if not 1 <= depth <= inst.k:
        raise ValueError(f"projection depth must be between 1 and k = {inst.k}, got {depth}")
    view = np.ascontiguousarray(inst.snapshots[:depth], dtype='<i8')
    h = hashlib.sha256()
    h.update(f"{inst.k}:{inst.m}:{depth}:".encode())
    h.update(view.tobytes())
    raw = tuple(tuple(int(x) for x in row) for row in view)
    return ViewFingerprint(depth, h.hexdigest(), raw)


class CollisionReport(typing.NamedTuple):
    """
    Pair of instances that differ only in S_k(q), accepted and rejected
    respectively, with their fingerprints at depths k-1 and k
    """
    k: int
    m: int
    seed: int
    first: PhaseLockedInstance
    second: PhaseLockedInstance
    verdicts: tuple
    blind_verdicts: tuple
    prefix_fingerprints: tuple
    full_fingerprints: tuple

    @property
    def collides(self):
        """ Equal fingerprints at depth k-1 """
        a, b = self.prefix_fingerprints
        return a.digest == b.digest

    @property
    def separates(self):
        """ Different fingerprints at depth k """
        a, b = self.full_fingerprints
        return a.digest != b.digest

    def verify(self):
        """
        Recompute every field from the instance pair and check the collision
        properties. Returns True if all hold.
        """
        pair = (self.first, self.second)
        k = self.first.k
        return (
            self.verdicts == tuple(lkphase_decide(x) for x in pair)
            and self.blind_verdicts == tuple(lkphase_decide_blind(x) for x in pair)
            and self.prefix_fingerprints == tuple(lkphase_projection(x, k - 1) for x in pair)
            and self.full_fingerprints == tuple(lkphase_projection(x, k) for x in pair)
            and self.verdicts == (Verdict.ACCEPT, Verdict.REJECT)
            and self.collides
            and self.separates
        )

    def summary_dict(self):
        return {
            'k': self.k,
            'm': self.m,
            'seed': self.seed,
            'q': self.first.q,
            'verdict_first': str(self.verdicts[0]),
            'verdict_second': str(self.verdicts[1]),
            'prefix_digest_first': self.prefix_fingerprints[0].digest,
            'prefix_digest_second': self.prefix_fingerprints[1].digest,
            'full_digest_first': self.full_fingerprints[0].digest,
            'full_digest_second': self.full_fingerprints[1].digest,
            'collides': self.collides,
            'separates': self.separates,
        }


def lkphase_collision_demo(k, m, seed=DEFAULT_SEED, acceptor=None):
    """
    Build a pair of instances that differ only in S_k(q) and are accepted and
    rejected respectively, then fingerprint both at depths k-1 and k.

    Raises
    ------
    ValueError
        If the acceptor cannot be split by varying v_k alone
    """
    base = lkphase_generate(k, m, seed=seed, acceptor=acceptor)
    accepting, rejecting = None, None
    for value in range(1 << base.ell):
        inst = base.with_value(k, value)
        if lkphase_decide(inst) == Verdict.ACCEPT:
            accepting = accepting or inst
        else:
            rejecting = rejecting or inst
        if accepting and rejecting:
            break
    if not (accepting and rejecting):
        raise ValueError("acceptor does not depend on v_k for this instance: no collision pair exists")

    pair = (accepting, rejecting)
    report = CollisionReport(
        k, m, seed, accepting, rejecting,
        tuple(lkphase_decide(x) for x in pair),
        tuple(lkphase_decide_blind(x) for x in pair),
        tuple(lkphase_projection(x, k - 1) for x in pair),
        tuple(lkphase_projection(x, k) for x in pair),
    )
    log.debug(f"Collision demo k = {k}, m = {m}, seed = {seed}: collides = {report.collides}")
    return report


###############################################################################
# Fooling families
###############################################################################

class PhaseFamilyCertificate(typing.NamedTuple):
    mode: str
    size: int
    log2_size: float
    prefix_collides: bool
    full_distinct: bool
    accepts: int
    rejects: int

    @property
    def valid(self):
        both = self.accepts > 0 and self.rejects > 0
        return self.prefix_collides and self.full_distinct and (self.size < 2 or both)


def lkphase_fooling_family(base, mode='column', count=None):
    """
    Family of instances sharing S_1..S_{k-1} and differing in S_k.

    Parameters
    ----------
    base : PhaseLockedInstance
    mode : str
        'column' varies S_k(q) over all 2^l values; 'matrix' varies the whole
        snapshot S_k, member i being base S_k XOR the bits of i, with the
        least significant bit of i on the LSB of S_k(q)
    count : int or None
        Number of members, 2^l by default. At most 2^l in column mode and 2^(m*l) in matrix mode.

    Returns
    -------
    members : list of PhaseLockedInstance
    certificate : PhaseFamilyCertificate
    """
    k, m, ell = base.k, base.m, base.ell
    if mode == 'column':
        space = ell
    elif mode == 'matrix':
        space = m * ell
    else:
        raise ValueError(f"mode must be 'column' or 'matrix', got {mode!r}")
    if count is None:
        count = 1 << ell
    if not 1 <= count <= 1 << space:
        raise ValueError(f"count must be between 1 and 2^{space}, got {count}")

    members = []
    if mode == 'column':
        for value in range(count):
            members.append(base.with_value(k, value))
    else:
        # Bit positions of S_k as (entry, shift), LSB of S_k(q) first
        positions = [(base.q - 1, 0)]
        positions += [
            (e, s) for e in range(m) for s in range(ell)
            if (e, s) != (base.q - 1, 0)
        ]
        for i in range(count):
            snapshots = base.snapshots.copy()
            for bit, (e, s) in enumerate(positions):
                if (i >> bit) & 1:
                    snapshots[k - 1, e] ^= 1 << s
            members.append(base.replace(snapshots=snapshots))

    prefixes = {lkphase_projection(x, k - 1).digest for x in members}
    fulls = {lkphase_projection(x, k).digest for x in members}
    accepts = sum(lkphase_decide(x) == Verdict.ACCEPT for x in members)
    cert = PhaseFamilyCertificate(
        mode, len(members), float(np.log2(len(members))), len(prefixes) == 1,
        len(fulls) == len(members), accepts, len(members) - accepts)
    return members, cert
