"""
Binary file container for language instances.

Layout:

    offset  size  content
    0       6     magic b'PSITM1'
    6       1     language tag (1 = L_k, 2 = L_k^phase, 3 = tree)
    7       1     reserved, zero
    8       4     k, little-endian u32 (declared depth for trees)
    12      4     m, little-endian u32 (padding length for trees)
    16      ...   wire bit string packed MSB first, zero-filled to a byte boundary
"""
import os
import struct
import logging
import typing

import numpy as np

from ..bitutils import as_bits
from ..exceptions import MalformedEncoding
from .pointer_chase import PointerChaseInstance, lk_encode, lk_decode, lk_encoded_length
from .phase_locked import PhaseLockedInstance, lkphase_encode, lkphase_decode, lkphase_encoded_length
from .tree_eval import TreeInstance, tree_encode, tree_decode, tree_code_end


log = logging.getLogger('psitm.languages.container')


MAGIC = b'PSITM1'
HEADER_FORMAT = '<6sBBII'
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)

TAG_LK = 1
TAG_PHASE = 2
TAG_TREE = 3


class ContainerHeader(typing.NamedTuple):
    tag: int
    k: int
    m: int


def read_header(data):
    """ Parse and validate the 16-byte header at the start of 'data' """
    if len(data) < HEADER_SIZE:
        raise MalformedEncoding(f"container is {len(data)} bytes long, shorter than its {HEADER_SIZE}-byte header")
    magic, tag, reserved, k, m = struct.unpack(HEADER_FORMAT, data[:HEADER_SIZE])
    if magic != MAGIC:
        raise MalformedEncoding(f"container starts with {magic!r} instead of the expected {MAGIC!r}")
    if tag not in (TAG_LK, TAG_PHASE, TAG_TREE):
        raise MalformedEncoding(f"unknown language tag {tag}")
    if reserved != 0:
        raise MalformedEncoding(f"reserved header byte must be zero, got {reserved}")
    return ContainerHeader(tag, k, m)


def pack_bits(bits):
    """ Pack a bit string MSB first, zero-filled to a byte boundary """
    return np.packbits(as_bits(bits)).tobytes()


def unpack_bits(payload, nbits):
    """ Inverse of pack_bits(); checks the byte count and that fill bits are zero """
    expected = -(-nbits // 8)
    if len(payload) != expected:
        raise MalformedEncoding(f"expected {expected} payload bytes for {nbits} bits, got {len(payload)}")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bits[nbits:].any():
        raise MalformedEncoding("non-zero fill bits after the end of the bit string")
    return bits[:nbits]


def pack_instance(inst):
    """
    Serialize an instance into container bytes.

    Parameters
    ----------
    inst : PointerChaseInstance, PhaseLockedInstance or TreeInstance

    Returns
    -------
    data : bytes
    """
    if isinstance(inst, PointerChaseInstance):
        tag, k, m, bits = TAG_LK, inst.k, inst.m, lk_encode(inst)
    elif isinstance(inst, PhaseLockedInstance):
        tag, k, m, bits = TAG_PHASE, inst.k, inst.m, lkphase_encode(inst)
    elif isinstance(inst, TreeInstance):
        tag, k, m, bits = TAG_TREE, inst.declared_depth, inst.padding, tree_encode(inst)
    else:
        raise ValueError(f"Cannot pack object of type {type(inst).__name__}")
    header = struct.pack(HEADER_FORMAT, MAGIC, tag, 0, k, m)
    return header + pack_bits(bits)


def unpack_instance(data, q=1, acceptor=None):
    """
    Deserialize container bytes. The query index q and the acceptor of a
    phase-locked instance are not part of the encoding and must be supplied.
    """
    header = read_header(data)
    payload = data[HEADER_SIZE:]

    if header.tag == TAG_LK:
        bits = unpack_bits(payload, lk_encoded_length(header.k, header.m))
        return lk_decode(bits, header.k, header.m)

    if header.tag == TAG_PHASE:
        bits = unpack_bits(payload, lkphase_encoded_length(header.k, header.m))
        return lkphase_decode(bits, header.k, header.m, q, acceptor)

    # Tree: the code is self-delimiting, then m padding bits follow
    raw = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    nbits = tree_code_end(raw) + header.m
    inst = tree_decode(unpack_bits(payload, nbits))
    if inst.declared_depth != header.k:
        raise MalformedEncoding(
            f"declared depth {inst.declared_depth} in the bit string differs from header value {header.k}")
    return inst


def save_instance(fname, inst):
    """ Write an instance container file """
    with open(fname, 'wb') as fobj:
        fobj.write(pack_instance(inst))
    log.debug(f"Saved {inst} to {os.path.realpath(fname)!r}")


def load_instance(fname, q=1, acceptor=None):
    """ Read an instance container file """
    with open(fname, 'rb') as fobj:
        return unpack_instance(fobj.read(), q=q, acceptor=acceptor)
