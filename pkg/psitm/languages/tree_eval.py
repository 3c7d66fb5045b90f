"""
Tree evaluation language.

An instance is a binary tree with AND/OR internal nodes and 0/1 leaves,
together with a declared depth and a padding length. It is accepted iff the
actual depth of the tree equals the declared depth and the root evaluates
to 1.

Wire format:

    1^D 0 || preorder node codes || 0^P

where D is the declared depth, P the padding length, and each node is coded
on 2 bits: 00 = leaf 0, 01 = leaf 1, 10 = AND, 11 = OR. The preorder code is
prefix-free, so the tree part is self-delimiting.
"""
import logging
import typing

from ..bitutils import as_bits
from ..exceptions import MalformedEncoding
from ..machine import Verdict
from ..prng import LCG64, DEFAULT_SEED


log = logging.getLogger('psitm.languages.tree_eval')


AND = 'AND'
OR = 'OR'

NODE_CODES = {
    (0, 0): ('leaf', 0),
    (0, 1): ('leaf', 1),
    (1, 0): ('gate', AND),
    (1, 1): ('gate', OR),
}


class Leaf(typing.NamedTuple):
    value: int


class Gate(typing.NamedTuple):
    op: str
    left: object
    right: object


def tree_depth(root):
    """ Depth of a tree; a single leaf has depth 0 """
    depth = 0
    stack = [(root, 0)]
    while stack:
        node, level = stack.pop()
        depth = max(depth, level)
        if isinstance(node, Gate):
            stack.append((node.left, level + 1))
            stack.append((node.right, level + 1))
    return depth


def tree_size(root):
    count = 0
    stack = [root]
    while stack:
        node = stack.pop()
        count += 1
        if isinstance(node, Gate):
            stack.extend((node.right, node.left))
    return count


def evaluate(root):
    """ Bottom-up Boolean evaluation with an explicit stack """
    results = {}
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf):
            results[id(node)] = node.value
        elif expanded:
            a, b = results[id(node.left)], results[id(node.right)]
            results[id(node)] = (a & b) if node.op == AND else (a | b)
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return results[id(root)]


class TreeInstance(object):
    """
    Parameters
    ----------
    root : Leaf or Gate
    declared_depth : int
        Depth k+1 that the tree must have to be accepted, >= 0
    padding : int
        Number of padding bits, >= 0
    """
    def __init__(self, root, declared_depth, padding=0):
        if not isinstance(root, (Leaf, Gate)):
            raise ValueError(f"root must be a Leaf or a Gate, got {type(root).__name__}")
        if declared_depth < 0:
            raise ValueError(f"declared_depth must be >= 0, got {declared_depth}")
        if padding < 0:
            raise ValueError(f"padding must be >= 0, got {padding}")
        self.root = root
        self.declared_depth = int(declared_depth)
        self.padding = int(padding)

    @property
    def depth(self):
        return tree_depth(self.root)

    def __eq__(self, other):
        if not isinstance(other, TreeInstance):
            return NotImplemented
        return (
            self.root == other.root
            and self.declared_depth == other.declared_depth
            and self.padding == other.padding
        )

    def to_dict(self):
        return {'bits': tree_encode(self)}

    @classmethod
    def from_dict(cls, items):
        return tree_decode(items['bits'])

    def __str__(self):
        name = type(self).__name__
        return (f"{name}(nodes={tree_size(self.root)}, depth={self.depth}, "
                f"declared_depth={self.declared_depth}, padding={self.padding})")

    def __repr__(self):
        return str(self)


def _encode_nodes(root):
    codes = []
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            codes.append('01' if node.value else '00')
        else:
            codes.append('10' if node.op == AND else '11')
            stack.append(node.right)
            stack.append(node.left)
    return ''.join(codes)


def tree_encode(inst):
    """ Wire bit string of a TreeInstance """
    header = '1' * inst.declared_depth + '0'
    return header + _encode_nodes(inst.root) + '0' * inst.padding


def _parse_nodes(bits, pos):
    """
    Parse one preorder tree starting at 'pos'. Returns (root, end position).
    """
    n = len(bits)
    # Each open gate waits for its children: [op, children]
    pending = []
    while True:
        if pos + 2 > n:
            raise MalformedEncoding(f"tree code truncated at bit {pos}")
        kind, label = NODE_CODES[(int(bits[pos]), int(bits[pos + 1]))]
        pos += 2
        if kind == 'gate':
            pending.append([label, []])
            continue
        node = Leaf(label)
        while pending:
            pending[-1][1].append(node)
            if len(pending[-1][1]) < 2:
                break
            op, (left, right) = pending.pop()
            node = Gate(op, left, right)
        else:
            return node, pos


def _parse_prefix(bits):
    """ Parse depth header and tree code; returns (declared depth, root, end position) """
    depth = 0
    while depth < bits.size and bits[depth] == 1:
        depth += 1
    if depth >= bits.size:
        raise MalformedEncoding("tree encoding has no terminated depth header")
    root, end = _parse_nodes(bits, depth + 1)
    return depth, root, end


def tree_decode(bits):
    """
    Inverse of tree_encode(). Raises MalformedEncoding if the stream is
    truncated or the padding holds non-zero bits.
    """
    bits = as_bits(bits)
    depth, root, end = _parse_prefix(bits)
    if bits[end:].any():
        raise MalformedEncoding(f"tree encoding has non-zero padding after bit {end}")
    return TreeInstance(root, depth, bits.size - end)


def tree_decide(inst):
    """ Accept iff the actual depth equals the declared depth and the root evaluates to 1 """
    if inst.depth != inst.declared_depth:
        return Verdict.REJECT
    return Verdict.ACCEPT if evaluate(inst.root) else Verdict.REJECT


def tree_generate(depth, seed=DEFAULT_SEED, padding=0):
    """
    Seeded random tree of exact depth 'depth', declared at that depth. At
    every gate one child (chosen at random) keeps the full remaining depth
    and the other gets a random depth below it.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    rng = LCG64(seed)

    def build(d):
        if d == 0:
            return Leaf(rng.randbit())
        op = AND if rng.randbit() else OR
        other = build(rng.randbelow(d))
        full = build(d - 1)
        if rng.randbit():
            return Gate(op, full, other)
        return Gate(op, other, full)

    return TreeInstance(build(depth), depth, padding)


def tree_code_end(bits):
    """
    Position just after the depth header and the tree code, ignoring
    whatever follows
    """
    __, __, end = _parse_prefix(as_bits(bits))
    return end
