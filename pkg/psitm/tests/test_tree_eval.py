import itertools

from pytest import raises

from psitm import TreeInstance, Verdict
from psitm.exceptions import MalformedEncoding
from psitm.languages import Leaf, Gate, tree_encode, tree_decode, tree_decide, tree_generate
from psitm.languages.tree_eval import AND, OR, tree_depth, tree_size, evaluate, tree_code_end
from psitm.prng import LCG64, DEFAULT_SEED


TREE = Gate(AND, Leaf(1), Gate(OR, Leaf(0), Leaf(1)))

# '11' depth header, '0' terminator, preorder codes, three padding bits
TREE_BITS = '110' + '10' + '01' + '11' + '00' + '01' + '000'

# Every labelling is checked for trees up to this many internal nodes (9
# nodes); larger shapes up to 15 nodes get SEEDED_LABELLINGS labellings each
EXHAUSTIVE_MAX_GATES = 4
MAX_GATES = 7
SEEDED_LABELLINGS = 4


def test_tree_functions():
    assert tree_depth(Leaf(0)) == 0
    assert tree_depth(TREE) == 2
    assert tree_size(TREE) == 5
    assert evaluate(TREE) == 1
    assert evaluate(Gate(AND, Leaf(0), TREE)) == 0
    assert evaluate(Gate(OR, Leaf(0), Leaf(0))) == 0


def test_encode_decode():
    inst = TreeInstance(TREE, declared_depth=2, padding=3)
    assert tree_encode(inst) == TREE_BITS
    assert tree_decode(TREE_BITS) == inst
    assert tree_code_end(TREE_BITS) == len(TREE_BITS) - 3

    leaf = TreeInstance(Leaf(1), 0)
    assert tree_encode(leaf) == '001'
    assert tree_decode('001') == leaf


def test_decide():
    assert tree_decide(TreeInstance(TREE, 2)) == Verdict.ACCEPT
    # Declared depth does not match
    assert tree_decide(TreeInstance(TREE, 3)) == Verdict.REJECT
    assert tree_decide(TreeInstance(TREE, 1)) == Verdict.REJECT
    assert tree_decide(TreeInstance(Gate(AND, Leaf(0), TREE), 3)) == Verdict.REJECT


def test_decode_errors():
    with raises(MalformedEncoding):
        tree_decode('111')
    with raises(MalformedEncoding):
        tree_decode('110' + '10' + '01')
    with raises(MalformedEncoding):
        tree_decode(TREE_BITS[:-1] + '1')
    with raises(MalformedEncoding):
        tree_decode('0' + '0')


def test_instance_validation():
    with raises(ValueError):
        TreeInstance('leaf', 0)
    with raises(ValueError):
        TreeInstance(TREE, -1)
    with raises(ValueError):
        TreeInstance(TREE, 2, padding=-1)
    with raises(ValueError):
        tree_generate(-1)


def test_generate():
    verdicts = set()
    for depth in range(0, 8):
        for seed in range(20):
            inst = tree_generate(depth, seed=seed, padding=seed % 4)
            assert inst.depth == depth
            assert inst.declared_depth == depth
            assert tree_decode(tree_encode(inst)) == inst
            verdicts.add(tree_decide(inst))
    assert verdicts == {Verdict.ACCEPT, Verdict.REJECT}

    assert tree_generate(5, seed=9) == tree_generate(5, seed=9)


def test_deep_tree():
    # Left-leaning chain
    root = Leaf(1)
    for __ in range(500):
        root = Gate(OR, root, Leaf(0))
    inst = TreeInstance(root, 500)
    assert inst.depth == 500
    assert tree_decide(inst) == Verdict.ACCEPT
    assert tree_decode(tree_encode(inst)) == inst


def shapes(gates):
    """ All binary tree shapes with the given number of internal nodes """
    if gates == 0:
        yield None
        return
    for left in range(gates):
        for a in shapes(left):
            for b in shapes(gates - 1 - left):
                yield (a, b)


def label(shape, ops, leaves):
    if shape is None:
        return Leaf(next(leaves))
    op = next(ops)
    left = label(shape[0], ops, leaves)
    right = label(shape[1], ops, leaves)
    return Gate(op, left, right)


def recursive_value(node):
    if isinstance(node, Leaf):
        return node.value
    a, b = recursive_value(node.left), recursive_value(node.right)
    return (a and b) if node.op == AND else (a or b)


def recursive_depth(node):
    if isinstance(node, Leaf):
        return 0
    return 1 + max(recursive_depth(node.left), recursive_depth(node.right))


def check_against_recursion(root):
    depth = recursive_depth(root)
    value = recursive_value(root)
    assert tree_depth(root) == depth
    assert evaluate(root) == value
    expected = Verdict.ACCEPT if value else Verdict.REJECT
    assert tree_decide(TreeInstance(root, depth)) == expected
    assert tree_decide(TreeInstance(root, depth + 1)) == Verdict.REJECT
    if depth > 0:
        assert tree_decide(TreeInstance(root, depth - 1)) == Verdict.REJECT


def test_decide_all_small_trees():
    count = 0
    for gates in range(EXHAUSTIVE_MAX_GATES + 1):
        for shape in shapes(gates):
            for ops in itertools.product((AND, OR), repeat=gates):
                for leaves in itertools.product((0, 1), repeat=gates + 1):
                    check_against_recursion(label(shape, iter(ops), iter(leaves)))
                    count += 1
    # Catalan numbers 1, 1, 2, 5, 14 times 2^(2 * gates + 1) labellings
    assert count == 2 + 8 + 64 + 640 + 7168


def test_decide_seeded_larger_trees():
    rng = LCG64(DEFAULT_SEED)
    num_shapes = 0
    for gates in range(EXHAUSTIVE_MAX_GATES + 1, MAX_GATES + 1):
        for shape in shapes(gates):
            num_shapes += 1
            for __ in range(SEEDED_LABELLINGS):
                ops = [AND if rng.randbit() else OR for __ in range(gates)]
                leaves = [rng.randbit() for __ in range(gates + 1)]
                root = label(shape, iter(ops), iter(leaves))
                assert tree_size(root) == 2 * gates + 1
                check_against_recursion(root)
    # Catalan numbers for 5, 6 and 7 internal nodes
    assert num_shapes == 42 + 132 + 429
