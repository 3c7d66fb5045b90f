"""
Structural depth of binary words.

The depth of a word is the minimum depth of a binary parsing tree whose
leaves, read left to right, spell the word. It is computed here with an
interval dynamic program over all substrings, and independently with a
plain recursive search that serves as a verification oracle.
"""
import logging

import numpy as np
import pandas

from .bitutils import as_bits, bits_to_str


log = logging.getLogger('psitm.depth')


# Maximum word length accepted by the exponential recursion oracle
ORACLE_MAX_LENGTH = 16


class Word(object):
    """
    Immutable binary word.

    Parameters
    ----------
    bits : str or array_like
        Either a string over {'0', '1'} or a sequence of integers in {0, 1}
    """
    def __init__(self, bits=''):
        self._bits = as_bits(bits)
        self._bits.setflags(write=False)

    @classmethod
    def coerce(cls, w):
        """ Return 'w' itself if it is already a Word, otherwise build one """
        return w if isinstance(w, cls) else cls(w)

    @property
    def bits(self):
        """ Read-only uint8 numpy array of symbols """
        return self._bits

    @property
    def length(self):
        return int(self._bits.size)

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self._bits.tobytes())

    def __str__(self):
        return bits_to_str(self._bits)

    def __repr__(self):
        return f"Word({str(self)!r})"


class DepthTable(object):
    """
    Memo table of structural depths for all substrings of a word, as filled
    by the interval dynamic program.

    Storage is triangular: one numpy array per substring length, where
    diagonals[L-1][i-1] holds the depth of the substring w[i .. i+L-1]
    (1-based, inclusive).
    """
    def __init__(self, n, diagonals):
        self.n = int(n)
        self.diagonals = [np.asarray(d, dtype=np.int64) for d in diagonals]
        if len(self.diagonals) != self.n:
            raise ValueError("DepthTable needs exactly one diagonal per substring length")

    def cell(self, i, j):
        """ Depth of the substring w[i..j], with 1 <= i <= j <= n """
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"cell({i}, {j}) is outside the table (n = {self.n})")
        return int(self.diagonals[j - i][i - 1])

    @property
    def depth(self):
        """ Structural depth of the whole word, cell(1, n) """
        return self.cell(1, self.n)

    def to_dataframe(self):
        """ DataFrame with columns (i, j, depth), ordered by increasing (i, j) """
        rows = [
            (i, j, self.cell(i, j))
            for i in range(1, self.n + 1)
            for j in range(i, self.n + 1)
        ]
        return pandas.DataFrame(rows, columns=['i', 'j', 'depth'])

    def to_dict(self):
        return {'n': self.n, 'diagonals': [d for d in self.diagonals]}

    @classmethod
    def from_dict(cls, items):
        return cls(items['n'], items['diagonals'])

    def __str__(self):
        name = type(self).__name__
        return f"{name}(n={self.n}, depth={self.depth})"

    def __repr__(self):
        return str(self)


def depth_table(w):
    """
    Fill the interval DP table of structural depths of all substrings of w.

    Substrings are processed by increasing length; for each length, all start
    positions are handled at once with numpy, looping only over the split
    offset.

    Parameters
    ----------
    w : Word, str or array_like
        Non-empty binary word

    Returns
    -------
    table : DepthTable
    """
    w = Word.coerce(w)
    n = w.length
    if n < 1:
        raise ValueError("depth_table() requires a non-empty word")

    diagonals = [np.zeros(n, dtype=np.int64)]
    for length in range(2, n + 1):
        count = n - length + 1
        best = np.full(count, np.iinfo(np.int64).max, dtype=np.int64)
        # Split w[i..j] into w[i..i+s] and w[i+s+1..j]
        for s in range(length - 1):
            left = diagonals[s][:count]
            right = diagonals[length - s - 2][s + 1:s + 1 + count]
            np.minimum(best, 1 + np.maximum(left, right), out=best)
        diagonals.append(best)
    return DepthTable(n, diagonals)


def structural_depth(w):
    """
    Structural depth d(w): minimum parsing-tree depth over all contiguous
    binary partitions of w. d of the empty word and of single symbols is 0.

    Parameters
    ----------
    w : Word, str or array_like

    Returns
    -------
    depth : int
    """
    w = Word.coerce(w)
    if w.length <= 1:
        return 0
    return depth_table(w).depth


def structural_depth_oracle(w):
    """
    Compute d(w) by direct recursion on the definition, without any memo
    table. Exponential in |w|, hence limited to words of length at most
    ORACLE_MAX_LENGTH.

    The search is a plain branch-and-bound: splits are tried from the middle
    outwards, and a sub-search is abandoned as soon as it cannot beat the
    best depth found so far.
    """
    w = Word.coerce(w)
    if w.length > ORACLE_MAX_LENGTH:
        raise ValueError(
            f"structural_depth_oracle() only accepts words of length <= {ORACLE_MAX_LENGTH}, "
            f"got {w.length}")
    return _search(w.length, w.length)


def _split_order(length):
    mid = length // 2
    offsets = sorted(range(1, length), key=lambda k: (abs(k - mid), k))
    return offsets


def _search(length, bound):
    """
    Depth of a word of the given length if it is < bound, otherwise any value
    >= bound. Only the length matters to the recursion: the definition never
    inspects the symbols themselves.
    """
    if length <= 1:
        return 0
    if bound <= 1:
        return bound
    best = bound
    for k in _split_order(length):
        left = _search(k, best - 1)
        if left >= best - 1:
            continue
        right = _search(length - k, best - 1)
        if right >= best - 1:
            continue
        best = 1 + max(left, right)
    return best
