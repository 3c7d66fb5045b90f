"""
Deterministic 64-bit linear congruential generator used by every seeded
generator in psitm. No platform randomness is ever used, so that a given
seed yields the same instances on every machine.

    state <- (A * state + C) mod 2^64

The output of each draw is the upper 32 bits of the new state.
"""
import numpy as np


# Multiplier and increment of the 64-bit LCG (Knuth's MMIX constants)
LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
LCG_MASK = (1 << 64) - 1

DEFAULT_SEED = 1337


class LCG64(object):
    """
    Parameters
    ----------
    seed : int
        Any integer, reduced modulo 2^64
    """
    def __init__(self, seed=DEFAULT_SEED):
        self.seed = int(seed)
        self.state = self.seed & LCG_MASK
        # Warm-up: decorrelate small consecutive seeds
        for __ in range(4):
            self.next_state()

    def next_state(self):
        self.state = (LCG_A * self.state + LCG_C) & LCG_MASK
        return self.state

    def next32(self):
        """ Uniform integer in [0, 2^32) """
        return self.next_state() >> 32

    def randbit(self):
        return self.next32() >> 31

    def randbelow(self, k):
        """ Integer in [0, k) by multiply-shift reduction of a 32-bit draw """
        if not 1 <= k <= 1 << 32:
            raise ValueError(f"randbelow() requires 1 <= k <= 2^32, got {k}")
        return (self.next32() * k) >> 32

    def integers(self, low, high, size):
        """ int64 numpy array of 'size' draws in [low, high) """
        span = high - low
        out = np.fromiter((self.randbelow(span) for __ in range(size)), dtype=np.int64, count=size)
        return out + low

    def bits(self, size):
        """ uint8 numpy array of 'size' fair coin flips """
        return np.fromiter((self.randbit() for __ in range(size)), dtype=np.uint8, count=size)
