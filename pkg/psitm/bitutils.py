import numpy as np


def ceil_log2(n):
    """ Exact integer ceil(log2(n)) for n >= 1, without floating point """
    n = int(n)
    if n < 1:
        raise ValueError(f"ceil_log2 requires n >= 1, got {n}")
    return (n - 1).bit_length()


def as_bits(data):
    """
    Convert a '0'/'1' string, an iterable of ints or a numpy array into a
    one-dimensional uint8 array of bits. Raises ValueError on any symbol
    other than 0 or 1.
    """
    if isinstance(data, str):
        if data.strip('01'):
            raise ValueError(f"bit string contains symbols other than 0/1: {data!r}")
        return np.frombuffer(data.encode('ascii'), dtype=np.uint8) - ord('0')
    bits = np.asarray(data, dtype=np.int64).ravel()
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bit array contains values other than 0/1")
    return bits.astype(np.uint8)


def bits_to_str(bits):
    return ''.join('1' if b else '0' for b in as_bits(bits))


def int_to_bits(values, width):
    """
    Big-endian fixed-width binary expansion of one or several non-negative
    integers. Returns an array of shape values.shape + (width,)
    """
    values = np.asarray(values, dtype=np.int64)
    if width == 0:
        return np.zeros(values.shape + (0,), dtype=np.uint8)
    if (values < 0).any() or (values >> width).any():
        raise ValueError(f"values do not fit in {width} bits")
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def bits_to_int(bits):
    """ Inverse of int_to_bits() along the last axis """
    bits = np.asarray(bits, dtype=np.int64)
    width = bits.shape[-1]
    if width == 0:
        return np.zeros(bits.shape[:-1], dtype=np.int64)
    weights = np.int64(1) << np.arange(width - 1, -1, -1, dtype=np.int64)
    return (bits * weights).sum(axis=-1)


def bits_to_hex(bits):
    """ Hexadecimal rendering of a big-endian bit string; '' if empty """
    s = bits_to_str(bits)
    if not s:
        return ''
    width = -(-len(s) // 4)
    return format(int(s, 2), f'0{width}x')
