import itertools

import numpy as np
from pytest import raises
from hypothesis import given, settings, strategies as st

from psitm import PointerChaseInstance, Verdict
from psitm.bitutils import ceil_log2
from psitm.exceptions import MalformedEncoding, SinglePassViolation
from psitm.languages import (
    FoolingFamilyParams, lk_encode, lk_decode, lk_decide, lk_decide_streamed, lk_generate,
    lk_fooling_family, lk_encoded_length)
from psitm.languages.pointer_chase import min_varying_size, default_varying_set
from psitm.languages.streaming import BitStream
from psitm.serialization import to_json, from_json


# Number of seeded table pairs per m in the exhaustive k = 2 check
EXHAUSTIVE_TABLE_SEEDS = 1000

# Number of seeded instances per (k, m) in the randomized check
RANDOM_INSTANCES = 1000

# Seeds drawn when estimating the acceptance rate of generated instances
ACCEPTANCE_SEEDS = 10000


def check_streamed(inst):
    bits = lk_encode(inst)
    dec = lk_decide_streamed(bits, inst.k, inst.m)
    assert dec.verdict == lk_decide(inst)
    assert dec.n == len(bits)
    assert dec.reads <= 2 * dec.n
    assert dec.phases == inst.k + 1
    return dec


def test_small_instance():
    inst = PointerChaseInstance([[2, 1], [1, 1]], [0, 1], 1)
    assert inst.chain() == [1, 2, 1]
    assert lk_decide(inst) == Verdict.REJECT
    assert lk_encode(inst) == '1000010'
    assert lk_encoded_length(2, 2) == 7

    accepted = inst.replace(tail=[1, 0])
    assert lk_decide(accepted) == Verdict.ACCEPT
    assert lk_decode(lk_encode(accepted), 2, 2) == accepted


def test_instance_validation():
    with raises(ValueError):
        PointerChaseInstance([[1, 1]], [0, 1], 1)
    with raises(ValueError):
        PointerChaseInstance([[1], [1]], [0], 1)
    with raises(ValueError):
        PointerChaseInstance([[1, 3], [1, 1]], [0, 1], 1)
    with raises(ValueError):
        PointerChaseInstance([[1, 2], [1, 1]], [0, 1, 1], 1)
    with raises(ValueError):
        PointerChaseInstance([[1, 2], [1, 1]], [0, 1], 3)

    inst = lk_generate(3, 8, seed=1)
    with raises(ValueError):
        inst.tables[0, 0] = 1
    with raises(ValueError):
        lk_generate(1, 8)


def test_decode_errors():
    with raises(MalformedEncoding):
        lk_decode('0' * 6, 2, 2)
    # m = 3, w = 2: the entry '11' encodes 4 > m
    bits = '11' + '00' * 5 + '000' + '00'
    with raises(MalformedEncoding):
        lk_decode(bits, 2, 3)
    with raises(MalformedEncoding):
        lk_decide_streamed(bits, 2, 3)
    with raises(MalformedEncoding):
        lk_decide_streamed('0' * 6, 2, 2)
    with raises(ValueError):
        lk_decode('0' * 7, 1, 2)


def test_streamed_exhaustive_small():
    for m in (2, 3, 4):
        for seed in range(EXHAUSTIVE_TABLE_SEEDS):
            base = lk_generate(2, m, seed=seed)
            for tail in itertools.product((0, 1), repeat=m):
                for start in range(1, m + 1):
                    check_streamed(base.replace(tail=tail, start=start))


def test_streamed_random():
    for k in (2, 3, 4):
        for m in (8, 16, 32, 64):
            w = ceil_log2(m)
            for seed in range(RANDOM_INSTANCES):
                dec = check_streamed(lk_generate(k, m, seed=seed))
                assert dec.reads == lk_encoded_length(k, m)
                assert dec.workspace_bits == 3 * w + ceil_log2(k + 2) + 1


def test_generate_deterministic():
    a = lk_generate(3, 16, seed=1337)
    b = lk_generate(3, 16, seed=1337)
    c = lk_generate(3, 16, seed=1338)
    assert a == b
    assert a != c
    verdicts = {lk_decide(lk_generate(2, 16, seed=s)) for s in range(64)}
    assert verdicts == {Verdict.ACCEPT, Verdict.REJECT}


@settings(max_examples=50, deadline=None)
@given(
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=2, max_value=40),
    st.integers(min_value=0, max_value=2 ** 32))
def test_encoding_round_trip(k, m, seed):
    inst = lk_generate(k, m, seed=seed)
    bits = lk_encode(inst)
    assert len(bits) == lk_encoded_length(k, m)
    assert lk_decode(bits, k, m) == inst


def test_generate_acceptance_rate():
    verdicts = [lk_decide(lk_generate(2, 16, seed=seed)) for seed in range(ACCEPTANCE_SEEDS)]
    rate = sum(v == Verdict.ACCEPT for v in verdicts) / ACCEPTANCE_SEEDS
    assert abs(rate - 0.5) <= 0.05


def test_instance_serialization():
    inst = lk_generate(3, 8, seed=7)
    other = from_json(to_json(inst))
    assert isinstance(other, PointerChaseInstance)
    assert other == inst


def test_bitstream():
    stream = BitStream('0110')
    with raises(SinglePassViolation):
        stream.read(0)

    stream.begin_phase()
    assert stream.read(1) == 1
    assert stream.read(3) == 0
    with raises(SinglePassViolation):
        stream.read(2)
    with raises(SinglePassViolation):
        stream.read(3)

    stream.begin_phase()
    assert stream.read_uint(0, 3) == 3
    with raises(IndexError):
        stream.read(4)

    stream.declare_register('x', 5)
    stream.declare_register('y', 2)
    dec = stream.decision(Verdict.ACCEPT)
    assert dec.reads == 5
    assert dec.phases == 2
    assert dec.workspace_bits == 7
    assert dec.summary_dict()['verdict'] == 'accept'


def test_fooling_family():
    for k in (2, 3):
        for m in (8, 16):
            base = lk_generate(k, m, seed=1337)
            members, cert = lk_fooling_family(FoolingFamilyParams(base), 16)
            assert len(members) == 16
            assert cert.valid
            assert cert.agree_outside
            assert cert.accepts > 0 and cert.rejects > 0
            assert len(cert.varying_set) >= min_varying_size(m)
            assert cert.target_log2 == 0.9 * m

            # Members are pairwise distinct and alternate verdicts
            encodings = {lk_encode(x) for x in members}
            assert len(encodings) == 16
            verdicts = [lk_decide(x) for x in members]
            assert verdicts[0] != verdicts[1]

            # Outside S, every member agrees with the base instance
            outside = [x for x in range(1, m + 1) if x not in cert.varying_set]
            for inst in members:
                assert np.array_equal(inst.tables[:-1], base.tables[:-1])
                assert inst.start == base.start
                for x in outside:
                    assert inst.tail[x - 1] == base.tail[x - 1]


def test_fooling_family_variants():
    base = lk_generate(3, 16, seed=3)
    members, cert = lk_fooling_family(FoolingFamilyParams(base, vary_tables=True, rate='bit'), 16)
    assert cert.valid
    assert cert.target_log2 == 0.9 * 16 * 4
    assert cert.variation_log2 > len(cert.varying_set)

    # The routed positions come first in the default varying set
    chain = base.chain()
    S = default_varying_set(base)
    assert chain[-1] in S[:2] and chain[-2] in S[:2]

    S = tuple(range(1, 16))
    members, cert = lk_fooling_family(FoolingFamilyParams(base, S=S), 4)
    assert cert.varying_set == S
    assert cert.agree_outside


def test_fooling_family_errors():
    base = lk_generate(2, 10, seed=5)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base, S=(1, 2, 3)), 4)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base, S=tuple(range(1, 10)) + (1,)), 4)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base, S=tuple(range(0, 9))), 4)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base), 0)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base), 2 ** 11)
    with raises(ValueError):
        lk_fooling_family(FoolingFamilyParams(base, rate='nat'), 4)
