import numpy as np
from pytest import raises

from psitm import PhaseLockedInstance, Verdict
from psitm.bitutils import ceil_log2
from psitm.exceptions import MalformedEncoding
from psitm.languages.phase_locked import (
    DefaultAcceptor, ConstantAcceptor, TableAcceptor, acceptor_from_dict,
    lkphase_encode, lkphase_decode, lkphase_generate, lkphase_decide, lkphase_decide_blind,
    lkphase_decide_streamed, lkphase_projection, lkphase_collision_demo, lkphase_fooling_family,
    lkphase_encoded_length)
from psitm.serialization import to_json, from_json


# Seeded instances per (k, m) in the invariance checks
PHASE_SEEDS = 10

SNAPSHOTS = [
    [2, 1, 0, 3],
    [1, 3, 3, 0]
]


def test_small_instance():
    inst = PhaseLockedInstance(SNAPSHOTS, q=1)
    assert inst.k == 2 and inst.m == 4 and inst.ell == 2
    assert inst.values() == (2, 1)
    # LSB(1) = 1, MSB(2) = 1
    assert lkphase_decide(inst) == Verdict.REJECT
    # v_2 unreadable, taken as 0
    assert lkphase_decide_blind(inst) == Verdict.ACCEPT

    bits = lkphase_encode(inst)
    assert bits == '1001001101111100'
    assert len(bits) == lkphase_encoded_length(2, 4)

    other = lkphase_decode(bits, 2, 4, q=1)
    assert np.array_equal(other.snapshots, inst.snapshots)

    dec = lkphase_decide_streamed(bits, 2, 4, q=1)
    assert dec.verdict == Verdict.REJECT
    assert dec.reads == 4
    assert dec.phases == 2
    assert dec.workspace_bits == 2 * 2 + ceil_log2(5)


def test_instance_validation():
    with raises(ValueError):
        PhaseLockedInstance([[1, 2, 3, 4]], q=1)
    with raises(ValueError):
        PhaseLockedInstance(SNAPSHOTS, q=0)
    with raises(ValueError):
        PhaseLockedInstance(SNAPSHOTS, q=5)
    with raises(ValueError):
        PhaseLockedInstance([[4, 0, 0, 0], [0, 0, 0, 0]], q=1)
    with raises(ValueError):
        lkphase_generate(1, 8)

    inst = PhaseLockedInstance(SNAPSHOTS, q=2)
    with raises(ValueError):
        inst.snapshots[0, 0] = 0
    assert inst.with_value(2, 0).values() == (1, 0)
    assert inst.values() == (1, 3)


def test_decode_errors():
    with raises(MalformedEncoding):
        lkphase_decode('0' * 15, 2, 4, q=1)
    with raises(MalformedEncoding):
        lkphase_decide_streamed('0' * 17, 2, 4, q=1)
    with raises(ValueError):
        lkphase_decide_streamed('0' * 16, 2, 4, q=5)


def test_streamed_agrees():
    for k in (2, 3, 4):
        for m in (4, 8, 16, 32):
            for seed in range(50):
                inst = lkphase_generate(k, m, seed=seed)
                dec = lkphase_decide_streamed(lkphase_encode(inst), k, m, inst.q)
                assert dec.verdict == lkphase_decide(inst)
                assert dec.phases == k
                assert dec.reads == k * inst.q * inst.ell
                assert dec.reads <= dec.n


def test_generate_deterministic():
    a = lkphase_generate(3, 8, seed=11)
    b = lkphase_generate(3, 8, seed=11)
    assert np.array_equal(a.snapshots, b.snapshots)
    assert a.q == b.q

    c = lkphase_generate(3, 8, seed=11, q=2)
    assert c.q == 2
    assert np.array_equal(a.snapshots, c.snapshots)


def test_acceptors():
    inst = PhaseLockedInstance(SNAPSHOTS, q=4)
    assert inst.values() == (3, 0)

    assert lkphase_decide(inst.replace(acceptor=ConstantAcceptor(1))) == Verdict.ACCEPT
    assert lkphase_decide(inst.replace(acceptor=ConstantAcceptor(0))) == Verdict.REJECT

    # Truth table over v_1 || v_2, accepting only index 0b1100
    table = ['0'] * 16
    table[12] = '1'
    acceptor = TableAcceptor(''.join(table))
    assert lkphase_decide(inst.replace(acceptor=acceptor)) == Verdict.ACCEPT
    assert lkphase_decide(inst.with_value(2, 1).replace(acceptor=acceptor)) == Verdict.REJECT

    with raises(ValueError):
        lkphase_decide(inst.replace(acceptor=TableAcceptor('0' * 8)))

    for acc in (DefaultAcceptor(), ConstantAcceptor(1), acceptor):
        assert acceptor_from_dict(acc.to_dict()).to_dict() == acc.to_dict()


def test_projection():
    inst = lkphase_generate(3, 8, seed=5)
    other = inst.with_value(3, inst.values()[-1] ^ 1)

    for depth in (1, 2):
        a = lkphase_projection(inst, depth)
        b = lkphase_projection(other, depth)
        assert a == b
        assert len(a.view) == depth
    assert lkphase_projection(inst, 3).digest != lkphase_projection(other, 3).digest

    with raises(ValueError):
        lkphase_projection(inst, 0)
    with raises(ValueError):
        lkphase_projection(inst, 4)


def test_projection_ignores_later_phases():
    for k in (2, 3, 4, 5):
        for m in (4, 8):
            for seed in range(PHASE_SEEDS):
                inst = lkphase_generate(k, m, seed=seed)
                for later in range(2, k + 1):
                    snapshots = inst.snapshots.copy()
                    snapshots[later - 1] ^= 1
                    other = inst.replace(snapshots=snapshots)
                    for depth in range(1, later):
                        assert lkphase_projection(inst, depth) == lkphase_projection(other, depth)
                    assert lkphase_projection(inst, later) != lkphase_projection(other, later)


def test_verdict_ignores_other_positions():
    for k in (2, 3, 4):
        for m in (4, 8):
            for seed in range(PHASE_SEEDS):
                inst = lkphase_generate(k, m, seed=seed)
                verdict = lkphase_decide(inst)
                for phase in range(k):
                    for position in range(m):
                        if position == inst.q - 1:
                            continue
                        snapshots = inst.snapshots.copy()
                        snapshots[phase, position] ^= 1
                        other = inst.replace(snapshots=snapshots)
                        assert lkphase_decide(other) == verdict
                        dec = lkphase_decide_streamed(lkphase_encode(other), k, m, q=inst.q)
                        assert dec.verdict == verdict


def test_collision_demo():
    for k in (2, 3):
        for m in (8, 16):
            report = lkphase_collision_demo(k, m, seed=1337)
            assert report.verify()
            assert report.collides
            assert report.separates
            assert report.verdicts == (Verdict.ACCEPT, Verdict.REJECT)
            # The blind decider cannot tell the pair apart
            assert report.blind_verdicts[0] == report.blind_verdicts[1]
            d = report.summary_dict()
            assert d['prefix_digest_first'] == d['prefix_digest_second']
            assert d['full_digest_first'] != d['full_digest_second']


def test_collision_demo_constant_acceptor():
    with raises(ValueError):
        lkphase_collision_demo(2, 8, acceptor=ConstantAcceptor(1))


def test_collision_report_tampered():
    report = lkphase_collision_demo(2, 8, seed=3)
    tampered = report._replace(verdicts=(Verdict.REJECT, Verdict.ACCEPT))
    assert not tampered.verify()


def test_fooling_family_column():
    base = lkphase_generate(3, 8, seed=2)
    members, cert = lkphase_fooling_family(base, mode='column')
    assert cert.size == 8
    assert cert.log2_size == 3.0
    assert cert.prefix_collides
    assert cert.full_distinct
    assert cert.valid
    for inst in members:
        assert np.array_equal(inst.snapshots[:-1], base.snapshots[:-1])


def test_fooling_family_matrix():
    base = lkphase_generate(2, 8, seed=2)
    members, cert = lkphase_fooling_family(base, mode='matrix', count=64)
    assert cert.size == 64
    assert cert.valid
    assert cert.accepts == 32
    assert cert.rejects == 32
    verdicts = [lkphase_decide(x) for x in members]
    assert verdicts[0] != verdicts[1]


def test_fooling_family_errors():
    base = lkphase_generate(2, 8, seed=2)
    with raises(ValueError):
        lkphase_fooling_family(base, mode='row')
    with raises(ValueError):
        lkphase_fooling_family(base, mode='column', count=9)
    with raises(ValueError):
        lkphase_fooling_family(base, mode='matrix', count=0)


def test_instance_serialization():
    acceptor = TableAcceptor('01' * 8)
    inst = PhaseLockedInstance(SNAPSHOTS, q=3, acceptor=acceptor)
    other = from_json(to_json(inst))
    assert isinstance(other, PhaseLockedInstance)
    assert np.array_equal(other.snapshots, inst.snapshots)
    assert other.q == 3
    assert other.acceptor.to_dict() == acceptor.to_dict()
    assert lkphase_decide(other) == lkphase_decide(inst)
