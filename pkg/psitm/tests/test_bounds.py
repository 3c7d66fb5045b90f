import math

import numpy as np
from pytest import raises

from psitm import (
    BoundQuery, RelaxationParams, fooling_bound, fano_bound, binary_entropy, relaxed_bounds,
    dt_depth_bound, ic_gate_bound, lk_lb_estimate)
from psitm.bounds import (
    budget_for, log2_m_minus_one, lk_length_fixed_point, BOUND_ROW_COLUMNS, CEIL_LOG, EXACT_REAL)


FANO_EXAMPLE = BoundQuery(c=1, d=2, n=1000, logM=60, epsilon=0.1)


def test_budget_conventions():
    assert budget_for(1, 2, 1000) == 20
    assert budget_for(1, 3, 2 ** 20) == 60
    assert abs(budget_for(1, 2, 1000, EXACT_REAL) - 2 * math.log2(1000)) < 1e-12
    with raises(ValueError):
        budget_for(1, 2, 1000, 'rounded')


def test_bound_query_validation():
    with raises(ValueError):
        BoundQuery(n=1)
    with raises(ValueError):
        BoundQuery(logM=0.5)
    with raises(ValueError):
        BoundQuery(epsilon=1.0)
    with raises(ValueError):
        BoundQuery(epsilon=0.0)
    with raises(ValueError):
        BoundQuery(c=0)
    with raises(ValueError):
        BoundQuery(d=0)
    with raises(ValueError):
        BoundQuery(convention='floor-log')


def test_fooling_worked_examples():
    r = fooling_bound(BoundQuery(c=1, d=2, n=1000, logM=100))
    assert r.integer_bound == 5
    assert r.bound_value == 5.0
    assert r.trace['numerator'] == 100
    assert r.trace['denominator'] == 20
    assert r.recompute() == r.bound_value

    r = fooling_bound(BoundQuery(c=1, d=3, n=2 ** 20, logM=900))
    assert r.integer_bound == 15

    # The exact-real convention rounds the same example up
    r = fooling_bound(BoundQuery(c=1, d=2, n=1000, logM=100, convention=EXACT_REAL))
    assert r.integer_bound == 6
    assert r.convention == EXACT_REAL


def test_fooling_monotonicity():
    values = [fooling_bound(BoundQuery(d=2, n=1000, logM=x)).bound_value for x in range(1, 200)]
    assert np.all(np.diff(values) > 0)
    values = [fooling_bound(BoundQuery(d=d, n=1000, logM=100)).bound_value for d in range(1, 6)]
    assert np.all(np.diff(values) < 0)


def test_binary_entropy():
    assert abs(binary_entropy(0.1) - 0.469) < 1e-3
    assert binary_entropy(0.5) == 1.0
    assert abs(binary_entropy(0.3) - binary_entropy(0.7)) < 1e-12

    h = binary_entropy([0.1, 0.5, 0.9])
    assert h.shape == (3,)
    assert h[1] == 1.0

    for eps in (0.0, 1.0, -0.1, 1.5):
        with raises(ValueError):
            binary_entropy(eps)


def test_log2_m_minus_one():
    assert log2_m_minus_one(1.0) == 0.0
    assert abs(log2_m_minus_one(3.0) - math.log2(7)) < 1e-12
    assert abs(log2_m_minus_one(200.0) - 200.0) < 1e-12


def test_fano_worked_example():
    r = fano_bound(FANO_EXAMPLE)
    assert abs(r.bound_value - 2.68) < 0.02
    assert r.integer_bound == 3
    assert set(r.trace) >= {'logM', 'entropy_term', 'epsilon_term', 'numerator', 'denominator'}
    assert abs(r.recompute() - r.bound_value) < 1e-12

    # Fano never exceeds the fooling bound on the same query
    assert r.bound_value <= fooling_bound(FANO_EXAMPLE).bound_value

    with raises(ValueError):
        fano_bound(BoundQuery(d=2, n=1000, logM=60))
    with raises(ValueError):
        fano_bound(BoundQuery(d=2, n=1000, logM=1, epsilon=0.5))


def test_summary_dict():
    row = fano_bound(FANO_EXAMPLE).summary_dict()
    assert list(row) == BOUND_ROW_COLUMNS
    assert row['tool'] == 'fano'
    assert row['convention'] == CEIL_LOG
    assert row['epsilon'] == 0.1
    assert row['bound_int'] == 3

    row = fooling_bound(BoundQuery(d=2, n=1000, logM=100)).summary_dict()
    assert row['epsilon'] == ''
    assert row['extra_params'] == ''


def test_dt_depth_bound():
    q = BoundQuery(c=1, d=2, n=1000, logM=100)
    r = dt_depth_bound(q)
    assert r.tool == 'dt'
    assert r.integer_bound == fooling_bound(q).integer_bound == 5


def test_relaxed_bounds():
    q = BoundQuery(c=1, d=2, n=1000, logM=100)
    base = fooling_bound(q)

    r = relaxed_bounds(q, RelaxationParams())
    assert r['R1'].bound_value == base.bound_value
    assert r['R2'].integer_bound == 5
    assert r['R2'].trace['given_passes_suffice'] is False
    assert r['R3'].bound_value == base.bound_value
    assert r['R4'].bound_value == base.bound_value

    r = relaxed_bounds(q, RelaxationParams(H=40, adv=20, delta_bw=-10, P=5, m=0))
    assert r['R1'].integer_bound == 3
    assert r['R3'].integer_bound == 4
    assert r['R4'].integer_bound == 10
    assert r['R2'].trace['given_passes_suffice'] is True

    # Randomness beyond log2 M leaves nothing to distinguish
    r = relaxed_bounds(q, RelaxationParams(H=500, adv=500))
    assert r['R1'].bound_value == 0.0
    assert r['R3'].bound_value == 0.0

    r = relaxed_bounds(q, RelaxationParams(H=20, r1_additive_budget=True))
    assert r['R1'].trace['denominator'] == 40
    assert r['R1'].integer_bound == 3

    # Per-pass overhead bits reduce the number of passes needed
    r = relaxed_bounds(q, RelaxationParams(m=30))
    assert r['R2'].integer_bound == 2

    # A very large overhead still requires one pass
    r = relaxed_bounds(q, RelaxationParams(m=10 ** 6))
    assert r['R2'].integer_bound == 1

    with raises(ValueError):
        relaxed_bounds(q, RelaxationParams(delta_bw=-20))
    with raises(ValueError):
        RelaxationParams(P=0)
    with raises(ValueError):
        RelaxationParams(H=-1)


def test_ic_gate_bound():
    r = ic_gate_bound(3, 1000)
    assert r.tool == 'ic'
    assert r.trace['denominator'] == 20
    assert r.integer_bound == 17
    assert r.integer_bound * 20 >= 1000 / 3
    assert (r.integer_bound - 1) * 20 < 1000 / 3

    with raises(ValueError):
        ic_gate_bound(1, 1000)
    with raises(ValueError):
        ic_gate_bound(3, 1000, c_lb=0)


def test_lk_lb_estimate():
    assert lk_length_fixed_point(2, 1507) == 100
    assert abs(lk_lb_estimate(2, m=100) - 90 / 11) < 1e-12
    assert abs(lk_lb_estimate(2, n=1507) - 90 / 11) < 1e-12

    with raises(ValueError):
        lk_lb_estimate(1, m=100)
    with raises(ValueError):
        lk_lb_estimate(2)
    with raises(ValueError):
        lk_lb_estimate(2, m=100, alpha=0.0)
