import os
import math
import tempfile

import yaml
import pandas
from pytest import raises
from schema import SchemaError

from psitm.bounds import CEIL_LOG, EXACT_REAL
from psitm.workbench import (
    validate_stress_config, InvalidStressConfig, RunManifest, ResultsDirectory,
    cmd_reproduce_examples, cmd_figure_data, cmd_stress)
from psitm.workbench.config_validation import DEFAULT_STRESS_CONFIG
from psitm.workbench.products import FLOAT_FORMAT
from psitm.workbench.reproduce import CHECKS, REPRODUCE_COLUMNS
from psitm.workbench.stress import STRESS_COLUMNS, StressJob, lk_workspace_bound
from psitm.workbench.worker_pool import WorkerPool


DATE = '2026-01-01'
CONFIG_A = os.path.join(os.path.dirname(__file__), 'stress_config_A.yml')


def load_config(fname):
    with open(fname, 'r') as fobj:
        return yaml.safe_load(fobj)


###############################################################################
# Worked examples
###############################################################################

def test_reproduce_ceil_log():
    df, ok = cmd_reproduce_examples(CEIL_LOG)
    assert ok
    assert list(df.columns) == REPRODUCE_COLUMNS
    assert len(df) == len(CHECKS)
    assert (df['status'] == 'pass').all()

    values = dict(zip(df['check'], df['value']))
    assert values['fooling_example'] == 5
    assert values['high_depth_example'] == 15
    assert values['budget_d2_n1000'] == 20
    assert values['budget_d3_n2pow20'] == 60
    assert values['fano_example_int'] == 3
    assert abs(values['fano_example_real'] - 2.68) <= 0.02
    assert abs(values['binary_entropy_0.1'] - 0.469) <= 0.001


def test_reproduce_exact_real():
    df, ok = cmd_reproduce_examples(EXACT_REAL)
    assert ok
    status = dict(zip(df['check'], df['status']))
    assert status['fooling_example'] == 'divergent'
    assert status['budget_d2_n1000'] == 'divergent'
    assert status['high_depth_example'] == 'pass'
    assert status['binary_entropy_0.1'] == 'pass'
    assert 'fail' not in status.values()

    values = dict(zip(df['check'], df['value']))
    assert values['fooling_example'] == 6
    assert math.isclose(values['budget_d2_n1000'], 2 * math.log2(1000))


def test_reproduce_csv():
    df, __ = cmd_reproduce_examples(CEIL_LOG)
    with tempfile.TemporaryDirectory() as tmpdir:
        results = ResultsDirectory(tmpdir, date=DATE)
        fname = results.write_csv('reproduce.csv', df)
        other = pandas.read_csv(fname)
    assert list(other.columns) == REPRODUCE_COLUMNS
    assert list(other['check']) == list(df['check'])
    assert list(other['status']) == list(df['status'])


###############################################################################
# Figure data
###############################################################################

def test_figure_foolingcurves():
    df = cmd_figure_data('foolingcurves')
    assert list(df.columns) == ['d', 'n', 'logM', 'budget', 'T_real', 'T']
    assert len(df) == 3 * 120
    row = df[(df.d == 1) & (df.logM == 120)].iloc[0]
    assert row['budget'] == 10
    assert row['T'] == 12
    assert math.isclose(row['T_real'], 12.0)

    # Larger budgets give smaller bounds
    for d in (1, 2):
        lower = df[df.d == d + 1]['T_real'].values
        upper = df[df.d == d]['T_real'].values
        assert (lower <= upper).all()


def test_figure_lk_logM():
    df = cmd_figure_data('lk_logM')
    assert list(df.columns) == ['m', 'alpha', 'logM']
    assert list(df['m']) == list(range(10, 210, 10))
    row = df[df.m == 100].iloc[0]
    assert math.isclose(row['logM'], 90.0)


def test_figure_fanocompare():
    df = cmd_figure_data('fanocompare')
    assert list(df.columns) == ['logM', 'epsilon', 'budget', 'T_fooling', 'T_fano']
    assert len(df) == 21
    assert (df['budget'] == 20).all()
    # The average-case bound never exceeds the worst-case one
    assert (df['T_fano'] <= df['T_fooling']).all()


def test_figure_antisim():
    df = cmd_figure_data('antisim')
    assert list(df.columns) == ['k', 'beta', 'ratio', 'threshold', 'violates']
    # k = 2 at n = 1024 has its threshold 0.1 on the grid, so only k = 3, 4 add a row
    assert len(df) == 3 * 40 + 2
    assert df['threshold'].sum() == 3
    assert not df.duplicated(['k', 'beta']).any()
    for __, group in df.groupby('k'):
        ratios = group.sort_values('beta')['ratio'].values
        assert (ratios[1:] > ratios[:-1]).all()


def test_figure_unknown():
    with raises(ValueError):
        cmd_figure_data('histogram')


###############################################################################
# Stress matrix
###############################################################################

def test_stress_config_validation():
    conf = validate_stress_config(None)
    assert conf == DEFAULT_STRESS_CONFIG

    conf = validate_stress_config({'m': 8, 'toggles': {'stochastic': False}})
    assert conf['m'] == 8
    assert conf['ks'] == [2, 3, 4]
    assert conf['toggles']['stochastic'] is False
    assert conf['toggles']['advice_bits'] == 4

    conf = validate_stress_config(load_config(CONFIG_A))
    assert conf['processes'] == 2
    assert conf['toggles']['budget_factor'] == 1.5

    invalid = [
        {'processes': 0},
        {'ks': []},
        {'ks': [1, 2]},
        {'m': 1},
        {'family_size': 'many'},
        {'toggles': {'budget_factor': 1.0}},
        {'toggles': {'advice_bits': 0}},
        {'toggles': {'multi_pass': 'yes'}},
        {'unknown_key': 1},
    ]
    for conf in invalid:
        with raises(InvalidStressConfig):
            validate_stress_config(conf)


def test_stress_default():
    df, ok = cmd_stress(seed=1337)
    assert ok
    assert list(df.columns) == STRESS_COLUMNS
    assert sorted(set(df['k'])) == [2, 3, 4]
    assert len(df) == 3 * 14

    passes = df[df.region == 'pass']
    fails = df[df.region == 'fail']
    assert (passes['status'] == 'pass').all()
    assert (fails['status'] == 'expected-fail').all()
    assert set(fails['check']) == {
        'extra-budget-factor', 'multi-pass', 'advice', 'payload-overflow', 'randomness', 'depth-k-1-decider'}


def test_stress_reproducible():
    conf = load_config(CONFIG_A)
    df1, ok1 = cmd_stress(seed=7, conf=dict(conf, processes=1))
    df2, ok2 = cmd_stress(seed=7, conf=conf)
    assert ok1 and ok2
    csv1 = df1.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    csv2 = df2.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    assert csv1 == csv2


def test_stress_toggles():
    conf = {
        'ks': [2],
        'm': 8,
        'instances': 4,
        'family_size': 4,
        'toggles': {'multi_pass': False, 'advice_bits': None, 'stochastic': False, 'budget_factor': None}
    }
    df, ok = cmd_stress(seed=1, conf=conf)
    assert ok
    fails = df[df.region == 'fail']
    assert set(fails['check']) == {'payload-overflow', 'depth-k-1-decider'}
    assert len(df[df.region == 'pass']) == 8


def test_stress_job():
    conf = validate_stress_config({'m': 8, 'instances': 4, 'family_size': 4})
    job = StressJob(conf, seed=3)
    row = job.ub_audit(3)
    assert row['status'] == 'pass'
    assert 'declared_workspace_bits=' in row['detail']
    assert row['detail'].split('declared_workspace_bits=')[1].split()[0] == f"{3 * 3 + 3 + 1}/{4 * 3 + 3}"
    row = job.budget_factor(2, 3.0)
    assert row['status'] == 'expected-fail'


def test_workspace_bound():
    # O(log m) for a fixed k: doubling m adds a constant
    assert lk_workspace_bound(2, 8) == 4 * 3 + 2
    assert lk_workspace_bound(2, 1024) == 4 * 10 + 2
    for k in (2, 3, 4):
        steps = {lk_workspace_bound(k, 2 * m) - lk_workspace_bound(k, m) for m in (4, 16, 256)}
        assert steps == {4}


def test_stress_invalid_config():
    with raises(InvalidStressConfig):
        cmd_stress(conf={'ks': [0]})


def test_worker_pool():
    assert WorkerPool(abs).map([-1, 2, -3]) == [1, 2, 3]
    assert WorkerPool(abs, processes=2).map([-1, 2, -3]) == [1, 2, 3]
    assert WorkerPool(abs, processes=2).map([]) == []
    with raises(ValueError):
        WorkerPool(abs, processes=0)


###############################################################################
# Products
###############################################################################

def test_results_directory():
    with tempfile.TemporaryDirectory() as tmpdir:
        results = ResultsDirectory(tmpdir, date=DATE)
        assert results.path == os.path.join(os.path.realpath(tmpdir), 'results', DATE)

        df = pandas.DataFrame({'x': [1.0 / 3.0, 2.0], 'name': ['a', 'b']})
        fname = results.write_csv('table.csv', df)
        with open(fname, 'r') as fobj:
            assert fobj.read() == 'x,name\n0.333333333333,a\n2,b\n'

        results.write_bytes('blob.bin', b'\x00\x01')
        results.write_text('table.csv', 'x\n1\n')
        assert results.written == ['table.csv', 'blob.bin']
        # No temporary files are left behind
        assert sorted(os.listdir(results.path)) == ['blob.bin', 'table.csv']

        for name in ('../escape.csv', 'a/b.csv', '', '..'):
            with raises(ValueError):
                results.filename(name)

    with raises(ValueError):
        ResultsDirectory('.', date='01/01/2026')


def test_run_manifest():
    manifest = RunManifest.create(['psitm', 'reproduce'], 1337, CEIL_LOG, '/tmp/out', wall_clock=0.5)
    assert manifest['versions']['psitm']
    assert manifest['files'] == []
    assert manifest['ok'] is None
    assert 'wall_clock' not in manifest.reproducible_items()

    with tempfile.TemporaryDirectory() as tmpdir:
        fname = os.path.join(tmpdir, 'manifest.json')
        manifest.save(fname)
        other = RunManifest.load(fname)
    assert other == manifest

    with raises(SchemaError):
        RunManifest.create(['psitm'], 1, 'rounded', '/tmp/out')
    with raises(SchemaError):
        RunManifest.create(['psitm'], -1, CEIL_LOG, '/tmp/out')
    with raises(SchemaError):
        RunManifest.create(['psitm'], 2 ** 64, CEIL_LOG, '/tmp/out')
