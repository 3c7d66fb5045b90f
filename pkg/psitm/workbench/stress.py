"""
Stress matrix. For every k, the pass region checks that the L_k and L_k^phase
machinery behaves as claimed (linear-read single-pass decider, fooling
certificates, transcript collisions, budget-respecting deterministic runs),
and the fail region checks that each forbidden resource (extra budget,
multiple passes, advice, randomness, oversized payloads, a blind depth-(k-1)
decider) is caught.
"""
import math
import logging

import pandas

from ..antisim import SimulationAttempt, antisim_threshold, antisim_ratio
from ..bitutils import ceil_log2
from ..bounds import (
    BoundQuery, RelaxationParams, fooling_bound, relaxed_bounds, lk_lb_estimate, DEFAULT_ALPHA)
from ..budget import IotaSpec
from ..exceptions import BudgetViolation, SinglePassViolation, PsitmError
from ..languages.pointer_chase import (
    FoolingFamilyParams, lk_generate, lk_encode, lk_decide, lk_decide_streamed,
    lk_fooling_family, lk_encoded_length)
from ..languages.phase_locked import (
    lkphase_generate, lkphase_collision_demo, lkphase_fooling_family)
from ..ledger import run
from ..library import get_machine
from ..machine import Verdict
from ..timing import timing
from .config_validation import validate_stress_config
from .worker_pool import WorkerPool


log = logging.getLogger('psitm.workbench.stress')


PASS_REGION = 'pass'
FAIL_REGION = 'fail'

PASS = 'pass'
FAIL = 'FAIL'
EXPECTED_FAIL = 'expected-fail'
UNEXPECTED_PASS = 'UNEXPECTED-PASS'

STRESS_COLUMNS = ['k', 'region', 'check', 'status', 'detail']


# Registers of a log-space streamed decider: at most this many ceil(log2 m)
# bit words, on top of a phase counter
WORKSPACE_WORDS = 4


def lk_workspace_bound(k, m):
    """
    Workspace allowed to a streamed L_k decider for a constant k:
    WORKSPACE_WORDS * ceil(log2 m) bits plus ceil(log2(k + 2)) bits of phase
    counter
    """
    return WORKSPACE_WORDS * ceil_log2(m) + ceil_log2(k + 2)


def _row(k, region, check, held, detail):
    """
    'held' is True if the pass-region check held, or if the fail-region
    failure was triggered
    """
    if region == PASS_REGION:
        status = PASS if held else FAIL
    else:
        status = EXPECTED_FAIL if held else UNEXPECTED_PASS
    return {'k': k, 'region': region, 'check': check, 'status': status, 'detail': detail}


def _raises(func, exc_type):
    """ Returns (raised, message) """
    try:
        func()
    except exc_type as ex:
        return True, type(ex).__name__
    return False, 'completed'


class StressJob(object):
    """
    Func-like object that computes all stress-matrix rows for one value of k.
    Picklable, so that it can be dispatched to a WorkerPool.

    Parameters
    ----------
    conf : dict
        Validated stress configuration
    seed : int
        Base seed
    """
    def __init__(self, conf, seed):
        self.conf = conf
        self.seed = int(seed)

    def lk_word(self, k):
        return lk_encode(lk_generate(k, self.conf['m'], self.seed))

    # Pass region

    def ub_audit(self, k):
        m = self.conf['m']
        n = lk_encoded_length(k, m)
        bound = lk_workspace_bound(k, m)
        agree, max_reads, max_phases, max_ws = True, 0, 0, 0
        try:
            for i in range(self.conf['instances']):
                inst = lk_generate(k, m, self.seed + i)
                dec = lk_decide_streamed(lk_encode(inst), k, m)
                agree &= dec.verdict == lk_decide(inst)
                max_reads = max(max_reads, dec.reads)
                max_phases = max(max_phases, dec.phases)
                max_ws = max(max_ws, dec.workspace_bits)
        except PsitmError as ex:
            return _row(k, PASS_REGION, 'lk-ub-audit', False, f"{type(ex).__name__}: {ex}")
        held = agree and max_reads <= 2 * n and max_ws <= bound
        detail = (
            f"instances={self.conf['instances']} n={n} max_reads={max_reads} "
            f"phases={max_phases} declared_workspace_bits={max_ws}/{bound} agree={agree}")
        return _row(k, PASS_REGION, 'lk-ub-audit', held, detail)

    def lb_estimate(self, k):
        m = self.conf['m']
        n = lk_encoded_length(k, m)
        estimate = lk_lb_estimate(k, n=n, m=m)
        result = fooling_bound(BoundQuery(c=1, d=k - 1, n=n, logM=max(1.0, DEFAULT_ALPHA * m)))
        held = math.isclose(estimate, result.bound_value, rel_tol=1e-12)
        detail = f"n={n} logM={DEFAULT_ALPHA * m:.12g} T>={estimate:.12g} T_int={result.integer_bound}"
        return _row(k, PASS_REGION, 'lk-lb-estimate', held, detail)

    def fooling_certificate(self, k):
        base = lk_generate(k, self.conf['m'], self.seed)
        __, cert = lk_fooling_family(FoolingFamilyParams(base, seed=self.seed), self.conf['family_size'])
        detail = (
            f"size={cert.size} |S|={len(cert.varying_set)} accepts={cert.accepts} "
            f"rejects={cert.rejects} agree_outside={cert.agree_outside}")
        return _row(k, PASS_REGION, 'lk-fooling-certificate', cert.valid, detail)

    def phase_collision(self, k, report):
        detail = f"m={report.m} q={report.first.q} collides={report.collides} separates={report.separates}"
        return _row(k, PASS_REGION, 'lkphase-collision', report.verify(), detail)

    def phase_family(self, k):
        base = lkphase_generate(k, self.conf['phase_m'], self.seed)
        __, cert = lkphase_fooling_family(base, mode='column')
        detail = (
            f"size={cert.size} prefix_collides={cert.prefix_collides} "
            f"full_distinct={cert.full_distinct} accepts={cert.accepts} rejects={cert.rejects}")
        return _row(k, PASS_REGION, 'lkphase-fooling-family', cert.valid, detail)

    def single_pass_audit(self, k):
        word = self.lk_word(k)
        machine = get_machine('right_scanner')
        spec = IotaSpec(c=1, d=k - 1)
        try:
            verdict, ledger = run(machine, word, spec, max_steps=len(word) + 2)
        except PsitmError as ex:
            return _row(k, PASS_REGION, 'single-pass-audit', False, f"{type(ex).__name__}: {ex}")
        held = verdict == Verdict.ACCEPT and ledger.is_single_pass() and ledger.within_budget()
        detail = f"verdict={verdict} steps={ledger.num_steps} total_bits={ledger.total_bits}"
        return _row(k, PASS_REGION, 'single-pass-audit', held, detail)

    def determinism(self, k):
        word = self.lk_word(k)
        machine = get_machine('right_scanner')
        spec = IotaSpec(c=1, d=k - 1)
        digests = [run(machine, word, spec, max_steps=len(word) + 2)[1].digest() for __ in range(2)]
        held = digests[0] == digests[1]
        return _row(k, PASS_REGION, 'determinism-replay', held, f"digest={digests[0][:16]}")

    def antisim_boundary(self, k):
        n = lk_encoded_length(k, self.conf['m'])
        beta = antisim_threshold(k, n)
        ratio = antisim_ratio(SimulationAttempt(k, n, beta))
        held = math.isclose(ratio, 1.0, rel_tol=1e-12)
        return _row(k, PASS_REGION, 'antisim-threshold', held, f"n={n} beta*={beta:.12g} ratio={ratio:.12g}")

    # Fail region

    def budget_factor(self, k, factor):
        m = self.conf['m']
        n = lk_encoded_length(k, m)
        q = BoundQuery(c=1, d=k - 1, n=n, logM=max(1.0, DEFAULT_ALPHA * m))
        delta = int(math.ceil((factor - 1) * q.budget))
        base = fooling_bound(q)
        shifted = relaxed_bounds(q, RelaxationParams(delta_bw=delta))['R4']
        held = shifted.bound_value < base.bound_value
        detail = (
            f"R4 budget shift: factor={factor:g} delta_bw={delta} "
            f"T={base.bound_value:.12g} -> {shifted.bound_value:.12g}")
        return _row(k, FAIL_REGION, 'extra-budget-factor', held, detail)

    def multi_pass(self, k):
        word = self.lk_word(k)
        machine = get_machine('rescanner', single_pass=True)
        spec = IotaSpec(c=1, d=k - 1)
        held, outcome = _raises(lambda: run(machine, word, spec, max_steps=3 * len(word) + 8), SinglePassViolation)
        return _row(k, FAIL_REGION, 'multi-pass', held, outcome)

    def advice(self, k, advice_bits):
        word = self.lk_word(k)
        machine = get_machine('right_scanner', policy='advice', policy_params={'advice_bits': advice_bits})
        spec = IotaSpec(c=1, d=k - 1)
        held, outcome = _raises(lambda: run(machine, word, spec, max_steps=len(word) + 2), BudgetViolation)
        return _row(k, FAIL_REGION, 'advice', held, f"advice_bits={advice_bits} {outcome}")

    def overflow(self, k):
        word = self.lk_word(k)
        machine = get_machine('right_scanner', policy='overflow')
        spec = IotaSpec(c=1, d=k - 1)
        held, outcome = _raises(lambda: run(machine, word, spec, max_steps=len(word) + 2), BudgetViolation)
        return _row(k, FAIL_REGION, 'payload-overflow', held, outcome)

    def stochastic(self, k):
        word = self.lk_word(k)
        machine = get_machine('right_scanner', policy='stochastic', policy_params={'seed': self.seed})
        spec = IotaSpec(c=1, d=k - 1)
        digests = [run(machine, word, spec, max_steps=len(word) + 2)[1].digest() for __ in range(2)]
        held = digests[0] != digests[1]
        return _row(k, FAIL_REGION, 'randomness', held, f"replay_digests_differ={held}")

    def blind_decider(self, k, report):
        blind_equal = report.blind_verdicts[0] == report.blind_verdicts[1]
        truth_differs = report.verdicts[0] != report.verdicts[1]
        held = blind_equal and truth_differs
        detail = (
            f"verdicts={report.verdicts[0]}/{report.verdicts[1]} "
            f"blind={report.blind_verdicts[0]}/{report.blind_verdicts[1]}")
        return _row(k, FAIL_REGION, 'depth-k-1-decider', held, detail)

    def __call__(self, k):
        toggles = self.conf['toggles']
        report = lkphase_collision_demo(k, self.conf['phase_m'], self.seed)

        rows = [
            self.ub_audit(k),
            self.lb_estimate(k),
            self.fooling_certificate(k),
            self.phase_collision(k, report),
            self.phase_family(k),
            self.single_pass_audit(k),
            self.determinism(k),
            self.antisim_boundary(k),
        ]
        if toggles['budget_factor'] is not None:
            rows.append(self.budget_factor(k, toggles['budget_factor']))
        if toggles['multi_pass']:
            rows.append(self.multi_pass(k))
        if toggles['advice_bits'] is not None:
            rows.append(self.advice(k, toggles['advice_bits']))
        rows.append(self.overflow(k))
        if toggles['stochastic']:
            rows.append(self.stochastic(k))
        rows.append(self.blind_decider(k, report))
        return rows


@timing
def cmd_stress(seed=1337, conf=None):
    """
    Run the stress matrix.

    Parameters
    ----------
    seed : int
        Base seed of every generated instance
    conf : dict or None
        Stress configuration, validated and merged onto the defaults

    Returns
    -------
    df : pandas.DataFrame
        Columns: k, region, check, status, detail
    ok : bool
        True iff every pass-region row is 'pass' and every fail-region row
        is 'expected-fail'
    """
    conf = validate_stress_config(conf)
    ks = list(conf['ks'])
    log.info(f"Stress matrix for k = {ks}, m = {conf['m']}, seed = {seed}")

    pool = WorkerPool(StressJob(conf, seed), processes=conf['processes'])
    rows = [row for batch in pool.map(ks) for row in batch]
    df = pandas.DataFrame(rows, columns=STRESS_COLUMNS)

    for row in df.itertuples():
        if row.status in (FAIL, UNEXPECTED_PASS):
            log.warning(f"Stress check {row.check!r} for k = {row.k}: {row.status} ({row.detail})")
    ok = bool(df['status'].isin([PASS, EXPECTED_FAIL]).all())
    log.info(f"Stress matrix: {len(df)} rows, ok = {ok}")
    return df, ok
