import sys
import time
import logging
import argparse
import typing

import pandas
import yaml
import threadpoolctl

from psitm import __version__
from psitm.bitutils import ceil_log2
from psitm.bounds import (
    BoundQuery, RelaxationParams, BOUND_ROW_COLUMNS, CONVENTIONS, CEIL_LOG, DEFAULT_ALPHA,
    budget_for, fooling_bound, fano_bound, dt_depth_bound, relaxed_bounds, ic_gate_bound)
from psitm.antisim import SimulationAttempt, antisim_threshold, antisim_ratio, antisim_violates
from psitm.budget import IotaSpec
from psitm.depth import Word, depth_table, structural_depth, structural_depth_oracle, ORACLE_MAX_LENGTH
from psitm.exceptions import PsitmError
from psitm.languages import (
    FoolingFamilyParams, lk_generate, lk_encode, lk_decode, lk_decide, lk_decide_streamed,
    lk_fooling_family, lkphase_generate, lkphase_encode, lkphase_decode, lkphase_decide,
    lkphase_decide_blind, lkphase_decide_streamed, lkphase_collision_demo,
    tree_generate, tree_encode, tree_decode, tree_decide, pack_instance, load_instance)
from psitm.languages.tree_eval import tree_size
from psitm.ledger import run
from psitm.machine import MachineSpec
from psitm.library import MACHINES, get_machine
from psitm.policies import POLICIES
from psitm.prng import DEFAULT_SEED
from psitm.reading.machine_text import text2dict
from psitm.serialization import to_json
from psitm.workbench import (
    RunManifest, ResultsDirectory, cmd_reproduce_examples, cmd_figure_data, cmd_stress)
from psitm.workbench.figures import FIGURES


log = logging.getLogger('psitm.workbench')
help_formatter = lambda prog: argparse.ArgumentDefaultsHelpFormatter(prog, max_help_position=16)


class CommandResult(typing.NamedTuple):
    """
    Output of a subcommand: the main table, whether all its checks passed,
    and any extra products as {file name: str or bytes}
    """
    name: str
    table: pandas.DataFrame
    ok: bool
    extras: dict


def _single_row(name, row, ok=True, extras=None):
    return CommandResult(name, pandas.DataFrame([row]), ok, extras or {})


def _bound_table(name, results):
    df = pandas.DataFrame([r.summary_dict() for r in results], columns=BOUND_ROW_COLUMNS)
    return CommandResult(name, df, True, {})


###############################################################################
# Subcommands
###############################################################################

def cmd_depth(args):
    rows = []
    ok = True
    for text in args.words:
        w = Word(text)
        d = structural_depth(w)
        row = {'word': str(w), 'length': w.length, 'depth': d, 'ceil_log2': ceil_log2(max(w.length, 1))}
        ok &= d == row['ceil_log2']
        if args.oracle:
            if w.length > ORACLE_MAX_LENGTH:
                raise ValueError(f"--oracle only supports words of at most {ORACLE_MAX_LENGTH} bits")
            row['oracle'] = structural_depth_oracle(w)
            ok &= d == row['oracle']
        rows.append(row)

    extras = {}
    if args.table:
        for index, text in enumerate(args.words):
            df = depth_table(Word(text)).to_dataframe()
            extras[f'depth_table_{index}.csv'] = df
    return CommandResult('depth', pandas.DataFrame(rows), bool(ok), extras)


def _query(args, epsilon=None):
    return BoundQuery(
        c=args.c, d=args.d, n=args.n, logM=args.logM, epsilon=epsilon, convention=args.convention)


def cmd_budget(args):
    row = {
        'convention': args.convention,
        'c': args.c,
        'd': args.d,
        'n': args.n,
        'budget': budget_for(args.c, args.d, args.n, args.convention),
    }
    return _single_row('budget', row)


def cmd_fooling(args):
    return _bound_table('fooling', [fooling_bound(_query(args))])


def cmd_fano(args):
    return _bound_table('fano', [fano_bound(_query(args, epsilon=args.epsilon))])


def cmd_dt(args):
    return _bound_table('dt', [dt_depth_bound(_query(args))])


def cmd_relax(args):
    r = RelaxationParams(
        H=args.H, P=args.P, m=args.m, c0=args.c0, adv=args.adv,
        delta_bw=args.delta_bw, r1_additive_budget=args.r1_additive)
    results = relaxed_bounds(_query(args), r)
    return _bound_table('relax', [results[key] for key in sorted(results)])


def cmd_ic(args):
    return _bound_table('ic', [ic_gate_bound(args.k, args.n, c=args.c, c_lb=args.c_lb, convention=args.convention)])


def cmd_antisim(args):
    beta = args.beta if args.beta is not None else antisim_threshold(args.k, args.n)
    a = SimulationAttempt(args.k, args.n, beta)
    row = {
        'k': args.k,
        'n': args.n,
        'beta': float(beta),
        'threshold': antisim_threshold(args.k, args.n),
        'ratio': antisim_ratio(a),
        'calls': a.s,
        'violates': antisim_violates(a),
    }
    return _single_row('antisim', row)


def cmd_run(args):
    if args.machine_file:
        with open(args.machine_file, 'r') as fobj:
            items = text2dict(fobj.read())
        if args.policy:
            items['policy'] = args.policy
            items['policy_params'] = {}
        machine = MachineSpec(**items)
    else:
        machine = get_machine(args.machine, policy=args.policy)
    spec = IotaSpec(c=args.c, d=args.d)
    verdict, ledger = run(machine, args.word, spec, max_steps=args.max_steps, audit=not args.no_audit)
    summary = {
        'machine': machine.name,
        'policy': machine.policy_name,
        'verdict': str(verdict),
        'n': ledger.n,
        'budget': ledger.budget,
        'steps': ledger.num_steps,
        'total_bits': ledger.total_bits,
        'single_pass': ledger.is_single_pass(),
        'digest': ledger.digest(),
    }
    extras = {'ledger.csv': ledger.to_dataframe()}
    return CommandResult('run', pandas.DataFrame([summary]), ledger.within_budget(), extras)


def _lk_input(args):
    if args.input:
        inst = load_instance(args.input)
        return lk_encode(inst), inst.k, inst.m
    if args.bits is None or args.k is None or args.m is None:
        raise ValueError("lk decide requires either --input, or --bits together with --k and --m")
    return args.bits, args.k, args.m


def cmd_lk(args):
    if args.action == 'gen':
        k, m = args.k or 2, args.m or 16
        inst = lk_generate(k, m, args.seed)
        bits = lk_encode(inst)
        row = {
            'k': k, 'm': m, 'seed': args.seed, 'n': len(bits), 'start': inst.start,
            'chain': ' '.join(map(str, inst.chain())), 'verdict': str(lk_decide(inst)), 'bits': bits
        }
        stem = f'lk_k{k}_m{m}_seed{args.seed}'
        extras = {f'{stem}.psitm': pack_instance(inst), f'{stem}.json': to_json(inst, indent=4)}
        return _single_row('lk_gen', row, extras=extras)

    if args.action == 'decide':
        bits, k, m = _lk_input(args)
        dec = lk_decide_streamed(bits, k, m)
        direct = lk_decide(lk_decode(bits, k, m))
        row = dict(dec.summary_dict(), k=k, m=m, direct_verdict=str(direct), read_bound=2 * dec.n)
        ok = dec.verdict == direct and dec.reads <= 2 * dec.n
        return _single_row('lk_decide', row, ok=ok)

    # fool
    k, m = args.k or 2, args.m or 16
    base = lk_generate(k, m, args.seed)
    p = FoolingFamilyParams(
        base, alpha=args.alpha, rate=args.rate, vary_tables=args.vary_tables, seed=args.seed)
    members, cert = lk_fooling_family(p, args.size)
    df_members = pandas.DataFrame([
        {'member': i, 'verdict': str(lk_decide(inst)), 'bits': lk_encode(inst)}
        for i, inst in enumerate(members)
    ])
    row = dict(cert.summary_dict(), k=k, m=m, seed=args.seed)
    return _single_row('lk_fool', row, ok=cert.valid, extras={'lk_fool_members.csv': df_members})


def cmd_lkphase(args):
    k, m = args.k or 2, args.m or 8
    if args.action == 'gen':
        inst = lkphase_generate(k, m, args.seed, q=args.q)
        bits = lkphase_encode(inst)
        row = {
            'k': k, 'm': m, 'q': inst.q, 'ell': inst.ell, 'seed': args.seed, 'n': len(bits),
            'values': ' '.join(map(str, inst.values())),
            'verdict': str(lkphase_decide(inst)), 'blind_verdict': str(lkphase_decide_blind(inst)),
            'bits': bits,
        }
        stem = f'lkphase_k{k}_m{m}_seed{args.seed}'
        extras = {f'{stem}.psitm': pack_instance(inst), f'{stem}.json': to_json(inst, indent=4)}
        return _single_row('lkphase_gen', row, extras=extras)

    if args.action == 'decide':
        q = args.q or 1
        if args.input:
            inst = load_instance(args.input, q=q)
            bits, k, m = lkphase_encode(inst), inst.k, inst.m
        elif args.bits is not None:
            bits = args.bits
        else:
            raise ValueError("lkphase decide requires either --input or --bits")
        dec = lkphase_decide_streamed(bits, k, m, q)
        direct = lkphase_decide(lkphase_decode(bits, k, m, q))
        row = dict(dec.summary_dict(), k=k, m=m, q=q, direct_verdict=str(direct))
        ok = dec.verdict == direct and dec.reads <= 2 * dec.n
        return _single_row('lkphase_decide', row, ok=ok)

    # collide
    report = lkphase_collision_demo(k, m, args.seed)
    return _single_row('lkphase_collide', report.summary_dict(), ok=report.verify())


def cmd_tree(args):
    if args.action == 'gen':
        inst = tree_generate(args.depth, args.seed, padding=args.padding)
        bits = tree_encode(inst)
        row = {
            'depth': inst.depth, 'padding': inst.padding, 'size': tree_size(inst.root),
            'seed': args.seed, 'n': len(bits), 'verdict': str(tree_decide(inst)), 'bits': bits
        }
        stem = f'tree_d{args.depth}_seed{args.seed}'
        return _single_row('tree_gen', row, extras={f'{stem}.psitm': pack_instance(inst)})

    # decide
    if args.input:
        inst = load_instance(args.input)
    elif args.bits is not None:
        inst = tree_decode(args.bits)
    else:
        raise ValueError("tree decide requires either --input or --bits")
    row = {
        'declared_depth': inst.declared_depth, 'depth': inst.depth, 'padding': inst.padding,
        'size': tree_size(inst.root), 'verdict': str(tree_decide(inst))
    }
    return _single_row('tree_decide', row)


def cmd_reproduce(args):
    df, ok = cmd_reproduce_examples(args.convention)
    return CommandResult('reproduce', df, ok, {})


def cmd_figure(args):
    df = cmd_figure_data(args.which, convention=args.convention)
    return CommandResult(f'figure_{args.which}', df, True, {})


def cmd_stress_matrix(args):
    conf = {}
    if args.config:
        log.debug(f"Reading stress configuration: {args.config!r}")
        with open(args.config, 'r') as fobj:
            conf = yaml.safe_load(fobj) or {}
    if args.processes is not None:
        conf['processes'] = args.processes
    df, ok = cmd_stress(seed=args.seed, conf=conf)
    return CommandResult('stress', df, ok, {})


COMMANDS = {
    'depth': cmd_depth,
    'budget': cmd_budget,
    'fooling': cmd_fooling,
    'fano': cmd_fano,
    'antisim': cmd_antisim,
    'relax': cmd_relax,
    'dt': cmd_dt,
    'ic': cmd_ic,
    'run': cmd_run,
    'lk': cmd_lk,
    'lkphase': cmd_lkphase,
    'tree': cmd_tree,
    'reproduce': cmd_reproduce,
    'figure': cmd_figure,
    'stress': cmd_stress_matrix,
}


###############################################################################
# Parser
###############################################################################

def seed_type(text):
    """ argparse type of --seed: an integer in [0, 2^64) """
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2^64), got {value}")
    return value


def _add_budget_args(parser, logM=True):
    parser.add_argument("--c", type=int, default=1, help="Budget coefficient")
    parser.add_argument("--d", type=int, default=1, help="Introspection depth")
    parser.add_argument("--n", type=int, default=1000, help="Input length")
    if logM:
        parser.add_argument(
            "--logM", type=float, default=100.0,
            help="log2 of the size of the distinguishable set"
        )


def _add_instance_args(parser, k=None, m=None):
    parser.add_argument("--k", type=int, default=k, help="Number of layers")
    parser.add_argument("--m", type=int, default=m, help="Universe size")
    parser.add_argument("--bits", type=str, default=None, help="Input bit string (decide only)")
    parser.add_argument(
        "--input", type=str, default=None,
        help="Binary instance container to read (decide only)"
    )


def get_parser():
    parser = argparse.ArgumentParser(
        formatter_class=help_formatter,
        description=(
            "Bounded-introspection workbench: structural depth, budget metering,"
            " lower-bound calculators, separator languages and the reproducibility harness."
            " Every command writes its table as CSV, together with a run manifest,"
            " into <out>/results/<date>/"
        )
    )
    parser.add_argument(
        "--seed", type=seed_type, default=DEFAULT_SEED,
        help="Seed of every generated instance, in [0, 2^64)"
    )
    parser.add_argument(
        "--convention", type=str, default=CEIL_LOG, choices=CONVENTIONS,
        help="Budget convention: metered integer c*d*ceil(log2 n) or real-valued c*d*log2 n"
    )
    parser.add_argument(
        "--out", type=str, default='.',
        help="Base output directory; products are written to <out>/results/<date>/"
    )
    parser.add_argument(
        "--date", type=str, default=None,
        help="ISO date of the results directory. If not specified, use today's date"
    )
    parser.add_argument(
        "--csv", action='store_true',
        help="Print the result table as CSV instead of aligned text"
    )
    parser.add_argument(
        "--logfile", type=str, default=None,
        help="Save logs to given file. If not specified, no logfile is saved"
    )
    parser.add_argument(
        "--log-level", type=str, default='WARNING', choices=['DEBUG', 'INFO', 'WARNING'],
        help="Logging level for the psitm logger"
    )
    parser.add_argument(
        "--log-timings", action='store_true',
        help="If this flag is specified, log the execution times of all major functions"
    )
    parser.add_argument(
        '--version', action='version', version=__version__
    )

    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('depth', formatter_class=help_formatter, help="Structural depth of binary words")
    p.add_argument("words", type=str, nargs='+', help="Binary words")
    p.add_argument("--oracle", action='store_true', help="Cross-check against the exhaustive recursion")
    p.add_argument("--table", action='store_true', help="Also write the full DP table of each word")

    p = sub.add_parser('budget', formatter_class=help_formatter, help="Per-step introspection budget B(d,n)")
    _add_budget_args(p, logM=False)

    p = sub.add_parser('fooling', formatter_class=help_formatter, help="Fooling-set step lower bound")
    _add_budget_args(p)

    p = sub.add_parser('fano', formatter_class=help_formatter, help="Fano average-case step lower bound")
    _add_budget_args(p)
    p.add_argument("--epsilon", type=float, default=0.1, help="Error probability")

    p = sub.add_parser('dt', formatter_class=help_formatter, help="Decision-tree depth lower bound")
    _add_budget_args(p)

    p = sub.add_parser('relax', formatter_class=help_formatter, help="Relaxation-adjusted bounds R1-R4")
    _add_budget_args(p)
    p.add_argument("--H", type=float, default=0.0, help="Random bits (R1)")
    p.add_argument("--P", type=int, default=1, help="Number of passes (R2)")
    p.add_argument("--m", type=float, default=0.0, help="Per-pass overhead bits (R2)")
    p.add_argument("--c0", type=float, default=1.0, help="Query-to-entropy constant (R2)")
    p.add_argument("--adv", type=float, default=0.0, help="Advice bits (R3)")
    p.add_argument("--delta-bw", type=int, default=0, help="Signed per-step budget shift in bits (R4)")
    p.add_argument(
        "--r1-additive", action='store_true',
        help="R1 adds H to the per-step budget instead of removing it from log2 M"
    )

    p = sub.add_parser('ic', formatter_class=help_formatter, help="Information-complexity query bound")
    p.add_argument("--k", type=int, default=3, help="Depth of the target language")
    p.add_argument("--n", type=int, default=1000, help="Input length")
    p.add_argument("--c", type=int, default=1, help="Budget coefficient")
    p.add_argument("--c-lb", type=float, default=1.0, help="Constant of the Omega(n/k) lower bound")

    p = sub.add_parser('antisim', formatter_class=help_formatter, help="Anti-simulation threshold and ratio")
    p.add_argument("--k", type=int, default=2, help="Depth")
    p.add_argument("--n", type=int, default=1024, help="Input length")
    p.add_argument(
        "--beta", type=float, default=None,
        help="Exponent of the number of depth-(k-1) calls. If not specified, use the threshold"
    )

    p = sub.add_parser('run', formatter_class=help_formatter, help="Run a machine and write its budget ledger")
    p.add_argument(
        "--machine", type=str, default='right_scanner', choices=sorted(MACHINES),
        help="Built-in machine"
    )
    p.add_argument(
        "--machine-file", type=str, default=None,
        help="Machine description in the declarative text format, used instead of --machine"
    )
    p.add_argument(
        "--policy", type=str, default=None, choices=sorted(POLICIES),
        help="Override the iota policy of a built-in machine"
    )
    p.add_argument("--word", type=str, required=True, help="Input word")
    p.add_argument("--c", type=int, default=1, help="Budget coefficient")
    p.add_argument("--d", type=int, default=1, help="Introspection depth")
    p.add_argument("--max-steps", type=int, default=10000, help="Step horizon")
    p.add_argument("--no-audit", action='store_true', help="Do not audit single-pass declarations")

    p = sub.add_parser('lk', formatter_class=help_formatter, help="Pointer-chasing language L_k")
    p.add_argument("action", type=str, choices=('gen', 'decide', 'fool'))
    _add_instance_args(p)
    p.add_argument("--size", type=int, default=16, help="Fooling family size (fool only)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Target entropy rate (fool only)")
    p.add_argument(
        "--rate", type=str, default='symbol', choices=('symbol', 'bit'),
        help="Entropy rate unit (fool only)"
    )
    p.add_argument("--vary-tables", action='store_true', help="Also vary the last table (fool only)")

    p = sub.add_parser('lkphase', formatter_class=help_formatter, help="Phase-locked language L_k^phase")
    p.add_argument("action", type=str, choices=('gen', 'decide', 'collide'))
    _add_instance_args(p)
    p.add_argument("--q", type=int, default=None, help="Query index; drawn from the seed if not specified")

    p = sub.add_parser('tree', formatter_class=help_formatter, help="Tree evaluation language")
    p.add_argument("action", type=str, choices=('gen', 'decide'))
    p.add_argument("--depth", type=int, default=3, help="Tree depth (gen only)")
    p.add_argument("--padding", type=int, default=0, help="Zero padding bits (gen only)")
    p.add_argument("--bits", type=str, default=None, help="Input bit string (decide only)")
    p.add_argument("--input", type=str, default=None, help="Binary instance container (decide only)")

    sub.add_parser('reproduce', formatter_class=help_formatter, help="Check the pinned worked examples")

    p = sub.add_parser('figure', formatter_class=help_formatter, help="Figure data series")
    p.add_argument("which", type=str, choices=sorted(FIGURES), help="Figure id")

    p = sub.add_parser('stress', formatter_class=help_formatter, help="Stress matrix")
    p.add_argument("-c", "--config", type=str, default=None, help="Stress configuration file (YAML)")
    p.add_argument(
        "--processes", type=int, default=None,
        help="Number of parallel processes, overrides the configuration file"
    )
    return parser


###############################################################################
# Program
###############################################################################

def run_program(args, argv=None):
    """
    Run a workbench subcommand, write its products and manifest to the
    results directory, and return its result. This is used to check the
    results in unit tests.

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command line arguments
    argv : list or None
        Raw command line, recorded in the manifest

    Returns
    -------
    result : CommandResult
    """
    handlers = [logging.StreamHandler()]
    if args.logfile:
        handlers.append(logging.FileHandler(args.logfile, mode='w'))

    logging.basicConfig(
        level=args.log_level,
        format='%(asctime)s %(filename)18s:%(lineno)-4s %(levelname)-8s %(message)s',
        handlers=handlers
    )

    if args.log_timings:
        logging.getLogger('psitm.timing').setLevel('DEBUG')
    else:
        logging.getLogger('psitm.timing').setLevel('WARNING')

    results = ResultsDirectory(args.out, date=args.date)
    t0 = time.perf_counter()
    result = COMMANDS[args.command](args)
    wall_clock = time.perf_counter() - t0

    results.write_csv(f'{result.name}.csv', result.table)
    for name, product in result.extras.items():
        if isinstance(product, pandas.DataFrame):
            results.write_csv(name, product)
        elif isinstance(product, bytes):
            results.write_bytes(name, product)
        else:
            results.write_text(name, product)

    command = list(argv) if argv is not None else [args.command]
    manifest = RunManifest.create(
        command, args.seed, args.convention, results.path,
        wall_clock=wall_clock, files=list(results.written), ok=bool(result.ok))
    results.write_manifest(manifest)

    if args.csv:
        print(result.table.to_csv(index=False, lineterminator='\n'), end='')
    else:
        print(result.table.to_string(index=False))

    if not result.ok:
        log.warning(f"Command {args.command!r}: some checks FAILED")
    return result


# NOTE: main() is the entry point of the console script
def main():
    # NOTE: Force all numpy libraries to use a single thread/CPU, the stress
    # matrix parallelizes over processes instead
    with threadpoolctl.threadpool_limits(limits=1):
        parser = get_parser()
        args = parser.parse_args()
        try:
            result = run_program(args, argv=['psitm'] + sys.argv[1:])
        except PsitmError as ex:
            log.error(f"{type(ex).__name__}: {ex}")
            sys.exit(1)
        except ValueError as ex:
            parser.error(str(ex))
    sys.exit(0 if result.ok else 1)


if __name__ == '__main__':
    main()
