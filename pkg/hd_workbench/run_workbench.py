#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
command line front door: one subcommand per workbench stage, every run leaves a
schema-checked JSON artifact and prints a table next to it

    python -m hd_workbench.run_workbench --out out/plan.json plan --q 3 --eta 0.4

exit status: 0 ok, 1 verification failure or strict-mode refusal, 2 usage error,
3 resource cap exceeded

@time  : 2026/10/16 14:47
"""
import os
import sys
import math
import argparse
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

import numpy as np
import pandas as pd

from hd_workbench import report
from hd_workbench.coloring import gq_lower_pipeline, greedy_upper_experiment
from hd_workbench.container_bounds import (ContainerParams, check_container_hypotheses, container_count_log_bound,
                                           exponent_slope_in_s0, extremal_tau_exponent,
                                           independent_set_count_log_bound, step_ledger,
                                           validate_count_hypotheses)
from hd_workbench.errors import HypothesisError, PreconditionError, VerificationError, WorkbenchError
from hd_workbench.grid_core import GridSpec, collinear_stats, enumerate_lines, hyperedge_count_bound
from hd_workbench.param_plan import (ParameterPlan, choose_parameters, coloring_plan, s0_sweep,
                                     error_term_target, k_peak, log_p_min, sweep_k)
from hd_workbench.planar import ASYMPTOTIC_BANNER, Verdict, concurrency_histogram, emit_certificate
from hd_workbench.randcon import (RandomSubsetRun, condition_one_sign, condition_one_threshold,
                                  exact_expected_u_tuples, find_independent_set, run_construction,
                                  sample_size_tail)
from hd_workbench.supersat import (SupersatConfig, average_line_load, build_line_family, direction_collisions,
                                   incidence_count, size_sandwich, supersat_lower_bound, verify_point_coverage)
from utils.common import canonical_dumps, fraction_to_str, read_json
from utils.config_util import init_logging, read_config

logger = logging.getLogger(__name__)

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
STRICT, FORMULA_ONLY = 'strict', 'formula-only'
# flags that only steer where output goes, kept out of the artifact params
IO_FLAGS = ('out', 'csv', 'config', 'log_config', 'no_timestamp', 'command', 'handler', 'show_progress')


@dataclass
class CommandOutput(object):
    result: Dict
    table: Optional[pd.DataFrame] = None
    csv_frame: Optional[pd.DataFrame] = None
    status: str = 'ok'


def fraction_arg(text: str) -> Fraction:
    """argparse type accepting 0.4 as well as 2/5"""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError('not a rational number: {}'.format(text))


def _log_n_of(args) -> float:
    if getattr(args, 'log_n', None) is not None:
        return float(args.log_n)
    if getattr(args, 'n', None) is None or args.n <= 1:
        raise PreconditionError('give --n > 1 or --log-n')
    return math.log(args.n)


def _plan_of(args) -> ParameterPlan:
    if args.variant == 'coloring':
        return coloring_plan(args.q, args.eta)
    return choose_parameters(args.q, args.eta)


def run_enumerate(args, config, budget) -> CommandOutput:
    grid = GridSpec(args.n, args.k)
    max_lines = config['grid']['max_lines']
    logger.info('***** Running enumerate n=%d k=%d r=%d *****', args.n, args.k, args.r)
    stats = collinear_stats(grid, args.r, max_lines=max_lines)
    lines = enumerate_lines(grid, min_count=args.min_count, max_lines=max_lines,
                            show_progress=args.show_progress)
    bound = hyperedge_count_bound(args.n, args.k, args.r) if args.n >= max(args.k, args.r) else None
    if bound is not None:
        assert stats.edge_count <= bound, 'edge count %d above the hyperedge bound %.6g' % (stats.edge_count, bound)

    sizes = pd.Series([line.count for line in lines], dtype='int64').value_counts().sort_index()
    histogram = pd.DataFrame({'points_on_line': sizes.index.astype('int64'), 'lines': sizes.values.astype('int64')})
    result = {
        'grid': grid.to_json(),
        'stats': stats.to_json(),
        'edge_count': report.exact(stats.edge_count),
        'line_count': report.exact(len(lines)),
        'hyperedge_bound': report.floating(bound),
        'line_sizes': {str(size): int(c) for size, c in sizes.items()},
    }
    return CommandOutput(result=result, csv_frame=histogram)


def _random_subsets(grid: GridSpec, count: int, seed: int):
    rng = np.random.default_rng(seed)
    pts = grid.as_array()
    for _ in range(count):
        size = int(rng.integers(1, len(pts) + 1))
        chosen = rng.choice(len(pts), size=size, replace=False)
        yield [tuple(int(x) for x in pts[i]) for i in sorted(chosen)]


def run_supersat(args, config, budget) -> CommandOutput:
    cfg = SupersatConfig.create(args.n, args.k, args.r, s=args.s, t=args.t)
    logger.info('***** Running supersat n=%d k=%d r=%d t=%s *****', args.n, args.k, args.r, cfg.t)
    result = {'config': cfg.to_json(), 'banner': None}

    if args.log_n is not None:
        bound = supersat_lower_bound(k=args.k, r=args.r, s=float(args.s), log_n=args.log_n)
        if not bound.hypotheses_met:
            if args.mode == STRICT:
                raise HypothesisError('supersaturation bound needs log n >= max(100k, 100 log r)')
            result['banner'] = ASYMPTOTIC_BANNER
        result['lower_bound'] = bound.to_json()

    family = build_line_family(cfg)
    coverage = verify_point_coverage(family)
    collisions = direction_collisions(family.directions)
    incidences = []
    for S in _random_subsets(cfg.grid, args.subsets, args.seed):
        got = incidence_count(S, family)
        incidences.append({'size': len(S), 'incidences': got, 'ok': got >= len(S) * family.direction_classes})
    load = average_line_load(cfg)
    result.update({
        'family': family.to_json(),
        'coverage': coverage.to_json(),
        'collisions': [[list(a), list(b)] for a, b in collisions],
        'sandwich': size_sandwich(cfg, family.size_V).to_json(),
        'average_line_load': report.exact(load) if isinstance(load, Fraction) else report.floating(load),
        'incidence_checks': len(incidences),
        'incidence_ok': all(row['ok'] for row in incidences),
    })
    status = 'ok' if coverage.ok and result['incidence_ok'] else 'verification-failed'
    return CommandOutput(result=result, csv_frame=pd.DataFrame(incidences, columns=['size', 'incidences', 'ok']),
                         status=status)


def run_bounds(args, config, budget) -> CommandOutput:
    log_n = _log_n_of(args)
    strict = args.mode == STRICT
    logger.info('***** Running bounds k=%d r=%d s0=%s f=%s log n=%.6g *****', args.k, args.r, args.s0, args.f, log_n)
    checks = validate_count_hypotheses(k=args.k, r=args.r, s0=args.s0, f=args.f, log_n=log_n)
    value = independent_set_count_log_bound(k=args.k, r=args.r, s0=float(args.s0), f=float(args.f), m=args.m,
                                            log_n=log_n, strict=strict)
    ledger = step_ledger(args.s0, args.f, k=args.k, r=args.r, log_n=log_n)
    result = {
        'hypotheses': checks.to_json(),
        'independent_sets': report.logged(value),
        'ledger': ledger.to_json(),
        'steps_exact': report.exact(ledger.steps_exact),
        'steps_max': report.exact(ledger.steps_max),
        'slope_in_s0': report.exact(exponent_slope_in_s0(args.k, args.r)),
        'tau_exponent': report.floating(extremal_tau_exponent(args.k, args.r, float(args.s0))),
        'banner': None if checks.ok else ASYMPTOTIC_BANNER,
    }

    rows = [{'item': c.name, 'value': c.lhs, 'against': c.rhs, 'ok': c.ok} for c in checks.conditions]
    rows.append({'item': 'steps', 'value': float(ledger.steps_exact), 'against': float(ledger.steps_max),
                 'ok': ledger.steps_exact <= ledger.steps_max})
    rows.append({'item': 'per_step ({})'.format(ledger.per_step[0].tag), 'value': ledger.per_step[0].value,
                 'against': None, 'ok': None})
    rows.append({'item': 'total ({})'.format(ledger.total.tag), 'value': ledger.total.value,
                 'against': None, 'ok': None})
    rows.append({'item': 'independent_sets ({})'.format(value.tag), 'value': value.value,
                 'against': None, 'ok': checks.ok})

    if args.grid_n is not None:
        grid = GridSpec(args.grid_n, args.grid_k)
        stats = collinear_stats(grid, args.r, max_lines=config['grid']['max_lines'])
        params = ContainerParams.from_stats(stats, grid.point_count, args.tau, args.epsilon)
        hyp = check_container_hypotheses(params)
        result['container'] = {
            'stats': stats.to_json(),
            'c_r': params.c_r,
            'hypotheses': hyp.to_json(),
            'log_count': report.floating(container_count_log_bound(params, strict=strict)),
        }
        rows.append({'item': 'container_hypotheses', 'value': float(hyp.delta_value),
                     'against': float(hyp.delta_threshold), 'ok': hyp.ok})
    return CommandOutput(result=result, table=pd.DataFrame(rows, columns=['item', 'value', 'against', 'ok']))


def run_plan(args, config, budget) -> CommandOutput:
    plan = _plan_of(args)
    logger.info('***** Running plan q=%d eta=%s variant=%s *****', args.q, args.eta, args.variant)
    result = {'plan': plan.to_json(), 'log_p_min': report.floating(log_p_min(args.q, args.eta))}
    if args.variant == 'pq':
        realized, clears = error_term_target(args.q, plan.f)
        result['error_term_target'] = {'value': report.exact(realized), 'clears': clears}
        result['condition_one_log_n'] = report.floating(condition_one_threshold(plan))
    if args.sweep:
        sweep = sweep_k(args.q)
        s0_report = s0_sweep(args.q, args.eta)
        result['sweep'] = {
            'values': {str(k): fraction_to_str(v) for k, v in sweep.values.items()},
            'argmax': list(sweep.argmax),
            'max_value': report.exact(sweep.max_value),
            'unimodal': sweep.unimodal,
            'k_peak': report.floating(k_peak(args.q)),
        }
        result['s0_sweep'] = {
            'boundary_T': report.exact(s0_report.boundary_T),
            'ok': s0_report.ok,
            'worst_margin': report.exact(min(pt.margin for pt in s0_report.points)),
        }
    return CommandOutput(result=result, table=report.to_table(result['plan']))


def run_construct(args, config, budget) -> CommandOutput:
    plan = _plan_of(args)
    grid = GridSpec(args.n, plan.k)
    alpha = args.alpha if args.alpha is not None else float(args.n) ** float(plan.alpha_exp)
    u = args.u if args.u is not None else plan.u
    logger.info('***** Running construct q=%d n=%d k=%d alpha=%.6g u=%d *****', args.q, args.n, plan.k, alpha, u)
    run = run_construction(grid, alpha, args.seed, u)
    log_n = math.log(args.n)
    result = {
        'run': run.to_json(),
        'plan': plan.to_json(),
        'expected_u_tuples': report.floating(exact_expected_u_tuples(grid, u, alpha)),
        'sample_tail': sample_size_tail(grid, alpha, threshold=config['randcon']['normal_approx_threshold']).to_json(),
        'condition_one': condition_one_sign(plan, log_n).to_json(),
        'banner': None if plan.hypotheses_met(log_n) else ASYMPTOTIC_BANNER,
    }
    if args.p is not None:
        result['independent_set'] = find_independent_set(run.survivors, plan.q, args.p, budget=budget).to_json()
    table = pd.DataFrame([{'sample': len(run.sample), 'deleted': len(run.deleted), 'survivors': len(run.survivors),
                           'alpha': alpha, 'u': u}])
    return CommandOutput(result=result, table=table)


def run_pierce(args, config, budget) -> CommandOutput:
    source = report.validate(read_json(args.input), 'run')
    if source['command'] != 'construct':
        raise PreconditionError('pierce reads a construct artifact, got {}'.format(source['command']))
    run = RandomSubsetRun.from_json(source['result']['run'])
    plan = ParameterPlan.from_json(source['result']['plan'])
    cert = emit_certificate(run, plan, budget=budget, p=args.p,
                            coefficient_range=config['projection']['coefficient_range'],
                            retry_cap=config['projection']['retry_cap'],
                            time_limit=float(config['search']['time_limit']))
    status = 'ok'
    if cert.pq.verdict == Verdict.REFUTED and args.mode == STRICT:
        logger.error('(p,q)-property refuted for p=%d q=%d, witness %s', cert.p, cert.q, cert.pq.witness)
        status = 'verification-failed'
    table = pd.DataFrame([{'lines': len(cert.family), 'p': cert.p, 'q': cert.q, 'verdict': cert.pq.verdict.value,
                           'max_concurrency': cert.max_concurrency,
                           'piercing_lower': float(cert.piercing.lower), 'piercing_exact': cert.piercing.exact,
                           'greedy_upper': cert.piercing.greedy_upper, 'realized_T': cert.realized_T}])
    return CommandOutput(result={'certificate': cert.to_json()}, table=table,
                         csv_frame=concurrency_histogram(cert.family), status=status)


def run_color(args, config, budget) -> CommandOutput:
    if args.experiment:
        frame, summary = greedy_upper_experiment(args.q, args.m, trials=args.trials, seed=args.seed,
                                                 kind=args.kind, show_progress=args.show_progress)
        result = {'experiment': {'q': args.q, 'm': args.m, 'trials': args.trials, 'kind': args.kind},
                  'summary': {key: report.floating(v) for key, v in summary.items()}}
        return CommandOutput(result=result, table=frame, csv_frame=frame)
    gq = gq_lower_pipeline(args.q, args.eta, m_target=args.m_target, seed=args.seed, budget=budget, n=args.n)
    table = pd.DataFrame([{'m': gq.m, 'max_independent': gq.max_independent, 'chi_lower': gq.chi_lower,
                           'chi_exact': gq.chromatic.exact, 'greedy_upper': gq.chromatic.greedy_upper,
                           'ideal': gq.ideal_bound}])
    return CommandOutput(result={'gq': gq.to_json()}, table=table)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='run_workbench',
                                     description='desk-scale workbench for the planar (p,q) lower bound')

    # 全局参数
    parser.add_argument('--seed', type=int, default=0, help='seed of the PCG64 generator')
    parser.add_argument('--budget', type=int, default=None,
                        help='node budget of the exact searches, overrides config and $HDW_BUDGET')
    parser.add_argument('--mode', choices=[STRICT, FORMULA_ONLY], default=STRICT,
                        help='strict refuses bounds whose hypotheses fail and fails on refuted certificates')
    parser.add_argument('--out', type=str, default=None, help='path of the JSON artifact, stdout when omitted')
    parser.add_argument('--csv', type=str, default=None, help='write the histogram / per-trial table as CSV')
    parser.add_argument('--no-timestamp', action='store_true',
                        help='leave generated_at out so identical runs give identical bytes')
    parser.add_argument('--config', type=str, default=os.path.join(ROOT_DIR, 'config', 'global_config.yaml'),
                        help='global yaml config')
    parser.add_argument('--log-config', type=str, default=os.path.join(ROOT_DIR, 'config', 'logging_config.yaml'),
                        help='logging yaml config')
    parser.add_argument('--show-progress', action='store_true', help='tqdm progress bars on long loops')

    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('enumerate', help='lines of [n]^k and the collinearity hypergraph statistics')
    p.add_argument('--n', type=int, required=True, help='side of the grid')
    p.add_argument('--k', type=int, required=True, help='dimension of the grid')
    p.add_argument('--r', type=int, default=3, help='uniformity of H(n,k,r)')
    p.add_argument('--min-count', type=int, default=2, help='smallest line size to list')
    p.set_defaults(handler=run_enumerate)

    p = sub.add_parser('supersat', help='the prime-direction line family and its coverage checks')
    p.add_argument('--n', type=int, required=True, help='side of the grid')
    p.add_argument('--k', type=int, required=True, help='dimension of the grid')
    p.add_argument('--r', type=int, default=3, help='tuple size')
    p.add_argument('--s', type=fraction_arg, default=Fraction(0), help='subset exponent, |S| = n^{k-s}')
    p.add_argument('--t', type=fraction_arg, default=None, help='explicit t instead of c0 n^s')
    p.add_argument('--subsets', type=int, default=20, help='seeded random subsets for the incidence check')
    p.add_argument('--log-n', type=float, default=None, help='also evaluate the asymptotic bound at this log n')
    p.set_defaults(handler=run_supersat)

    p = sub.add_parser('bounds', help='independent-set count bound, its hypotheses and the step ledger')
    p.add_argument('--k', type=int, default=4, help='grid dimension')
    p.add_argument('--r', type=int, default=3, help='uniformity')
    p.add_argument('--s0', type=fraction_arg, default=Fraction(1, 2), help='starting exponent s0')
    p.add_argument('--f', type=fraction_arg, default=Fraction(1, 40), help='slack f')
    p.add_argument('--m', type=int, default=0, help='independent set size')
    p.add_argument('--n', type=int, default=None, help='grid side')
    p.add_argument('--log-n', type=float, default=None, help='log of the grid side, for n beyond doubles')
    p.add_argument('--grid-n', type=int, default=None, help='also check the container hypotheses on [grid-n]^grid-k')
    p.add_argument('--grid-k', type=int, default=2, help='dimension of the checked grid')
    p.add_argument('--tau', type=fraction_arg, default=Fraction(1, 10 ** 6), help='container tau')
    p.add_argument('--epsilon', type=fraction_arg, default=Fraction(1, 4), help='container epsilon')
    p.set_defaults(handler=run_bounds)

    for name, helper, handler in (('plan', 'parameter plan for (q, eta)', run_plan),
                                  ('construct', 'sample, delete collinear u-tuples', run_construct)):
        p = sub.add_parser(name, help=helper)
        p.add_argument('--q', type=int, required=True, help='q of the (p,q) problem')
        p.add_argument('--eta', type=fraction_arg, required=True, help='eta in (0, 1/2]')
        p.add_argument('--variant', choices=['pq', 'coloring'], default='pq', help='which parameter plan')
        p.set_defaults(handler=handler)
        if name == 'plan':
            p.add_argument('--sweep', action='store_true', help='add the k sweep and the s0 sweep')
        else:
            p.add_argument('--n', type=int, required=True, help='grid side')
            p.add_argument('--alpha', type=float, default=None, help='sampling probability, n^alpha_exp by default')
            p.add_argument('--u', type=int, default=None, help='collinear tuple size to destroy, plan u by default')
            p.add_argument('--p', type=int, default=None, help='also search for a p-subset with no q collinear')

    p = sub.add_parser('pierce', help='project, dualize and certify a construct artifact')
    p.add_argument('--in', dest='input', type=str, required=True, help='JSON artifact written by construct')
    p.add_argument('--p', type=int, default=None, help='p of the (p,q) check, ceil(n^p_exp) by default')
    p.set_defaults(handler=run_pierce)

    p = sub.add_parser('color', help='chromatic lower bound pipeline or the greedy upper experiment')
    p.add_argument('--q', type=int, required=True, help='no q points of a color on a line')
    p.add_argument('--eta', type=fraction_arg, default=Fraction(2, 5), help='eta of the coloring plan')
    p.add_argument('--m-target', type=int, default=20, help='expected sample size of the pipeline')
    p.add_argument('--n', type=int, default=None, help='grid side, derived from --m-target by default')
    p.add_argument('--experiment', action='store_true', help='run the greedy upper-bound experiment instead')
    p.add_argument('--m', type=int, default=50, help='instance size of the experiment')
    p.add_argument('--trials', type=int, default=10, help='instances per experiment')
    p.add_argument('--kind', choices=['grid', 'generic', 'random'], default='random', help='instance family')
    p.set_defaults(handler=run_color)
    return parser


def _params(args) -> Dict:
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in IO_FLAGS:
            continue
        params[key] = fraction_to_str(value) if isinstance(value, Fraction) else value
    return params


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    init_logging(args.log_config)
    config = read_config(args.config)
    budget = args.budget if args.budget is not None else int(config['search']['budget'])
    args.budget = budget

    try:
        output = args.handler(args, config, budget)
        obj = report.envelope(args.command, _params(args), output.result, timestamp=not args.no_timestamp,
                              schema_version=str(config['report']['schema_version']), status=output.status)
    except WorkbenchError as e:
        logger.error('%s failed (exit %d): %s', args.command, e.exit_code, e)
        return e.exit_code
    except (ValueError, ArithmeticError, AssertionError) as e:
        # a broken postcondition or numeric failure inside a stage
        logger.exception('%s failed (exit %d): %r', args.command, VerificationError.exit_code, e)
        return VerificationError.exit_code

    if args.out:
        report.save(obj, args.out)
    else:
        print(canonical_dumps(obj))
    table = output.table if output.table is not None else report.to_table(output.result)
    print(table.to_string())
    if args.csv:
        if output.csv_frame is None:
            logger.warning('%s has no CSV table, --csv ignored', args.command)
        else:
            output.csv_frame.to_csv(args.csv, index=False)
            logger.info('csv written to %s', args.csv)

    if output.status != 'ok':
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
