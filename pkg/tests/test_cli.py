#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
end-to-end runs of the command line through main()

@time  : 2026/10/17 18:05
"""
import os
from fractions import Fraction

import pandas as pd
import pytest

from hd_workbench.grid_core import GridSpec
from hd_workbench.param_plan import choose_parameters
from hd_workbench.randcon import run_construction
from hd_workbench.run_workbench import main
from utils.common import hash_points, read_json


def _run(tmp_path, *argv, name='out.json'):
    out = str(tmp_path / name)
    code = main(['--out', out] + list(argv))
    return code, read_json(out) if os.path.exists(out) else None


def test_plan(tmp_path):
    code, obj = _run(tmp_path, 'plan', '--q', '3', '--eta', '0.4', '--sweep')
    assert code == 0
    assert obj['command'] == 'plan'
    assert obj['status'] == 'ok'
    assert obj['params']['eta'] == '2/5'
    assert 'out' not in obj['params']
    assert obj['result']['sweep']['argmax'] == [3, 4]
    assert obj['result']['s0_sweep']['ok']


def test_enumerate_small_grid(tmp_path):
    csv = str(tmp_path / 'sizes.csv')
    code, obj = _run(tmp_path, '--csv', csv, 'enumerate', '--n', '3', '--k', '2', '--r', '3')
    assert code == 0
    assert obj['result']['edge_count']['value'] == 8
    assert obj['result']['stats']['edge_count'] == 8
    assert obj['result']['line_sizes']['3'] == 8
    sizes = pd.read_csv(csv)
    assert int(sizes.loc[sizes['points_on_line'] == 3, 'lines'].iloc[0]) == 8


def test_supersat_checks_pass(tmp_path):
    code, obj = _run(tmp_path, '--seed', '3', 'supersat', '--n', '8', '--k', '2', '--r', '4', '--t', '4',
                     '--subsets', '5')
    assert code == 0
    assert obj['result']['coverage']['ok']
    assert obj['result']['incidence_ok']
    assert obj['result']['incidence_checks'] == 5


def test_bounds_strict_refuses_desk_scale(tmp_path):
    code, obj = _run(tmp_path, 'bounds', '--n', '1000000')
    assert code == 1
    assert obj is None


def test_bounds_formula_only(tmp_path):
    code, obj = _run(tmp_path, '--mode', 'formula-only', 'bounds', '--k', '4', '--r', '3', '--s0', '1/2',
                     '--f', '0.025', '--n', '1000000')
    assert code == 0
    assert obj['result']['banner'] == 'asymptotic-hypotheses-unmet'
    assert obj['result']['steps_max']['value'] == '1600/1'


def test_domain_error_exit_code(tmp_path):
    code, obj = _run(tmp_path, 'plan', '--q', '2', '--eta', '0.4')
    assert code == 2
    assert obj is None


@pytest.mark.parametrize('error', [ValueError('bad value'), AssertionError('broken postcondition'),
                                   ZeroDivisionError('division by zero')])
def test_stage_failure_exit_code(tmp_path, monkeypatch, error):
    def failing_plan(*args, **kwargs):
        raise error

    monkeypatch.setattr('hd_workbench.run_workbench.choose_parameters', failing_plan)
    code, obj = _run(tmp_path, 'plan', '--q', '3', '--eta', '0.4')
    assert code == 1
    assert obj is None


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(['plan', '--q', '3'])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(['plan', '--q', '3', '--eta', 'x'])


def test_construct_is_reproducible(tmp_path):
    argv = ['--seed', '11', '--no-timestamp', '--mode', 'formula-only', 'construct', '--q', '3', '--eta', '0.4',
            '--n', '3']
    first, second = tmp_path / 'a', tmp_path / 'b'
    first.mkdir()
    second.mkdir()
    assert main(['--out', str(first / 'run.json')] + argv) == 0
    assert main(['--out', str(second / 'run.json')] + argv) == 0
    with open(first / 'run.json', 'rb') as f1, open(second / 'run.json', 'rb') as f2:
        assert f1.read() == f2.read()
    obj = read_json(str(first / 'run.json'))
    assert 'generated_at' not in obj
    assert obj['result']['run']['seed'] == 11
    assert obj['result']['banner'] == 'asymptotic-hypotheses-unmet'


def test_pierce_refuted_fails_in_strict_mode(tmp_path):
    source = str(tmp_path / 'construct.json')
    assert main(['--out', source, '--mode', 'formula-only', 'construct', '--q', '3', '--eta', '0.4', '--n', '2',
                 '--alpha', '1.0', '--u', '5']) == 0
    assert len(read_json(source)['result']['run']['survivors']) == 16

    code, obj = _run(tmp_path, '--budget', '2000', 'pierce', '--in', source, name='cert.json')
    assert code == 1
    assert obj['status'] == 'verification-failed'
    cert = obj['result']['certificate']
    assert cert['p'] == 6
    assert cert['pq_verified']['verdict'] == 'refuted'
    assert len(cert['pq_verified']['witness']) == 6

    code, obj = _run(tmp_path, '--budget', '2000', '--mode', 'formula-only', 'pierce', '--in', source,
                     name='cert_formula.json')
    assert code == 0
    assert obj['status'] == 'ok'


def test_pierce_rejects_other_artifacts(tmp_path):
    source = str(tmp_path / 'plan.json')
    assert main(['--out', source, 'plan', '--q', '3', '--eta', '0.4']) == 0
    code, obj = _run(tmp_path, 'pierce', '--in', source, name='cert.json')
    assert code == 2
    assert obj is None


def test_color_experiment_csv(tmp_path):
    csv = str(tmp_path / 'greedy.csv')
    code, obj = _run(tmp_path, '--csv', csv, 'color', '--q', '3', '--experiment', '--m', '16', '--trials', '3',
                     '--kind', 'grid')
    assert code == 0
    assert obj['result']['experiment']['kind'] == 'grid'
    assert len(pd.read_csv(csv)) == 3


def test_color_pipeline(tmp_path):
    code, obj = _run(tmp_path, '--mode', 'formula-only', 'color', '--q', '3', '--n', '3')
    assert code == 0
    gq = obj['result']['gq']
    assert gq['n'] == 3
    assert gq['no_q_plus_one_collinear']


def test_construct_matches_library_run(tmp_path):
    # the construct_pierce.sh pipeline: q=3, eta=0.4, n=6, seed 1
    code, obj = _run(tmp_path, '--seed', '1', '--mode', 'formula-only', 'construct', '--q', '3', '--eta', '0.4',
                     '--n', '6')
    assert code == 0
    plan = choose_parameters(3, Fraction(2, 5))
    run = run_construction(GridSpec(6, plan.k), 6.0 ** float(plan.alpha_exp), seed=1, u=plan.u)
    assert obj['result']['run']['survivors_hash'] == hash_points(run.survivors)
    assert len(obj['result']['run']['survivors']) == len(run.survivors)
