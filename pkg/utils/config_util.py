#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
logging / global config loading for the workbench

@time  : 2026/10/09 16:35
"""
import os
import sys
import copy
import yaml
import logging.config

BUDGET_ENV = 'HDW_BUDGET'

# 默认配置, yaml 中缺失的字段用这里的值补齐
DEFAULT_CONFIG = {
    'grid': {'max_lines': 20000000},
    'search': {'budget': 200000, 'time_limit': 300},
    'projection': {'coefficient_range': 1000000, 'retry_cap': 16},
    'randcon': {'normal_approx_threshold': 1000000},
    'report': {'schema_version': '1.0'},
}


def init_logging(config_path='config/logging_config.yaml'):
    """
    initial logging module with config
    :param config_path:
    :return:
    """
    try:
        with open(config_path, 'r') as f:
            config = yaml.load(f.read(), Loader=yaml.SafeLoader)
        logging.config.dictConfig(config)
    except IOError:
        sys.stderr.write('logging config file "%s" not found\n' % config_path)
        logging.basicConfig(level=logging.INFO,
                            format='%(asctime)s - %(levelname)s - %(name)s - %(message)s')


def _merge(base, override):
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


def read_config(config_path='config/global_config.yaml'):
    """
    store the global parameters in the project, the search budget may be overridden
    by the HDW_BUDGET environment variable
    :param config_path:
    :return: nested dict
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(config_path, 'r') as f:
            loaded = yaml.load(f.read(), Loader=yaml.SafeLoader) or {}
        _merge(config, loaded)
    except IOError:
        sys.stderr.write('global config file "%s" not found, using defaults\n' % config_path)

    env_budget = os.environ.get(BUDGET_ENV)
    if env_budget:
        config['search']['budget'] = int(env_budget)
    return config
