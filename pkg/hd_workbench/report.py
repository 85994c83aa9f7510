#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
artifact envelopes: provenance-tagged numbers, versioned JSON schemas and the
human tables printed next to every JSON artifact

@time  : 2026/10/15 17:31
"""
import os
import json
import logging
import datetime
from fractions import Fraction

import jsonschema
import pandas as pd

from hd_workbench.errors import VerificationError
from utils.common import fraction_to_str, read_json, write_json_atomic
from utils.math_util import LogValue

logger = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'schemas')
SCHEMA_VERSION = '1.0'


def exact(x):
    """integers stay integers, rationals become "p/q" strings"""
    if isinstance(x, int):
        return {'value': x, 'tag': 'exact'}
    return {'value': fraction_to_str(Fraction(x)), 'tag': 'exact'}


def floating(x):
    return {'value': None if x is None else float(x), 'tag': 'float'}


def logged(v: LogValue):
    return v.to_json()


def load_schema(name: str):
    return read_json(os.path.join(SCHEMA_DIR, '{}.json'.format(name)))


def validate(obj, name: str):
    """jsonschema check against schemas/<name>.json"""
    schema = load_schema(name)
    try:
        jsonschema.validate(instance=obj, schema=schema)
    except jsonschema.ValidationError as e:
        raise VerificationError('{} artifact fails its schema: {}'.format(name, e.message))
    return obj


def envelope(command: str, params: dict, result: dict, timestamp: bool = True,
             schema_version: str = SCHEMA_VERSION, status: str = 'ok'):
    obj = {
        'schema_version': schema_version,
        'command': command,
        'status': status,
        'params': params,
        'result': result,
    }
    if timestamp:
        obj['generated_at'] = datetime.datetime.now().strftime('%Y-%m-%dT%H:%M:%S')
    return validate(obj, 'run')


def save(obj, path: str):
    write_json_atomic(obj, path)
    logger.info('artifact written to %s', path)


def to_table(record: dict) -> pd.DataFrame:
    """flattened key/value view of a JSON record"""
    flat = pd.json_normalize(json.loads(json.dumps(record)), sep='.')
    return flat.T.rename(columns={0: 'value'})
