#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
serialization helpers shared by all artifacts

@time  : 2026/10/10 15:21
"""
import os
import json
import hashlib
import tempfile
from fractions import Fraction


def fraction_to_str(x) -> str:
    """exact rational as "p/q", integers included ("8/1")"""
    x = Fraction(x)
    return '{}/{}'.format(x.numerator, x.denominator)


def str_to_fraction(s: str) -> Fraction:
    return Fraction(s)


def canonical_dumps(obj) -> str:
    """byte-stable JSON, keys sorted"""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def hash_points(points) -> str:
    """sha256 of the lexicographically sorted point list"""
    payload = json.dumps(sorted([list(map(int, p)) for p in points]), separators=(',', ':'))
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def write_json_atomic(obj, path: str):
    """
    dump to a temp file in the target directory, then rename over the target
    """
    target_dir = os.path.dirname(os.path.abspath(path))
    os.makedirs(target_dir, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix='.tmp_', suffix='.json', dir=target_dir)
    try:
        with os.fdopen(fd, 'w') as fout:
            fout.write(canonical_dumps(obj))
            fout.write('\n')
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def read_json(path: str):
    with open(path, 'r') as f:
        return json.load(f)
