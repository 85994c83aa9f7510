#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
shared fixtures

@time  : 2026/10/16 19:05
"""
import os
import sys

import pytest

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.append(ROOT_DIR)

from hd_workbench.grid_core import GridSpec  # noqa: E402


@pytest.fixture
def grid_3x3():
    return GridSpec(3, 2)


@pytest.fixture
def grid_3x3_points(grid_3x3):
    return list(grid_3x3.points())
