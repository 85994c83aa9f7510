#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""

@time  : 2026/10/09 15:58
"""
