#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
desk-scale workbench for lower bounds on planar (p,q) piercing numbers

@time  : 2026/10/09 15:58
"""
