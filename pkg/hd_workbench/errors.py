#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
exception hierarchy, each class knows the CLI exit status it maps to

@time  : 2026/10/10 09:02
"""


class WorkbenchError(Exception):
    exit_code = 1


class DomainError(WorkbenchError, ValueError):
    """argument outside the mathematical domain of an operation"""
    exit_code = 2


class PreconditionError(WorkbenchError, ValueError):
    exit_code = 2


class ResourceLimitError(WorkbenchError):
    """estimated work exceeds a configured cap"""
    exit_code = 3


class VerificationError(WorkbenchError):
    exit_code = 1


class HypothesisError(WorkbenchError):
    """strict mode refuses to evaluate a bound whose hypotheses fail"""
    exit_code = 1
