#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
exact / log-space arithmetic helpers shared by the bound evaluators

@time  : 2026/10/09 22:37
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

MISSING_VALUE_NUMERIC = -1
AGGREGATION_MODES = ("size", "mean", "std", "max", "min", "median")

# exp() overflows a double beyond this exponent
EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class LogValue(object):
    """
    A non-negative quantity stored by its iterated natural logarithm.

    depth 0 holds the value itself, depth 1 its log, depth 2 log(log(value)).
    """
    value: float
    depth: int = 1

    @property
    def tag(self):
        return {0: 'float', 1: 'log-space'}.get(self.depth, 'nested-log')

    def to_log(self):
        """natural log of the quantity, inf if it does not fit a double"""
        if self.depth == 0:
            return math.log(self.value) if self.value > 0 else float('-inf')
        if self.depth == 1:
            return self.value
        if self.depth == 2 and self.value < EXP_OVERFLOW:
            return math.exp(self.value)
        return float('inf')

    def to_json(self):
        return {'value': self.value, 'depth': self.depth, 'tag': self.tag}

    @classmethod
    def from_json(cls, obj):
        return cls(value=float(obj['value']), depth=int(obj['depth']))


class MathUtil(object):
    """
    Tool of Math
    """

    @staticmethod
    def try_divide(x, y, val=0.0):
        """
        try to divide two numbers
        """
        if y != 0.0:
            val = float(x) / y
        return val

    @staticmethod
    def log_binom(big_n, m):
        """
        log C(N, m) for real N >= m >= 0 via log-gamma, -inf when N < m
        """
        if m < 0:
            raise ValueError('m must be non-negative, got %s' % m)
        if m == 0:
            return 0.0
        if big_n < m:
            return float('-inf')
        return float(gammaln(big_n + 1) - gammaln(m + 1) - gammaln(big_n - m + 1))

    @staticmethod
    def log_binom_from_log(log_big_n, m):
        """
        log C(N, m) when only log N is known; falls back to the upper estimate
        m log N - log m! once N no longer fits a double
        """
        if m == 0:
            return 0.0
        if log_big_n < EXP_OVERFLOW:
            return MathUtil.log_binom(math.exp(log_big_n), m)
        return m * log_big_n - float(gammaln(m + 1))

    @staticmethod
    def log_exp_plus(x, y):
        """
        log-space value of exp(x) + y, returned as LogValue of depth 1 when it fits
        and of depth 2 (log of the log) otherwise
        """
        if x < EXP_OVERFLOW:
            return LogValue(math.exp(x) + y, depth=1)
        if y <= 0:
            return LogValue(x, depth=2)
        return LogValue(x + math.log1p(math.exp(math.log(y) - x)), depth=2)

    @staticmethod
    def prime_sieve(limit):
        """
        Sieve of Eratosthenes, returns the sorted primes <= limit
        """
        limit = int(limit)
        if limit < 2:
            return []
        is_prime = np.ones(limit + 1, dtype=bool)
        is_prime[:2] = False
        for i in range(2, int(math.isqrt(limit)) + 1):
            if is_prime[i]:
                is_prime[i * i::i] = False
        return [int(p) for p in np.nonzero(is_prime)[0]]

    @staticmethod
    def aggregate(data, modes):
        """
        numpy summaries of a 1-d sample in the order of modes, empty samples give
        MISSING_VALUE_NUMERIC
        """
        modes = [modes] if isinstance(modes, str) else list(modes)
        modes = [m.lower() for m in modes]
        for m in modes:
            assert m in AGGREGATION_MODES, "Wrong aggregation_mode: %s" % m

        values = np.asarray(data, dtype=float)
        if values.size == 0:
            return [MISSING_VALUE_NUMERIC] * len(modes)
        return [float(getattr(np, m)(values)) for m in modes]
