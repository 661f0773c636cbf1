"""Shared test helpers: seeded random root configurations per family."""

import random

import pytest
from mpmath import mp

from multiroots import ALGEBRAIC, EXPONENTIAL, RootConfiguration


def random_configuration(rng, family, bits=53, m_range=(2, 5), alpha_max=4,
                         gap_range=(0.35, 0.9)):
    """Distinct separated roots with desk-scale multiplicities.

    Gaps stay >= 0.35, spans stay inside one period for the trigonometric
    family and inside [-2.5, 2.5] for the exponential one; trig/exp total
    multiplicities come out even.
    """
    m = rng.randint(*m_range)
    while True:
        alphas = [rng.randint(1, alpha_max) for _ in range(m)]
        total = sum(alphas)
        if family == ALGEBRAIC:
            if total <= 10:
                break
        elif total % 2 == 0 and total <= 12:
            break
    if family == EXPONENTIAL:
        start = rng.uniform(-2.4, -1.4)
    else:
        start = rng.uniform(-3.0, -1.0)
    roots = [start]
    for _ in range(m - 1):
        roots.append(roots[-1] + rng.uniform(*gap_range))
    return RootConfiguration(roots, alphas, precision_bits=bits)


def random_simple_roots(rng, m, gap_range=(0.35, 1.1)):
    roots = [rng.uniform(-3.0, -1.0)]
    for _ in range(m - 1):
        roots.append(roots[-1] + rng.uniform(*gap_range))
    return roots


@pytest.fixture
def rng():
    return random.Random(20260810)


def max_abs(values):
    return max(abs(v) for v in values)


def assert_close(actual, expected, rel, abs_floor=0):
    actual, expected = mp.mpf(actual), mp.mpf(expected)
    tol = mp.mpf(rel) * max(abs(expected), mp.mpf(abs_floor))
    assert abs(actual - expected) <= tol, (
        f"|{actual} - {expected}| = {abs(actual - expected)} > {tol}"
    )
