"""Numerov recurrences on a logarithmic grid (compiled with numba)."""

import numpy as np
from numba import njit

BIG = 1e200


@njit(cache=True)
def outward(f, y, y0, y1, stop):
    """Integrate from the origin up to index ``stop``; return the node count."""
    y[0] = y0
    y[1] = y1
    nodes = 0
    for i in range(1, stop):
        y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1]
        if y[i + 1] * y[i] < 0.0:
            nodes += 1
        if abs(y[i + 1]) > BIG:
            for j in range(i + 2):
                y[j] /= BIG
    return nodes


@njit(cache=True)
def inward(f, y, start, stop, seed):
    """Integrate from ``start`` down to index ``stop`` with a decaying seed."""
    y[start] = seed
    y[start - 1] = (12.0 - 10.0 * f[start]) * y[start] / f[start - 1]
    for i in range(start - 1, stop, -1):
        y[i - 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i + 1] * y[i + 1]) / f[i - 1]
        if abs(y[i - 1]) > BIG:
            for j in range(i - 1, start + 1):
                y[j] /= BIG


@njit(cache=True)
def count_nodes(y, stop):
    nodes = 0
    for i in range(stop):
        if y[i + 1] * y[i] < 0.0:
            nodes += 1
    return nodes


@njit(cache=True)
def turning_point(k2):
    """Index of the outermost sign change of ``k2`` (-1 if none)."""
    for i in range(k2.shape[0] - 1, 0, -1):
        if (k2[i] >= 0.0) != (k2[i - 1] >= 0.0):
            return i
    return -1


@njit(cache=True)
def decay_index(k2, icl, dx, target):
    """First index beyond ``icl`` where the WKB decay exponent exceeds ``target``."""
    acc = 0.0
    for i in range(icl, k2.shape[0]):
        if k2[i] < 0.0:
            acc += np.sqrt(-k2[i]) * dx
        if acc > target:
            return i
    return -1
