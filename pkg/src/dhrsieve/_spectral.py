"""Chebyshev-Lobatto panel machinery used by the method-of-steps solvers.

Every panel carries function values at the same reference nodes, so shifting
a panel by a whole delay reuses the stored values without interpolation.
"""
import numpy as np
from numpy.polynomial import chebyshev as _cheb

NODES = 24

# ascending Chebyshev-Lobatto nodes on [-1, 1]
REF = -np.cos(np.pi * np.arange(NODES) / (NODES - 1))


def _cumulative_matrix(n=NODES):
    vander = _cheb.chebvander(REF, n - 1)
    inv = np.linalg.inv(vander)
    out = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        out[:, j] = _cheb.chebval(REF, _cheb.chebint(e, lbnd=-1))
    return out @ inv


# CUM @ values gives the integral from -1 to each node
CUM = _cumulative_matrix()
# Clenshaw-Curtis weights on [-1, 1]
WEIGHTS = CUM[-1].copy()

_BARY = np.ones(NODES)
_BARY[0] = _BARY[-1] = 0.5
_BARY *= (-1.0) ** np.arange(NODES)


def nodes(a, b):
    return 0.5 * (a + b) + 0.5 * (b - a) * REF


def cumulative(a, b, values):
    """Integral of the interpolant from a to every node of [a, b]."""
    return 0.5 * (b - a) * (CUM @ values)


def integrate(a, b, values):
    return 0.5 * (b - a) * float(WEIGHTS @ values)


def interpolate(a, b, values, t):
    """Barycentric evaluation of the panel interpolant at points t in [a, b]."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    values = np.asarray(values, dtype=float)
    xs = (2.0 * t - (a + b)) / (b - a)
    diff = xs[:, None] - REF[None, :]
    hit = diff == 0.0
    diff[hit] = 1.0
    wd = _BARY / diff
    out = (wd @ values) / wd.sum(axis=1)
    rows, cols = np.nonzero(hit)
    out[rows] = values[cols]
    return out
