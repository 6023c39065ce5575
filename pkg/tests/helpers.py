"""Shared test helpers: a valid-point sampler and the acceptance result registry."""
import numpy as np

from dhrsieve.bounds import ParameterPoint
from dhrsieve.sievefn import get_limits

# criterion number -> (status, detail); printed in the terminal summary
ACCEPTANCE = {}


def record(n, ok, detail):
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE[n] = (status, detail)
    print(f"criterion {n}: {status} {detail}")
    return ok


def sample_points(g, n, seed):
    """Valid points with xi1 >= beta_g and xi2 >= beta_{g+1}."""
    bg, bn = get_limits(g).beta, get_limits(g + 1).beta
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        v = rng.uniform(2 * bg + 0.5, 45.0)
        w_min = max(2.0, v / (v / 2 + 1 - bg))
        w = rng.uniform(w_min, v)
        u_min = max(1.0, v / (v + 1 - bn))
        if u_min >= min(2.0, w):
            continue
        u = rng.uniform(u_min, min(2.0, w))
        p = ParameterPoint(v, w, u)
        if p.is_ordered() and p.xi1 >= bg and p.xi2 >= bn:
            out.append(p)
    return out
