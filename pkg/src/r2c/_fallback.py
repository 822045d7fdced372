"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Both backends run the same algorithm in the same accumulation order where it
matters for tie-breaking (nearest-center searches); EM results agree to
floating-point round-off.
"""

import numpy as np


def em_1d(x, weights, means, variances, var_floor, tol, max_iter, empty_mass):
    """Run univariate Gaussian-mixture EM in place on ``weights/means/variances``.

    Returns ``(loglik, trace, status)``. ``trace[t]`` is the log-likelihood of
    the parameters entering iteration ``t``; ``loglik`` belongs to the
    parameters left in the arrays. ``status`` is -1 on convergence or
    ``max_iter``, otherwise the index of a component whose responsibility mass
    fell below ``empty_mass`` (arrays then hold the pre-M-step parameters).
    """
    n = x.shape[0]
    trace = []
    ll_prev = -np.inf
    ll = -np.inf
    status = -1
    for it in range(max_iter + 1):
        dx = x[:, None] - means[None, :]
        lp = np.log(weights) - 0.5 * np.log(2.0 * np.pi * variances) - dx * dx * (0.5 / variances)
        m = lp.max(axis=1, keepdims=True)
        e = np.exp(lp - m)
        s = e.sum(axis=1, keepdims=True)
        ll = float((m[:, 0] + np.log(s[:, 0])).sum())
        trace.append(ll)
        if it > 0 and ll - ll_prev <= tol * abs(ll):
            break
        if it == max_iter:
            break
        resp = e / s
        nk = resp.sum(axis=0)
        empty = np.flatnonzero(nk < empty_mass)
        if empty.size:
            status = int(empty[0])
            break
        sx = (resp * dx).sum(axis=0)
        sxx = (resp * dx * dx).sum(axis=0)
        shift = sx / nk
        weights[:] = nk / n
        means += shift
        variances[:] = np.maximum(sxx / nk - shift * shift, var_floor)
        ll_prev = ll
    return ll, np.asarray(trace), status


def nearest_1d(x, centers):
    best = np.zeros(x.shape[0], dtype=np.intp)
    dbest = (x - centers[0]) ** 2
    for j in range(1, centers.shape[0]):
        d = (x - centers[j]) ** 2
        closer = d < dbest
        best[closer] = j
        dbest = np.where(closer, d, dbest)
    return best


def nearest_center(data, centers):
    n, dim = data.shape
    best = np.zeros(n, dtype=np.intp)
    dbest = np.full(n, np.inf)
    for c in range(centers.shape[0]):
        acc = np.zeros(n)
        for j in range(dim):
            diff = data[:, j] - centers[c, j]
            acc = acc + diff * diff
        closer = acc < dbest
        best[closer] = c
        dbest = np.where(closer, acc, dbest)
    return best
