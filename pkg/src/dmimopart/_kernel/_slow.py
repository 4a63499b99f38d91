"""Pure-numpy fallback for the batch ZFBF kernel.

Mirrors the reference path in :mod:`dmimopart.channel` operation by
operation (inverse, double reciprocal of the gains, water-filling on the
sorted inverse gains) so that both kernel backends and the single-draw code
agree to the last few ulps.
"""

from __future__ import annotations

import numpy as np


def batch_zfbf_rates(h, p: float, cond_limit: float = 1e12):
    """ZFBF sum-rates for a batch of square channel matrices.

    Parameters
    ----------
    h : (n, k, k) complex array, one channel draw per leading index.
    p : per-SISO power constraint (total budget is k*p per draw).
    cond_limit : draws whose 2-norm condition number exceeds this are
        flagged instead of solved.

    Returns
    -------
    rates : (n,) float64, NaN where flagged.
    ok : (n,) bool, False for ill-conditioned draws (caller redraws).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 3 or h.shape[1] != h.shape[2]:
        raise ValueError(f"expected an (n, k, k) batch, got shape {h.shape}")
    n, k = h.shape[0], h.shape[1]
    if not p > 0:
        raise ValueError(f"power constraint must be > 0, got {p}")

    rates = np.full(n, np.nan)
    ok = np.zeros(n, dtype=bool)
    if n == 0:
        return rates, ok

    sv = np.linalg.svd(h, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = sv[:, 0] / sv[:, -1]
    ok[:] = np.isfinite(cond) & (cond <= cond_limit)

    idx = np.nonzero(ok)[0]
    if idx.size == 0:
        return rates, ok

    w = np.linalg.inv(h[idx])
    # Column norms: w[:, j, i] is entry j of weight vector w_i.
    gamma = 1.0 / np.sum(np.abs(w) ** 2, axis=1)
    c = 1.0 / gamma

    c_sorted = np.sort(c, axis=1)
    mu_cand = (k * p + np.cumsum(c_sorted, axis=1)) / np.arange(1, k + 1)
    feasible = mu_cand > c_sorted
    m_star = k - 1 - np.argmax(feasible[:, ::-1], axis=1)
    mu = np.take_along_axis(mu_cand, m_star[:, None], axis=1)

    tx = np.maximum(mu - c, 0.0)
    snr = tx * gamma
    rates[idx] = np.log2(1.0 + snr).sum(axis=1)
    return rates, ok
