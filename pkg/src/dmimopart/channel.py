"""Rayleigh channel draws and the zero-forcing beamforming solution.

One MIMO group of size K means K single-antenna APs jointly serving K
single-antenna clients.  The channel matrix has the users' channel row
vectors h_k as rows; zero-forcing weights are the columns w_i of the
(pseudo)inverse, so that h_k w_j = delta_kj.  Transmit powers come from
water-filling over the effective gains gamma_i = 1 / ||w_i||^2 under the
total budget K*P, where P is the per-SISO power constraint.

Everything here is a pure function of its inputs; the returned dataclasses
hold read-only numpy arrays and are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedChannelError, InvalidInputError

# Channels with a 2-norm condition number above this are rejected; i.i.d.
# complex Gaussian matrices land here with probability ~0, so Monte Carlo
# callers simply redraw instead of regularizing.
DEFAULT_COND_LIMIT = 1e12

# Strides of the stream-splitting rule below.  Triples (size, snr_index,
# trial) map to distinct stream ids as long as trial < 2**28 and
# snr_index < 2**12, which is far beyond any practical sweep.
_SIZE_STRIDE = 2**40
_SNR_STRIDE = 2**28


def derive_seed(base_seed: int, size: int, snr_index: int, trial: int) -> int:
    """Per-trial RNG seed: stream id XOR base seed.

    The stream id encodes (size, snr_index, trial) injectively, so every
    Monte Carlo trial gets its own reproducible stream regardless of the
    order (or thread) in which trials run.
    """
    if base_seed < 0:
        raise InvalidInputError("base_seed must be non-negative")
    stream = size * _SIZE_STRIDE + snr_index * _SNR_STRIDE + trial
    return base_seed ^ stream


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw: a K x K matrix of complex gains, row k is h_k."""

    k: int
    h: np.ndarray
    seed_tag: int | None = None

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.complex128)
        if self.k < 1:
            raise InvalidInputError(f"group size must be >= 1, got {self.k}")
        if h.shape != (self.k, self.k):
            raise InvalidInputError(
                f"channel matrix must be {self.k}x{self.k}, got {h.shape}"
            )
        if not np.isfinite(h).all():
            raise InvalidInputError("channel matrix contains NaN or Inf")
        h.flags.writeable = False
        object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class BeamformingSolution:
    """ZFBF weights plus the water-filling power allocation for one draw.

    ``snr`` holds the post-beamforming effective SNRs (mu*gamma_i - 1)+ that
    enter the rate formula;  ``tx_power`` holds the transmit powers
    (mu - 1/gamma_i)+.  The two coincide only for unit gains.
    """

    w: np.ndarray          # K x K complex, column i is w_i
    gamma: np.ndarray      # effective channel gains, > 0
    mu: float              # water level
    snr: np.ndarray        # per-user effective SNRs
    tx_power: np.ndarray   # per-user transmit powers
    sum_rate: float        # bits/s/Hz

    def __post_init__(self):
        for name in ("w", "gamma", "snr", "tx_power"):
            arr = np.asarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if (self.snr < 0).any() or (self.tx_power < 0).any():
            raise InvalidInputError("negative SNR or transmit power")


def draw_channel(k: int, seed) -> ChannelRealization:
    """Draw one i.i.d. Rayleigh K x K channel matrix.

    Entries are circularly-symmetric complex Gaussian, zero mean, unit
    variance, so |h_ij|^2 is Exp(1).  ``seed`` is anything accepted by
    ``np.random.default_rng``; the same integer seed always reproduces the
    same matrix, while a live Generator continues its stream (used for the
    redraw path of the Monte Carlo harness).
    """
    if k < 1:
        raise InvalidInputError(f"group size must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    re = rng.standard_normal((k, k))
    im = rng.standard_normal((k, k))
    h = (re + 1j * im) / np.sqrt(2.0)
    tag = int(seed) if isinstance(seed, (int, np.integer)) else None
    return ChannelRealization(k=k, h=h, seed_tag=tag)


def _as_matrix(h) -> np.ndarray:
    m = h.h if isinstance(h, ChannelRealization) else np.asarray(h, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"channel matrix must be square, got shape {m.shape}")
    return m


def zfbf_weights(h, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Zero-forcing weight matrix W with h_k w_j = delta_kj.

    For a square invertible channel the Moore-Penrose pseudoinverse is the
    plain inverse, so the diagonal of H W is exactly one.  Raises
    :class:`IllConditionedChannelError` when the 2-norm condition number
    exceeds ``cond_limit``; callers redraw rather than regularize.
    """
    m = _as_matrix(h)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedChannelError(
            f"channel condition number {cond:.3e} exceeds limit {cond_limit:.3e}"
        )
    return np.linalg.inv(m)


def waterfill(gamma, p: float):
    """Water-filling over gains ``gamma`` with total budget K*p.

    Returns ``(mu, snr, tx_power)`` where the water level mu satisfies the
    active-set condition sum_{i: mu > 1/gamma_i} (mu - 1/gamma_i) = K*p,
    tx_power_i = (mu - 1/gamma_i)+ and snr_i = tx_power_i * gamma_i.
    The level is found by the exact sorted closed form: with the inverse
    gains c sorted ascending, mu_m = (K*p + sum_{i<=m} c_i) / m and the
    active set is the largest m with mu_m > c_m.
    """
    g = np.asarray(gamma, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise InvalidInputError("gamma must be a non-empty 1-D array")
    if not np.isfinite(g).all() or (g <= 0).any():
        raise InvalidInputError("all gains must be finite and > 0")
    if not np.isfinite(p) or p <= 0:
        raise InvalidInputError(f"power constraint must be > 0, got {p}")

    k = g.size
    c = 1.0 / g
    c_sorted = np.sort(c)
    mu_cand = (k * p + np.cumsum(c_sorted)) / np.arange(1, k + 1)
    # m = 1 is always feasible (mu_1 = K*p + c_1 > c_1), so the set is
    # non-empty and the last feasible index is the active-set size.
    feasible = mu_cand > c_sorted
    m_star = int(np.nonzero(feasible)[0][-1])
    mu = float(mu_cand[m_star])

    tx_power = np.maximum(mu - c, 0.0)
    snr = tx_power * g
    return mu, snr, tx_power


def zfbf_sum_rate(h, p: float, cond_limit: float = DEFAULT_COND_LIMIT) -> BeamformingSolution:
    """ZFBF weights, water-filling and sum-rate for one channel draw.

    sum_rate = sum_i log2(1 + snr_i), which on the active set equals
    sum log2(mu * gamma_i).
    """
    chan = h if isinstance(h, ChannelRealization) else ChannelRealization(
        k=np.asarray(h).shape[0], h=np.asarray(h, dtype=np.complex128)
    )
    w = zfbf_weights(chan, cond_limit=cond_limit)
    gamma = 1.0 / np.sum(np.abs(w) ** 2, axis=0)
    mu, snr, tx_power = waterfill(gamma, p)
    sum_rate = float(np.log2(1.0 + snr).sum())
    return BeamformingSolution(
        w=w, gamma=gamma, mu=mu, snr=snr, tx_power=tx_power, sum_rate=sum_rate
    )
