"""
LMMSE channel estimation from pilots that pass through the same
low-resolution ADCs as the data.

Two routes are provided:

* :func:`estimate_channel_explicit` builds the quantized pilot observation,
  removes the (known) LoS part, correlates with each user's pilot and scales
  by the LMMSE coefficient.
* :func:`sample_estimated_channel` draws estimate and error directly from
  their Gaussian laws, which is what the Monte-Carlo harness uses by default.

Both rely on :func:`estimation_quality` for the closed-form statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, RicianProfile, crandn, los_matrix
from .errors import ConfigurationError
from .quantization import AdcModel


@dataclass(frozen=True)
class PilotConfig:
    """Orthogonal pilot matrix (K x L) with ``phi @ phi^H = L I``."""

    pilot_matrix: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.pilot_matrix, dtype=complex)
        if phi.ndim != 2:
            raise ConfigurationError("pilot matrix must be K x L")
        k, length = phi.shape
        if length < k:
            raise ConfigurationError(f"pilot length {length} is shorter than the number of users {k}")
        gram = phi @ phi.conj().T
        if np.max(np.abs(gram - length * np.eye(k))) > 1e-12 * length:
            raise ConfigurationError("pilot rows are not orthogonal with energy L (rank-deficient pilots?)")
        object.__setattr__(self, "pilot_matrix", phi)

    @property
    def length(self) -> int:
        return self.pilot_matrix.shape[1]

    @classmethod
    def dft(cls, n_users: int, length: int) -> "PilotConfig":
        """First ``n_users`` rows of the L-point DFT matrix (unit-modulus symbols)."""
        if length < n_users or n_users < 1:
            raise ConfigurationError(f"need 1 <= K <= L, got K={n_users}, L={length}")
        k = np.arange(n_users)[:, None]
        l = np.arange(length)[None, :]
        return cls(np.exp(-2j * np.pi * k * l / length))


@dataclass(frozen=True)
class EstimationStats:
    """Per-user LMMSE quality.

    ``xi`` is the fraction of NLoS variance captured by the estimate,
    ``err_var`` and ``est_var`` are the per-entry variances of the error and
    of the NLoS part of the estimate, ``psi`` the LMMSE scaling applied to
    the pilot correlator output.
    """

    xi: np.ndarray
    err_var: np.ndarray
    est_var: np.ndarray
    psi: np.ndarray

    @classmethod
    def perfect(cls, profile: RicianProfile) -> "EstimationStats":
        k = profile.n_users
        return cls(xi=np.ones(k), err_var=np.zeros(k), est_var=profile.nlos_var.copy(),
                   psi=np.full(k, np.nan))


def _effective_noise(adc: AdcModel, p_u: float, sigma2: float, beta: np.ndarray) -> float:
    """sigma2 / alpha + (1 / alpha - 1) P_u sum(beta): noise plus distortion seen by the estimator."""
    a = adc.alpha
    return sigma2 / a + (1.0 / a - 1.0) * p_u * np.sum(beta)


def estimation_quality(profile: RicianProfile, adc: AdcModel, p_u: float, sigma2: float,
                       pilot_len: int) -> EstimationStats:
    """Closed-form LMMSE statistics; independent of the antenna count."""
    if pilot_len < 1:
        raise ConfigurationError("pilot length must be >= 1")
    if p_u <= 0:
        raise ConfigurationError("pilot power must be > 0")
    if sigma2 < 0:
        raise ConfigurationError("sigma2 must be >= 0")
    beta, kf = profile.beta, profile.kfactor
    a = adc.alpha
    gain = p_u * pilot_len * beta
    xi = gain / (gain + (kf + 1.0) * _effective_noise(adc, p_u, sigma2, beta))
    err_var = beta * (1.0 - xi) / (kf + 1.0)
    est_var = beta * xi / (kf + 1.0)
    psi = (beta / np.sqrt(kf + 1.0)) / (
        a * pilot_len * beta * p_u / (kf + 1.0) + sigma2 + (1.0 - a) * p_u * np.sum(beta))
    return EstimationStats(xi=xi, err_var=err_var, est_var=est_var, psi=psi)


def estimate_channel_explicit(real_channel: ChannelRealization, profile: RicianProfile,
                              pilots: PilotConfig, adc: AdcModel, p_u: float, sigma2: float,
                              rng: np.random.Generator, nq_mode: str = "isotropic"):
    """Run the quantized-pilot LMMSE pipeline on one channel realization.

    Parameters
    ----------
    real_channel : ChannelRealization
        True channel; its LoS part is treated as known.
    nq_mode : {"isotropic", "conditional"}
        ``isotropic`` draws the training distortion with the averaged
        per-entry variance ``alpha (1 - alpha) (sigma2 + P_u sum(beta))``;
        ``conditional`` uses the exact per-symbol diagonal given H and the pilots.

    Returns
    -------
    h_hat : ndarray, shape (M, K)
        Channel estimate (known LoS mean plus estimated NLoS part).
    stats : EstimationStats
    """
    if sigma2 <= 0:
        raise ConfigurationError("sigma2 must be > 0")
    h = real_channel.h
    m, k = h.shape
    phi = pilots.pilot_matrix
    if phi.shape[0] != k:
        raise ConfigurationError(f"pilot matrix has {phi.shape[0]} rows for {k} users")
    length = pilots.length
    a = adc.alpha
    stats = estimation_quality(profile, adc, p_u, sigma2, length)

    clean = np.sqrt(p_u) * h @ phi
    noise = np.sqrt(sigma2) * crandn(rng, (m, length))
    if nq_mode == "isotropic":
        nq_var = a * (1.0 - a) * (sigma2 + p_u * np.sum(profile.beta))
    elif nq_mode == "conditional":
        nq_var = a * (1.0 - a) * (np.abs(clean) ** 2 + sigma2)
    else:
        raise ConfigurationError(f"unknown nq_mode {nq_mode!r}")
    y_q = a * clean + a * noise + np.sqrt(nq_var) * crandn(rng, (m, length))

    h_los = los_mean(profile, m)
    y_q = y_q - a * np.sqrt(p_u) * h_los @ phi
    x = np.sqrt(p_u) * phi
    corr = y_q @ x.conj().T
    h_w_hat = corr * stats.psi[None, :]
    h_hat = h_los + h_w_hat / np.sqrt(profile.kfactor + 1.0)[None, :]
    return h_hat, stats


def los_mean(profile: RicianProfile, m_antennas: int) -> np.ndarray:
    """Known LoS part of the channel, sqrt(K_f beta / (K_f + 1)) a(theta) per column."""
    return los_matrix(profile.aoa, m_antennas) * (profile.los_weight * np.sqrt(profile.beta))[None, :]


def nlos_estimate(h_hat: np.ndarray, profile: RicianProfile) -> np.ndarray:
    """Recover the estimate of ``H_nlos diag(sqrt(beta))`` from a full estimate."""
    m = h_hat.shape[0]
    return (h_hat - los_mean(profile, m)) * np.sqrt(profile.kfactor + 1.0)[None, :]


def sample_estimated_channel(profile: RicianProfile, stats: EstimationStats, m_antennas: int,
                             rng: np.random.Generator):
    """Draw ``(h_hat, h_true, err)`` from the Gaussian estimate/error model.

    The estimate is the LoS mean plus CN(0, beta xi / (K_f + 1)) entries, the
    error is independent CN(0, err_var), and ``h_true = h_hat + err``.
    """
    k = profile.n_users
    h_hat = los_mean(profile, m_antennas) + crandn(rng, (m_antennas, k)) * np.sqrt(stats.est_var)[None, :]
    err = crandn(rng, (m_antennas, k)) * np.sqrt(stats.err_var)[None, :]
    return h_hat, h_hat + err, err
