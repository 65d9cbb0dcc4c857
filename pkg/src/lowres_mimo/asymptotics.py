"""
Large-system approximations of the uplink SINR.

Covers the ZF approximation (perfect and estimated CSI) built on the
non-central Wishart mean matrix, the MRC approximation (estimated CSI) built
from the second and fourth moments of estimated Rician channels, the
power-scaling limits as M grows with P_u = E_u / M**nu, and the limits for
very strong LoS components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .channel import RicianProfile, los_gram, los_inner_lambda
from .errors import ConfigurationError, NumericalRankError
from .estimation import EstimationStats
from .quantization import AdcModel
from .receivers import COND_LIMIT, _check_receiver


@dataclass(frozen=True)
class SigmaMatrix:
    """Hermitian positive-definite K x K mean matrix of the normalized Gram."""

    mat: np.ndarray

    def inv_diag(self) -> np.ndarray:
        """Diagonal of the inverse, via a Hermitian (Cholesky) solve."""
        mat = 0.5 * (self.mat + self.mat.conj().T)
        cond = np.linalg.cond(mat)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise NumericalRankError(
                f"Sigma matrix is numerically singular (condition number {cond:.3e}); "
                "two users probably share the same sin(AoA)")
        c = linalg.cho_factor(mat, lower=True)
        inv = linalg.cho_solve(c, np.eye(mat.shape[0], dtype=complex))
        return np.real(np.diag(inv))


@dataclass(frozen=True)
class ScalingScenario:
    """Transmit power shrinks as ``P_u = e_u / M**nu``."""

    e_u: float
    nu: float
    fading: str = "rician"

    def __post_init__(self):
        if self.nu <= 0:
            raise ConfigurationError("scaling exponent nu must be > 0")
        if self.fading not in ("rayleigh", "rician"):
            raise ConfigurationError(f"fading must be 'rayleigh' or 'rician', got {self.fading!r}")

    def power(self, m_antennas) -> float:
        return self.e_u / m_antennas**self.nu


def _los_block(profile: RicianProfile, m_antennas: int) -> np.ndarray:
    """(1/M) D H_los^H H_los D with D = diag(sqrt(K_f / (K_f + 1)))."""
    d = profile.los_weight
    return d[:, None] * los_gram(profile.aoa, m_antennas) * d[None, :] / m_antennas


def sigma_perfect(profile: RicianProfile, m_antennas: int) -> SigmaMatrix:
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    return SigmaMatrix(np.diag(1.0 / (profile.kfactor + 1.0)) + _los_block(profile, m_antennas))


def sigma_imperfect(profile: RicianProfile, stats: EstimationStats, m_antennas: int) -> SigmaMatrix:
    """Same as :func:`sigma_perfect` with the NLoS diagonal scaled by xi."""
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    xi = np.asarray(stats.xi, dtype=float)
    return SigmaMatrix(np.diag(xi / (profile.kfactor + 1.0)) + _los_block(profile, m_antennas))


def _distortion_level(adc: AdcModel, p_u, sigma2, beta) -> float:
    """alpha sigma2 + alpha (1 - alpha) P_u sum(beta)."""
    a = adc.alpha
    return a * sigma2 + a * (1.0 - a) * p_u * np.sum(beta)


def zf_sinr_approx(profile: RicianProfile, adc: AdcModel, p_u: float, sigma2: float,
                   m_antennas: int, stats: EstimationStats | None = None) -> np.ndarray:
    """Approximate ZF SINR of every user; ``stats=None`` means perfect CSI."""
    k = profile.n_users
    if m_antennas <= k:
        raise ConfigurationError(f"ZF approximation needs M > K, got M={m_antennas}, K={k}")
    a = adc.alpha
    beta = profile.beta
    level = _distortion_level(adc, p_u, sigma2, beta)
    if stats is None:
        inv = sigma_perfect(profile, m_antennas).inv_diag()
    else:
        inv = sigma_imperfect(profile, stats, m_antennas).inv_diag()
        level = level + a**2 * p_u * np.sum(stats.err_var)
    theta = level * inv / (beta * (m_antennas - k))
    return a**2 * p_u / theta


def moment_h2(profile: RicianProfile, stats: EstimationStats, k: int, m_antennas: int) -> float:
    """E ||h_hat_k||^2 = M beta (K_f + xi) / (K_f + 1)."""
    b, kf, xi = profile.beta[k], profile.kfactor[k], stats.xi[k]
    return m_antennas * b * (kf + xi) / (kf + 1.0)


def moment_h4(profile: RicianProfile, stats: EstimationStats, k: int, m_antennas: int) -> float:
    """E ||h_hat_k||^4."""
    b, kf, xi = profile.beta[k], profile.kfactor[k], stats.xi[k]
    m = m_antennas
    return m * b**2 * (2 * kf * xi + 2 * m * kf * xi + m * kf**2 + (m + 1) * xi**2) / (kf + 1.0) ** 2


def moment_cross(profile: RicianProfile, stats: EstimationStats, k: int, n: int, m_antennas: int) -> float:
    """E |h_hat_k^H h_hat_n|^2 for k != n, LoS overlap entering through lambda_kn^2."""
    if k == n:
        raise ValueError("moment_cross needs two distinct users")
    bk, bn = profile.beta[k], profile.beta[n]
    kk, kn = profile.kfactor[k], profile.kfactor[n]
    xk, xn = stats.xi[k], stats.xi[n]
    lam2 = los_inner_lambda(profile.aoa[k], profile.aoa[n], m_antennas) ** 2
    m = m_antennas
    return bk * bn * (kk * kn * lam2 + m * kk * xn + m * kn * xk + m * xn * xk) / ((kk + 1.0) * (kn + 1.0))


def mrc_sinr_approx(profile: RicianProfile, stats: EstimationStats, adc: AdcModel, p_u: float,
                    sigma2: float, m_antennas: int) -> np.ndarray:
    """Approximate MRC SINR with estimated CSI, assembled from the moment formulas."""
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    a = adc.alpha
    k_users = profile.n_users
    level = _distortion_level(adc, p_u, sigma2, profile.beta) + a**2 * p_u * np.sum(stats.err_var)
    out = np.empty(k_users)
    for k in range(k_users):
        inter = sum(moment_cross(profile, stats, k, n, m_antennas) for n in range(k_users) if n != k)
        theta = moment_h2(profile, stats, k, m_antennas) * level + a**2 * p_u * inter
        out[k] = a**2 * p_u * moment_h4(profile, stats, k, m_antennas) / theta
    return out


def _limit_term(coef: float, exponent: float) -> float:
    """lim_{M -> inf} coef * M**exponent."""
    if coef == 0.0:
        return 0.0
    if exponent > 0:
        return np.inf
    if exponent < 0:
        return 0.0
    return coef


def power_scaling_limit(beta: float, kfactor: float, adc: AdcModel, scenario: ScalingScenario,
                        sigma2: float, pilot_len: int, receiver: str = "mrc") -> float:
    """Limiting SINR of one user as M -> inf with P_u = E_u / M**nu.

    The large-M SINR behaves like

        alpha K beta E_u / (sigma2 (K + 1)) * M**(1 - nu)
        + alpha**2 E_u**2 beta**2 L / ((K + 1) sigma2**2) * M**(1 - 2 nu)

    for both receivers, so Rayleigh fading (K = 0) settles at nu = 1/2 and
    Rician fading at nu = 1; other exponents give 0 or inf.
    """
    _check_receiver(receiver)
    if scenario.fading == "rayleigh":
        kfactor = 0.0
    elif kfactor <= 0:
        raise ConfigurationError("rician scaling scenario needs a positive K-factor")
    a = adc.alpha
    e_u, nu = scenario.e_u, scenario.nu
    los = a * kfactor * beta * e_u / (sigma2 * (kfactor + 1.0))
    est = a**2 * e_u**2 * beta**2 * pilot_len / ((kfactor + 1.0) * sigma2**2)
    return _limit_term(los, 1.0 - nu) + _limit_term(est, 1.0 - 2.0 * nu)


def strong_los_limit(profile: RicianProfile, adc: AdcModel, p_u: float, sigma2: float,
                     m_antennas: int, receiver: str) -> np.ndarray:
    """SINR of every user in the limit K_f -> inf (all K-factors equal)."""
    receiver = _check_receiver(receiver)
    a = adc.alpha
    beta = profile.beta
    m = m_antennas
    level = sigma2 / a + (1.0 - a) / a * p_u * np.sum(beta)
    if receiver == "mrc":
        lam2 = los_inner_lambda(profile.aoa[:, None], profile.aoa[None, :], m) ** 2
        np.fill_diagonal(lam2, 0.0)
        inter = p_u * lam2 @ beta
        return p_u * m**2 * beta / (m * level + inter)
    k = profile.n_users
    if m <= k:
        raise ConfigurationError(f"ZF limit needs M > K, got M={m}, K={k}")
    inv = SigmaMatrix(los_gram(profile.aoa, m) / m).inv_diag()
    return beta * p_u * (m - k) / (level * inv)
