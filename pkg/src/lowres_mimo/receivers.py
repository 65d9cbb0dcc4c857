"""
Linear receivers (MRC, ZF) and their exact per-realization SINR under the
AQNM, with perfect or LMMSE-estimated CSI.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import ConfigurationError, NumericalRankError
from .quantization import AdcModel, quantization_noise_cov

RECEIVERS = ("mrc", "zf")
COND_LIMIT = 1e12


@dataclass(frozen=True)
class SinrBreakdown:
    """Power of each term at the output of one user's filter."""

    signal: float
    noise: float
    quant: float
    interference: float
    est_error: float
    log_base: float = 2.0

    @property
    def distortion(self) -> float:
        return self.noise + self.quant + self.interference + self.est_error

    @property
    def sinr(self) -> float:
        return self.signal / self.distortion

    @property
    def se(self) -> float:
        return se_from_sinr(self.sinr, self.log_base)


def se_from_sinr(sinr, log_base: float = 2.0):
    """log_base(1 + sinr); ``log_base`` may be 2 or e."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR must be non-negative")
    out = np.log1p(sinr) / np.log(log_base)
    return out if out.ndim else float(out)


def _check_receiver(receiver: str) -> str:
    receiver = receiver.lower()
    if receiver not in RECEIVERS:
        raise ConfigurationError(f"unknown receiver {receiver!r}; expected one of {RECEIVERS}")
    return receiver


def _check_user(h: np.ndarray, k: int):
    if not 0 <= k < h.shape[1]:
        raise IndexError(f"user index {k} out of range for {h.shape[1]} users")


def gram_inverse(h: np.ndarray) -> np.ndarray:
    """(H^H H)^-1 via Cholesky, refusing matrices with condition number above 1e12."""
    m, k = h.shape
    if m < k:
        raise NumericalRankError(f"ZF needs M >= K, got M={m}, K={k}")
    gram = h.conj().T @ h
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericalRankError(f"H^H H is numerically singular (condition number {cond:.3e})")
    c = linalg.cho_factor(gram, lower=True)
    return linalg.cho_solve(c, np.eye(k, dtype=gram.dtype))


def mrc_filter(h: np.ndarray, k: int) -> np.ndarray:
    _check_user(h, k)
    return h[:, k].copy()


def zf_filter(h: np.ndarray, k: int) -> np.ndarray:
    """Column ``k`` of H (H^H H)^-1."""
    _check_user(h, k)
    return h @ gram_inverse(h)[:, k]


def zf_filters(h: np.ndarray) -> np.ndarray:
    return h @ gram_inverse(h)


def _filter(h, k, receiver):
    return mrc_filter(h, k) if receiver == "mrc" else zf_filter(h, k)


def sinr_perfect(h: np.ndarray, k: int, receiver: str, adc: AdcModel, p_u: float, sigma2: float,
                 log_base: float = 2.0) -> SinrBreakdown:
    """SINR breakdown of user ``k`` when the receiver knows ``h`` exactly."""
    receiver = _check_receiver(receiver)
    r_nq = quantization_noise_cov(h, adc, p_u, sigma2)
    return _breakdown(h, h, None, r_nq, k, receiver, adc, p_u, sigma2, log_base)


def sinr_imperfect(h_hat: np.ndarray, stats, r_nq_diag: np.ndarray, k: int, receiver: str,
                   adc: AdcModel, p_u: float, sigma2: float, log_base: float = 2.0) -> SinrBreakdown:
    """SINR breakdown of user ``k`` with filters built from the estimate ``h_hat``.

    ``r_nq_diag`` must come from the true channel.  The estimation-error
    term sums over all users, the user's own error included.
    """
    receiver = _check_receiver(receiver)
    return _breakdown(h_hat, h_hat, np.asarray(stats.err_var), np.asarray(r_nq_diag), k, receiver,
                      adc, p_u, sigma2, log_base)


def _breakdown(h_filter, h_sig, err_var, r_nq, k, receiver, adc, p_u, sigma2, log_base):
    a = adc.alpha
    g = _filter(h_filter, k, receiver)
    g2 = float(np.real(np.vdot(g, g)))
    quant = float(np.real(np.vdot(g, r_nq * g)))
    noise = a**2 * g2 * sigma2
    if receiver == "mrc":
        signal = a**2 * p_u * g2**2
        cross = np.abs(g.conj() @ h_sig) ** 2
        cross[k] = 0.0
        interference = a**2 * p_u * float(np.sum(cross))
    else:
        signal = a**2 * p_u
        interference = 0.0
    est_error = 0.0 if err_var is None else a**2 * p_u * g2 * float(np.sum(err_var))
    return SinrBreakdown(signal=signal, noise=noise, quant=quant, interference=interference,
                         est_error=est_error, log_base=log_base)


def sinr_all(h_filter: np.ndarray, r_nq: np.ndarray, receiver: str, adc: AdcModel, p_u: float,
             sigma2: float, err_var=None) -> dict:
    """Vectorized breakdown for every user at once.

    Returns a dict of length-K arrays with keys ``signal``, ``noise``,
    ``quant``, ``interference``, ``est_error`` and ``sinr``.  Same formulas as
    :func:`sinr_perfect` / :func:`sinr_imperfect`.
    """
    receiver = _check_receiver(receiver)
    a = adc.alpha
    if receiver == "mrc":
        g = h_filter
        g2 = np.sum(np.abs(g) ** 2, axis=0)
        gram = np.abs(g.conj().T @ h_filter) ** 2
        np.fill_diagonal(gram, 0.0)
        signal = a**2 * p_u * g2**2
        interference = a**2 * p_u * gram.sum(axis=1)
    else:
        inv = gram_inverse(h_filter)
        g = h_filter @ inv
        g2 = np.real(np.diag(inv))
        signal = np.full(g.shape[1], a**2 * p_u)
        interference = np.zeros(g.shape[1])
    quant = (np.abs(g) ** 2).T @ r_nq
    noise = a**2 * g2 * sigma2
    est = np.zeros_like(g2) if err_var is None else a**2 * p_u * g2 * float(np.sum(err_var))
    sinr = signal / (noise + quant + interference + est)
    return {"signal": signal, "noise": noise, "quant": quant, "interference": interference,
            "est_error": est, "sinr": sinr}
