"""
Additive quantization noise model (AQNM) for low-resolution ADCs.

A b-bit quantizer is linearized as ``y_q = alpha * y + n_q`` with
``alpha = 1 - eps`` and ``eps`` the inverse SQNR of the MSE-optimal
(Lloyd-Max) quantizer for a Gaussian input.  The distortion ``n_q`` is
uncorrelated with ``y`` and, conditioned on the channel, has diagonal
covariance ``alpha (1 - alpha) diag(P_u H H^H + sigma2 I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, stats

from .errors import ConfigurationError

# Lloyd-Max distortion of a unit-variance Gaussian, b = 1..5
LLOYD_MAX_EPS = {1: 0.3634, 2: 0.1175, 3: 0.034538, 4: 0.0094874, 5: 0.0024977}


@dataclass(frozen=True)
class AdcModel:
    bits: int
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ConfigurationError(f"epsilon must lie in [0, 1), got {self.epsilon}")

    @property
    def alpha(self) -> float:
        return 1.0 - self.epsilon


def alpha_for_bits(bits: int) -> AdcModel:
    """AQNM model of a ``bits``-resolution ADC.

    Tabulated Lloyd-Max values for 1..5 bits, ``eps = (pi sqrt(3) / 2) 4**-b``
    above that.
    """
    if int(bits) != bits or bits < 1:
        raise ConfigurationError(f"bits must be a positive integer, got {bits!r}")
    bits = int(bits)
    eps = LLOYD_MAX_EPS.get(bits, np.pi * np.sqrt(3.0) / 2.0 * 2.0 ** (-2 * bits))
    return AdcModel(bits=bits, epsilon=float(eps))


def ideal_adc() -> AdcModel:
    return AdcModel(bits=0, epsilon=0.0)


def _check_powers(p_u, sigma2):
    if sigma2 <= 0:
        raise ConfigurationError("sigma2 must be > 0")
    if p_u < 0:
        raise ConfigurationError("p_u must be >= 0")


def quantization_noise_cov(h: np.ndarray, adc: AdcModel, p_u: float, sigma2: float) -> np.ndarray:
    """Diagonal of the quantization-noise covariance given the channel ``h`` (M x K)."""
    _check_powers(p_u, sigma2)
    h = np.asarray(h)
    if h.ndim != 2:
        raise ValueError(f"h must be a 2-D M x K matrix, got shape {h.shape}")
    a = adc.alpha
    return a * (1.0 - a) * (p_u * np.sum(np.abs(h) ** 2, axis=1) + sigma2)


def aqnm_quantize(y, h, adc: AdcModel, p_u: float, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """Apply the AQNM: ``alpha * y`` plus Gaussian distortion with covariance from ``h``."""
    y = np.asarray(y)
    r = quantization_noise_cov(h, adc, p_u, sigma2)
    if y.shape[0] != r.shape[0]:
        raise ValueError(f"y has {y.shape[0]} antennas but h has {r.shape[0]}")
    scale = np.sqrt(r).reshape((-1,) + (1,) * (y.ndim - 1))
    noise = (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape)) * np.sqrt(0.5) * scale
    return adc.alpha * y + noise


def uniform_quantize(y, bits: int, step: float) -> np.ndarray:
    """Mid-rise uniform quantizer applied to real and imaginary parts separately.

    Levels are ``(i + 1/2) * step`` for ``i = -2**(b-1) .. 2**(b-1) - 1``;
    inputs beyond ``+-2**(b-1) * step`` saturate at the outermost level.
    """
    if bits < 1 or step <= 0:
        raise ConfigurationError("bits must be >= 1 and step > 0")
    top = 2 ** (bits - 1)

    def q(x):
        idx = np.clip(np.floor(x / step), -top, top - 1)
        return (idx + 0.5) * step

    y = np.asarray(y)
    if np.iscomplexobj(y):
        return q(y.real) + 1j * q(y.imag)
    return q(y)


def uniform_distortion(bits: int, step: float) -> float:
    """Exact MSE of :func:`uniform_quantize` for a real unit-variance Gaussian input."""
    top = 2 ** (bits - 1)
    edges = np.arange(-top + 1, top) * step
    bounds = np.concatenate(([-np.inf], edges, [np.inf]))
    levels = (np.arange(-top, top) + 0.5) * step
    total = 0.0
    for lo, hi, c in zip(bounds[:-1], bounds[1:], levels):
        val, _ = integrate.quad(lambda x: (x - c) ** 2 * stats.norm.pdf(x), lo, hi)
        total += val
    return total


@lru_cache(maxsize=None)
def optimal_uniform_step(bits: int) -> float:
    """Step minimizing :func:`uniform_distortion` for a unit-variance real Gaussian."""
    res = optimize.minimize_scalar(lambda s: uniform_distortion(bits, s),
                                   bounds=(1e-4, 8.0 / 2 ** (bits - 1) + 1.0),
                                   method="bounded", options={"xatol": 1e-9})
    return float(res.x)


def lloyd_max(bits: int, tol: float = 1e-12, max_iter: int = 10_000) -> tuple[np.ndarray, float]:
    """Lloyd-Max quantizer for a unit-variance Gaussian.

    Returns
    -------
    levels : ndarray
        The 2**bits reconstruction points.
    distortion : float
        Mean-squared error, i.e. the inverse SQNR for unit input power.
    """
    n = 2**bits
    # companded start: high-resolution optimal level density is proportional to pdf**(1/3)
    levels = np.sqrt(3.0) * stats.norm.ppf((np.arange(n) + 0.5) / n)
    for _ in range(max_iter):
        t = np.concatenate(([-np.inf], 0.5 * (levels[1:] + levels[:-1]), [np.inf]))
        mass = stats.norm.cdf(t[1:]) - stats.norm.cdf(t[:-1])
        # centroid of a Gaussian slab: (pdf(a) - pdf(b)) / (cdf(b) - cdf(a))
        new = (stats.norm.pdf(t[:-1]) - stats.norm.pdf(t[1:])) / mass
        done = np.max(np.abs(new - levels)) < tol
        levels = new
        if done:
            break
    t = np.concatenate(([-np.inf], 0.5 * (levels[1:] + levels[:-1]), [np.inf]))
    mass = stats.norm.cdf(t[1:]) - stats.norm.cdf(t[:-1])
    # E[x^2] - sum_i mass_i * c_i^2 holds at centroid optimality
    return levels, float(1.0 - np.sum(mass * levels**2))
