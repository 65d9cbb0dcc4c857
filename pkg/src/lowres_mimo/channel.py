"""
Rician channel model for a half-wavelength uniform linear array.

The channel between K single-antenna users and an M-antenna base station is

    H = (H_los sqrt(K_f / (K_f + 1)) + H_nlos sqrt(1 / (K_f + 1))) diag(sqrt(beta))

where H_los holds the ULA steering vectors of the users' angles of arrival
and H_nlos has i.i.d. CN(0, 1) entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

PATHLOSS_EXPONENT = 3.8
MIN_DISTANCE_RATIO = 0.1  # r_min / r_cell


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def lin2db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class RicianProfile:
    """Per-user large-scale parameters.

    Attributes
    ----------
    beta : ndarray, shape (K,)
        Large-scale power gains (linear).
    kfactor : ndarray, shape (K,)
        Rician K-factors (linear, >= 0).
    aoa : ndarray, shape (K,)
        Angles of arrival in radians, within [-pi/2, pi/2].
    """

    beta: np.ndarray
    kfactor: np.ndarray
    aoa: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        kf = np.atleast_1d(np.asarray(self.kfactor, dtype=float))
        aoa = np.atleast_1d(np.asarray(self.aoa, dtype=float))
        if not (beta.ndim == kf.ndim == aoa.ndim == 1):
            raise ConfigurationError("profile fields must be 1-D sequences")
        if not (len(beta) == len(kf) == len(aoa)) or len(beta) == 0:
            raise ConfigurationError(
                f"profile lengths differ: beta={len(beta)}, kfactor={len(kf)}, aoa={len(aoa)}")
        if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
            raise ConfigurationError("all beta must be finite and > 0")
        if np.any(~np.isfinite(kf)) or np.any(kf < 0):
            raise ConfigurationError("all K-factors must be finite and >= 0")
        if np.any(np.abs(aoa) > np.pi / 2 + 1e-12):
            raise ConfigurationError("angles of arrival must lie in [-pi/2, pi/2]")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "kfactor", kf)
        object.__setattr__(self, "aoa", aoa)

    @property
    def n_users(self) -> int:
        return len(self.beta)

    @property
    def los_weight(self) -> np.ndarray:
        """sqrt(K_f / (K_f + 1)) per user."""
        return np.sqrt(self.kfactor / (self.kfactor + 1.0))

    @property
    def nlos_var(self) -> np.ndarray:
        """Per-entry NLoS variance beta / (K_f + 1)."""
        return self.beta / (self.kfactor + 1.0)

    def replace(self, **changes) -> "RicianProfile":
        fields = {"beta": self.beta, "kfactor": self.kfactor, "aoa": self.aoa}
        fields.update(changes)
        return RicianProfile(**fields)

    def to_json(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            # K_f = 0 (Rayleigh) has no dB value and is written as null
            "kfactor_db": [None if k == 0 else float(lin2db(k)) for k in self.kfactor],
            "aoa_rad": self.aoa.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RicianProfile":
        """Build from ``{beta: [...], kfactor_db: [...], aoa_rad: [...]}``; a null K-factor means 0."""
        try:
            kf = [0.0 if k is None else float(db2lin(k)) for k in obj["kfactor_db"]]
            return cls(beta=obj["beta"], kfactor=kf, aoa=obj["aoa_rad"])
        except KeyError as exc:
            raise ConfigurationError(f"profile JSON missing field {exc}") from None


def default_beta(n_users: int) -> np.ndarray:
    """Deterministic large-scale gains for ``n_users`` users.

    Users sit at the area quantiles of an annulus between 0.1 and 1 cell
    radius (what a uniform drop looks like on average) and
    beta = (r / r_min) ** -3.8, so a user at the minimum distance has gain 1.
    """
    if n_users < 1:
        raise ConfigurationError("need at least one user")
    q = (np.arange(n_users) + 0.5) / n_users
    r = np.sqrt(MIN_DISTANCE_RATIO**2 + (1.0 - MIN_DISTANCE_RATIO**2) * q)
    return (r / MIN_DISTANCE_RATIO) ** (-PATHLOSS_EXPONENT)


def draw_aoa(n_users: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-np.pi / 2, np.pi / 2, size=n_users)


def default_profile(n_users, kfactor_db=0.0, aoa=None, rng=None, beta=None) -> RicianProfile:
    """Profile with the default beta, a broadcast K-factor and given or random AoAs."""
    if aoa is None:
        if rng is None:
            raise ConfigurationError("either aoa or rng is required")
        aoa = draw_aoa(n_users, rng)
    kf = np.broadcast_to(db2lin(kfactor_db), (n_users,)).copy()
    return RicianProfile(beta=default_beta(n_users) if beta is None else beta, kfactor=kf, aoa=aoa)


def steering_vector(theta, m_antennas: int) -> np.ndarray:
    """ULA response with half-wavelength spacing, entry m = exp(-j m pi sin(theta)), m = 0..M-1."""
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    m = np.arange(m_antennas)
    return np.exp(-1j * np.pi * m * np.sin(theta))


def los_matrix(aoa, m_antennas: int) -> np.ndarray:
    """M x K matrix whose columns are the users' steering vectors."""
    aoa = np.atleast_1d(np.asarray(aoa, dtype=float))
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    m = np.arange(m_antennas)[:, None]
    return np.exp(-1j * np.pi * m * np.sin(aoa)[None, :])


def los_inner_lambda(theta_k, theta_n, m_antennas: int):
    """Dirichlet-kernel magnitude sin(M pi d / 2) / sin(pi d / 2), d = sin(theta_k) - sin(theta_n).

    Its square equals |a(theta_k)^H a(theta_n)|^2.  Where the denominator
    vanishes (d = 0 or d = +-2) the limit is returned; for d = +-2 that limit
    is (-1)**(M-1) * M.
    """
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    d = np.sin(np.asarray(theta_k, dtype=float)) - np.sin(np.asarray(theta_n, dtype=float))
    x = 0.5 * np.pi * d
    den = np.sin(x)
    num = np.sin(m_antennas * x)
    singular = np.abs(den) < 1e-12
    safe = np.where(singular, 1.0, den)
    out = num / safe
    # near x = j*pi the ratio tends to (-1)**(j*(M-1)) * M
    j = np.round(x / np.pi)
    limit = np.where(np.mod(j * (m_antennas - 1), 2) == 0, 1.0, -1.0) * m_antennas
    out = np.where(singular, limit, out)
    return out if out.ndim else float(out)


def los_gram(aoa, m_antennas: int) -> np.ndarray:
    """Exact H_los^H H_los via the closed-form geometric sum (no M x K matrix needed)."""
    aoa = np.atleast_1d(np.asarray(aoa, dtype=float))
    s = np.sin(aoa)
    d = s[:, None] - s[None, :]
    lam = los_inner_lambda(aoa[:, None], aoa[None, :], m_antennas)
    return np.exp(0.5j * np.pi * (m_antennas - 1) * d) * lam


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray
    h_los: np.ndarray
    h_nlos: np.ndarray


def compose_channel(profile: RicianProfile, h_los: np.ndarray, h_nlos: np.ndarray) -> np.ndarray:
    sb = np.sqrt(profile.beta)
    los_w = profile.los_weight * sb
    nlos_w = np.sqrt(1.0 / (profile.kfactor + 1.0)) * sb
    return h_los * los_w[None, :] + h_nlos * nlos_w[None, :]


def crandn(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) samples (real and imaginary parts each of variance 1/2)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def sample_channel(profile: RicianProfile, m_antennas: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw one Rician channel realization for ``profile``."""
    if not isinstance(profile, RicianProfile):
        raise ConfigurationError("profile must be a RicianProfile")
    if m_antennas < 1:
        raise ConfigurationError("m_antennas must be >= 1")
    h_los = los_matrix(profile.aoa, m_antennas)
    h_nlos = crandn(rng, (m_antennas, profile.n_users))
    return ChannelRealization(h=compose_channel(profile, h_los, h_nlos), h_los=h_los, h_nlos=h_nlos)
