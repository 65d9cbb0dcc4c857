"""
Oracle and property suites runnable from the command line.

Each suite is deterministic for a given seed and returns a
:class:`ValidationReport` holding one :class:`Check` per property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..asymptotics import (ScalingScenario, moment_cross, moment_h2, moment_h4, mrc_sinr_approx,
                           power_scaling_limit, strong_los_limit, zf_sinr_approx)
from ..channel import RicianProfile, crandn, db2lin, default_beta, draw_aoa, sample_channel, steering_vector
from ..errors import ConfigurationError
from ..estimation import (EstimationStats, PilotConfig, estimate_channel_explicit, estimation_quality,
                          nlos_estimate)
from ..quantization import LLOYD_MAX_EPS, AdcModel, alpha_for_bits, ideal_adc, lloyd_max
from ..receivers import zf_filters


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.value:.4g} (limit {self.limit:.4g})"


@dataclass
class ValidationReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, value, limit) -> Check:
        c = Check(name, float(value), float(limit), bool(value <= limit))
        self.checks.append(c)
        return c

    def lines(self) -> list:
        return [c.line() for c in self.checks]


# ---------------------------------------------------------------- moments

@dataclass(frozen=True)
class MomentSample:
    """Sample estimates of the three estimated-channel moments with their standard errors."""

    h2: float
    h2_se: float
    h4: float
    h4_se: float
    cross: float
    cross_se: float


def sample_moments(profile: RicianProfile, stats: EstimationStats, m_antennas: int, n_samples: int,
                   rng: np.random.Generator, chunk: int = 20_000) -> MomentSample:
    """Monte-Carlo moments of users 0 and 1 of ``h_hat = LoS + CN(0, beta xi / (K_f + 1))``."""
    mean = np.stack([math.sqrt(profile.beta[k] * profile.kfactor[k] / (profile.kfactor[k] + 1.0))
                     * steering_vector(profile.aoa[k], m_antennas) for k in (0, 1)], axis=1)
    sd = np.sqrt(np.asarray(stats.est_var)[:2])
    x2, x4, xc = [], [], []
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        h = mean[None] + crandn(rng, (n, m_antennas, 2)) * sd[None, None, :]
        norm2 = np.sum(np.abs(h[:, :, 0]) ** 2, axis=1)
        x2.append(norm2)
        x4.append(norm2**2)
        xc.append(np.abs(np.sum(h[:, :, 0].conj() * h[:, :, 1], axis=1)) ** 2)
        done += n
    out = []
    for arr in (x2, x4, xc):
        a = np.concatenate(arr)
        out += [float(np.mean(a)), float(np.std(a, ddof=1) / math.sqrt(a.size))]
    return MomentSample(*out)


def _random_moment_case(rng, m_antennas):
    kf = rng.uniform(0.1, 10.0, 2)
    xi = rng.uniform(0.05, 0.95, 2)
    beta = rng.uniform(0.2, 2.0, 2)
    profile = RicianProfile(beta=beta, kfactor=kf, aoa=draw_aoa(2, rng))
    stats = EstimationStats(xi=xi, err_var=beta * (1 - xi) / (kf + 1), est_var=beta * xi / (kf + 1),
                            psi=np.full(2, np.nan))
    return profile, stats


def suite_moments(seed: int, m_antennas: int = 32, n_samples: int = 200_000, cases: int = 3) -> ValidationReport:
    rep = ValidationReport("moments")
    rng = np.random.default_rng(seed)
    for c in range(cases):
        profile, stats = _random_moment_case(rng, m_antennas)
        s = sample_moments(profile, stats, m_antennas, n_samples, rng)
        h2 = moment_h2(profile, stats, 0, m_antennas)
        h4 = moment_h4(profile, stats, 0, m_antennas)
        cr = moment_cross(profile, stats, 0, 1, m_antennas)
        rep.add(f"case {c} E||h||^2 deviation / SE", abs(s.h2 - h2) / s.h2_se, 3.0)
        rep.add(f"case {c} E||h||^4 relative deviation", abs(s.h4 - h4) / h4,
                max(3.0 * s.h4_se / h4, 2.0 / m_antennas))
        rep.add(f"case {c} E|h_k^H h_n|^2 deviation / SE", abs(s.cross - cr) / s.cross_se, 3.0)
    return rep


# ---------------------------------------------------------------- limits

def scaling_deviation(kfactor_db, nu, e_u, m_antennas, seed, users=10, bits=3, pilot_len=10,
                      sigma2=1.0):
    """Worst relative gap between both receivers' approximations and the scaling limit.

    ``kfactor_db=None`` selects Rayleigh fading.  Returns ``(mrc_dev, zf_dev, limit)``.
    """
    rng = np.random.default_rng(seed)
    kf = 0.0 if kfactor_db is None else float(db2lin(kfactor_db))
    profile = RicianProfile(np.ones(users), np.full(users, kf), draw_aoa(users, rng))
    adc = alpha_for_bits(bits)
    scenario = ScalingScenario(e_u, nu, "rayleigh" if kfactor_db is None else "rician")
    p_u = scenario.power(m_antennas)
    stats = estimation_quality(profile, adc, p_u, sigma2, pilot_len)
    limit = power_scaling_limit(1.0, kf, adc, scenario, sigma2, pilot_len, "mrc")
    mrc = mrc_sinr_approx(profile, stats, adc, p_u, sigma2, m_antennas)
    zf = zf_sinr_approx(profile, adc, p_u, sigma2, m_antennas, stats)
    return float(np.max(np.abs(mrc / limit - 1))), float(np.max(np.abs(zf / limit - 1))), limit


def strong_los_deviation(seed, kfactor=1e6, m_antennas=200, users=10, bits=3, power_db=20.0, sigma2=1.0):
    """Worst relative gap between the approximations and the strong-LoS limits, per receiver."""
    rng = np.random.default_rng(seed)
    profile = RicianProfile(default_beta(users), np.full(users, kfactor), draw_aoa(users, rng))
    adc = alpha_for_bits(bits)
    p_u = float(db2lin(power_db))
    stats = estimation_quality(profile, adc, p_u, sigma2, users)
    out = {}
    for rx in ("mrc", "zf"):
        lim = strong_los_limit(profile, adc, p_u, sigma2, m_antennas, rx)
        if rx == "mrc":
            approx = mrc_sinr_approx(profile, stats, adc, p_u, sigma2, m_antennas)
        else:
            approx = zf_sinr_approx(profile, adc, p_u, sigma2, m_antennas, stats)
        out[rx] = float(np.max(np.abs(approx / lim - 1)))
    return out


def suite_limits(seed: int) -> ValidationReport:
    rep = ValidationReport("limits")
    mrc, zf, _ = scaling_deviation(10.0, 1.0, 10.0, 100_000, seed)
    rep.add("rician nu=1, M=1e5: MRC relative gap", mrc, 0.02)
    rep.add("rician nu=1, M=1e5: ZF relative gap", zf, 0.02)
    adc = alpha_for_bits(3)
    sc = ScalingScenario(10.0, 1.0)
    a = power_scaling_limit(1.0, 10.0, adc, sc, 1.0, 10, "mrc")
    b = power_scaling_limit(1.0, 10.0, adc, sc, 1.0, 10, "zf")
    rep.add("MRC/ZF limit formula agreement", abs(a - b) / abs(a), 1e-12)
    mrc, zf, _ = scaling_deviation(None, 0.5, 0.1, 100_000, seed)
    rep.add("rayleigh nu=1/2, M=1e5: MRC relative gap", mrc, 0.02)
    rep.add("rayleigh nu=1/2, M=1e5: ZF relative gap", zf, 0.02)
    for rx, dev in strong_los_deviation(seed).items():
        rep.add(f"strong LoS K_f=1e6: {rx.upper()} relative gap", dev, 0.01)
    return rep


# ---------------------------------------------------------------- lmmse

def lmmse_variances(seed, m_antennas=1000, users=4, pilot_len=8, bits=3, power_db=10.0, kfactor_db=0.0,
                    sigma2=1.0, repeats=25):
    """Empirical per-user variances of the explicit estimator against the closed forms.

    Returns ``(est_rel_dev, err_rel_dev)``: worst relative deviation over
    users of the NLoS-estimate variance from ``xi beta`` and of the error
    variance from ``sigma_e^2``.  ``m_antennas * repeats`` entries per user.
    """
    rng = np.random.default_rng(seed)
    profile = RicianProfile(np.linspace(0.5, 1.5, users), np.full(users, float(db2lin(kfactor_db))),
                            draw_aoa(users, rng))
    adc = alpha_for_bits(bits)
    p_u = float(db2lin(power_db))
    pilots = PilotConfig.dft(users, pilot_len)
    est_pow = np.zeros(users)
    err_pow = np.zeros(users)
    for _ in range(repeats):
        real = sample_channel(profile, m_antennas, rng)
        h_hat, stats = estimate_channel_explicit(real, profile, pilots, adc, p_u, sigma2, rng)
        est_pow += np.mean(np.abs(nlos_estimate(h_hat, profile)) ** 2, axis=0)
        err_pow += np.mean(np.abs(h_hat - real.h) ** 2, axis=0)
    est_pow /= repeats
    err_pow /= repeats
    est_dev = np.max(np.abs(est_pow / (stats.xi * profile.beta) - 1))
    err_dev = np.max(np.abs(err_pow / stats.err_var - 1))
    return float(est_dev), float(err_dev)


def noiseless_recovery_error(seed, m_antennas=64, users=4, pilot_len=4, sigma2=1e-14):
    """Max |estimate - truth| of ``H_nlos diag(sqrt(beta))`` with ideal ADCs and vanishing noise."""
    rng = np.random.default_rng(seed)
    profile = RicianProfile(np.linspace(0.5, 2.0, users), np.full(users, 2.0), draw_aoa(users, rng))
    real = sample_channel(profile, m_antennas, rng)
    h_hat, _ = estimate_channel_explicit(real, profile, PilotConfig.dft(users, pilot_len), ideal_adc(),
                                         1.0, sigma2, rng)
    truth = real.h_nlos * np.sqrt(profile.beta)[None, :]
    return float(np.max(np.abs(nlos_estimate(h_hat, profile) - truth)))


def suite_lmmse(seed: int) -> ValidationReport:
    rep = ValidationReport("lmmse")
    est, err = lmmse_variances(seed)
    rep.add("estimate variance vs xi*beta (relative)", est, 0.03)
    rep.add("error variance vs sigma_e^2 (relative)", err, 0.03)
    rep.add("alpha=1, sigma2->0 recovery error", noiseless_recovery_error(seed), 1e-5)
    return rep


# ---------------------------------------------------------------- zf_null

def zf_null_residual(seed, n_channels=100) -> float:
    """Worst ``|g_k^H h_n| / (||g_k|| ||h_n||)`` over ``n != k`` and random channels."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_channels):
        k = int(rng.integers(2, 12))
        m = int(rng.integers(k + 1, 5 * k + 40))
        profile = RicianProfile(default_beta(k), db2lin(rng.uniform(-10, 10, k)), draw_aoa(k, rng))
        h = sample_channel(profile, m, rng).h
        g = zf_filters(h)
        cross = np.abs(g.conj().T @ h)
        np.fill_diagonal(cross, 0.0)
        scale = np.linalg.norm(g, axis=0)[:, None] * np.linalg.norm(h, axis=0)[None, :]
        worst = max(worst, float(np.max(cross / scale)))
    return worst


def suite_zf_null(seed: int) -> ValidationReport:
    rep = ValidationReport("zf_null")
    rep.add("max relative ZF leakage over 100 channels", zf_null_residual(seed), 1e-9)
    return rep


# ---------------------------------------------------------------- aqnm

def lloyd_max_quantize(x, levels):
    edges = 0.5 * (levels[1:] + levels[:-1])
    return levels[np.searchsorted(edges, x)]


def suite_aqnm(seed: int, n_samples: int = 1_000_000) -> ValidationReport:
    rep = ValidationReport("aqnm")
    for b, eps in LLOYD_MAX_EPS.items():
        _, d = lloyd_max(b)
        rep.add(f"b={b} tabulated eps vs Lloyd-Max (relative)", abs(eps - d) / d, 0.005)
    for b in (6, 7):
        _, d = lloyd_max(b)
        rep.add(f"b={b} high-resolution eps vs Lloyd-Max (relative)",
                abs(alpha_for_bits(b).epsilon - d) / d, 0.05)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n_samples)
    for b in (1, 3):
        levels, _ = lloyd_max(b)
        q = lloyd_max_quantize(x, levels)
        adc: AdcModel = alpha_for_bits(b)
        gain = np.mean(q * x)
        dist = q - adc.alpha * x
        rep.add(f"b={b} Bussgang gain vs alpha (relative)", abs(gain / adc.alpha - 1), 0.01)
        corr = abs(np.mean(dist * x)) / math.sqrt(np.mean(dist**2))
        rep.add(f"b={b} distortion/input correlation", corr, 5.0 / math.sqrt(n_samples))
        # distortion variance alpha (1 - alpha) for unit input power
        rep.add(f"b={b} distortion variance vs alpha(1-alpha) (relative)",
                abs(np.var(dist) / (adc.alpha * (1 - adc.alpha)) - 1), 0.02)
    return rep


SUITES = {
    "moments": suite_moments,
    "limits": suite_limits,
    "lmmse": suite_lmmse,
    "zf_null": suite_zf_null,
    "aqnm": suite_aqnm,
}


def validate(suite: str, seed: int = 0) -> ValidationReport:
    """Run one named suite deterministically under ``seed``."""
    if suite not in SUITES:
        raise ConfigurationError(f"unknown validation suite {suite!r}; expected one of {sorted(SUITES)}")
    return SUITES[suite](seed)
