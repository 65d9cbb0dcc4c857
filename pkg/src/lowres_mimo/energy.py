"""System power consumption and energy efficiency of the uplink."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class PowerModel:
    """Circuit and processing power parameters.

    Defaults are representative values, not taken from measurements:
    per-chain RF power ``p_bs``, per-UE device power ``p_ue``, local
    oscillator ``p_syn``, backhaul/cooling ``p_other``, coding/decoding
    ``p_cd`` (all in W), ADC figure of merit ``fom`` (J per conversion step),
    sampling rate ``f_s`` (Nyquist, equal to the bandwidth), computational
    efficiency ``l_bs`` (flops/J), bandwidth (Hz), coherence block length
    ``frame_u`` (symbols) and uplink share ``ul_ratio``.
    """

    p_bs: float = 1.0
    p_ue: float = 0.3
    p_syn: float = 2.0
    p_other: float = 18.0
    p_cd: float = 0.1
    fom: float = 15e-15
    f_s: float = 20e6
    l_bs: float = 12.8e9
    bandwidth: float = 20e6
    frame_u: int = 1800
    ul_ratio: float = 0.4

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ConfigurationError(f"power model field {f.name} must be > 0")
        if not 0 < self.ul_ratio < 1:
            raise ConfigurationError("ul_ratio must lie in (0, 1)")

    @property
    def uplink_symbols(self) -> float:
        return self.frame_u * self.ul_ratio

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "PowerModel":
        unknown = set(obj) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigurationError(f"unknown power model fields: {sorted(unknown)}")
        return cls(**obj)


def adc_power(bits: int, model: PowerModel) -> float:
    """FOM * f_s * 2**bits."""
    if bits < 1:
        raise ConfigurationError("bits must be >= 1")
    return model.fom * model.f_s * 2.0**bits


def _overhead(pilot_len, model: PowerModel) -> float:
    if pilot_len < 0 or pilot_len >= model.uplink_symbols:
        raise ConfigurationError(
            f"pilot length {pilot_len} must be below the {model.uplink_symbols:g} uplink symbols per block")
    return 1.0 - pilot_len / model.uplink_symbols


def effective_rate(gross_se, pilot_len: int, model: PowerModel):
    """Net uplink rate in bit/s after the training overhead."""
    return model.ul_ratio * _overhead(pilot_len, model) * model.bandwidth * np.asarray(gross_se)


def flops_channel_estimation(m, k, pilot_len) -> float:
    return 2.0 * pilot_len * k * m + 2.0 * k**2 + m * k


def flops_per_symbol(m, k) -> float:
    return 2.0 * k * m - k


def flops_filter(m, k, receiver: str) -> float:
    # MRC filters are the channel estimate itself
    if receiver == "mrc":
        return 0.0
    if receiver == "zf":
        return k**3 / 3.0 + 3.0 * k**2 * m + k * m - k / 3.0
    raise ConfigurationError(f"unknown receiver {receiver!r}")


def total_power(m_antennas: int, k_users: int, pilot_len: int, bits: int, receiver: str,
                model: PowerModel) -> float:
    """Average power consumption of the uplink (W).

    Signal detection is discounted by the same training overhead as the
    rate, i.e. the K per-user pilot lengths are taken to sum to ``pilot_len``.
    """
    if m_antennas < 1 or k_users < 1 or pilot_len < 1:
        raise ConfigurationError("antenna, user and pilot counts must be positive")
    m, k = m_antennas, k_users
    p_ce = model.bandwidth / model.frame_u * flops_channel_estimation(m, k, pilot_len) / model.l_bs
    p_bl = model.bandwidth * flops_filter(m, k, receiver) / (model.frame_u * model.l_bs)
    p_sd = (model.bandwidth * model.ul_ratio * _overhead(pilot_len, model)
            * flops_per_symbol(m, k) / model.l_bs + p_bl)
    return (m * (model.p_bs + 2.0 * adc_power(bits, model)) + k * model.p_ue + model.p_syn
            + model.p_other + model.p_cd + p_ce + p_sd)


def energy_efficiency(per_ue_rates, total_power_w: float) -> float:
    """Delivered bits per Joule."""
    if not total_power_w > 0:
        raise ValueError("total power must be > 0")
    return float(np.sum(per_ue_rates)) / total_power_w
