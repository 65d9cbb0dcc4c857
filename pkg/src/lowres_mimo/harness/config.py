"""Experiment configuration: scenario scalars, sweeps and JSON loading."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from ..channel import RicianProfile, db2lin, default_beta
from ..energy import PowerModel
from ..errors import ConfigurationError

SWEEP_AXES = ("power_db", "antennas", "pilot_len", "bits", "kfactor_db", "scaling_m")
CSI_MODES = ("perfect", "imperfect")
RECEIVER_SET = ("mrc", "zf")
ESTIMATORS = ("shortcut", "explicit")


@dataclass(frozen=True)
class SystemConfig:
    """Scenario scalars shared by every point of a sweep.

    ``pilot_len=None`` means L = K.  ``energy_db`` and ``scaling_nu`` are only
    used by the ``scaling_m`` sweep, where P_u = E_u / M**nu.
    """

    antennas: int = 200
    users: int = 10
    power_db: float = 20.0
    sigma2: float = 1.0
    bits: int = 3
    pilot_len: int | None = None
    kfactor_db: float = 0.0
    log_base: float = 2.0
    receivers: tuple = RECEIVER_SET
    csi: tuple = CSI_MODES
    trials: int = 2000
    trials_large_m: int = 200
    seed: int = 0
    energy_db: float = 40.0
    scaling_nu: float = 1.0
    freeze_aoa: bool = False
    common_random_numbers: bool = False
    estimator: str = "shortcut"
    tolerance: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "receivers", tuple(r.lower() for r in self.receivers))
        object.__setattr__(self, "csi", tuple(c.lower() for c in self.csi))
        if self.antennas < 1 or self.users < 1:
            raise ConfigurationError("antennas and users must be >= 1")
        if self.sigma2 <= 0:
            raise ConfigurationError("sigma2 must be > 0")
        if self.bits < 1:
            raise ConfigurationError("bits must be >= 1")
        if self.pilot_len is not None and self.pilot_len < self.users:
            raise ConfigurationError(f"pilot length {self.pilot_len} < number of users {self.users}")
        if self.log_base not in (2.0, float(np.e)):
            raise ConfigurationError("log_base must be 2 or e")
        if self.trials < 1 or self.trials_large_m < 1:
            raise ConfigurationError("trials must be >= 1")
        if not self.receivers or set(self.receivers) - set(RECEIVER_SET):
            raise ConfigurationError(f"receivers must be a non-empty subset of {RECEIVER_SET}")
        if not self.csi or set(self.csi) - set(CSI_MODES):
            raise ConfigurationError(f"csi must be a non-empty subset of {CSI_MODES}")
        if self.estimator not in ESTIMATORS:
            raise ConfigurationError(f"estimator must be one of {ESTIMATORS}")
        if self.seed is None:
            raise ConfigurationError("a seed is required")

    @property
    def pilot_length(self) -> int:
        return self.users if self.pilot_len is None else self.pilot_len

    @property
    def p_u(self) -> float:
        return float(db2lin(self.power_db))

    def trials_for(self, m_antennas: int) -> int:
        return min(self.trials, self.trials_large_m) if m_antennas > 1000 else self.trials


@dataclass(frozen=True)
class ExperimentSpec:
    """A one-dimensional sweep over ``sweep_axis``.

    ``profile`` fixes beta, the K-factors and the AoAs; when it is None the
    default beta profile is used with ``base.kfactor_db`` for every user and
    AoAs drawn uniformly (per trial, or once when ``base.freeze_aoa``).
    """

    sweep_axis: str
    sweep_values: tuple
    base: SystemConfig = field(default_factory=SystemConfig)
    profile: RicianProfile | None = None
    power_model: PowerModel | None = None

    def __post_init__(self):
        if self.sweep_axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown sweep axis {self.sweep_axis!r}; expected one of {SWEEP_AXES}")
        values = tuple(self.sweep_values)
        if not values:
            raise ConfigurationError("sweep_values must be non-empty")
        object.__setattr__(self, "sweep_values", values)
        if self.profile is not None and self.profile.n_users != self.base.users:
            raise ConfigurationError(
                f"profile has {self.profile.n_users} users but the config has {self.base.users}")

    def point(self, value) -> SystemConfig:
        """System configuration at one sweep value."""
        axis = self.sweep_axis
        if axis == "scaling_m":
            m = int(value)
            return replace(self.base, antennas=m,
                           power_db=self.base.energy_db - 10.0 * self.base.scaling_nu * np.log10(m))
        if axis in ("antennas", "pilot_len", "bits"):
            value = int(value)
        return replace(self.base, **{axis: value})

    def to_json(self) -> dict:
        return {
            "sweep_axis": self.sweep_axis,
            "sweep_values": [_plain(v) for v in self.sweep_values],
            "base": {k: _plain(v) for k, v in asdict(self.base).items()},
            "profile": None if self.profile is None else self.profile.to_json(),
            "power_model": None if self.power_model is None else self.power_model.to_json(),
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _plain(v):
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, np.generic):
        return v.item()
    return v


def profile_for(spec: ExperimentSpec, cfg: SystemConfig, aoa) -> RicianProfile:
    """Profile at one sweep point; ``aoa`` is used unless the spec fixes it."""
    k = cfg.users
    kf = np.full(k, float(db2lin(cfg.kfactor_db)))
    if spec.profile is None:
        return RicianProfile(beta=default_beta(k), kfactor=kf, aoa=aoa)
    if spec.sweep_axis == "kfactor_db":
        return spec.profile.replace(kfactor=kf)
    return spec.profile


_SYSTEM_KEYS = {f.name for f in fields(SystemConfig)}


def system_from_json(obj: dict, base: SystemConfig | None = None) -> SystemConfig:
    unknown = set(obj) - _SYSTEM_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
    vals = dict(obj)
    for key in ("receivers", "csi"):
        if key in vals:
            vals[key] = tuple(vals[key])
    if vals.get("log_base") in ("e", "E"):
        vals["log_base"] = float(np.e)
    try:
        return replace(base or SystemConfig(), **vals)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None


def load_config(path) -> dict:
    """Read a JSON config file.

    Recognized top-level keys: ``system`` (SystemConfig fields), ``profile``
    (``{beta, kfactor_db, aoa_rad}``), ``power_model`` (PowerModel fields),
    ``sweep_axis`` and ``sweep_values``.
    """
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigurationError("config root must be a JSON object")
    unknown = set(obj) - {"system", "profile", "power_model", "sweep_axis", "sweep_values"}
    if unknown:
        raise ConfigurationError(f"unknown config sections: {sorted(unknown)}")
    out = {"system": system_from_json(obj.get("system", {}))}
    if obj.get("profile") is not None:
        out["profile"] = RicianProfile.from_json(obj["profile"])
    if obj.get("power_model") is not None:
        out["power_model"] = PowerModel.from_json(obj["power_model"])
    for key in ("sweep_axis", "sweep_values"):
        if key in obj:
            out[key] = obj[key]
    return out
