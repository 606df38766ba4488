"""System parameters, power-model parameters, and derived scalar quantities.

All powers are kept in watts internally; dBm values are converted at the
configuration boundary (``*_dbm`` keys in config files, ``--*-dbm`` CLI
flags).  Every type here is an immutable value record and every function is
pure, so they are safe to share across threads.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

PILOT_NOISE_MODES = ("exact", "negligible")


class ConfigError(ValueError):
    """A configuration violates a model invariant."""


def watts_from_dbm(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def dbm_from_watts(watts: float) -> float:
    if watts <= 0.0:
        raise ValueError("power must be positive to convert to dBm")
    return 10.0 * math.log10(watts * 1000.0)


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of the multi-cell distributed-antenna downlink."""

    L: int = 7              # number of cells
    M: int = 7              # RRHs per cell
    K: int = 10             # users per cell
    n: int = 20             # antennas per RRH (N = n*M per cell)
    psi: int = 1            # pilot reuse factor (1 = full reuse, L = orthogonal)
    T: int = 196            # coherence interval, symbols
    B: float = 20e6         # system bandwidth, Hz
    d: int = 1              # correlation factor; P = n/d steering directions
    iota: float = 2.5       # path-loss exponent
    Rc: float = 2000.0      # cell radius, m
    beta: float = 2.24e-8   # average large-scale gain (calibrated, Rc = 2 km)
    alpha1: float = 0.54    # intra-cell interference factor (non-serving RRHs)
    alpha2: float = 0.075   # inter-cell interference factor
    p_u: float = 0.5        # uplink pilot power, W
    p_d: float = 1.0        # downlink transmit power, W (fixed-power mode)
    sigma2: float = 1e-7    # total noise power, W (-40 dBm)
    pilot_noise_mode: str = "exact"

    @property
    def tau_u(self) -> int:
        """Pilot length in symbols."""
        return self.psi * self.K

    @property
    def N(self) -> int:
        """Total antennas per cell."""
        return self.n * self.M

    @property
    def P(self) -> int:
        """Degrees of freedom per RRH channel (steering-matrix columns)."""
        return self.n // self.d

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PowerModel:
    """Per-cell power consumption parameters."""

    P_FIX: float = 9.0      # static circuit power, W
    P_RRH: float = 0.2      # power per RRH antenna, W
    P_0: float = 0.825      # fixed power per backhaul link, W
    P_BT: float = 0.25e-9   # traffic-dependent backhaul power, W per bit/s
    zeta: float = 0.4       # power-amplifier efficiency

    def replace(self, **changes) -> "PowerModel":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedScalars:
    """Scalar aggregates shared by the closed-form SINR and the optimizers."""

    L_bar1: float   # effective co-pilot gain sum seen by the serving RRH
    L_bar2: float   # same, seen by the non-serving own-cell RRHs
    nu1: float      # estimation-quality factor of the serving-RRH link
    nu2: float      # estimation-quality factor of the other own-cell links
    xi: float       # per-user multi-user interference coefficient
    tau_u: int      # pilot length, symbols


def validate_config(cfg: SystemConfig, pm: PowerModel | None = None, *,
                    analytic: bool = False) -> SystemConfig:
    """Check every invariant; raise ConfigError naming the first violation.

    With ``analytic=True`` the steering-dimension divisibility (n mod d = 0)
    is not enforced: the closed-form expressions use the correlation factor
    only as a scalar, so any integer antenna count is admissible there,
    whereas simulation paths must materialize P = n/d steering columns.
    """
    for name in ("L", "M", "K", "n", "psi", "T", "d"):
        value = getattr(cfg, name)
        if not isinstance(value, int) or value < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    if cfg.psi > cfg.L:
        raise ConfigError("psi exceeds L")
    if cfg.L % cfg.psi != 0:
        raise ConfigError("L not divisible by psi")
    if cfg.psi * cfg.K > cfg.T:
        raise ConfigError("psi*K exceeds T")
    if not analytic and cfg.n % cfg.d != 0:
        raise ConfigError("n not divisible by d")
    for name in ("B", "Rc", "beta", "p_u", "p_d", "sigma2"):
        if getattr(cfg, name) <= 0.0:
            raise ConfigError(f"{name} must be positive")
    if cfg.iota <= 0.0:
        raise ConfigError("iota must be positive")
    for name in ("alpha1", "alpha2"):
        if not 0.0 <= getattr(cfg, name) <= 1.0:
            raise ConfigError(f"{name} must lie in [0, 1]")
    if cfg.pilot_noise_mode not in PILOT_NOISE_MODES:
        raise ConfigError(
            f"pilot_noise_mode must be one of {PILOT_NOISE_MODES}, "
            f"got {cfg.pilot_noise_mode!r}")
    if pm is not None:
        for name in ("P_FIX", "P_RRH", "P_0", "P_BT", "zeta"):
            if getattr(pm, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        if pm.zeta > 1.0:
            raise ConfigError("zeta exceeds 1")
    return cfg


def derived_scalars(cfg: SystemConfig) -> DerivedScalars:
    """Aggregate scalars of the averaged interference model.

    In ``negligible`` pilot-noise mode the noise term is dropped from the
    estimation-quality factors, which then reduce to 1/(L_bar * beta).
    """
    validate_config(cfg, analytic=True)
    m_half = cfg.M ** (cfg.iota / 2.0)
    copilot = cfg.alpha2 * (cfg.L / cfg.psi - 1.0)
    l_bar1 = m_half + copilot
    l_bar2 = cfg.alpha1 + copilot
    tau_u = cfg.tau_u
    if cfg.pilot_noise_mode == "negligible":
        nu1 = 1.0 / (l_bar1 * cfg.beta)
        nu2 = 1.0 / (l_bar2 * cfg.beta)
    else:
        energy = cfg.p_u * tau_u * cfg.d
        nu1 = energy / (cfg.sigma2 + energy * l_bar1 * cfg.beta)
        nu2 = energy / (cfg.sigma2 + energy * l_bar2 * cfg.beta)
    xi = m_half / cfg.M + (1.0 - 1.0 / cfg.M) * cfg.alpha1 + cfg.alpha2 * (cfg.L - 1)
    return DerivedScalars(L_bar1=l_bar1, L_bar2=l_bar2, nu1=nu1, nu2=nu2,
                          xi=xi, tau_u=tau_u)


# --- configuration files -------------------------------------------------

_SYSTEM_FIELDS = {f.name: f.type for f in dataclasses.fields(SystemConfig)}
_POWER_FIELDS = {f.name: f.type for f in dataclasses.fields(PowerModel)}
_DBM_CONVERTIBLE = ("p_u", "p_d", "sigma2")


def parse_config_file(path: str | Path) -> dict:
    """Read a key = value config file into a raw {key: string} dict.

    Blank lines and ``#`` comments are ignored.  Keys are the field names of
    SystemConfig and PowerModel; power keys also accept a ``_dbm`` suffix.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        raw[key] = value
    return raw


def _coerce(name: str, annotation: str, text: str):
    if annotation == "int":
        value = float(text)
        if value != int(value):
            raise ConfigError(f"{name} must be an integer, got {text!r}")
        return int(value)
    if annotation == "str":
        return text
    return float(text)


def scenario_from_mapping(values: dict) -> tuple[SystemConfig, PowerModel]:
    """Build (SystemConfig, PowerModel) from a raw key/value mapping."""
    sys_kw: dict = {}
    pm_kw: dict = {}
    for key, text in values.items():
        name, dbm = key, False
        if key.endswith("_dbm") and key[:-4] in _DBM_CONVERTIBLE:
            name, dbm = key[:-4], True
        if name in _SYSTEM_FIELDS:
            target, ann = sys_kw, _SYSTEM_FIELDS[name]
        elif name in _POWER_FIELDS:
            target, ann = pm_kw, _POWER_FIELDS[name]
        else:
            raise ConfigError(f"unknown config key {key!r}")
        value = _coerce(name, ann, text) if not isinstance(text, (int, float)) \
            else text
        if dbm:
            value = watts_from_dbm(float(value))
        target[name] = value
    cfg = SystemConfig(**sys_kw)
    pm = PowerModel(**pm_kw)
    validate_config(cfg, pm)
    return cfg, pm


def load_scenario(path: str | Path | None = None,
                  overrides: dict | None = None) -> tuple[SystemConfig, PowerModel]:
    """Defaults <- config file <- explicit overrides, validated."""
    values: dict = {}
    if path is not None:
        values.update(parse_config_file(path))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return scenario_from_mapping(values)


def write_scenario(cfg: SystemConfig, pm: PowerModel, path: str | Path) -> None:
    """Serialize a scenario as a config file readable by load_scenario."""
    lines = ["# system model"]
    for field in dataclasses.fields(SystemConfig):
        lines.append(f"{field.name} = {getattr(cfg, field.name)!r}".replace("'", ""))
    lines.append("# power model")
    for field in dataclasses.fields(PowerModel):
        lines.append(f"{field.name} = {getattr(pm, field.name)!r}")
    Path(path).write_text("\n".join(lines) + "\n")
