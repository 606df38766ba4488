"""Closed-form deterministic-equivalent SINR, transmit power, and cell EE.

The large-system limit of the per-user downlink SINR under MRT splits into a
desired-signal power S, a pilot-contamination power I_PC (both independent of
the per-RRH antenna count n), and a multi-user interference term that decays
as 1/n.  With S, I_PC and the n-scaled multi-user term I_MU' in hand, the
transmit power needed for a target per-user rate, the total consumed power,
and the energy efficiency are all elementary scalar expressions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import PowerModel, SystemConfig, derived_scalars, validate_config


class RateUnachievableError(ValueError):
    """The target rate exceeds the pilot-contamination ceiling at any n."""

    def __init__(self, gamma: float, ceiling: float):
        self.gamma = gamma
        self.ceiling = ceiling
        super().__init__(
            f"rate {gamma:g} bits/s/Hz exceeds the interference-limited "
            f"ceiling {ceiling:g} bits/s/Hz")


class InfeasibleAntennasError(ValueError):
    """n is too small for the target rate at positive transmit power."""

    def __init__(self, n: int, n_min: int):
        self.n = n
        self.n_min = n_min
        super().__init__(f"n={n} infeasible, need n >= {n_min}")


@dataclass(frozen=True)
class SinrBreakdown:
    """Deterministic-equivalent SINR components (beta^2-scaled powers)."""

    S: float            # desired-signal power
    I_PC: float         # pilot-contamination interference power
    I_MU_scaled: float  # multi-user interference scaled by n (I_MU' = n*I_MU)


def large_scale_gains(cfg: SystemConfig, nearest=None) -> np.ndarray:
    """Per-link gains of the averaged interference model, shape (L, M, L, K).

    Entry [l, m, j, k] is the large-scale gain between RRH m of cell l and
    user k of cell j: M^(iota/2)*beta for the serving (nearest) RRH,
    alpha1*beta for the other own-cell RRHs, alpha2*beta across cells.
    ``nearest[k]`` gives the serving RRH index of user slot k (identical in
    every cell); the default round-robin assignment k % M spreads users as
    evenly as possible over the RRHs.
    """
    validate_config(cfg, analytic=True)
    if nearest is None:
        nearest = np.arange(cfg.K) % cfg.M
    nearest = np.asarray(nearest, dtype=int)
    if nearest.shape != (cfg.K,) or nearest.min() < 0 or nearest.max() >= cfg.M:
        raise ValueError("nearest must hold K RRH indices in [0, M)")
    gains = np.full((cfg.L, cfg.M, cfg.L, cfg.K), cfg.alpha2 * cfg.beta)
    for l in range(cfg.L):
        gains[l, :, l, :] = cfg.alpha1 * cfg.beta
        gains[l, nearest, l, np.arange(cfg.K)] = cfg.M ** (cfg.iota / 2) * cfg.beta
    return gains


def sinr_breakdown(cfg: SystemConfig) -> SinrBreakdown:
    """Signal, pilot-contamination, and scaled multi-user powers."""
    sc = derived_scalars(cfg)
    m_half = cfg.M ** (cfg.iota / 2.0)
    signal = cfg.beta ** 2 * (cfg.M ** cfg.iota * sc.nu1
                              + (cfg.M - 1) * cfg.alpha1 ** 2 * sc.nu2)
    pc = (cfg.beta ** 2 * cfg.alpha2 * (sc.L_bar1 - m_half)
          * (m_half * sc.nu1 + (cfg.M - 1) * cfg.alpha1 * sc.nu2) ** 2
          / (cfg.M ** cfg.iota * sc.nu1 + (cfg.M - 1) * cfg.alpha1 ** 2 * sc.nu2))
    mu_scaled = cfg.beta * cfg.d * cfg.K * sc.xi
    return SinrBreakdown(S=signal, I_PC=pc, I_MU_scaled=mu_scaled)


def deterministic_sinr(cfg: SystemConfig, n: int | None = None,
                       p_d: float | None = None) -> float:
    """Large-system per-user SINR at fixed transmit power."""
    brk = sinr_breakdown(cfg)
    n = cfg.n if n is None else n
    p_d = cfg.p_d if p_d is None else p_d
    return brk.S / (cfg.sigma2 / (p_d * n) + brk.I_PC + brk.I_MU_scaled / n)


def min_antennas(cfg: SystemConfig, brk: SinrBreakdown, gamma: float) -> int:
    """Smallest per-RRH antenna count at which rate gamma is feasible."""
    margin = brk.S / (2.0 ** gamma - 1.0) - brk.I_PC
    if margin <= 0.0:
        raise RateUnachievableError(gamma, math.log2(1.0 + brk.S / brk.I_PC))
    return math.floor(brk.I_MU_scaled / margin) + 1


def required_transmit_power(cfg: SystemConfig, brk: SinrBreakdown,
                            gamma: float, n: int) -> float:
    """Transmit power that realizes per-user rate gamma with n antennas."""
    n_min = min_antennas(cfg, brk, gamma)
    margin = brk.S / (2.0 ** gamma - 1.0) - brk.I_PC
    denom = n * margin - brk.I_MU_scaled
    if denom <= 0.0:
        raise InfeasibleAntennasError(n, n_min)
    return cfg.sigma2 / denom


def total_power_at_se(cfg: SystemConfig, pm: PowerModel, se: float,
                      n: int | None = None, p_d: float | None = None) -> float:
    """Cell power draw at spectral efficiency ``se`` (bits/s/Hz)."""
    n = cfg.n if n is None else n
    p_d = cfg.p_d if p_d is None else p_d
    data_fraction = (cfg.T - cfg.tau_u) / cfg.T
    return (pm.P_FIX
            + n * cfg.M * pm.P_RRH
            + data_fraction * (p_d / pm.zeta) * cfg.K
            + cfg.M * (pm.P_0 + pm.P_BT * cfg.B * se))


def total_power(cfg: SystemConfig, pm: PowerModel, gamma: float,
                n: int, p_d: float) -> float:
    """Cell power draw when every user runs at rate gamma."""
    if p_d <= 0.0:
        raise ValueError("p_d must be positive")
    se = (cfg.T - cfg.tau_u) / cfg.T * cfg.K * gamma
    return total_power_at_se(cfg, pm, se, n=n, p_d=p_d)


def energy_efficiency(cfg: SystemConfig, pm: PowerModel, gamma: float,
                      n: int | None = None, M: int | None = None,
                      K: int | None = None) -> float:
    """Cell energy efficiency in bits/Joule at target rate gamma.

    The transmit power is set to the level that realizes gamma; raises
    InfeasibleAntennasError / RateUnachievableError when no positive power
    does.  n, M, K override the corresponding config entries.
    """
    changes = {k: v for k, v in (("n", n), ("M", M), ("K", K)) if v is not None}
    if changes:
        cfg = cfg.replace(**changes)
    validate_config(cfg, pm, analytic=True)
    brk = sinr_breakdown(cfg)
    p_d = required_transmit_power(cfg, brk, gamma, cfg.n)
    se = (cfg.T - cfg.tau_u) / cfg.T * cfg.K * gamma
    return cfg.B * se / total_power_at_se(cfg, pm, se, p_d=p_d)
