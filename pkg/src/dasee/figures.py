"""CSV experiment runners behind the ``figure`` CLI subcommand.

Each runner sweeps the experiment axes of one study (antenna count, user
count, RRH grid, rate trade-off, backhaul comparison, ...) and returns a
(header, rows) pair.  Infeasible sweep points are emitted with feasible=0
and NaN efficiency so curves stay aligned across parameter sets.
"""
from __future__ import annotations

import math

from . import montecarlo
from .asymptotic import (InfeasibleAntennasError, RateUnachievableError,
                         deterministic_sinr, energy_efficiency,
                         required_transmit_power, sinr_breakdown,
                         total_power_at_se)
from .config import PowerModel, SystemConfig
from .optimize import OptimizationError, optimal_n

GAMMA_DEFAULT = 2.0
N_SWEEP = tuple(range(2, 61))


def _rate_point(cfg: SystemConfig, pm: PowerModel, gamma: float, n: int):
    try:
        ee = energy_efficiency(cfg, pm, gamma, n=n)
        p_d = required_transmit_power(cfg.replace(n=n), sinr_breakdown(cfg),
                                      gamma, n)
        return ee, p_d, 1
    except (InfeasibleAntennasError, RateUnachievableError):
        return math.nan, math.nan, 0


def _n_star(cfg: SystemConfig, pm: PowerModel, gamma: float):
    try:
        return optimal_n(cfg, pm, gamma).n
    except (RateUnachievableError, OptimizationError):
        return -1


def figure2(cfg, pm, realizations=1000, seed=1):
    """Asymptotic vs Monte-Carlo EE over n, fixed p_d, with and w/o reuse."""
    header = ["psi", "K", "n", "ee_de_bits_per_joule", "ee_mc_bits_per_joule",
              "rel_error"]
    rows = []
    for psi in (1, cfg.L):
        for K in (10, 20):
            base = cfg.replace(psi=psi, K=K)
            for n in range(10, 61, 10):
                point = base.replace(n=n)
                sinr = deterministic_sinr(point)
                se = montecarlo.rate_from_sinr(point, [sinr] * K)
                ee_de = point.B * se / total_power_at_se(point, pm, se)
                ee_mc = montecarlo.empirical_ee(point, pm, realizations, seed)
                rows.append([psi, K, n, ee_de, ee_mc,
                             abs(ee_mc - ee_de) / ee_de])
    return header, rows


def figure3(cfg, pm, realizations=0, seed=1):
    """EE vs n for d in {1, 2} and the nominal / 5x-weaker channel gain."""
    header = ["d", "beta", "n", "ee_bits_per_joule", "feasible", "n_star"]
    rows = []
    for d in (1, 2):
        for beta in (cfg.beta, 0.2 * cfg.beta):
            base = cfg.replace(d=d, beta=beta)
            star = _n_star(base, pm, GAMMA_DEFAULT)
            for n in N_SWEEP:
                if n % d:
                    continue
                ee, _, ok = _rate_point(base, pm, GAMMA_DEFAULT, n)
                rows.append([d, beta, n, ee, ok, star])
    return header, rows


def figure4(cfg, pm, realizations=0, seed=1):
    """EE vs n for efficient / inefficient RRH hardware, with and w/o PC."""
    header = ["P_RRH", "psi", "n", "ee_bits_per_joule", "feasible", "n_star"]
    rows = []
    for p_rrh in (1.0, 0.2):
        pm_i = pm.replace(P_RRH=p_rrh)
        for psi in (1, cfg.L):
            base = cfg.replace(psi=psi)
            star = _n_star(base, pm_i, GAMMA_DEFAULT)
            for n in N_SWEEP:
                ee, _, ok = _rate_point(base, pm_i, GAMMA_DEFAULT, n)
                rows.append([p_rrh, psi, n, ee, ok, star])
    return header, rows


def figure5(cfg, pm, realizations=0, seed=1):
    """Best EE over n, and the maximizing n, as the target rate grows."""
    header = ["psi", "gamma", "ee_star_bits_per_joule", "n_star"]
    rows = []
    gammas = [0.5 + 0.25 * i for i in range(23)]
    for psi in (1, cfg.L):
        base = cfg.replace(psi=psi)
        for gamma in gammas:
            try:
                res = optimal_n(base, pm, gamma)
                rows.append([psi, gamma, res.ee, res.n])
            except (RateUnachievableError, OptimizationError):
                rows.append([psi, gamma, math.nan, -1])
    return header, rows


def figure6(cfg, pm, realizations=0, seed=1):
    """EE vs n as the inter-cell interference factor grows (d = 2)."""
    header = ["alpha2", "psi", "n", "ee_bits_per_joule", "feasible", "n_star"]
    rows = []
    for alpha2 in (0.075, 0.15, 0.3):
        for psi in (1, cfg.L):
            base = cfg.replace(d=2, alpha2=alpha2, psi=psi)
            star = _n_star(base, pm, GAMMA_DEFAULT)
            for n in N_SWEEP:
                if n % 2:
                    continue
                ee, _, ok = _rate_point(base, pm, GAMMA_DEFAULT, n)
                rows.append([alpha2, psi, n, ee, ok, star])
    return header, rows


def figure7(cfg, pm, realizations=0, seed=1):
    """EE vs user count at n = 20 for the three reuse/correlation cases."""
    header = ["psi", "d", "K", "ee_bits_per_joule", "feasible"]
    rows = []
    for psi, d in ((1, 1), (cfg.L, 1), (1, 2)):
        base = cfg.replace(psi=psi, d=d, n=20)
        for K in range(1, base.T // psi + 1):
            try:
                ee = energy_efficiency(base, pm, GAMMA_DEFAULT, K=K)
                rows.append([psi, d, K, ee, 1])
            except (InfeasibleAntennasError, RateUnachievableError):
                rows.append([psi, d, K, math.nan, 0])
    return header, rows


def figure8(cfg, pm, realizations=0, seed=1):
    """EE over the (M, n) grid at the configured user count."""
    header = ["M", "n", "ee_bits_per_joule", "feasible"]
    rows = []
    for M in range(1, 11):
        base = cfg.replace(M=M)
        for n in N_SWEEP:
            ee, _, ok = _rate_point(base, pm, GAMMA_DEFAULT, n)
            rows.append([M, n, ee, ok])
    return header, rows


def figure9(cfg, pm, realizations=0, seed=1):
    """Best EE vs RRH count (each M at its own optimal n) for K growing."""
    header = ["K", "M", "n_star", "ee_bits_per_joule", "feasible"]
    rows = []
    for K in (10, 50, 100):
        base = cfg.replace(K=K)
        for M in range(1, 16):
            try:
                res = optimal_n(base, pm, GAMMA_DEFAULT, M=M)
                rows.append([K, M, res.n, res.ee, 1])
            except (RateUnachievableError, OptimizationError):
                rows.append([K, M, -1, math.nan, 0])
    return header, rows


def figure10(cfg, pm, realizations=0, seed=1):
    """Distributed (M=7) vs co-located (M=1) EE under two backhaul costs."""
    header = ["M", "P_0", "P_BT", "n", "ee_bits_per_joule", "feasible"]
    rows = []
    for p0, pbt in ((0.825, 0.25e-9), (8.25, 2.5e-9)):
        pm_i = pm.replace(P_0=p0, P_BT=pbt)
        for M in (7, 1):
            base = cfg.replace(M=M)
            for n in N_SWEEP:
                ee, _, ok = _rate_point(base, pm_i, GAMMA_DEFAULT, n)
                rows.append([M, p0, pbt, n, ee, ok])
    return header, rows


RUNNERS = {2: figure2, 3: figure3, 4: figure4, 5: figure5, 6: figure6,
           7: figure7, 8: figure8, 9: figure9, 10: figure10}
