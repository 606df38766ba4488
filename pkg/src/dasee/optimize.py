"""EE maximization over the integer design variables n, K, and M.

The antenna count per RRH has a closed-form continuous optimum (square-root
power balance plus the feasibility offset), the user count is the unique
root of a quartic found by bisection, and the RRH count comes from a
one-dimensional scan.  Every routine rounds its continuous optimum with the
EE-comparison rule (take whichever of floor/ceil achieves the higher EE) and
an exhaustive integer scan is provided as the reference oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .asymptotic import (InfeasibleAntennasError, RateUnachievableError,
                         energy_efficiency, min_antennas,
                         required_transmit_power, sinr_breakdown)
from .config import ConfigError, PowerModel, SystemConfig, derived_scalars

BISECTION_WIDTH = 1e-3   # interval width on the continuous user count
DEFAULT_M_MAX = 30
DEFAULT_N_CAP = 400      # upper scan bound for the antenna oracle


class OptimizationError(ValueError):
    """No feasible point exists in the requested search window."""


@dataclass(frozen=True)
class OptimizationResult:
    """Chosen integers, the continuous optimum they round, and the achieved EE."""

    ee: float                     # bits/Joule at the returned integers
    p_d: float                    # W required at the returned integers
    n: int | None = None
    K: int | None = None
    M: int | None = None
    x_real: float | None = None   # continuous optimum before rounding
    window: tuple[float, float] | None = None  # feasibility window searched

    def to_dict(self) -> dict:
        out = {"ee_bits_per_joule": self.ee, "ee_mbits_per_joule": self.ee / 1e6,
               "p_d_watts": self.p_d}
        for name, value in (("n_star", self.n), ("k_star", self.K),
                            ("m_star", self.M), ("continuous_optimum", self.x_real)):
            if value is not None:
                out[name] = value
        if self.window is not None:
            out["window"] = [None if math.isinf(v) else v for v in self.window]
        return out


def floor_ceil_select(x: float, evaluate: Callable[[int], float | None]) -> int:
    """Round x to whichever of floor/ceil has the higher EE.

    ``evaluate`` returns the EE of an integer candidate or None when the
    candidate is infeasible; an infeasible floor falls back to the ceiling.
    """
    lo, hi = math.floor(x), math.ceil(x)
    ee_lo = evaluate(lo) if lo >= 1 else None
    if lo == hi:
        if ee_lo is None:
            raise OptimizationError(f"integer point {lo} is infeasible")
        return lo
    ee_hi = evaluate(hi)
    if ee_lo is None and ee_hi is None:
        raise OptimizationError(f"both neighbors of {x:g} are infeasible")
    if ee_lo is None:
        return hi
    if ee_hi is None:
        return lo
    return lo if ee_lo > ee_hi else hi


def exhaustive_argmax(evaluate: Callable[[int], float | None],
                      candidates: Iterable[int]) -> int:
    """True integer argmax by full scan; ties break to the smallest value."""
    best_value = None
    best_arg = None
    empty = True
    for cand in candidates:
        empty = False
        value = evaluate(cand)
        if value is not None and (best_value is None or value > best_value):
            best_value, best_arg = value, cand
    if empty:
        raise OptimizationError("empty candidate range")
    if best_arg is None:
        raise OptimizationError("no feasible candidate in range")
    return best_arg


def _ee_at_n(cfg: SystemConfig, pm: PowerModel, gamma: float):
    def evaluate(n: int):
        try:
            return energy_efficiency(cfg, pm, gamma, n=n)
        except (InfeasibleAntennasError, RateUnachievableError, ConfigError):
            return None
    return evaluate


def optimal_n(cfg: SystemConfig, pm: PowerModel, gamma: float,
              M: int | None = None, K: int | None = None) -> OptimizationResult:
    """Closed-form EE-optimal antennas per RRH for a target rate gamma.

    The continuous optimum balances the per-antenna circuit power against
    the transmit power, offset by the minimum feasible antenna count; the
    integer answer is the EE-preferred neighbor.
    """
    changes = {k: v for k, v in (("M", M), ("K", K)) if v is not None}
    if changes:
        cfg = cfg.replace(**changes)
    brk = sinr_breakdown(cfg)
    n_min = min_antennas(cfg, brk, gamma)  # raises if gamma unachievable
    margin = brk.S / (2.0 ** gamma - 1.0) - brk.I_PC
    data_fraction = (cfg.T - cfg.tau_u) / (cfg.T * pm.zeta)
    n_real = (math.sqrt(data_fraction * cfg.sigma2 * cfg.K
                        / (margin * cfg.M * pm.P_RRH))
              + brk.I_MU_scaled / margin)
    evaluate = _ee_at_n(cfg, pm, gamma)
    n_star = floor_ceil_select(n_real, evaluate)
    return OptimizationResult(
        ee=evaluate(n_star), p_d=required_transmit_power(cfg, brk, gamma, n_star),
        n=n_star, M=cfg.M, K=cfg.K, x_real=n_real,
        window=(float(n_min), math.inf))


def optimal_n_no_pc(cfg: SystemConfig, pm: PowerModel, gamma: float,
                    M: int | None = None, K: int | None = None
                    ) -> OptimizationResult:
    """Contamination-free lower bound on the optimal antenna count.

    Evaluates the closed form with orthogonal pilots across all cells
    (psi = L) and negligible pilot noise, regardless of the configured
    reuse factor.
    """
    clean = cfg.replace(psi=cfg.L, pilot_noise_mode="negligible")
    return optimal_n(clean, pm, gamma, M=M, K=K)


def _user_count_scalars(cfg: SystemConfig, pm: PowerModel, gamma: float):
    """mu1, mu2 and the interference slope of the user-count quartic.

    Every returned scalar is independent of the user count (the signal and
    contamination powers do not involve K in negligible mode), so the
    incumbent K is reset to a placeholder rather than constraining the
    search.
    """
    clean = cfg.replace(pilot_noise_mode="negligible", K=1)
    brk = sinr_breakdown(clean)
    margin = brk.S / (2.0 ** gamma - 1.0) - brk.I_PC
    if margin <= 0.0:
        raise RateUnachievableError(gamma, math.log2(1.0 + brk.S / brk.I_PC))
    xi = derived_scalars(clean).xi
    mu1 = clean.n * margin
    mu2 = clean.T / gamma * (pm.P_FIX + clean.n * clean.M * pm.P_RRH
                             + clean.M * pm.P_0)
    slope = clean.d * clean.beta * xi   # I_MU' = slope * K
    return clean, mu1, mu2, slope


def z_of_k(cfg: SystemConfig, pm: PowerModel, gamma: float, K: float,
           n: int | None = None, M: int | None = None) -> float:
    """Sign function of d(1/EE)/dK on the open feasibility interval.

    Negative where EE still grows with the user count, positive beyond the
    optimum.  Defined (and evaluated) under negligible pilot noise, where
    the signal and contamination powers do not depend on K.
    """
    changes = {k: v for k, v in (("n", n), ("M", M)) if v is not None}
    if changes:
        cfg = cfg.replace(**changes)
    clean, mu1, mu2, slope = _user_count_scalars(cfg, pm, gamma)
    upper = min(clean.T / clean.psi, mu1 / slope)
    if not 0.0 < K < upper:
        raise ValueError(f"K={K:g} outside the open interval (0, {upper:g})")
    return (mu2 * (2.0 * K * clean.psi - clean.T) * (mu1 - slope * K) ** 2
            + clean.sigma2 / (pm.zeta * gamma) * slope
            * ((clean.T - K * clean.psi) * K) ** 2)


def optimal_k(cfg: SystemConfig, pm: PowerModel, gamma: float,
              n: int | None = None, M: int | None = None) -> OptimizationResult:
    """EE-optimal user count via bisection of the quartic sign function.

    Works in negligible pilot-noise mode (the regime where the quartic
    characterization holds); the reported EE is evaluated in that mode.
    For exact pilot noise, scan ``energy_efficiency`` with
    ``exhaustive_argmax`` instead.
    """
    changes = {k: v for k, v in (("n", n), ("M", M)) if v is not None}
    if changes:
        cfg = cfg.replace(**changes)
    clean, mu1, mu2, slope = _user_count_scalars(cfg, pm, gamma)
    upper = min(clean.T / clean.psi, mu1 / slope)
    z = lambda K: z_of_k(clean, pm, gamma, K)  # noqa: E731
    lo = upper * 1e-9
    hi = upper * (1.0 - 1e-12)
    if not (z(lo) < 0.0 < z(hi)):
        raise OptimizationError("no sign change on the feasibility interval")
    while hi - lo > BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        if z(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    k_real = 0.5 * (lo + hi)

    def evaluate(K: int):
        try:
            return energy_efficiency(clean, pm, gamma, K=K)
        except (InfeasibleAntennasError, RateUnachievableError, ConfigError):
            return None

    k_star = floor_ceil_select(k_real, evaluate)
    brk = sinr_breakdown(clean.replace(K=k_star))
    return OptimizationResult(
        ee=evaluate(k_star),
        p_d=required_transmit_power(clean.replace(K=k_star), brk, gamma, clean.n),
        K=k_star, n=clean.n, M=clean.M, x_real=k_real, window=(0.0, upper))


def optimal_m(cfg: SystemConfig, pm: PowerModel, gamma: float,
              K: int | None = None, M_max: int = DEFAULT_M_MAX,
              n: int | None = None) -> OptimizationResult:
    """EE-optimal RRH count by scanning M = 1..M_max.

    With ``n`` given, every M is evaluated at that fixed antenna count;
    otherwise each candidate M uses its own closed-form optimal n.  The
    averaged-model gains (beta, alpha1, alpha2) are held fixed while the
    serving-RRH gain keeps its M^(iota/2) scaling.  Ties break toward the
    smaller M; infeasible M are skipped.
    """
    if M_max < 1:
        raise OptimizationError("M_max must be >= 1")
    if K is not None:
        cfg = cfg.replace(K=K)
    best: OptimizationResult | None = None
    for M in range(1, M_max + 1):
        try:
            if n is None:
                cand = optimal_n(cfg, pm, gamma, M=M)
            else:
                ee = energy_efficiency(cfg, pm, gamma, n=n, M=M)
                scoped = cfg.replace(M=M, n=n)
                brk = sinr_breakdown(scoped)
                cand = OptimizationResult(
                    ee=ee, p_d=required_transmit_power(scoped, brk, gamma, n),
                    n=n, M=M, K=cfg.K)
        except (InfeasibleAntennasError, RateUnachievableError, ConfigError):
            continue
        if best is None or cand.ee > best.ee:
            best = cand
    if best is None:
        raise OptimizationError(f"no feasible M in 1..{M_max}")
    return OptimizationResult(ee=best.ee, p_d=best.p_d, n=best.n, K=cfg.K,
                              M=best.M, x_real=best.x_real,
                              window=(1.0, float(M_max)))


def feasible_antenna_range(cfg: SystemConfig, gamma: float,
                           cap: int = DEFAULT_N_CAP) -> range:
    """Integer antenna window [n_min, cap] for the exhaustive oracle."""
    brk = sinr_breakdown(cfg)
    return range(min_antennas(cfg, brk, gamma), cap + 1)
