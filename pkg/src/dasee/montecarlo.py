"""Monte-Carlo link-level oracle for the finite-antenna downlink.

Draws the exact finite-n system: correlated channels, uplink pilots with
contamination and noise, per-link MMSE estimates, MRT precoders with batch
power normalization, and the empirical per-user SINR / cell spectral
efficiency assembled exactly as the analytic formula structures them
(batch mean of the effective channel, batch variance, batch means of the
interference magnitudes, normalization from the same batch).

Reproducibility contract: realization r draws from its own counter-derived
substream SeedSequence(seed, spawn_key=(r,)), and reductions run in fixed
realization order, so results are bit-identical for a given
(config, seed, realization count) regardless of how the work is scheduled.

The channels of the rank-P model live in the steering subspace
(g = sqrt(beta*n/P) A h with A^H A = I_P), and the estimation filter is a
scalar multiple of the projector A A^H, so every inner product entering the
SINR reduces exactly to P-dimensional coordinates; the SINR estimator works
in these coordinates and never materializes A.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotic import large_scale_gains, total_power_at_se
from .config import PowerModel, SystemConfig, validate_config


@dataclass(frozen=True)
class SteeringMatrix:
    """Orthonormal steering basis of the rank-P channel model."""

    A: np.ndarray  # (n, P), A^H A = I_P
    kind: str
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def P(self) -> int:
        return self.A.shape[1]


def steering_matrix(n: int, P: int | None = None, kind: str = "dft_columns",
                    seed: int | None = None) -> SteeringMatrix:
    """Build an n x P steering matrix with orthonormal columns.

    ``dft_columns`` takes the first P columns of the unitary n-point DFT
    matrix (deterministic); ``random_unitary`` orthonormalizes a complex
    Gaussian matrix drawn from ``seed`` (bit-reproducible for equal seeds).
    """
    if P is None:
        P = n
    if P > n or P < 1:
        raise ValueError(f"need 1 <= P <= n, got P={P}, n={n}")
    if kind == "dft_columns":
        idx = np.arange(n)
        A = np.exp(-2j * np.pi * np.outer(idx, idx[:P]) / n) / np.sqrt(n)
    elif kind == "random_unitary":
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        Qm, Rm = np.linalg.qr(G)
        diag = Rm.diagonal()
        A = (Qm * (diag.conj() / np.abs(diag)))[:, :P]
    else:
        raise ValueError(f"unknown steering kind {kind!r}")
    return SteeringMatrix(A=A, kind=kind, seed=seed)


@dataclass(frozen=True)
class ChannelRealization:
    """One finite-n draw: true channels, pilot noise, MMSE estimates."""

    channels: np.ndarray     # (L, M, L, K, n): g_{lmjk}
    pilot_noise: np.ndarray  # (L, M, K, n):    z_{lmk}
    estimates: np.ndarray    # (L, M, K, n):    ghat_{lmlk}
    seed: int


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def _pilot_groups(L: int, psi: int) -> list[np.ndarray]:
    cells = np.arange(L)
    return [cells[cells % psi == g] for g in range(psi)]


def _estimation_coefficient(cfg: SystemConfig, gains: np.ndarray) -> np.ndarray:
    """Scalar MMSE filter per (l, m, k): estimate = c * A A^H (observation)."""
    groups = _pilot_groups(cfg.L, cfg.psi)
    own = np.empty((cfg.L, cfg.M, cfg.K))
    copilot_sum = np.empty((cfg.L, cfg.M, cfg.K))
    for l in range(cfg.L):
        own[l] = gains[l, :, l, :]
        copilot_sum[l] = gains[l][:, groups[l % cfg.psi], :].sum(axis=1)
    loading = cfg.sigma2 / (cfg.p_u * cfg.tau_u)
    return own * cfg.d / (loading + copilot_sum * cfg.d)


def generate_realization(cfg: SystemConfig, steering: SteeringMatrix,
                         seed: int, gains: np.ndarray | None = None
                         ) -> ChannelRealization:
    """Draw one full-space channel realization with its MMSE estimates.

    Channels follow g_{lmjk} = sqrt(beta_{lmjk} n/P) A h with i.i.d. standard
    complex Gaussian h; estimates apply the MMSE filter to the pilot
    observation (own channel + co-pilot channels + scaled noise).  ``gains``
    overrides the averaged-model betas, e.g. with position-derived values.
    """
    validate_config(cfg)
    A = steering.A
    if A.shape != (cfg.n, cfg.P):
        raise ValueError(f"steering matrix shape {A.shape} does not match "
                         f"(n, P) = ({cfg.n}, {cfg.P})")
    if gains is None:
        gains = large_scale_gains(cfg)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    h = _complex_normal(rng, (cfg.L, cfg.M, cfg.L, cfg.K, cfg.P))
    noise = _complex_normal(rng, (cfg.L, cfg.M, cfg.K, cfg.n)) * np.sqrt(cfg.sigma2)

    # n/P = d, so the amplitude per link is sqrt(beta * d).
    channels = np.sqrt(gains * cfg.d)[..., None] * np.einsum("np,lmjkp->lmjkn", A, h)

    groups = _pilot_groups(cfg.L, cfg.psi)
    coeff = _estimation_coefficient(cfg, gains)
    observation = np.empty((cfg.L, cfg.M, cfg.K, cfg.n), dtype=complex)
    for l in range(cfg.L):
        observation[l] = channels[l][:, groups[l % cfg.psi], :].sum(axis=1)
    observation += noise / np.sqrt(cfg.p_u * cfg.tau_u)
    projected = np.einsum("np,lmkp->lmkn", A, np.einsum("np,lmkn->lmkp",
                                                        A.conj(), observation))
    estimates = coeff[..., None] * projected
    return ChannelRealization(channels=channels, pilot_noise=noise,
                              estimates=estimates, seed=seed)


def _subspace_draws(cfg: SystemConfig, scale_pilot, g0_scale, coeff, noncopilot,
                    jj0, rng):
    """One realization of the reduced-coordinate quantities (see module doc)."""
    Lc = scale_pilot.shape[2]
    hp = _complex_normal(rng, (cfg.L, cfg.M, Lc, cfg.K, cfg.P))
    hx = _complex_normal(rng, (len(noncopilot), cfg.M, cfg.K, cfg.P)) \
        if len(noncopilot) else None
    zp = _complex_normal(rng, (cfg.L, cfg.M, cfg.K, cfg.P)) * np.sqrt(cfg.sigma2)

    observation = np.einsum("lmjk,lmjkp->lmkp", scale_pilot, hp)
    observation += zp / np.sqrt(cfg.p_u * cfg.tau_u)
    w = coeff[..., None] * observation          # reduced ghat_{lmlk}

    g0 = np.empty((cfg.L, cfg.M, cfg.K, cfg.P), dtype=complex)
    copilot_mask = np.ones(cfg.L, dtype=bool)
    copilot_mask[noncopilot] = False
    g0[copilot_mask] = g0_scale[copilot_mask, ..., None] * hp[copilot_mask, :, jj0]
    if hx is not None:
        g0[noncopilot] = g0_scale[noncopilot, ..., None] * hx
    return g0, w


def empirical_sinr_rate(cfg: SystemConfig, realizations: int, seed: int,
                        gains: np.ndarray | None = None
                        ) -> tuple[np.ndarray, float]:
    """Empirical per-user SINR (cell 0) and the cell spectral efficiency.

    Averages over ``realizations`` independent channel draws with per-cell
    power normalization estimated from the same batch.  Returns
    ``(sinr, se)`` with sinr of shape (K,) and se in bits/s/Hz.
    """
    validate_config(cfg)
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    if gains is None:
        gains = large_scale_gains(cfg)

    groups = _pilot_groups(cfg.L, cfg.psi)
    group0 = groups[0]
    jj0 = int(np.flatnonzero(group0 == 0)[0])
    noncopilot = np.flatnonzero(np.arange(cfg.L) % cfg.psi != 0)
    scale_pilot = np.empty((cfg.L, cfg.M, cfg.L // cfg.psi, cfg.K))
    for l in range(cfg.L):
        scale_pilot[l] = np.sqrt(gains[l][:, groups[l % cfg.psi], :] * cfg.d)
    g0_scale = np.sqrt(gains[:, :, 0, :] * cfg.d)
    coeff = _estimation_coefficient(cfg, gains)

    sum_eff = np.zeros(cfg.K, dtype=complex)   # effective channel, user k
    sum_eff2 = np.zeros(cfg.K)
    sum_sci = np.zeros(cfg.K)
    sum_ici = np.zeros((cfg.L, cfg.K))
    sum_wnorm = np.zeros(cfg.L)
    off_diag = ~np.eye(cfg.K, dtype=bool)

    for r in range(realizations):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        g0, w = _subspace_draws(cfg, scale_pilot, g0_scale, coeff,
                                noncopilot, jj0, rng)
        # y[l, k, i] = sum_m g_{lm0k}^T w_{lmi}, with w = ghat*
        y = np.einsum("lmkp,lmip->lki", g0, w.conj())
        own = y[0].diagonal()
        sum_eff += own
        sum_eff2 += np.abs(own) ** 2
        sum_sci += np.where(off_diag, np.abs(y[0]) ** 2, 0.0).sum(axis=1)
        sum_ici += (np.abs(y) ** 2).sum(axis=2)
        sum_wnorm += (np.abs(w) ** 2).sum(axis=(1, 2, 3))

    lam = cfg.K / (sum_wnorm / realizations)
    mean_eff = sum_eff / realizations
    var_eff = sum_eff2 / realizations - np.abs(mean_eff) ** 2
    sci = lam[0] * sum_sci / realizations
    ici = (lam[1:, None] * sum_ici[1:] / realizations).sum(axis=0)
    sinr = (lam[0] * np.abs(mean_eff) ** 2
            / (lam[0] * var_eff + sci + ici + cfg.sigma2 / cfg.p_d))
    se = rate_from_sinr(cfg, sinr)
    return sinr, se


def rate_from_sinr(cfg: SystemConfig, sinr: np.ndarray) -> float:
    """Cell spectral efficiency from per-user SINRs (bits/s/Hz)."""
    return float((cfg.T - cfg.tau_u) / cfg.T * np.log2(1.0 + np.asarray(sinr)).sum())


def empirical_transmit_power(cfg: SystemConfig, realizations: int, seed: int,
                             lam: np.ndarray | None = None,
                             gains: np.ndarray | None = None) -> np.ndarray:
    """Batch-averaged per-cell transmit power (W) under normalization ``lam``.

    With the batch's own normalization the result is p_d by construction;
    passing the closed-form normalization 1/(n*S) instead makes this a real
    consistency check of the precoder second moment.
    """
    validate_config(cfg)
    if gains is None:
        gains = large_scale_gains(cfg)
    groups = _pilot_groups(cfg.L, cfg.psi)
    jj0 = int(np.flatnonzero(groups[0] == 0)[0])
    noncopilot = np.flatnonzero(np.arange(cfg.L) % cfg.psi != 0)
    scale_pilot = np.empty((cfg.L, cfg.M, cfg.L // cfg.psi, cfg.K))
    for l in range(cfg.L):
        scale_pilot[l] = np.sqrt(gains[l][:, groups[l % cfg.psi], :] * cfg.d)
    g0_scale = np.sqrt(gains[:, :, 0, :] * cfg.d)
    coeff = _estimation_coefficient(cfg, gains)

    sum_wnorm = np.zeros(cfg.L)
    for r in range(realizations):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        _, w = _subspace_draws(cfg, scale_pilot, g0_scale, coeff,
                               noncopilot, jj0, rng)
        sum_wnorm += (np.abs(w) ** 2).sum(axis=(1, 2, 3))
    if lam is None:
        lam = cfg.K / (sum_wnorm / realizations)
    return cfg.p_d / cfg.K * np.asarray(lam) * sum_wnorm / realizations


def empirical_ee(cfg: SystemConfig, pm: PowerModel, realizations: int,
                 seed: int, gains: np.ndarray | None = None) -> float:
    """Empirical energy efficiency (bits/Joule) at the configured p_d."""
    _, se = empirical_sinr_rate(cfg, realizations, seed, gains=gains)
    if se == 0.0:
        return 0.0
    return cfg.B * se / total_power_at_se(cfg, pm, se)
