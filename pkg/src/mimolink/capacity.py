"""MIMO capacity with ideal and impaired transmitter hardware.

Ideal capacity water-fills the eigenmodes of each channel realization;
impaired capacity evaluates the same input covariance under a per-antenna
transmit-distortion model whose magnitude scales with kappa, the
error-vector-magnitude level.  With any kappa > 0 the capacity saturates at
the closed-form ceiling min(nt, nr) * log2(1 + nt / (min(nt, nr) * kappa^2))
regardless of the channel distribution, which is what drives the classic
multiplexing gain to zero.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import rayleigh_channel
from .cxkernel import logdet_hpd
from .errors import ConstraintError, DomainError, ShapeError
from .waterfill import waterfill_inverse_gains


@dataclass(frozen=True)
class ImpairmentModel:
    """Transmitter distortion level kappa and the induced covariance rule.

    kappa is the ratio of distortion magnitude to signal magnitude per
    transmit antenna; kappa == 0 means ideal hardware.
    """

    kappa: float

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"impairment level must be nonnegative, got {self.kappa}")

    def distortion_covariance(self, q: np.ndarray) -> np.ndarray:
        """Distortion covariance for input covariance q: kappa^2 * Diag(diag(q))."""
        return self.kappa**2 * np.diag(np.real(np.diag(q)))


@dataclass(frozen=True)
class SweepConfig:
    """Monte-Carlo sweep settings over Rayleigh channel realizations."""

    n_realizations: int
    nt: int
    nr: int
    snr_db_grid: np.ndarray
    kappas: np.ndarray
    master_seed: int

    def __post_init__(self):
        object.__setattr__(self, "snr_db_grid", np.asarray(self.snr_db_grid, dtype=float))
        object.__setattr__(self, "kappas", np.asarray(self.kappas, dtype=float))
        if self.n_realizations < 1:
            raise DomainError(f"need at least one realization, got {self.n_realizations}")
        if self.nt < 1 or self.nr < 1:
            raise DomainError(f"antenna counts must be >= 1, got nt={self.nt}, nr={self.nr}")
        if self.snr_db_grid.ndim != 1 or self.snr_db_grid.size == 0:
            raise ShapeError("SNR grid must be a nonempty vector")
        if np.any(np.diff(self.snr_db_grid) <= 0):
            raise DomainError("SNR grid must be strictly increasing")
        if self.kappas.ndim != 1 or self.kappas.size == 0:
            raise ShapeError("kappa list must be a nonempty vector")
        if np.any(self.kappas < 0):
            raise DomainError("impairment levels must be nonnegative")
        if self.master_seed < 0:
            raise DomainError("master seed must be nonnegative")


@dataclass(frozen=True)
class CapacityCurve:
    """Averaged capacity versus SNR, one row per impairment level.

    ``mean_capacity`` and ``std_error`` are kappa-by-SNR matrices;
    ``limits`` holds the per-kappa saturation ceiling (inf for kappa == 0,
    whose ideal capacity is unbounded).
    """

    snr_db: np.ndarray
    kappas: np.ndarray
    mean_capacity: np.ndarray
    std_error: np.ndarray
    limits: np.ndarray


def snr_db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def waterfilled_input_covariance(g, snr: float) -> tuple[float, np.ndarray]:
    """Ideal capacity of one realization plus the covariance achieving it.

    Water-fills the power budget ``snr`` against the inverted squared
    singular values, yielding per-mode powers q_i with sum q_i = snr and
    capacity sum log2(1 + q_i * sigma_i^2).  The returned unit-trace input
    covariance V diag(q/snr) V^H is what the impaired evaluation reuses.
    """
    g = np.asarray(g, dtype=np.complex128)
    if snr <= 0 or not np.isfinite(snr):
        raise DomainError(f"linear SNR must be positive and finite, got {snr}")
    nt = g.shape[1]
    _, s, vh = np.linalg.svd(g, full_matrices=False)
    s2 = s * s
    if not np.any(s2 > 0):
        return 0.0, np.eye(nt) / nt
    alloc = waterfill_inverse_gains(snr, s2).alloc[0]
    cap = float(np.sum(np.log2(1.0 + alloc * s2)))
    v = vh.conj().T
    q = (v * (alloc / snr)) @ vh
    return cap, q


def ideal_capacity(g, snr: float) -> float:
    """Deterministic-channel capacity with ideal hardware at linear SNR.

    The transmit power (carried by ``snr``; the noise is unit) is
    water-filled over the channel eigenmodes, the optimum over all power
    splits.  A zero channel carries nothing and returns 0.
    """
    cap, _ = waterfilled_input_covariance(g, snr)
    return cap


def impaired_capacity(g, snr: float, kappa: float, q) -> float:
    """Deterministic-channel capacity under transmit distortion.

    Evaluates log2 det(I + snr G Q G^H (snr G U G^H + I)^-1) where
    U = kappa^2 Diag(diag(Q)) is the per-antenna distortion covariance.
    Computed stably as the difference of two Hermitian positive-definite
    log-determinants:

        logdet(I + snr G (Q + U) G^H) - logdet(I + snr G U G^H)

    ``q`` must be Hermitian positive semidefinite with unit trace.
    """
    g = np.asarray(g, dtype=np.complex128)
    q = np.asarray(q, dtype=np.complex128)
    if snr <= 0 or not np.isfinite(snr):
        raise DomainError(f"linear SNR must be positive and finite, got {snr}")
    if g.ndim != 2 or q.shape != (g.shape[1], g.shape[1]):
        raise ShapeError(f"input covariance {q.shape} does not match channel {g.shape}")
    trace = float(np.real(np.trace(q)))
    if abs(trace - 1.0) > 1e-6:
        raise ConstraintError(f"input covariance must have unit trace, got {trace}")
    upsilon = ImpairmentModel(kappa).distortion_covariance(q)
    eye = np.eye(g.shape[0])
    signal_plus_distortion = eye + snr * (g @ (q + upsilon) @ g.conj().T)
    distortion_only = eye + snr * (g @ upsilon @ g.conj().T)
    return logdet_hpd(signal_plus_distortion) - logdet_hpd(distortion_only)


def capacity_limit(nt: int, nr: int, kappa: float) -> float:
    """High-SNR capacity ceiling under transmit distortion level kappa.

    Returns A * log2(1 + nt / (A * kappa^2)) with A = min(nt, nr),
    independent of the channel distribution.  For kappa == 0 the ideal
    capacity is unbounded and the sentinel +inf is returned.
    """
    if nt < 1 or nr < 1:
        raise DomainError(f"antenna counts must be >= 1, got nt={nt}, nr={nr}")
    if kappa < 0:
        raise DomainError(f"impairment level must be nonnegative, got {kappa}")
    if kappa == 0:
        return math.inf
    a = min(nt, nr)
    return a * math.log2(1.0 + nt / (a * kappa**2))


def _realization_block(cfg: SweepConfig, index: int) -> np.ndarray:
    """Capacity of realization ``index`` for every (kappa, SNR) pair."""
    g = rayleigh_channel(cfg.nt, cfg.nr, cfg.master_seed, index).g
    out = np.empty((cfg.kappas.size, cfg.snr_db_grid.size))
    for m, snr_db in enumerate(cfg.snr_db_grid):
        snr = snr_db_to_linear(snr_db)
        _, q = waterfilled_input_covariance(g, snr)
        for i, kappa in enumerate(cfg.kappas):
            out[i, m] = impaired_capacity(g, snr, kappa, q)
    return out


def _sweep_chunk(args: tuple[SweepConfig, list[int]]) -> np.ndarray:
    cfg, indices = args
    return np.stack([_realization_block(cfg, k) for k in indices])


def monte_carlo_sweep(cfg: SweepConfig, workers: int = 1) -> CapacityCurve:
    """Average capacity over Rayleigh realizations for each (kappa, SNR).

    Realization k draws its channel from the substream keyed by
    (master_seed, k), and the reduction always runs in realization order,
    so the result is byte-identical for any worker count.

    Parameters
    ----------
    cfg : sweep settings
    workers : process count for fanning out realizations (speed only)
    """
    n = cfg.n_realizations
    indices = list(range(n))
    if workers <= 1 or n == 1:
        stacked = _sweep_chunk((cfg, indices))
    else:
        chunk = -(-n // workers)
        jobs = [(cfg, indices[i:i + chunk]) for i in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            stacked = np.concatenate(list(pool.map(_sweep_chunk, jobs)))
    mean = stacked.mean(axis=0)
    if n > 1:
        std_error = stacked.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        std_error = np.zeros_like(mean)
    limits = np.array([capacity_limit(cfg.nt, cfg.nr, k) for k in cfg.kappas])
    return CapacityCurve(
        snr_db=cfg.snr_db_grid.copy(),
        kappas=cfg.kappas.copy(),
        mean_capacity=mean,
        std_error=std_error,
        limits=limits,
    )


def classic_mux_gain(curve: CapacityCurve, at_snr_db: float) -> np.ndarray:
    """Capacity over log2(SNR) at one grid point, per impairment level.

    The finite-SNR evaluation of the classic multiplexing-gain ratio: it
    approaches min(nt, nr) for ideal hardware and collapses to zero under
    any transmit distortion.
    """
    matches = np.flatnonzero(np.isclose(curve.snr_db, at_snr_db, rtol=0.0, atol=1e-9))
    if matches.size == 0:
        raise DomainError(f"{at_snr_db} dB is not on the curve's SNR grid")
    snr = snr_db_to_linear(at_snr_db)
    if snr <= 1.0:
        raise DomainError(f"classic gain needs SNR > 1 (0 dB), got {at_snr_db} dB")
    return curve.mean_capacity[:, matches[0]] / math.log2(snr)


def finite_snr_mux_gain(mimo: CapacityCurve, siso: CapacityCurve) -> np.ndarray:
    """Elementwise MIMO/SISO mean-capacity ratio on a shared grid."""
    if not np.array_equal(mimo.snr_db, siso.snr_db):
        raise ShapeError("MIMO and SISO curves use different SNR grids")
    if not np.array_equal(mimo.kappas, siso.kappas):
        raise ShapeError("MIMO and SISO curves use different impairment lists")
    return mimo.mean_capacity / siso.mean_capacity
