"""Channel synthesis: Rayleigh draws, discrete multipath, AR(1) fading taps.

All generators are pure functions of (seed, index, parameters); replaying a
call reproduces the exact same matrix, which is what makes sharded
Monte-Carlo sweeps byte-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal
import scipy.special

from . import rng
from .cxkernel import frobenius_sq
from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class ChannelRealization:
    """One channel matrix draw plus the key that reproduces it.

    ``g`` has one row per receive antenna and one column per transmit
    antenna.  ``(seed, index, model_tag)`` and the dimensions fully
    determine the entries.
    """

    g: np.ndarray
    model_tag: str  # one of "rayleigh", "path", "ar1-snapshot"
    seed: int
    index: int


@dataclass(frozen=True)
class RayPath:
    """A single propagation path: complex gain, departure/arrival angles.

    ``delay_s`` is carried for bookkeeping but plays no role in narrowband
    synthesis.
    """

    beta: complex
    aod_rad: float
    aoa_rad: float
    delay_s: float = 0.0

    def __post_init__(self):
        if self.delay_s < 0:
            raise DomainError(f"path delay must be nonnegative, got {self.delay_s}")


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count and pitch in wavelengths."""

    elements: int
    spacing_wavelengths: float

    def __post_init__(self):
        if self.elements < 1:
            raise DomainError(f"array needs at least one element, got {self.elements}")
        if self.spacing_wavelengths <= 0:
            raise DomainError(f"element spacing must be positive, got {self.spacing_wavelengths}")


@dataclass(frozen=True)
class FadingTapConfig:
    """Configuration of one time-varying fading tap.

    ``fd_t`` is the normalized Doppler (Doppler frequency times symbol
    period); the discrete-time spectrum is only defined for fd_t < 0.5.
    """

    fd_t: float
    length: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.fd_t < 0.5:
            raise DomainError(f"normalized Doppler must lie in [0, 0.5), got {self.fd_t}")
        if self.length < 1:
            raise DomainError(f"sequence length must be >= 1, got {self.length}")


def rayleigh_channel(nt: int, nr: int, seed: int, index: int) -> ChannelRealization:
    """Draw an uncorrelated Rayleigh-fading channel matrix.

    Entries are i.i.d. CN(0, 1): zero mean, unit power, real and imaginary
    parts each with variance 1/2.  The same (seed, index) always reproduces
    the identical matrix.
    """
    if nt < 1 or nr < 1:
        raise ShapeError(f"channel dimensions must be >= 1, got nt={nt}, nr={nr}")
    gen = rng.substream(seed, rng.RAYLEIGH, index)
    g = rng.complex_normal(gen, nr, nt, 1.0)
    return ChannelRealization(g=g, model_tag="rayleigh", seed=seed, index=index)


def steering_vector(geometry: ArrayGeometry, angle_rad: float) -> np.ndarray:
    """Phase response of a uniform linear array toward ``angle_rad``."""
    n = np.arange(geometry.elements)
    return np.exp(2j * np.pi * geometry.spacing_wavelengths * n * np.sin(angle_rad))


def path_channel(paths: list[RayPath], tx: ArrayGeometry, rx: ArrayGeometry) -> np.ndarray:
    """Narrowband channel matrix for a discrete set of propagation paths.

    Each path contributes beta * (rx steering) outer (tx steering); the
    result is the entrywise sum over paths, so concatenating path lists
    adds the matrices.  Output shape is (rx.elements, tx.elements).
    """
    if not paths:
        raise DomainError("path list must not be empty")
    g = np.zeros((rx.elements, tx.elements), dtype=np.complex128)
    for p in paths:
        g += p.beta * np.outer(steering_vector(rx, p.aoa_rad), steering_vector(tx, p.aod_rad))
    return g


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero."""
    return float(scipy.special.j0(x))


def ar1_fading_sequence(cfg: FadingTapConfig) -> np.ndarray:
    """First-order autoregressive fading tap with unit stationary power.

    The recursion is g[k] = a * g[k-1] + v[k] with a = J0(2*pi*fd_t) so the
    lag-1 autocorrelation matches the isotropic-scattering value exactly.
    The innovation variance is 1 - a**2, which pins the stationary power of
    every tap to 1, and g[0] is drawn from the stationary CN(0, 1)
    distribution.  Higher-lag correlations follow a**k, the first-order
    approximation of the J0 profile.
    """
    a = bessel_j0(2.0 * math.pi * cfg.fd_t)
    sigma_v2 = 1.0 - a * a
    gen = rng.substream(cfg.seed, rng.FADING, 0)
    g0 = rng.complex_normal(gen, 1, 1, 1.0)[0, 0]
    if cfg.length == 1:
        return np.array([g0])
    v = rng.complex_normal(gen, 1, cfg.length - 1, sigma_v2)[0]
    # g[k] = a*g[k-1] + v[k] is an IIR filter driven by [g0, v1, v2, ...].
    drive = np.concatenate(([g0], v))
    return scipy.signal.lfilter([1.0], [1.0, -a], drive)


def jakes_psd(f: float, fd: float) -> float:
    """Doppler power spectral density of isotropic scattering.

    Supported on |f| < fd where it equals 1/(pi*fd*sqrt(1-(f/fd)**2));
    zero outside.  At |f| == fd the density has an integrable pole and the
    function returns +inf as the pole sentinel.
    """
    if fd <= 0:
        raise DomainError(f"Doppler frequency must be positive, got {fd}")
    ratio = abs(f) / fd
    if ratio > 1.0:
        return 0.0
    if ratio == 1.0:
        return math.inf
    return 1.0 / (math.pi * fd * math.sqrt(1.0 - ratio * ratio))


def awgn(rows: int, cols: int, variance: float, seed: int, index: int) -> np.ndarray:
    """I.i.d. CN(0, variance) noise matrix, deterministic per (seed, index)."""
    if rows < 1 or cols < 1:
        raise ShapeError(f"noise dimensions must be >= 1, got {rows}x{cols}")
    if variance < 0:
        raise DomainError(f"noise variance must be nonnegative, got {variance}")
    gen = rng.substream(seed, rng.AWGN, index)
    return rng.complex_normal(gen, rows, cols, variance)


def avg_received_power(channels: list[ChannelRealization], pt: float) -> float:
    """Average received power over a set of channel realizations.

    Equals pt / (K * Nt * Nr) times the summed squared Frobenius norms of
    the K channel matrices.
    """
    if not channels:
        raise DomainError("need at least one channel realization")
    if pt < 0:
        raise DomainError(f"transmit power must be nonnegative, got {pt}")
    shape = channels[0].g.shape
    for ch in channels:
        if ch.g.shape != shape:
            raise DomainError(f"mixed channel dimensions: {ch.g.shape} vs {shape}")
    nr, nt = shape
    k = len(channels)
    total = sum(frobenius_sq(ch.g) for ch in channels)
    return pt / (k * nt * nr) * total
