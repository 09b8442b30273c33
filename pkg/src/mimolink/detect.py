"""Linear receivers for the flat-fading model b = G a + n.

Three detectors are provided: least-squares (zero-forcing), the closed-form
LMMSE filter, and an LMMSE filter estimated from sample covariances of a
training block.  ``link_demo`` wires them together over a fixed
three-receive, two-transmit channel to produce the real/imaginary traces of
an end-to-end link run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .cxkernel import adjoint, hermitian_solve, matmul
from .errors import (
    DefinitenessError,
    DomainError,
    InsufficientSamplesError,
    ShapeError,
    SingularChannelError,
)
from .channel import awgn

#: Fixed 3x2 demo channel used by the end-to-end link demo.
DEMO_CHANNEL = np.array(
    [
        [0.50 + 0.60j, 0.80 + 0.50j],
        [0.15 + 0.85j, 0.81 + 0.86j],
        [0.40 + 0.10j, 0.05 + 0.87j],
    ]
)

FILTER_KINDS = ("ls", "lmmse_closed", "lmmse_sample")


@dataclass(frozen=True)
class SymbolBlock:
    """A streams-by-time block of complex samples."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.complex128)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 1:
            raise ShapeError(f"symbol block must be a 2-D streams-by-length array, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise DomainError("symbol block contains non-finite entries")
        object.__setattr__(self, "data", d)

    @property
    def streams(self) -> int:
        return self.data.shape[0]

    @property
    def length(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class DetectionReport:
    """Per-stream and overall mean-square error of one detector run."""

    mse_per_stream: np.ndarray
    overall_mse: float
    filter_used: str

    def __post_init__(self):
        if self.filter_used not in FILTER_KINDS:
            raise DomainError(f"unknown filter kind {self.filter_used!r}")


@dataclass(frozen=True)
class StreamStats:
    """Per-stream LMMSE statistics: signal fraction, residual variance, SNR."""

    beta: np.ndarray
    noise_var: np.ndarray
    post_snr: np.ndarray


@dataclass(frozen=True)
class LinkDemoResult:
    """All sequences and error reports produced by one link-demo run."""

    series: dict[str, np.ndarray]
    reports: dict[str, DetectionReport] = field(default_factory=dict)


def ls_detect(g, block: SymbolBlock) -> SymbolBlock:
    """Least-squares (zero-forcing) detection applied column by column.

    Inverts the channel through the normal equations; with noiseless input
    the transmitted block is recovered exactly.
    """
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] < g.shape[1]:
        raise ShapeError(f"channel must have at least as many rows as columns, got {g.shape}")
    if block.streams != g.shape[0]:
        raise ShapeError(f"received block has {block.streams} streams, channel has {g.shape[0]} outputs")
    gram = matmul(adjoint(g), g)
    try:
        est = hermitian_solve(gram, matmul(adjoint(g), block.data))
    except DefinitenessError as exc:
        raise SingularChannelError(f"channel is rank deficient: {exc}") from exc
    return SymbolBlock(est)


def lmmse_detect(g, block: SymbolBlock, pd: float, sigma_n2: float) -> SymbolBlock:
    """Closed-form LMMSE detection for symbol power ``pd`` and noise ``sigma_n2``.

    Uses the transmit-side form pd * (pd G^H G + sigma^2 I)^-1 G^H b, which
    coincides with the receive-side form for sigma^2 > 0 and degrades
    gracefully to least squares at sigma^2 == 0.
    """
    g = np.asarray(g, dtype=np.complex128)
    if pd <= 0:
        raise DomainError(f"symbol power must be positive, got {pd}")
    if sigma_n2 < 0:
        raise DomainError(f"noise variance must be nonnegative, got {sigma_n2}")
    if g.ndim != 2 or block.streams != g.shape[0]:
        raise ShapeError(f"received block has {block.streams} streams, channel is {g.shape}")
    gram = pd * matmul(adjoint(g), g) + sigma_n2 * np.eye(g.shape[1])
    try:
        est = pd * hermitian_solve(gram, matmul(adjoint(g), block.data))
    except DefinitenessError as exc:
        raise SingularChannelError(f"singular system at zero noise: {exc}") from exc
    return SymbolBlock(est)


def sample_lmmse_filter(received: SymbolBlock, training: SymbolBlock) -> np.ndarray:
    """Estimate the LMMSE filter from sample covariances of a training block.

    Accumulates R_y = sum(y_k y_k^H) / (N-1) and R_yt = sum(y_k t_k^H) / (N-1)
    over the N columns and returns C = R_y^-1 R_yt.  The symbol estimate is
    adjoint(C) @ y.
    """
    if received.length != training.length:
        raise ShapeError(
            f"received and training lengths differ: {received.length} vs {training.length}")
    n = received.length
    if n < max(received.streams, 2):
        raise InsufficientSamplesError(
            f"{n} samples cannot determine a {received.streams}-stream sample covariance")
    y = received.data
    t = training.data
    r_y = matmul(y, adjoint(y)) / (n - 1)
    r_yt = matmul(y, adjoint(t)) / (n - 1)
    try:
        return hermitian_solve(r_y, r_yt)
    except DefinitenessError as exc:
        raise InsufficientSamplesError(f"sample covariance is singular: {exc}") from exc


def lmmse_stream_stats(g, es: float, nt: int, n0: float) -> StreamStats:
    """Per-stream LMMSE statistics for equal power split across nt streams.

    With sigma^2 = nt*n0/es (the inverse per-stream SNR), the filter for
    stream i is h_i = (G G^H + sigma^2 I)^-1 g_i.  beta_i = Re(h_i^H g_i)
    is the signal fraction in the filter output, the residual
    interference-plus-noise variance is (es/nt) * (beta_i - beta_i^2), and
    the post-detection SNR is beta_i / (1 - beta_i).
    """
    g = np.asarray(g, dtype=np.complex128)
    if es <= 0 or n0 <= 0:
        raise DomainError(f"signal energy and noise density must be positive, got es={es}, n0={n0}")
    if g.ndim != 2 or g.shape[1] != nt:
        raise ShapeError(f"channel has shape {g.shape}, expected {nt} columns")
    sigma2 = nt * n0 / es
    cov = matmul(g, adjoint(g)) + sigma2 * np.eye(g.shape[0])
    filters = hermitian_solve(cov, g)  # column i is h_i
    beta = np.real(np.sum(filters.conj() * g, axis=0))
    noise_var = (es / nt) * (beta - beta * beta)
    post_snr = beta / (1.0 - beta)
    return StreamStats(beta=beta, noise_var=noise_var, post_snr=post_snr)


def qpsk_block(streams: int, length: int, seed: int) -> SymbolBlock:
    """Unit-power QPSK symbols drawn from {+-1 +-1j}/sqrt(2)."""
    gen = rng.substream(seed, rng.SYMBOLS, 0)
    bits = gen.integers(0, 2, size=(2, streams, length))
    data = ((2 * bits[0] - 1) + 1j * (2 * bits[1] - 1)) / np.sqrt(2.0)
    return SymbolBlock(data)


def _mse_report(estimate: SymbolBlock, reference: SymbolBlock, kind: str) -> DetectionReport:
    err = np.abs(estimate.data - reference.data) ** 2
    per_stream = err.mean(axis=1)
    return DetectionReport(per_stream, float(err.mean()), kind)


def link_demo(seed: int, length: int, sigma_n2: float) -> LinkDemoResult:
    """Run the fixed 3x2 link end to end and collect every sequence.

    Two QPSK streams pass through :data:`DEMO_CHANNEL` with CN(0, sigma_n2)
    noise; the block is then detected with least squares, the closed-form
    LMMSE filter, and the sample-covariance LMMSE filter trained on the
    transmitted block itself.  Series keys: tx1, tx2, rx1..rx3, ls1, ls2,
    le1, le2 (sample-covariance filter), lmmse1, lmmse2.
    """
    if length < 10:
        raise DomainError(f"demo length must be >= 10, got {length}")
    if sigma_n2 < 0:
        raise DomainError(f"noise variance must be nonnegative, got {sigma_n2}")

    g = DEMO_CHANNEL
    tx = qpsk_block(g.shape[1], length, seed)
    noise = awgn(g.shape[0], length, sigma_n2, seed, 0)
    rx = SymbolBlock(matmul(g, tx.data) + noise)

    ls = ls_detect(g, rx)
    lmmse = lmmse_detect(g, rx, 1.0, sigma_n2)
    if sigma_n2 > 0:
        le_filter = sample_lmmse_filter(rx, tx)
    else:
        # Noiseless sample covariance is rank deficient; the minimum-norm
        # pseudoinverse filter is its well-defined limit and recovers tx.
        n = length
        r_y = matmul(rx.data, adjoint(rx.data)) / (n - 1)
        r_yt = matmul(rx.data, adjoint(tx.data)) / (n - 1)
        le_filter = np.linalg.pinv(r_y) @ r_yt
    le = SymbolBlock(matmul(adjoint(le_filter), rx.data))

    series: dict[str, np.ndarray] = {}
    for i in range(tx.streams):
        series[f"tx{i + 1}"] = tx.data[i]
    for i in range(rx.streams):
        series[f"rx{i + 1}"] = rx.data[i]
    for name, block in (("ls", ls), ("le", le), ("lmmse", lmmse)):
        for i in range(block.streams):
            series[f"{name}{i + 1}"] = block.data[i]

    reports = {
        "ls": _mse_report(ls, tx, "ls"),
        "lmmse_closed": _mse_report(lmmse, tx, "lmmse_closed"),
        "lmmse_sample": _mse_report(le, tx, "lmmse_sample"),
    }
    return LinkDemoResult(series=series, reports=reports)
