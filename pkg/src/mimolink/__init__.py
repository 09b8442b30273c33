"""MIMO link-level toolkit.

Channel synthesis (Rayleigh, discrete multipath, AR(1) fading), linear
detection (least squares, closed-form and sample-covariance LMMSE),
water-filling power allocation, and ergodic capacity with transmitter
hardware impairments.
"""

__version__ = "0.1.0"

from .capacity import (
    CapacityCurve,
    ImpairmentModel,
    SweepConfig,
    capacity_limit,
    classic_mux_gain,
    finite_snr_mux_gain,
    ideal_capacity,
    impaired_capacity,
    monte_carlo_sweep,
)
from .channel import (
    ArrayGeometry,
    ChannelRealization,
    FadingTapConfig,
    RayPath,
    ar1_fading_sequence,
    avg_received_power,
    awgn,
    bessel_j0,
    jakes_psd,
    path_channel,
    rayleigh_channel,
)
from .detect import (
    DetectionReport,
    LinkDemoResult,
    StreamStats,
    SymbolBlock,
    link_demo,
    lmmse_detect,
    lmmse_stream_stats,
    ls_detect,
    sample_lmmse_filter,
)
from .waterfill import (
    PowerAllocation,
    WaterfillProblem,
    capacity_from_allocation,
    waterfill,
    waterfill_inverse_gains,
    waterfill_multi,
)

__all__ = [
    "ArrayGeometry",
    "CapacityCurve",
    "ChannelRealization",
    "DetectionReport",
    "FadingTapConfig",
    "ImpairmentModel",
    "LinkDemoResult",
    "PowerAllocation",
    "RayPath",
    "StreamStats",
    "SweepConfig",
    "SymbolBlock",
    "WaterfillProblem",
    "ar1_fading_sequence",
    "avg_received_power",
    "awgn",
    "bessel_j0",
    "capacity_from_allocation",
    "capacity_limit",
    "classic_mux_gain",
    "finite_snr_mux_gain",
    "ideal_capacity",
    "impaired_capacity",
    "jakes_psd",
    "link_demo",
    "lmmse_detect",
    "lmmse_stream_stats",
    "ls_detect",
    "monte_carlo_sweep",
    "path_channel",
    "rayleigh_channel",
    "sample_lmmse_filter",
    "waterfill",
    "waterfill_inverse_gains",
    "waterfill_multi",
]
