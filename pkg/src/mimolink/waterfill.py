"""Exact water-filling power allocation and allocation-to-capacity evaluation.

The solver sorts the noise levels, then walks the candidate active-set size
q downward from all channels to one.  For each q the tentative water level
is r = (total + sum of the q smallest noises) / q; the first q whose
allocations are all nonnegative is the KKT-optimal active set.  Channels
whose noise sits at or above the water level receive exactly zero power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DomainError, ShapeError


@dataclass(frozen=True)
class PowerAllocation:
    """Water-filling result: per-subcarrier, per-channel powers.

    ``alloc`` has one row per subcarrier and one column per channel;
    ``water_level`` holds the common noise+power level of each subcarrier's
    active channels.
    """

    alloc: np.ndarray
    water_level: np.ndarray


@dataclass(frozen=True)
class WaterfillProblem:
    """Total power budget(s) plus channel noise powers.

    The four admissible shape combinations:

    * scalar total, 1-D noise: one subcarrier
    * scalar total, 2-D noise (L x N): L subcarriers, same budget each
    * 1-D total (L), 2-D noise (L x N): row-wise pairing
    * 1-D total (L), 1-D noise (N): noise broadcast to L subcarriers
    """

    total_power: float | np.ndarray
    noise: np.ndarray

    def __post_init__(self):
        pt = np.asarray(self.total_power, dtype=float)
        pn = np.asarray(self.noise, dtype=float)
        if pt.ndim > 1 or pn.ndim not in (1, 2):
            raise ShapeError(
                f"total_power must be scalar or vector and noise vector or matrix, "
                f"got shapes {pt.shape} and {pn.shape}")
        if not np.all(np.isfinite(pt)) or np.any(pt <= 0):
            raise DomainError("every total power must be positive and finite")
        if not np.all(np.isfinite(pn)) or np.any(pn <= 0):
            raise DomainError("every noise power must be positive and finite")
        if pt.ndim == 1 and pn.ndim == 2 and pt.shape[0] != pn.shape[0]:
            raise ShapeError(
                f"total_power vector of length {pt.shape[0]} does not match "
                f"noise matrix with {pn.shape[0]} subcarriers")
        object.__setattr__(self, "total_power", pt if pt.ndim else float(pt))
        object.__setattr__(self, "noise", pn)

    def per_subcarrier(self) -> list[tuple[float, np.ndarray]]:
        """Resolve the shape convention into (budget, noise row) pairs."""
        pt, pn = self.total_power, self.noise
        if pn.ndim == 1:
            if np.ndim(pt) == 0:
                return [(float(pt), pn)]
            return [(float(p), pn) for p in pt]
        budgets = [float(pt)] * pn.shape[0] if np.ndim(pt) == 0 else [float(p) for p in pt]
        return list(zip(budgets, pn))


def waterfill(total_power: float, noise) -> PowerAllocation:
    """Allocate a power budget over parallel channels (single subcarrier).

    Parameters
    ----------
    total_power : positive budget to distribute
    noise : 1-D positive noise power per channel

    Returns
    -------
    PowerAllocation with a single row. Active channels satisfy
    noise + alloc == water_level; channels with noise >= water_level get 0.
    """
    noise = np.asarray(noise, dtype=float)
    if noise.ndim != 1 or noise.size == 0:
        raise ShapeError(f"noise must be a nonempty vector, got shape {noise.shape}")
    if not np.isfinite(total_power) or total_power <= 0:
        raise DomainError(f"total power must be positive, got {total_power}")
    if not np.all(np.isfinite(noise)) or np.any(noise <= 0):
        raise DomainError("every noise power must be positive and finite")

    order = np.argsort(noise, kind="stable")
    sorted_noise = noise[order]
    cumulative = np.cumsum(sorted_noise)
    level = filled = None
    for q in range(noise.size, 0, -1):
        level = (total_power + cumulative[q - 1]) / q
        filled = level - sorted_noise[:q]
        if filled[q - 1] >= 0.0:  # noises ascend, so this is the minimum
            break
    alloc = np.zeros(noise.size)
    alloc[order[: filled.size]] = filled
    return PowerAllocation(alloc[np.newaxis, :], np.array([level]))


def waterfill_multi(problem: WaterfillProblem) -> PowerAllocation:
    """Water-fill each subcarrier of a multi-subcarrier problem independently."""
    rows = [waterfill(budget, pn_row) for budget, pn_row in problem.per_subcarrier()]
    return PowerAllocation(
        np.vstack([r.alloc for r in rows]),
        np.concatenate([r.water_level for r in rows]),
    )


def waterfill_inverse_gains(total_power: float, squared_singulars) -> PowerAllocation:
    """Eigenmode power allocation: water-fill against inverted channel gains.

    Modes with zero squared singular value carry no information and are
    excluded (their allocation is zero); the remaining modes are
    water-filled with effective noise 1/sigma_i^2.
    """
    gains = np.asarray(squared_singulars, dtype=float)
    if gains.ndim != 1 or gains.size == 0:
        raise ShapeError(f"squared singular values must be a nonempty vector, got shape {gains.shape}")
    if not np.all(np.isfinite(gains)) or np.any(gains < 0):
        raise DomainError("squared singular values must be finite and nonnegative")
    active = gains > 0
    if not np.any(active):
        raise DegenerateChannelError("all squared singular values are zero")
    sub = waterfill(total_power, 1.0 / gains[active])
    alloc = np.zeros(gains.size)
    alloc[active] = sub.alloc[0]
    return PowerAllocation(alloc[np.newaxis, :], sub.water_level)


def capacity_from_allocation(allocation: PowerAllocation, gains) -> float:
    """Total capacity of an allocation: sum of log2(1 + power * gain).

    ``gains`` are channel power gains, one per channel (broadcast across
    subcarriers) or one per subcarrier-channel pair.
    """
    g = np.asarray(gains, dtype=float)
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise DomainError("channel gains must be finite and nonnegative")
    alloc = allocation.alloc
    if g.ndim == 1:
        if g.size != alloc.shape[1]:
            raise ShapeError(f"{g.size} gains for {alloc.shape[1]} channels")
        g = np.broadcast_to(g, alloc.shape)
    elif g.shape != alloc.shape:
        raise ShapeError(f"gain matrix {g.shape} does not match allocation {alloc.shape}")
    return float(np.sum(np.log2(1.0 + alloc * g)))
