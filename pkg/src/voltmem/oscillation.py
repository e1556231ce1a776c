"""Closed-form oscillation onset/instability analysis and trace-based detection.

A series divider with a threshold device self-oscillates when neither state is
electrically stable: in the OFF state the device voltage exceeds the switching
threshold while in the ON state it falls below the hold level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import DeviceParams
from .circuit import Trace


@dataclass(frozen=True)
class OscillationReport:
    oscillating: bool
    transition_count: int
    frequency_estimate: float | None = None
    duty_cycle: float | None = None


def onset_voltage(d: DeviceParams, r1: float) -> float:
    """Applied voltage at which the OFF-state device first reaches threshold."""
    if d.r_off <= 0:
        raise ValueError("r_off must be positive")
    return (r1 + d.r_off) / d.r_off * d.v_th_pos


def instability_lhs(d: DeviceParams, r1: float) -> float:
    """Device voltage right after switching ON at the onset applied voltage."""
    return d.r_on * (r1 + d.r_off) / (d.r_off * (r1 + d.r_on)) * d.v_th_pos


def is_unstable(d: DeviceParams, r1: float) -> bool:
    """True if the ON state collapses below the hold level (oscillation regime)."""
    if d.r_on <= 0 or d.r_off <= 0:
        raise ValueError("resistances must be positive")
    return instability_lhs(d, r1) < d.v_hold_pos


def detect_oscillation(tr: Trace, settle_fraction: float = 0.2) -> OscillationReport:
    """Count conduction-state transitions after a settle window.

    Oscillating means at least 4 transitions in the analysis window; a single
    switching event is not an oscillation.
    """
    if len(tr) == 0:
        raise ValueError("empty trace")
    if not 0 <= settle_fraction < 1:
        raise ValueError("settle_fraction must be in [0, 1)")

    start = int(len(tr) * settle_fraction)
    window = tr.conducting[start:]
    transitions = int(np.count_nonzero(window[1:] != window[:-1]))
    oscillating = transitions >= 4
    if not oscillating:
        return OscillationReport(oscillating=False, transition_count=transitions)

    duration = (len(window) - 1) * tr.dt
    return OscillationReport(
        oscillating=True,
        transition_count=transitions,
        frequency_estimate=transitions / (2.0 * duration),
        duty_cycle=float(np.count_nonzero(window)) / len(window),
    )
