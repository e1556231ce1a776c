"""Series resistor + volatile memristor circuit, solved quasi-statically.

The electrical network is purely resistive; the only dynamics is the device
actuation delay, stepped on a fixed time grid. Traces carry the applied
voltage, the device voltage (= output voltage), the conduction state and the
loop current at every sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .device import DeviceParams, DeviceState, device_resistance, step_device


class ResolutionError(ValueError):
    """dt too coarse to resolve the device actuation delay."""


@dataclass(frozen=True)
class SourceWaveform:
    """Piecewise-defined applied-voltage signal.

    kind: constant | sawtooth | triangle | sine | steps.
    sawtooth ramps offset -> offset+amplitude each period; triangle swings
    offset +/- amplitude starting upward; steps holds `offset` before the
    first entry of `steps`, then the value of the latest entry.
    """

    kind: str
    amplitude: float = 0.0
    offset: float = 0.0
    period: float = 0.0
    steps: tuple[tuple[float, float], ...] = ()

    _KINDS = ("constant", "sawtooth", "triangle", "sine", "steps")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown waveform kind {self.kind!r}")
        if self.kind in ("sawtooth", "triangle", "sine") and self.period <= 0:
            raise ValueError(f"{self.kind} waveform needs period > 0")
        if self.kind == "steps":
            times = [t for t, _ in self.steps]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("step times must be strictly increasing")

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return self.offset
        if self.kind == "steps":
            v = self.offset
            for time, val in self.steps:
                if t >= time:
                    v = val
                else:
                    break
            return v
        frac = (t / self.period) % 1.0
        if self.kind == "sawtooth":
            return self.offset + self.amplitude * frac
        if self.kind == "sine":
            return self.offset + self.amplitude * np.sin(2.0 * np.pi * frac)
        # triangle: 0 -> +A at T/4 -> -A at 3T/4 -> 0
        if frac < 0.25:
            level = 4.0 * frac
        elif frac < 0.75:
            level = 2.0 - 4.0 * frac
        else:
            level = 4.0 * frac - 4.0
        return self.offset + self.amplitude * level


@dataclass(frozen=True)
class SeriesCircuit:
    r1: float
    device: DeviceParams
    source: SourceWaveform

    def __post_init__(self):
        if self.r1 < 0:
            raise ValueError("r1 must be >= 0")


@dataclass(frozen=True)
class Trace:
    """Uniformly sampled transient record."""

    dt: float
    t: np.ndarray
    v_applied: np.ndarray
    v_device: np.ndarray
    v_out: np.ndarray
    conducting: np.ndarray
    current: np.ndarray

    def __len__(self):
        return len(self.t)

    def to_csv(self, fh, header_lines=()) -> None:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("t,v_applied,v_device,v_out,conducting,current\n")
        for i in range(len(self.t)):
            fh.write("%.9g,%.9g,%.9g,%.9g,%d,%.9g\n" % (
                self.t[i], self.v_applied[i], self.v_device[i],
                self.v_out[i], int(self.conducting[i]), self.current[i]))


def solve_series_divider(r1: float, r_m: float, v: float):
    """Voltage across the device and loop current of the series divider."""
    total = r1 + r_m
    if total <= 0:
        raise ValueError("r1 + r_m must be positive")
    return v * r_m / total, v / total


def run_transient(c: SeriesCircuit, dt: float, t_end: float, seed: int = 0) -> Trace:
    """Fixed-timestep transient from the OFF state.

    Each row records the divider solved with the resistance in effect at that
    instant; the device state is then stepped for the next sample.
    """
    if not 0 < dt <= t_end:
        raise ValueError("need 0 < dt <= t_end")
    if c.device.t_actuate > 0 and dt > c.device.t_actuate / 4.0:
        raise ResolutionError(
            f"dt={dt} too coarse: must be <= t_actuate/4 = {c.device.t_actuate / 4.0}")

    rng = np.random.default_rng(seed)
    n = int(round(t_end / dt)) + 1
    t = np.arange(n) * dt
    v_applied = np.empty(n)
    v_device = np.empty(n)
    conducting = np.zeros(n, dtype=bool)
    current = np.empty(n)

    state = DeviceState(conducting=False)
    for k in range(n):
        v = c.source.value(t[k])
        if not np.isfinite(v):
            raise ValueError(f"non-finite source voltage at t={t[k]}")
        r_m = device_resistance(c.device, state)
        v_m, i = solve_series_divider(c.r1, r_m, v)
        v_applied[k] = v
        v_device[k] = v_m
        conducting[k] = state.conducting
        current[k] = i
        state = step_device(c.device, state, v_m, dt, rng)

    return Trace(dt=dt, t=t, v_applied=v_applied, v_device=v_device,
                 v_out=v_device.copy(), conducting=conducting, current=current)


def digitize(tr: Trace, threshold: float = 2.5, high: float = 5.0,
             low: float = 0.0) -> np.ndarray:
    """Comparator output per sample: high iff v_out > threshold (strict)."""
    return np.where(tr.v_out > threshold, high, low)
