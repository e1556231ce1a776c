"""Run configuration: a JSON document with per-verb blocks.

Top-level keys: verb, seed, out, emulator, device, circuit, source, digitize,
sweep. Unknown keys anywhere are rejected; defaults are filled in so a loaded
config is fully resolved and can be echoed verbatim in the run header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .device import (DEFAULT_T_ACTUATE, DeviceParams, EmulatorParams,
                     derive_device_params)
from .circuit import SourceWaveform

VERBS = ("iv", "transient", "osc-check", "gate", "map")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    verb: str
    seed: int
    out: str | None
    emulator: EmulatorParams
    device: DeviceParams
    # transient / osc-check
    r1: float | None = None
    dt: float | None = None
    t_end: float | None = None
    source: SourceWaveform | None = None
    digitize: tuple[float, float, float] | None = None  # threshold, high, low
    # gate / map
    r_common: float | None = None
    v0: float | None = None
    v1: float | None = None
    v2: float | None = None
    v3: float | None = None
    duration: float | None = None
    # sweeps
    iv_amplitude: float | None = None
    iv_points: int | None = None
    v1_axis: tuple[float, float, float] | None = None  # min, max, step
    v2_axis: tuple[float, float, float] | None = None
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] | None = None


def _check_keys(block: dict, allowed, where: str) -> None:
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def _number(block, key, default, where):
    val = block.get(key, default)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"{where}.{key} must be a number, got {val!r}")
    return float(val)


def _parse_axis(raw, key):
    if (not isinstance(raw, (list, tuple)) or len(raw) != 3
            or not all(isinstance(x, (int, float)) for x in raw)):
        raise ConfigError(f"sweep.{key} must be [min, max, step]")
    lo, hi, step = map(float, raw)
    if step <= 0 or hi < lo:
        raise ConfigError(f"sweep.{key}: need min <= max and step > 0")
    return lo, hi, step


def axis_points(spec: tuple[float, float, float]):
    """Realize a (min, max, step) axis spec as a list of grid values."""
    lo, hi, step = spec
    n = int(round((hi - lo) / step)) + 1
    return [lo + step * k for k in range(n)]


def load_config(document: str) -> RunConfig:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"parse error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return load_config_dict(raw)


def load_config_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    _check_keys(raw, ("verb", "seed", "out", "emulator", "device", "circuit",
                      "source", "digitize", "sweep"), "config")

    verb = raw.get("verb")
    if verb not in VERBS:
        raise ConfigError(f"verb must be one of {VERBS}, got {verb!r}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    out = raw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a string path")

    emu_block = raw.get("emulator", {})
    _check_keys(emu_block, ("r_coil", "r_int", "l_coil", "v_pull_in",
                            "v_drop_out"), "emulator")
    try:
        emulator = replace(EmulatorParams(), **emu_block)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"emulator: {e}") from e

    dev_block = raw.get("device", {})
    _check_keys(dev_block, ("r_on", "r_off", "v_th_pos", "v_hold_pos",
                            "v_th_neg", "v_hold_neg", "t_actuate",
                            "jitter_sigma"), "device")
    try:
        device = replace(derive_device_params(emulator), **dev_block)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"device: {e}") from e

    cfg = RunConfig(verb=verb, seed=seed, out=out, emulator=emulator,
                    device=device)

    circuit = raw.get("circuit", {})
    source = raw.get("source")
    digit = raw.get("digitize")
    sweep = raw.get("sweep", {})
    if not isinstance(circuit, dict):
        raise ConfigError("circuit block must be an object")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep block must be an object")

    if verb == "iv":
        if circuit:
            raise ConfigError("verb 'iv' takes no circuit block")
        if source or digit:
            raise ConfigError("verb 'iv' takes no source/digitize blocks")
        _check_keys(sweep, ("amplitude", "points"), "sweep")
        amplitude = _number(sweep, "amplitude", 4.0, "sweep")
        points = sweep.get("points", 2001)
        if not isinstance(points, int) or points < 3:
            raise ConfigError("sweep.points must be an integer >= 3")
        return replace(cfg, iv_amplitude=amplitude, iv_points=points)

    if verb == "transient":
        if sweep:
            raise ConfigError("verb 'transient' takes no sweep block")
        _check_keys(circuit, ("r1", "dt", "t_end"), "circuit")
        r1 = _number(circuit, "r1", 680.0, "circuit")
        dt = _number(circuit, "dt", 1e-4, "circuit")
        t_end = _number(circuit, "t_end", 0.05, "circuit")
        src = _parse_source(source)
        dg = _parse_digitize(digit)
        return replace(cfg, r1=r1, dt=dt, t_end=t_end, source=src, digitize=dg)

    if verb == "osc-check":
        if source or digit:
            raise ConfigError("verb 'osc-check' takes no source/digitize blocks")
        _check_keys(circuit, ("r1",), "circuit")
        r1 = _number(circuit, "r1", 680.0, "circuit")
        param = None
        values = None
        if sweep:
            _check_keys(sweep, ("param", "values"), "sweep")
            param = sweep.get("param")
            if param not in ("r1", "r_int"):
                raise ConfigError("sweep.param must be 'r1' or 'r_int'")
            values = sweep.get("values")
            if (not isinstance(values, list) or not values
                    or not all(isinstance(x, (int, float)) for x in values)):
                raise ConfigError("sweep.values must be a nonempty number list")
            values = tuple(float(x) for x in values)
        return replace(cfg, r1=r1, sweep_param=param, sweep_values=values)

    if verb == "gate":
        if source or digit or sweep:
            raise ConfigError("verb 'gate' takes only a circuit block")
        _check_keys(circuit, ("r_common", "v0", "v1", "v2", "v3", "duration"),
                    "circuit")
        for key in ("v1", "v2", "v3"):
            if key not in circuit:
                raise ConfigError(
                    "verb 'gate' requires a circuit block with v1, v2, v3")
        return replace(
            cfg,
            r_common=_number(circuit, "r_common", 220.0, "circuit"),
            v0=_number(circuit, "v0", 1.9, "circuit"),
            v1=_number(circuit, "v1", None, "circuit"),
            v2=_number(circuit, "v2", None, "circuit"),
            v3=_number(circuit, "v3", None, "circuit"),
            duration=_number(circuit, "duration", 10e-3, "circuit"),
        )

    # verb == "map"
    if source or digit:
        raise ConfigError("verb 'map' takes no source/digitize blocks")
    _check_keys(circuit, ("r_common", "v0", "duration"), "circuit")
    _check_keys(sweep, ("v1", "v2", "v3"), "sweep")
    v1_axis = _parse_axis(sweep.get("v1", [-1.0, 6.0, 0.1]), "v1")
    v2_axis = _parse_axis(sweep.get("v2", [-1.0, 6.0, 0.1]), "v2")
    return replace(
        cfg,
        r_common=_number(circuit, "r_common", 220.0, "circuit"),
        v0=_number(circuit, "v0", 1.9, "circuit"),
        duration=_number(circuit, "duration", 10e-3, "circuit"),
        v1_axis=v1_axis, v2_axis=v2_axis,
        v3=_number(sweep, "v3", -1.9, "sweep"),
    )


def _parse_source(block) -> SourceWaveform:
    # default spans the oscillation onset of the reference circuit
    if block is None:
        return SourceWaveform(kind="sawtooth", amplitude=8.0, offset=0.0,
                              period=0.05)
    _check_keys(block, ("kind", "amplitude", "offset", "period", "steps"),
                "source")
    kind = block.get("kind", "constant")
    steps = block.get("steps", [])
    if not isinstance(steps, list) or not all(
            isinstance(s, (list, tuple)) and len(s) == 2 for s in steps):
        raise ConfigError("source.steps must be a list of [time, value] pairs")
    try:
        return SourceWaveform(
            kind=kind,
            amplitude=_number(block, "amplitude", 0.0, "source"),
            offset=_number(block, "offset", 0.0, "source"),
            period=_number(block, "period", 0.0, "source"),
            steps=tuple((float(t), float(v)) for t, v in steps),
        )
    except ValueError as e:
        raise ConfigError(f"source: {e}") from e


def _parse_digitize(block):
    if block is None:
        return None
    _check_keys(block, ("threshold", "high", "low"), "digitize")
    return (_number(block, "threshold", 2.5, "digitize"),
            _number(block, "high", 5.0, "digitize"),
            _number(block, "low", 0.0, "digitize"))


def serialize(cfg: RunConfig) -> str:
    """Resolved config back to its JSON document form (load round-trips)."""
    doc: dict = {"verb": cfg.verb, "seed": cfg.seed}
    if cfg.out is not None:
        doc["out"] = cfg.out
    e = cfg.emulator
    doc["emulator"] = {"r_coil": e.r_coil, "r_int": e.r_int,
                       "l_coil": e.l_coil, "v_pull_in": e.v_pull_in,
                       "v_drop_out": e.v_drop_out}
    d = cfg.device
    doc["device"] = {"r_on": d.r_on, "r_off": d.r_off,
                     "v_th_pos": d.v_th_pos, "v_hold_pos": d.v_hold_pos,
                     "v_th_neg": d.v_th_neg, "v_hold_neg": d.v_hold_neg,
                     "t_actuate": d.t_actuate, "jitter_sigma": d.jitter_sigma}
    if cfg.verb == "iv":
        doc["sweep"] = {"amplitude": cfg.iv_amplitude, "points": cfg.iv_points}
    elif cfg.verb == "transient":
        doc["circuit"] = {"r1": cfg.r1, "dt": cfg.dt, "t_end": cfg.t_end}
        s = cfg.source
        doc["source"] = {"kind": s.kind, "amplitude": s.amplitude,
                         "offset": s.offset, "period": s.period,
                         "steps": [list(p) for p in s.steps]}
        if cfg.digitize is not None:
            doc["digitize"] = dict(zip(("threshold", "high", "low"),
                                       cfg.digitize))
    elif cfg.verb == "osc-check":
        doc["circuit"] = {"r1": cfg.r1}
        if cfg.sweep_param is not None:
            doc["sweep"] = {"param": cfg.sweep_param,
                            "values": list(cfg.sweep_values)}
    elif cfg.verb == "gate":
        doc["circuit"] = {"r_common": cfg.r_common, "v0": cfg.v0,
                          "v1": cfg.v1, "v2": cfg.v2, "v3": cfg.v3,
                          "duration": cfg.duration}
    else:
        doc["circuit"] = {"r_common": cfg.r_common, "v0": cfg.v0,
                          "duration": cfg.duration}
        doc["sweep"] = {"v1": list(cfg.v1_axis), "v2": list(cfg.v2_axis),
                        "v3": cfg.v3}
    return json.dumps(doc, indent=2, sort_keys=True)


def header_lines(cfg: RunConfig) -> list[str]:
    """Resolved-config echo for CSV comments.

    The output path is omitted so that identical runs aimed at different
    files stay byte-identical.
    """
    echo = serialize(replace(cfg, out=None))
    return ["resolved config:"] + [line.rstrip() for line in echo.splitlines()]
