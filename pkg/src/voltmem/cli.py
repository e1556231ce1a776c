"""Command-line front end: iv, transient, osc-check, gate and map verbs.

Every verb emits CSV (or plain text for gate/osc-check) prefixed with a
reproducibility header: the fully resolved configuration plus the seed as
`#` comment lines. Identical config + seed gives byte-identical output.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import io
import json
import sys
from dataclasses import replace

import numpy as np

from . import config as cfgmod
from .circuit import ResolutionError, SeriesCircuit, digitize, run_transient
from .config import ConfigError, RunConfig, axis_points
from .device import DeviceState, derive_device_params, device_resistance, step_device
from .logic import (OSCILLATING_CODE, GateResult, LogicCircuit, canonical_program,
                    classify, run_gate, sweep_grid, INPUT_PAIRS)
from .oscillation import instability_lhs, is_unstable, onset_voltage

_MAP_GLYPHS = "0123456789ABCDEF"
_OSC_GLYPH = "*"


def _header(cfg: RunConfig) -> str:
    return "".join(f"# {line}\n" for line in cfgmod.header_lines(cfg))


def run_iv_sweep(cfg: RunConfig) -> str:
    """Quasi-static triangle sweep straight across one device: v,i,conducting.

    The actuation delay is zeroed so the trace depends only on voltage, not
    on sweep rate.
    """
    dev = replace(cfg.device, t_actuate=0.0)
    rng = np.random.default_rng(cfg.seed)
    n = cfg.iv_points
    a = cfg.iv_amplitude
    state = DeviceState(conducting=False)
    buf = io.StringIO()
    buf.write(_header(cfg))
    buf.write("v,i,conducting\n")
    for k in range(n):
        frac = k / (n - 1)
        if frac < 0.25:
            v = a * 4.0 * frac
        elif frac < 0.75:
            v = a * (2.0 - 4.0 * frac)
        else:
            v = a * (4.0 * frac - 4.0)
        state = step_device(dev, state, v, 1.0, rng)
        i = v / device_resistance(dev, state)
        buf.write("%.9g,%.9g,%d\n" % (v, i, int(state.conducting)))
    return buf.getvalue()


def run_transient_verb(cfg: RunConfig) -> str:
    circuit = SeriesCircuit(r1=cfg.r1, device=cfg.device, source=cfg.source)
    trace = run_transient(circuit, cfg.dt, cfg.t_end, seed=cfg.seed)
    buf = io.StringIO()
    buf.write(_header(cfg))
    if cfg.digitize is None:
        trace.to_csv(buf)
        return buf.getvalue()
    threshold, high, low = cfg.digitize
    logic = digitize(trace, threshold, high, low)
    buf.write("t,v_applied,v_device,v_out,conducting,current,logic\n")
    for k in range(len(trace)):
        buf.write("%.9g,%.9g,%.9g,%.9g,%d,%.9g,%.9g\n" % (
            trace.t[k], trace.v_applied[k], trace.v_device[k], trace.v_out[k],
            int(trace.conducting[k]), trace.current[k], logic[k]))
    return buf.getvalue()


def run_osc_check(cfg: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(_header(cfg))
    if cfg.sweep_param is None:
        d = cfg.device
        buf.write("onset_voltage = %.9g\n" % onset_voltage(d, cfg.r1))
        buf.write("instability_lhs = %.9g\n" % instability_lhs(d, cfg.r1))
        buf.write("v_hold_pos = %.9g\n" % d.v_hold_pos)
        buf.write("unstable = %s\n" % ("true" if is_unstable(d, cfg.r1) else "false"))
        return buf.getvalue()
    buf.write("%s,onset_voltage,instability_lhs,unstable\n" % cfg.sweep_param)
    for val in cfg.sweep_values:
        if cfg.sweep_param == "r1":
            d, r1 = cfg.device, val
        else:
            d = replace(derive_device_params(replace(cfg.emulator, r_int=val)),
                        t_actuate=cfg.device.t_actuate,
                        jitter_sigma=cfg.device.jitter_sigma)
            r1 = cfg.r1
        buf.write("%.9g,%.9g,%.9g,%d\n" % (
            val, onset_voltage(d, r1), instability_lhs(d, r1),
            int(is_unstable(d, r1))))
    return buf.getvalue()


def run_gate_verb(cfg: RunConfig) -> str:
    circuit = LogicCircuit(m1=cfg.device, m2=cfg.device, r_common=cfg.r_common,
                           v_hold_level=cfg.v0)
    prog = canonical_program(cfg.v1, cfg.v2, cfg.v3, v0=cfg.v0,
                             duration=cfg.duration)
    res = run_gate(circuit, prog)
    buf = io.StringIO()
    buf.write(_header(cfg))
    buf.write("a,b,m1,m2\n")
    for pair in INPUT_PAIRS:
        s1, s2 = res.final_states[pair]
        buf.write("%d,%d,%d,%d\n" % (pair[0], pair[1], s1, s2))
    buf.write("code_m1 = %d (%s)\n" % (res.code_m1, res.label_m1))
    buf.write("code_m2 = %d (%s)\n" % (res.code_m2, res.label_m2))
    buf.write("oscillated = %s\n" % ("true" if res.oscillated else "false"))
    return buf.getvalue()


def _map_row(args):
    circuit, v3, v1, v2_axis, duration = args
    return [run_gate(circuit, canonical_program(v1, v2, v3,
                                                v0=circuit.v_hold_level,
                                                duration=duration))
            for v2 in v2_axis]


def run_map_verb(cfg: RunConfig, jobs: int = 1):
    """Returns (csv_text, heatmap_text) for the (V1, V2) gate-map sweep."""
    circuit = LogicCircuit(m1=cfg.device, m2=cfg.device, r_common=cfg.r_common,
                           v_hold_level=cfg.v0)
    v1_axis = axis_points(cfg.v1_axis)
    v2_axis = axis_points(cfg.v2_axis)
    tasks = [(circuit, cfg.v3, v1, v2_axis, cfg.duration) for v1 in v1_axis]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            grid = list(ex.map(_map_row, tasks))
    else:
        grid = [_map_row(t) for t in tasks]

    buf = io.StringIO()
    buf.write(_header(cfg))
    buf.write("# grid = %dx%d\n" % (len(v1_axis), len(v2_axis)))
    buf.write("v1,v2,code_m1,label_m1,code_m2,label_m2,oscillated\n")
    for i, v1 in enumerate(v1_axis):
        for j, v2 in enumerate(v2_axis):
            res = grid[i][j]
            if res.oscillated:
                buf.write("%.9g,%.9g,%d,OSC,%d,OSC,1\n" % (
                    v1, v2, OSCILLATING_CODE, OSCILLATING_CODE))
            else:
                buf.write("%.9g,%.9g,%d,%s,%d,%s,0\n" % (
                    v1, v2, res.code_m1, res.label_m1,
                    res.code_m2, res.label_m2))
    return buf.getvalue(), _heatmaps(grid, v1_axis, v2_axis)


def _heatmaps(grid, v1_axis, v2_axis) -> str:
    out = []
    for register in ("M1", "M2"):
        out.append(f"{register} register gate map "
                   f"(rows: v2 high->low, cols: v1 {v1_axis[0]:g}..{v1_axis[-1]:g}; "
                   f"glyph = hex gate code, {_OSC_GLYPH} = oscillating)")
        for j in range(len(v2_axis) - 1, -1, -1):
            row = []
            for i in range(len(v1_axis)):
                res = grid[i][j]
                if res.oscillated:
                    row.append(_OSC_GLYPH)
                else:
                    code = res.code_m1 if register == "M1" else res.code_m2
                    row.append(_MAP_GLYPHS[code])
            out.append("".join(row))
        out.append("")
    return "\n".join(out)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voltmem",
        description="Volatile-memristor circuit simulator (hysteresis, "
                    "oscillations, implication logic maps)")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in cfgmod.VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--config", help="path to a JSON config document")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, help="RNG seed override")
        if verb == "map":
            p.add_argument("--jobs", type=int, default=1,
                           help="parallel row evaluation workers")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            with open(args.config) as fh:
                raw = json.load(fh)
            if not isinstance(raw, dict):
                raise ConfigError("config document must be a JSON object")
        else:
            raw = {}
    except FileNotFoundError:
        print(f"config file not found: {args.config}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print(f"parse error at line {e.lineno}, column {e.colno}: {e.msg}",
              file=sys.stderr)
        return 2

    raw["verb"] = args.verb
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.out is not None:
        raw["out"] = args.out

    try:
        cfg = cfgmod.load_config_dict(raw)
        if cfg.verb == "iv":
            _emit(run_iv_sweep(cfg), cfg.out)
        elif cfg.verb == "transient":
            _emit(run_transient_verb(cfg), cfg.out)
        elif cfg.verb == "osc-check":
            _emit(run_osc_check(cfg), cfg.out)
        elif cfg.verb == "gate":
            _emit(run_gate_verb(cfg), cfg.out)
        else:
            csv_text, heatmap = run_map_verb(cfg, jobs=getattr(args, "jobs", 1))
            _emit(csv_text, cfg.out)
            sys.stdout.write(heatmap)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ResolutionError as e:
        print(f"numerical guard violation: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
