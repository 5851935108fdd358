"""Command-line front end: sweeps, figure presets, CSV/JSON emission.

Subcommands
-----------
amplitudes    transmission/eigenphase table over a wavenumber grid
delay-sweep   time delay and causality bounds versus potential strength
packet-sweep  transmission probability and subtracted passage time per depth
verify        run the cross-module invariant suite

Every option has a long flag; defaults may also come from a key=value config
file (--config), with command-line flags taking precedence.  Output goes to
--out (CSV or JSON; stdout when omitted), resolved against $HARTMAN_OUT_DIR
for relative paths.  Identical configurations produce byte-identical files.

Exit codes: 0 success, 1 invariant failure, 2 invalid input, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernel
from .boundstates import count_bound_states
from .errors import ConvergenceError, ThresholdDivergenceError
from .potential import PhysicalConstants, SquarePotential
from .scattering import build_phase_table, default_k_max
from .wavepacket import (
    GaussianPacketSpec,
    classical_reference_time,
    mean_exit_time,
    transmission_probability,
)

PRESETS = {
    "fig1": {
        "command": "amplitudes",
        "v0": 5.0, "widths": (1.0, 3.0), "k_min": 0.01, "k_max": 6.0,
        "samples": 1200,
    },
    "fig2": {
        "command": "delay-sweep",
        "v0_min": -2.0, "v0_max": 1.0, "v0_step": 0.005, "k": 0.1, "width": 2.0,
    },
    "fig3": {
        "command": "packet-sweep",
        "v0_min": -1.6, "v0_max": 0.4, "v0_step": 0.01,
        "k0": math.pi / 8.0, "delta_p": 1.0, "x0": -41.0, "width": 2.0,
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation (echoed into JSON output)."""

    command: str
    v0: float | None = None
    width: float | None = None
    hbar: float = 1.0
    mass: float = 1.0
    k_min: float | None = None
    k_max: float | None = None
    samples: int | None = None
    k: float | None = None
    v0_min: float | None = None
    v0_max: float | None = None
    v0_step: float | None = None
    k0: float | None = None
    delta_p: float | None = None
    x0: float | None = None
    adaptive: bool = True
    preset: str | None = None
    out: str | None = None
    format: str = "csv"
    precision: int = 17
    jobs: int = 1

    def consts(self) -> PhysicalConstants:
        return PhysicalConstants(hbar=self.hbar, mass=self.mass)


def _fmt_value(x, precision: int) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), f".{precision}g")


def _resolve_out(out: str | None):
    if out is None:
        return None
    base = os.environ.get("HARTMAN_OUT_DIR", "")
    if base and not os.path.isabs(out):
        return os.path.join(base, out)
    return out


def write_dataset(config: RunConfig, header: list[str], rows: list[tuple]) -> None:
    """Emit rows as CSV (UTF-8, LF, one header row) or JSON (metadata + rows)."""
    path = _resolve_out(config.out)
    if config.format == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt_value(x, config.precision) for x in row))
        text = "\n".join(lines) + "\n"
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        return
    meta = {k: v for k, v in asdict(config).items() if v is not None}
    payload = {
        "metadata": meta,
        "rows": [
            {
                name: (bool(x) if isinstance(x, bool) else
                       int(x) if isinstance(x, (int, np.integer)) else
                       float(x))
                for name, x in zip(header, row)
            }
            for row in rows
        ],
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_amplitudes(config: RunConfig, widths=None) -> list[tuple]:
    """Amplitudes and unwrapped phases, one row per table grid point.

    With the adaptive flag off, only the uniform base samples are emitted
    (fixed-size datasets); unwrapping still refines internally either way.
    """
    consts = config.consts()
    widths = widths or (config.width,)
    if any(w is None for w in widths):
        raise ValueError("amplitudes requires --width (or a preset)")
    k_min = config.k_min if config.k_min is not None else 0.01
    k_hi = config.k_max if config.k_max is not None else 6.0
    rows = []
    for w in widths:
        pot = SquarePotential(v0=config.v0 if config.v0 is not None else 0.0,
                              half_width=w / 2.0)
        anchor = max(default_k_max(pot, consts), k_hi)
        # the table extends to the anchor, but --samples is meant as the
        # resolution of the requested [k_min, k_hi] slice
        samples = config.samples or 1200
        samples = min(int(samples * anchor / k_hi), 50 * samples)
        table = build_phase_table(pot, consts, k_min, anchor, samples=samples)
        keep = table.k_grid <= k_hi + 1e-15
        if not config.adaptive:
            base = np.linspace(k_min, anchor, samples)
            keep &= np.isin(table.k_grid, base)
        for i in np.nonzero(keep)[0]:
            k = table.k_grid[i]
            t, r, _, _, _ = _kernel.scatter_grid(
                pot.strength(consts), pot.width, np.array([k])
            )
            tt = complex(t[0])
            rows.append(
                (w, float(k), tt.real, tt.imag, abs(tt) ** 2,
                 float(table.phi_t[i]), float(table.delta0[i]),
                 float(table.delta1[i]))
            )
    return rows


AMPLITUDE_HEADER = ["d", "k", "re_T", "im_T", "abs_T2", "phi_T", "delta0", "delta1"]
DELAY_HEADER = ["v0", "delta_t", "bound_osc", "bound_simple", "n_b"]
PACKET_HEADER = ["v0", "p_t", "t_out", "t_classical", "t_subtracted",
                 "classical_defined", "diverged"]


def _delay_row(task: tuple) -> tuple:
    v0, k, width, hbar, mass = task
    consts = PhysicalConstants(hbar=hbar, mass=mass)
    pot = SquarePotential(v0=v0, half_width=width / 2.0)
    g = pot.strength(consts)
    t, r, dphi, _, _ = _kernel.scatter_grid(g, width, np.array([k]))
    tt, rr = complex(t[0]), complex(r[0])
    d0 = 0.5 * math.atan2((tt + rr).imag, (tt + rr).real)
    d1 = 0.5 * math.atan2((tt - rr).imag, (tt - rr).real)
    a = width / 2.0
    p = hbar * k
    delta_t = mass * float(dphi[0]) / (hbar * k)
    osc = (mass / (hbar * k)) * (
        -width
        - (math.sin(2 * k * a + 2 * d0) - math.sin(2 * k * a + 2 * d1)) / (2 * k)
    )
    return (v0, delta_t, osc, -mass * width / p, count_bound_states(pot, consts))


def _packet_row(task: tuple) -> tuple:
    v0, width, hbar, mass, k0, delta_p, x0 = task
    consts = PhysicalConstants(hbar=hbar, mass=mass)
    pot = SquarePotential(v0=v0, half_width=width / 2.0)
    spec = GaussianPacketSpec(k0=k0, delta_p=delta_p, x0=x0)
    try:
        rep = mean_exit_time(spec, pot, consts)
    except ThresholdDivergenceError:
        p_t = transmission_probability(spec, pot, consts)
        t_cl, defined = classical_reference_time(spec, pot, consts)
        return (v0, p_t, math.nan, t_cl, math.nan, defined, True)
    return (v0, rep.p_t, rep.t_out, rep.t_classical, rep.t_subtracted,
            rep.classical_defined, False)


def _v0_grid(config: RunConfig) -> list[float]:
    if None in (config.v0_min, config.v0_max, config.v0_step):
        raise ValueError("sweep requires --v0-min, --v0-max, --v0-step (or a preset)")
    if config.v0_step <= 0:
        raise ValueError("--v0-step must be positive")
    n = int(round((config.v0_max - config.v0_min) / config.v0_step))
    return [config.v0_min + i * config.v0_step for i in range(n + 1)]


def _run_tasks(worker, tasks, jobs: int) -> list[tuple]:
    if jobs <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def cmd_delay_sweep(config: RunConfig) -> list[tuple]:
    width = config.width if config.width is not None else 2.0
    k = config.k if config.k is not None else 0.1
    tasks = [(v0, k, width, config.hbar, config.mass) for v0 in _v0_grid(config)]
    return _run_tasks(_delay_row, tasks, config.jobs)


def cmd_packet_sweep(config: RunConfig) -> list[tuple]:
    width = config.width if config.width is not None else 2.0
    if None in (config.k0, config.delta_p, config.x0):
        raise ValueError("packet sweep requires --k0, --delta-p, --x0 (or a preset)")
    tasks = [
        (v0, width, config.hbar, config.mass, config.k0, config.delta_p, config.x0)
        for v0 in _v0_grid(config)
    ]
    return _run_tasks(_packet_row, tasks, config.jobs)


def cmd_verify(args) -> int:
    from .verify import run_all_checks

    results = run_all_checks(
        tolerance_scale=args.tolerance_scale, include_slow=not args.skip_slow
    )
    if args.format == "json":
        payload = [
            {"name": r.name, "passed": bool(r.passed), "detail": r.detail}
            for r in results
        ]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for r in results:
            sys.stdout.write(r.line() + "\n")
        n_fail = sum(not r.passed for r in results)
        sys.stdout.write(
            f"{len(results) - n_fail}/{len(results)} checks passed\n"
        )
    return 0 if all(r.passed for r in results) else 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--mass", type=float, default=None)
    p.add_argument("--out", default=None, help="output path (stdout if omitted); "
                   "relative paths resolve against $HARTMAN_OUT_DIR")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--precision", type=int, default=None,
                   help="significant digits for CSV numbers (default 17)")
    p.add_argument("--config", default=None,
                   help="key=value file with defaults; flags override")
    p.add_argument("--jobs", type=int, default=None,
                   help="concurrent sweep workers (default 1)")


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (need key=value): {line!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_FLOAT_KEYS = {
    "v0", "width", "hbar", "mass", "k_min", "k_max", "k", "v0_min", "v0_max",
    "v0_step", "k0", "delta_p", "x0",
}
_INT_KEYS = {"samples", "precision", "jobs"}
_BOOL_KEYS = {"adaptive"}


def _resolve_config(args: argparse.Namespace, command: str):
    file_values: dict = {}
    if getattr(args, "config", None):
        file_values = _load_config_file(args.config)

    preset = dict(PRESETS.get(getattr(args, "preset", None) or "", {}))
    preset.pop("command", None)
    widths = preset.pop("widths", None)

    def pick(name, default=None):
        cli_val = getattr(args, name, None)
        if cli_val is not None:
            return cli_val
        if name in file_values:
            raw = file_values[name]
            if name in _FLOAT_KEYS:
                return float(raw)
            if name in _INT_KEYS:
                return int(raw)
            if name in _BOOL_KEYS:
                return raw.strip().lower() not in ("0", "false", "no", "off")
            return raw
        if name in preset:
            return preset[name]
        return default

    config = RunConfig(
        command=command,
        v0=pick("v0"),
        width=pick("width"),
        hbar=pick("hbar", 1.0),
        mass=pick("mass", 1.0),
        k_min=pick("k_min"),
        k_max=pick("k_max"),
        samples=pick("samples"),
        k=pick("k"),
        v0_min=pick("v0_min"),
        v0_max=pick("v0_max"),
        v0_step=pick("v0_step"),
        k0=pick("k0"),
        delta_p=pick("delta_p"),
        x0=pick("x0"),
        adaptive=pick("adaptive", True),
        preset=getattr(args, "preset", None),
        out=pick("out"),
        format=pick("format", "csv"),
        precision=pick("precision", 17),
        jobs=pick("jobs", 1),
    )
    if config.precision < 12:
        raise ValueError("--precision must be at least 12 significant digits")
    config.consts()  # validates hbar, mass
    return config, widths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hartman",
        description="Square-barrier/well scattering, causality bounds, and "
        "wave-packet passage times",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_amp = sub.add_parser("amplitudes", help="amplitude/phase table over k")
    p_amp.add_argument("--v0", type=float, default=None)
    p_amp.add_argument("--width", type=float, default=None)
    p_amp.add_argument("--k-min", dest="k_min", type=float, default=None)
    p_amp.add_argument("--k-max", dest="k_max", type=float, default=None)
    p_amp.add_argument("--samples", type=int, default=None)
    p_amp.add_argument("--no-adaptive", dest="adaptive", action="store_false",
                       default=None,
                       help="emit only the uniform base grid, not the "
                       "adaptively refined points")
    p_amp.add_argument("--preset", choices=("fig1",), default=None)
    _add_common(p_amp)

    p_del = sub.add_parser("delay-sweep", help="time delay vs potential strength")
    p_del.add_argument("--v0-min", dest="v0_min", type=float, default=None)
    p_del.add_argument("--v0-max", dest="v0_max", type=float, default=None)
    p_del.add_argument("--v0-step", dest="v0_step", type=float, default=None)
    p_del.add_argument("--k", type=float, default=None)
    p_del.add_argument("--width", type=float, default=None)
    p_del.add_argument("--preset", choices=("fig2",), default=None)
    _add_common(p_del)

    p_pkt = sub.add_parser("packet-sweep", help="passage time vs potential strength")
    p_pkt.add_argument("--v0-min", dest="v0_min", type=float, default=None)
    p_pkt.add_argument("--v0-max", dest="v0_max", type=float, default=None)
    p_pkt.add_argument("--v0-step", dest="v0_step", type=float, default=None)
    p_pkt.add_argument("--k0", type=float, default=None)
    p_pkt.add_argument("--delta-p", dest="delta_p", type=float, default=None)
    p_pkt.add_argument("--x0", type=float, default=None)
    p_pkt.add_argument("--width", type=float, default=None)
    p_pkt.add_argument("--preset", choices=("fig3",), default=None)
    _add_common(p_pkt)

    p_ver = sub.add_parser("verify", help="run the invariant suite")
    p_ver.add_argument("--tolerance-scale", dest="tolerance_scale", type=float,
                       default=1.0, help="scale all tolerances (testing hook)")
    p_ver.add_argument("--skip-slow", action="store_true",
                       help="skip the packet-integral checks")
    p_ver.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        config, preset_widths = _resolve_config(args, args.command)
        if args.command == "amplitudes":
            rows = cmd_amplitudes(config, widths=preset_widths)
            write_dataset(config, AMPLITUDE_HEADER, rows)
        elif args.command == "delay-sweep":
            rows = cmd_delay_sweep(config)
            write_dataset(config, DELAY_HEADER, rows)
        elif args.command == "packet-sweep":
            rows = cmd_packet_sweep(config)
            write_dataset(config, PACKET_HEADER, rows)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
        return 0
    except ThresholdDivergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
