"""Command-line front end: exponent, sweep, relax, stability-chart.

Configuration is a JSON document mirroring the sweep parameters plus
solver knobs; command-line flags override file values, and --dump-config
prints the fully resolved document for reproducible reruns. All tabular
output is CSV with shortest round-trip decimal formatting, so repeated
runs are byte-identical and diffs are meaningful.

Exit codes: 0 success (stable), 1 usage or numerical error, 2 unstable
drive, 3 marginal drive.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys

import numpy as np

from .bath import GaussianDensity, ThermalBath
from .errors import ConfigError, FloqbathError
from .experiments import (
    RECORD_FIELDS,
    SolverOptions,
    SweepConfig,
    figure_preset,
    sweep,
)
from .master_equation import auto_nmax, build_generator, relax
from .mathieu import (
    DEFAULT_TOL,
    DriveParams,
    Verdict,
    characteristic_exponent,
    classify_stability,
    integrate_fundamental,
    periodic_fourier,
)
from .rates import TransitionSpectrum, ratio_exact

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_UNSTABLE = 2
_EXIT_MARGINAL = 3

_VERDICT_EXIT = {
    Verdict.STABLE: _EXIT_OK,
    Verdict.UNSTABLE: _EXIT_UNSTABLE,
    Verdict.MARGINAL: _EXIT_MARGINAL,
}

_CONFIG_DEFAULTS = {
    "drive": {"omega0": 1.0, "omega1": 0.0},
    "bath": {"beta": 1.0, "width": 1.0, "center": None, "amplitude": 1.0},
    "sweep": {"start": 0.0, "stop": 10.0, "step": 0.01},
    "n_max": None,
    "rate_scale": 1.0,
    "solver": {
        "ode_rtol": 1e-10,
        "margin": 1e-9,
        "max_L": 64,
        "tail_threshold": 1e-28,
    },
    "output": {"path": "-", "format": "csv"},
}


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for the
    # unstable verdict, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(_EXIT_ERROR)


def _merge(base: dict, override: dict, prefix: str = "") -> dict:
    out = dict(base)
    for key, val in override.items():
        path = prefix + key
        if key not in base:
            raise ConfigError(f"unknown config key: {path}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"config key {path} must be a table")
            out[key] = _merge(base[key], val, prefix=path + ".")
        else:
            out[key] = val
    return out


def _is_number(val) -> bool:
    return isinstance(val, (int, float)) and not isinstance(val, bool)


def _validate(doc: dict) -> None:
    numeric = (
        "drive.omega0", "drive.omega1",
        "bath.beta", "bath.width", "bath.amplitude",
        "sweep.start", "sweep.stop", "sweep.step",
        "rate_scale",
        "solver.ode_rtol", "solver.margin", "solver.tail_threshold",
    )
    for dotted in numeric:
        node = doc
        for part in dotted.split("."):
            node = node[part]
        if not _is_number(node):
            raise ConfigError(f"config key {dotted} must be a number")
    center = doc["bath"]["center"]
    if center is not None and not _is_number(center):
        raise ConfigError("config key bath.center must be a number or null")
    n_max = doc["n_max"]
    if n_max is not None and not (isinstance(n_max, int) and not isinstance(n_max, bool)):
        raise ConfigError("config key n_max must be an integer or null")
    if not (isinstance(doc["solver"]["max_L"], int)
            and not isinstance(doc["solver"]["max_L"], bool)):
        raise ConfigError("config key solver.max_L must be an integer")
    if not isinstance(doc["output"]["path"], str):
        raise ConfigError("config key output.path must be a string")
    if doc["output"]["format"] != "csv":
        raise ConfigError('config key output.format must be "csv"')


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path}: top level must be an object")
    return doc


# flag destination -> dotted config key
_FLAG_KEYS = {
    "omega0": "drive.omega0",
    "omega1": "drive.omega1",
    "beta": "bath.beta",
    "width": "bath.width",
    "center": "bath.center",
    "amplitude": "bath.amplitude",
    "start": "sweep.start",
    "stop": "sweep.stop",
    "step": "sweep.step",
    "n_max": "n_max",
    "rate_scale": "rate_scale",
    "tol": "solver.ode_rtol",
    "out": "output.path",
}


def _resolve_config(args) -> dict:
    doc = copy.deepcopy(_CONFIG_DEFAULTS)
    figure = getattr(args, "figure", None)
    if figure:
        preset = figure_preset(figure)
        doc["drive"]["omega0"] = preset.drive.omega0
        doc["drive"]["omega1"] = preset.drive.omega1
        doc["bath"]["beta"] = preset.beta
        doc["bath"]["width"] = preset.width
        doc["sweep"] = {
            "start": preset.start, "stop": preset.stop, "step": preset.step,
        }
    if getattr(args, "config", None):
        doc = _merge(doc, _load_config_file(args.config))
    for dest, dotted in _FLAG_KEYS.items():
        val = getattr(args, dest, None)
        if val is None:
            continue
        node = doc
        parts = dotted.split(".")
        for part in parts[:-1]:
            node = node[part]
        node[parts[-1]] = val
    _validate(doc)
    return doc


def _dump_config(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _solver_options(doc: dict) -> SolverOptions:
    s = doc["solver"]
    return SolverOptions(
        ode_rtol=float(s["ode_rtol"]),
        margin=float(s["margin"]),
        max_L=int(s["max_L"]),
        tail_threshold=float(s["tail_threshold"]),
    )


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def render_records(records) -> str:
    """The CSV contract: fixed header, empty cells for absent values."""
    lines = [",".join(RECORD_FIELDS)]
    for rec in records:
        lines.append(
            ",".join(_format_cell(getattr(rec, name)) for name in RECORD_FIELDS)
        )
    return "\n".join(lines) + "\n"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _classified_drive(doc: dict):
    drive = DriveParams(float(doc["drive"]["omega0"]),
                        float(doc["drive"]["omega1"]))
    solver = _solver_options(doc)
    stab = classify_stability(
        integrate_fundamental(drive, solver.ode_rtol), solver.margin
    )
    return drive, solver, stab


def cmd_exponent(args) -> int:
    params = DriveParams(args.omega0, args.omega1)
    mono = integrate_fundamental(params, args.tol)
    stab = classify_stability(mono)
    print(f"stability = {stab.verdict.value}")
    print(f"trace = {stab.trace!r}")
    if not stab.is_stable:
        return _VERDICT_EXIT[stab.verdict]
    nu = characteristic_exponent(params, args.tol)
    print(f"nu = {nu!r}")
    sol = periodic_fourier(params, nu)
    flag = " (tail not converged)" if sol.truncated else ""
    print(f"L = {sol.L}{flag}")
    print("top sideband weights |v_l|^2:")
    weights = sol.weights()
    order = np.argsort(weights)[::-1][:5]
    for idx in order:
        print(f"  l = {int(sol.ells[idx]):3d}   {weights[idx]:.12e}")
    return _EXIT_OK


def cmd_sweep(args) -> int:
    doc = _resolve_config(args)
    if args.dump_config:
        _dump_config(doc)
        return _EXIT_OK
    drive, solver, stab = _classified_drive(doc)
    if not stab.is_stable:
        sys.stderr.write(
            f"error: drive is {stab.verdict.value} (trace {stab.trace:.6g})\n"
        )
        return _VERDICT_EXIT[stab.verdict]
    config = SweepConfig(
        drive=drive,
        beta=float(doc["bath"]["beta"]),
        width=float(doc["bath"]["width"]),
        start=float(doc["sweep"]["start"]),
        stop=float(doc["sweep"]["stop"]),
        step=float(doc["sweep"]["step"]),
        amplitude=float(doc["bath"]["amplitude"]),
        n_max=doc["n_max"],
    )
    records = sweep(config, solver)
    _write_text(doc["output"]["path"], render_records(records))
    return _EXIT_OK


def cmd_relax(args) -> int:
    doc = _resolve_config(args)
    if args.dump_config:
        _dump_config(doc)
        return _EXIT_OK
    if doc["bath"]["center"] is None:
        raise ConfigError("relax needs a density center (--center or bath.center)")
    drive, solver, stab = _classified_drive(doc)
    if not stab.is_stable:
        sys.stderr.write(
            f"error: drive is {stab.verdict.value} (trace {stab.trace:.6g})\n"
        )
        return _VERDICT_EXIT[stab.verdict]
    nu = characteristic_exponent(drive, solver.ode_rtol)
    sol = periodic_fourier(drive, nu, solver.max_L, solver.tail_threshold)
    ts = TransitionSpectrum.from_floquet(sol)
    bath = ThermalBath(float(doc["bath"]["beta"]))
    sd = GaussianDensity(
        amplitude=float(doc["bath"]["amplitude"]),
        center=float(doc["bath"]["center"]),
        width=float(doc["bath"]["width"]),
    )
    r = ratio_exact(ts, bath, sd)
    n_max = doc["n_max"] if doc["n_max"] is not None else auto_nmax(r)
    gen = build_generator(ts, bath, sd, n_max, rate_scale=float(doc["rate_scale"]))
    if r >= 1.0:
        sys.stderr.write(
            f"warning: r = {r:.6g} >= 1, no stationary distribution; the "
            "trajectory reflects the truncation edge\n"
        )
    if not 0 <= args.n_init <= n_max:
        raise ConfigError(f"--n-init must lie in [0, {n_max}]")
    p_init = np.zeros(n_max + 1)
    p_init[args.n_init] = 1.0
    times, traj = relax(gen, p_init, args.t_final, n_snapshots=args.snapshots)
    header = "t," + ",".join(f"p{n}" for n in range(n_max + 1))
    lines = [header]
    for t, row in zip(times, traj):
        lines.append(",".join([repr(float(t))] + [repr(float(p)) for p in row]))
    _write_text(doc["output"]["path"], "\n".join(lines) + "\n")
    return _EXIT_OK


def cmd_stability_chart(args) -> int:
    lo0, hi0, n0 = args.omega0_range
    lo1, hi1, n1 = args.omega1_range
    if lo0 <= 0 or hi0 < lo0 or lo1 < 0 or hi1 < lo1:
        raise ConfigError("stability-chart ranges must be positive and ordered")
    lines = ["omega0,omega1,verdict,trace"]
    for om0 in np.linspace(lo0, hi0, int(n0)):
        for om1 in np.linspace(lo1, hi1, int(n1)):
            stab = classify_stability(
                integrate_fundamental(DriveParams(float(om0), float(om1)), args.tol)
            )
            lines.append(
                f"{float(om0)!r},{float(om1)!r},{stab.verdict.value},{stab.trace!r}"
            )
    _write_text(args.out if args.out else "-", "\n".join(lines) + "\n")
    return _EXIT_OK


def _add_config_flags(parser, with_center: bool = False) -> None:
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--figure", choices=("fig1", "fig2", "fig3"),
                        help="load a reference figure preset")
    parser.add_argument("--omega0", type=float)
    parser.add_argument("--omega1", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--width", type=float)
    parser.add_argument("--amplitude", type=float)
    if with_center:
        parser.add_argument("--center", type=float,
                            help="density center for single-point commands")
    parser.add_argument("--start", type=float)
    parser.add_argument("--stop", type=float)
    parser.add_argument("--step", type=float)
    parser.add_argument("--n-max", dest="n_max", type=int)
    parser.add_argument("--rate-scale", dest="rate_scale", type=float)
    parser.add_argument("--tol", type=float, help="integrator relative tolerance")
    parser.add_argument("--out", help="output path, - for standard output")
    parser.add_argument("--dump-config", action="store_true",
                        help="print the resolved configuration and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="floqbath",
        description="Quasistationary Floquet-state occupations of a "
                    "parametrically driven oscillator in a thermal bath",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent", parents=[], help="characteristic exponent "
                       "and sideband weights of the drive")
    p.add_argument("--omega0", type=float, required=True)
    p.add_argument("--omega1", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("sweep", help="sweep the density center, emit CSV")
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("relax", help="populations relaxing toward the "
                       "quasistationary distribution")
    _add_config_flags(p, with_center=True)
    p.add_argument("--n-init", dest="n_init", type=int, default=0,
                   help="initial ladder state (delta distribution)")
    p.add_argument("--t-final", dest="t_final", type=float, required=True)
    p.add_argument("--snapshots", type=int, default=50)
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("stability-chart", help="verdict grid over drive "
                       "parameters")
    p.add_argument("--omega0-range", dest="omega0_range", type=float, nargs=3,
                   default=(0.1, 2.1, 21), metavar=("MIN", "MAX", "N"))
    p.add_argument("--omega1-range", dest="omega1_range", type=float, nargs=3,
                   default=(0.0, 1.0, 11), metavar=("MIN", "MAX", "N"))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", help="output path, - for standard output")
    p.set_defaults(func=cmd_stability_chart)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _EXIT_ERROR
    except (FloqbathError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
