"""Command-line front end: parse, run a pipeline, serialize CSV/JSON.

Subcommands map one-to-one onto the library surfaces: kernel, transient,
scan, spectrum, validate.  A plain ``key = value`` config file can seed
any run, with command-line flags overriding file values; unknown keys are
rejected so a typo cannot silently fall back to a default.

Output files open with a single '#' metadata line (parameters, grid,
version) followed by a CSV header and rows printed at 12 significant
digits, which makes repeated runs byte-identical regardless of worker
count.

Exit codes: 0 success; 1 a computation failed validation (quadrature
non-convergence, half maximum not bracketed, failed checks); 2 bad input;
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .coherence import (
    HalfMaximumNotBracketedError,
    default_delta_grid,
    scan_fwhm,
)
from .density import emission_transient, independent_rate
from .kernel import DEFAULT_TOL, KernelQuadratureError, build_kernel_table
from .params import DEFAULT_DQ, DEFAULT_Q_MAX, QGrid, SampleParams
from .spectrum import EmissionConfig, default_omega_window, doppler_peak, line_shape
from .validate import ValidationConfig, run_checks

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_config_file(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks ignored."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(
                        f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}",
                        EXIT_BAD_INPUT,
                    )
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO)
    return values


def _merge_config(args: argparse.Namespace, spec: dict[str, object]):
    """Fold config-file values under explicit flags, then apply defaults.

    ``spec`` maps field name -> (parser, default).  Flags win over file
    values; file keys outside the subcommand's field set are rejected.
    """
    file_values = _read_config_file(args.config) if args.config else {}
    unknown = set(file_values) - set(spec)
    if unknown:
        raise CliError(
            f"unknown config key(s) for this subcommand: {', '.join(sorted(unknown))}",
            EXIT_BAD_INPUT,
        )
    out = {}
    for name, (parse, default) in spec.items():
        flag_value = getattr(args, name, None)
        if flag_value is not None:
            out[name] = flag_value
        elif name in file_values:
            try:
                out[name] = parse(file_values[name])
            except ValueError as exc:
                raise CliError(
                    f"config key {name}: {exc}", EXIT_BAD_INPUT
                )
        else:
            out[name] = default
    return out


def _require_out(cfg) -> str:
    if not cfg["out"]:
        raise CliError("an output path is required (--out or config 'out')", EXIT_BAD_INPUT)
    return cfg["out"]


def _write_text(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO)


def _grid_of(cfg) -> QGrid:
    return QGrid(q_max=cfg["q_max"], dq=cfg["dq"])


def _meta(command: str, pairs: dict[str, object]) -> str:
    body = " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in pairs.items())
    return f"# relsr {__version__} command={command} {body}\n"


def _csv(meta: str, header: list[str], columns: list[np.ndarray]) -> str:
    lines = [meta.rstrip("\n"), ",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def cmd_kernel(cfg) -> int:
    out = _require_out(cfg)
    params = SampleParams(cfg["beta"], cfg["delta_v"])
    grid = _grid_of(cfg)
    table = build_kernel_table(params, grid, tol=cfg["tol"])
    meta = _meta(
        "kernel",
        {
            "beta": params.beta,
            "delta_v": params.delta_v,
            "q_max": grid.q_max,
            "dq": grid.dq,
            "tol": cfg["tol"],
        },
    )
    _write_text(
        out,
        _csv(
            meta,
            ["q", "re_c", "im_c", "abs_c_sq"],
            [
                grid.points(),
                table.values.real,
                table.values.imag,
                np.abs(table.values) ** 2,
            ],
        ),
    )
    return EXIT_OK


def cmd_transient(cfg) -> int:
    out = _require_out(cfg)
    params = SampleParams(cfg["beta"], cfg["delta_v"])
    grid = _grid_of(cfg)
    tr = emission_transient(params, grid, tol=cfg["tol"])
    meta = _meta(
        "transient",
        {
            "beta": params.beta,
            "delta_v": params.delta_v,
            "q_max": grid.q_max,
            "dq": grid.dq,
            "tol": cfg["tol"],
        },
    )
    _write_text(
        out,
        _csv(
            meta,
            ["q", "rho_ee", "rho_1", "rho_gg", "trace", "rate", "rate_independent"],
            [
                grid.points(),
                tr.rho_ee,
                tr.rho_1,
                tr.rho_gg,
                tr.trace,
                tr.rate,
                independent_rate(grid),
            ],
        ),
    )
    return EXIT_OK


def cmd_scan(cfg) -> int:
    out = _require_out(cfg)
    grid = _grid_of(cfg)
    beta = float(cfg["beta"])
    if cfg["delta_v_min"] is None and cfg["delta_v_max"] is None and cfg["delta_v_step"] is None:
        deltas = default_delta_grid(beta)
    else:
        lo = 0.0 if cfg["delta_v_min"] is None else float(cfg["delta_v_min"])
        if cfg["delta_v_max"] is None or cfg["delta_v_step"] is None:
            raise CliError(
                "a custom scan needs both --delta-v-max and --delta-v-step",
                EXIT_BAD_INPUT,
            )
        hi, step = float(cfg["delta_v_max"]), float(cfg["delta_v_step"])
        if step <= 0 or hi <= lo:
            raise CliError("scan range must be increasing with positive step", EXIT_BAD_INPUT)
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        deltas = np.round(lo + np.arange(count) * step, 12)
    workers = cfg["workers"] if cfg["workers"] is not None else (os.cpu_count() or 1)
    t0 = time.time()
    scan = scan_fwhm(beta, deltas, grid, tol=cfg["tol"], workers=int(workers))
    wall = time.time() - t0
    meta = _meta(
        "scan",
        {
            "beta": beta,
            "delta_v_min": float(deltas[0]),
            "delta_v_max": float(deltas[-1]),
            "delta_v_step": float(deltas[1] - deltas[0]),
            "q_max": grid.q_max,
            "dq": grid.dq,
            "tol": cfg["tol"],
        },
    )
    _write_text(out, _csv(meta, ["delta_v", "g"], [scan.delta_grid, scan.g_values]))
    summary_path = cfg["summary"] or (os.path.splitext(out)[0] + ".json")
    summary = {
        "version": __version__,
        "beta": beta,
        "delta_v_min": float(deltas[0]),
        "delta_v_max": float(deltas[-1]),
        "q_max": grid.q_max,
        "dq": grid.dq,
        "tol": cfg["tol"],
        "fwhm": scan.fwhm,
        "normalization_a": scan.normalization_a,
        "wallclock_s": round(wall, 3),
    }
    _write_text(summary_path, json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_spectrum(cfg) -> int:
    out = _require_out(cfg)
    ecfg = EmissionConfig(
        beta=cfg["beta"],
        orientation=cfg["orientation"],
        theta=cfg["theta"],
        phi=cfg["phi"],
        linewidth_ratio=cfg["linewidth_ratio"],
    )
    if cfg["omega_min"] is None or cfg["omega_max"] is None:
        omega = default_omega_window(ecfg, n=int(cfg["omega_points"]))
    else:
        lo, hi = float(cfg["omega_min"]), float(cfg["omega_max"])
        if not 0.0 < lo < hi:
            raise CliError("need 0 < omega-min < omega-max", EXIT_BAD_INPUT)
        omega = np.linspace(lo, hi, int(cfg["omega_points"]))
    meta = _meta(
        "spectrum",
        {
            "beta": ecfg.beta,
            "orientation": ecfg.orientation,
            "theta": ecfg.theta,
            "phi": ecfg.phi,
            "linewidth_ratio": ecfg.linewidth_ratio,
            "doppler_peak": doppler_peak(ecfg),
        },
    )
    _write_text(
        out,
        _csv(meta, ["omega_over_omega0", "intensity"], [omega, line_shape(ecfg, omega)]),
    )
    return EXIT_OK


def cmd_validate(cfg) -> int:
    vcfg = ValidationConfig(
        grid=_grid_of(cfg),
        tol=cfg["tol"],
        workers=int(cfg["workers"] or 1),
        only=cfg["only"] or "",
    )
    results = run_checks(vcfg)
    if not results:
        raise CliError(f"no checks match filter {vcfg.only!r}", EXIT_BAD_INPUT)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status}  {r.name:<{width}}  measured={r.measured:.3e}  "
            f"tol={r.tolerance:.3e}  {r.detail}"
        )
    all_passed = all(r.passed for r in results)
    print(f"{'OK' if all_passed else 'FAILED'}: {sum(r.passed for r in results)}/{len(results)} checks passed")
    if cfg["report"]:
        payload = {
            "version": __version__,
            "q_max": vcfg.grid.q_max,
            "dq": vcfg.grid.dq,
            "tol": vcfg.tol,
            "all_passed": all_passed,
            "checks": [r.as_dict() for r in results],
        }
        _write_text(cfg["report"], json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if all_passed else EXIT_VALIDATION


def _float(s):
    return float(s)


_GRID_SPEC = {
    "q_max": (_float, DEFAULT_Q_MAX),
    "dq": (_float, DEFAULT_DQ),
    "tol": (_float, DEFAULT_TOL),
}


_SPECS = {
    "kernel": {
        "beta": (_float, 0.0),
        "delta_v": (_float, 0.0),
        "out": (str, ""),
        **_GRID_SPEC,
    },
    "transient": {
        "beta": (_float, 0.0),
        "delta_v": (_float, 0.0),
        "out": (str, ""),
        **_GRID_SPEC,
    },
    "scan": {
        "beta": (_float, 0.0),
        "delta_v_min": (_float, None),
        "delta_v_max": (_float, None),
        "delta_v_step": (_float, None),
        "workers": (int, None),
        "out": (str, ""),
        "summary": (str, ""),
        **_GRID_SPEC,
    },
    "spectrum": {
        "beta": (_float, 0.0),
        "orientation": (str, "parallel"),
        "theta": (_float, math.pi / 2.0),
        "phi": (_float, 0.0),
        "linewidth_ratio": (_float, 1e-3),
        "omega_min": (_float, None),
        "omega_max": (_float, None),
        "omega_points": (int, 2001),
        "out": (str, ""),
    },
    "validate": {
        "workers": (int, 1),
        "report": (str, ""),
        "only": (str, ""),
        **_GRID_SPEC,
    },
}

_COMMANDS = {
    "kernel": cmd_kernel,
    "transient": cmd_transient,
    "scan": cmd_scan,
    "spectrum": cmd_spectrum,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relsr",
        description=(
            "Relativistic two-particle superradiance pipeline: coherence "
            "kernel, propagators, emission transients, velocity-coherence "
            "scans, and single-particle spectra."
        ),
    )
    parser.add_argument("--version", action="version", version=f"relsr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--out", help="output CSV path")

    p = sub.add_parser("kernel", help="coherence kernel C(q) on a grid")
    add_common(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta-v", type=float, dest="delta_v")
    p.add_argument("--q-max", type=float, dest="q_max")
    p.add_argument("--dq", type=float)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("transient", help="density diagonals and emission rate")
    add_common(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta-v", type=float, dest="delta_v")
    p.add_argument("--q-max", type=float, dest="q_max")
    p.add_argument("--dq", type=float)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("scan", help="G(delta) scan with FWHM extraction")
    add_common(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta-v-min", type=float, dest="delta_v_min")
    p.add_argument("--delta-v-max", type=float, dest="delta_v_max")
    p.add_argument("--delta-v-step", type=float, dest="delta_v_step")
    p.add_argument("--workers", type=int)
    p.add_argument("--summary", help="JSON summary path (default: out with .json)")
    p.add_argument("--q-max", type=float, dest="q_max")
    p.add_argument("--dq", type=float)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("spectrum", help="single-particle Doppler line shape")
    add_common(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--orientation", choices=("parallel", "perpendicular"))
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--linewidth-ratio", type=float, dest="linewidth_ratio")
    p.add_argument("--omega-min", type=float, dest="omega_min")
    p.add_argument("--omega-max", type=float, dest="omega_max")
    p.add_argument("--omega-points", type=int, dest="omega_points")

    p = sub.add_parser("validate", help="run the verification checks")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--report", help="write JSON report here")
    p.add_argument("--only", help="run only checks whose name contains this")
    p.add_argument("--workers", type=int)
    p.add_argument("--q-max", type=float, dest="q_max")
    p.add_argument("--dq", type=float)
    p.add_argument("--tol", type=float)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors and 0 for --help/--version
        return int(exc.code or 0)
    try:
        cfg = _merge_config(args, _SPECS[args.command])
        return _COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except KernelQuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HalfMaximumNotBracketedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
