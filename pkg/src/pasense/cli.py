"""Command-line front end.

Six subcommands map onto the library: ``sensitivity`` and ``spectrum``
evaluate pointwise noise figures, ``mu-map`` tabulates the
phase-optimized sensitivity over frequency and gain, ``contour``
extracts a level set of K, mu or R_rel, ``tables`` regenerates the two
benchmark tables, and ``oscillator`` compares trapped against free
operation.

Parameters come either in reduced form (--J0, --G-tilde,
--gamma-tilde, --theta) or in SI form (--kappa0-rad-s and friends);
when both appear the reduced set wins with a warning.  A flat JSON
config file may supply any flag by its destination name, with explicit
flags taking precedence.

Exit codes: 0 success, 1 output I/O failure, 2 usage or range errors,
3 model domain errors (instability, divergent phase, resonance).
Output is written only on success, to --out or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DomainError, InvalidParameterError, InvalidRangeError
from .explore import AxisSpec, extract_contour, reproduce_tables, sweep
from .oscillator import oscillator_sensitivity, sensitivity_ratio
from .params import PhysicalParams, ReducedParams
from .params import reduce as reduce_params
from .response import mu, optimal_phase, output_spectrum, sensitivity


class ConfigError(ValueError):
    """Bad config file or inconsistent command-line usage."""


_REDUCED_KEYS = ("J0", "G_tilde", "gamma_tilde", "theta")
_PHYSICAL_REQUIRED = (
    "kappa0_rad_s",
    "G_rad_s",
    "eta_per_m",
    "mass_kg",
    "power_W",
    "wavelength_m",
)
_PHYSICAL_OPTIONAL = ("gamma_m_rad_s", "temperature_K", "omega_m_rad_s")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON file of flag values")
    common.add_argument("--out", help="output file (default: stdout)")
    red = common.add_argument_group("reduced parameters")
    red.add_argument("--J0", type=float, help="drive strength at zero gain")
    red.add_argument("--G-tilde", type=float, help="parametric gain / kappa0")
    red.add_argument("--gamma-tilde", type=float, help="mechanical damping / kappa0")
    red.add_argument("--theta", type=float, help="k_B T / (hbar kappa0)")
    phys = common.add_argument_group("physical parameters (SI)")
    phys.add_argument("--kappa0-rad-s", type=float, help="cavity linewidth")
    phys.add_argument("--G-rad-s", type=float, help="parametric gain")
    phys.add_argument("--eta-per-m", type=float, help="coupling gradient")
    phys.add_argument("--mass-kg", type=float, help="particle mass")
    phys.add_argument("--gamma-m-rad-s", type=float, help="mechanical damping")
    phys.add_argument("--temperature-K", type=float, help="bath temperature")
    phys.add_argument("--power-W", type=float, help="drive power")
    phys.add_argument("--wavelength-m", type=float, help="drive wavelength")
    phys.add_argument("--omega-m-rad-s", type=float, help="trap frequency")

    parser = argparse.ArgumentParser(
        prog="pasense",
        description="quantum-noise force sensing with a dissipative "
        "cavity and intracavity parametric gain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "sensitivity", parents=[common], help="force-noise budget R_rel"
    )
    p.add_argument("--omega", help="frequencies: a,b,c or min:max:count")
    p.add_argument(
        "--phi-over-pi",
        help="homodyne angles in units of pi, or 'opt' (default)",
    )

    p = sub.add_parser(
        "spectrum", parents=[common], help="output quadrature noise S_zout"
    )
    p.add_argument("--omega", help="frequencies: a,b,c or min:max:count")
    p.add_argument(
        "--phi-over-pi",
        help="homodyne angles in units of pi, or 'opt' (default)",
    )
    p.add_argument(
        "--s-ex-rel", type=float, help="external force background, SQL units"
    )

    p = sub.add_parser(
        "mu-map", parents=[common], help="phase-optimized mu over (omega, G)"
    )
    p.add_argument("--omega-min", type=float, help="default 1e-4")
    p.add_argument("--omega-max", type=float, help="default 2.0")
    p.add_argument("--g-min", type=float, help="default 0")
    p.add_argument("--g-max", type=float, help="default 0.499")
    p.add_argument("--resolution", help="N or NxM grid points (default 200)")

    p = sub.add_parser(
        "contour", parents=[common], help="level set of K, mu or R_rel"
    )
    p.add_argument("--quantity", choices=("K", "mu", "R_rel"), required=True)
    p.add_argument("--level", type=float, required=True)
    p.add_argument("--omega-min", type=float, help="default 1e-4")
    p.add_argument("--omega-max", type=float, help="default 2.0")
    p.add_argument("--g-min", type=float, help="K/mu y axis, default 0")
    p.add_argument("--g-max", type=float, help="K/mu y axis, default 0.499")
    p.add_argument("--phi-min", type=float, help="R_rel y axis, default -0.4975")
    p.add_argument("--phi-max", type=float, help="R_rel y axis, default 0.4975")
    p.add_argument("--resolution", help="N or NxM grid points (default 200)")

    p = sub.add_parser(
        "tables", parents=[common], help="benchmark sensitivity tables"
    )
    p.add_argument("--table", choices=("1", "2", "both"), help="default both")

    p = sub.add_parser(
        "oscillator", parents=[common], help="trapped vs free comparison"
    )
    p.add_argument("--omega", help="frequencies: a,b,c or min:max:count")
    p.add_argument(
        "--omega-m-tilde", type=float, help="trap frequency / kappa0"
    )
    return parser


def _merge_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    try:
        raw = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object of flag values")
    for key, value in doc.items():
        if key in ("config", "command") or not hasattr(args, key):
            raise ConfigError(f"unknown config field: {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)


def _resolve_params(args: argparse.Namespace) -> ReducedParams:
    reduced_given = any(
        getattr(args, k) is not None for k in _REDUCED_KEYS
    )
    physical_given = any(
        getattr(args, k) is not None
        for k in _PHYSICAL_REQUIRED + _PHYSICAL_OPTIONAL
    )
    if reduced_given:
        if physical_given:
            print(
                "warning: both reduced and physical parameters given; "
                "reduced values take precedence",
                file=sys.stderr,
            )
        if args.J0 is None:
            raise ConfigError("reduced parameters need J0")

        def val(name):
            v = getattr(args, name)
            return 0.0 if v is None else float(v)

        return ReducedParams(
            J0=float(args.J0),
            g=val("G_tilde"),
            gam=val("gamma_tilde"),
            theta=val("theta"),
        )
    if physical_given:
        missing = [k for k in _PHYSICAL_REQUIRED if getattr(args, k) is None]
        if missing:
            raise ConfigError(f"missing physical parameter: {missing[0]}")

        def opt(name):
            v = getattr(args, name)
            return 0.0 if v is None else float(v)

        pp = PhysicalParams(
            kappa0=float(args.kappa0_rad_s),
            G=float(args.G_rad_s),
            eta=float(args.eta_per_m),
            mass=float(args.mass_kg),
            power=float(args.power_W),
            wavelength=float(args.wavelength_m),
            gamma_m=opt("gamma_m_rad_s"),
            temperature=opt("temperature_K"),
            omega_m=opt("omega_m_rad_s"),
        )
        return reduce_params(pp)
    raise ConfigError(
        "no parameters given; pass --J0 (reduced) or the physical set"
    )


def _parse_number_list(spec, name: str) -> list[float]:
    if spec is None:
        raise ConfigError(f"{name} is required")
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    s = str(spec).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad {name} range {s!r}; expected min:max:count")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"bad {name} range {s!r}; expected min:max:count")
        if n < 1:
            raise ConfigError(f"bad {name} range {s!r}; count must be >= 1")
        return [float(v) for v in np.linspace(lo, hi, n)]
    try:
        vals = [float(tok) for tok in s.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad {name} list {s!r}")
    if not vals:
        raise ConfigError(f"{name} list is empty")
    return vals


def _parse_resolution(spec) -> tuple[int, int]:
    s = "200" if spec is None else str(spec).strip().lower()
    try:
        if "x" in s:
            a, b = s.split("x", 1)
            nx, ny = int(a), int(b)
        else:
            nx = ny = int(s)
    except ValueError:
        raise ConfigError(f"bad resolution {spec!r}; expected N or NxM")
    if nx < 2 or ny < 2:
        raise ConfigError("resolution must be at least 2 points per axis")
    return nx, ny


def _phase_list(args, omegas, rp) -> list[tuple[float, float]]:
    # Expand (omega, phi) evaluation pairs; phi in radians.
    spec = args.phi_over_pi
    if spec is None or (isinstance(spec, str) and spec.strip().lower() == "opt"):
        return [(w, float(optimal_phase(rp, w))) for w in omegas]
    pairs = []
    for w in omegas:
        for pop in _parse_number_list(spec, "phi-over-pi"):
            pairs.append((w, pop * np.pi))
    return pairs


def _run_sensitivity(args: argparse.Namespace) -> str:
    rp = _resolve_params(args)
    omegas = _parse_number_list(args.omega, "omega")
    lines = ["omega_over_kappa0,phi_over_pi,R_rel,shot,backaction,thermal"]
    for w, p in _phase_list(args, omegas, rp):
        pt = sensitivity(rp, w, p)
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    w,
                    p / np.pi,
                    pt.R_rel,
                    pt.shot,
                    pt.backaction,
                    pt.thermal,
                )
            )
        )
    return "\n".join(lines) + "\n"


def _run_spectrum(args: argparse.Namespace) -> str:
    rp = _resolve_params(args)
    omegas = _parse_number_list(args.omega, "omega")
    s_ex = 0.0 if args.s_ex_rel is None else float(args.s_ex_rel)
    lines = ["omega_over_kappa0,phi_over_pi,S_zout"]
    for w, p in _phase_list(args, omegas, rp):
        s = output_spectrum(rp, w, p, s_ex)
        lines.append(",".join(_fmt(v) for v in (w, p / np.pi, s)))
    return "\n".join(lines) + "\n"


def _mu_axes(args, nx, ny) -> tuple[AxisSpec, AxisSpec]:
    omega_min = 1e-4 if args.omega_min is None else float(args.omega_min)
    omega_max = 2.0 if args.omega_max is None else float(args.omega_max)
    g_min = 0.0 if args.g_min is None else float(args.g_min)
    g_max = 0.499 if args.g_max is None else float(args.g_max)
    return (
        AxisSpec("omega_over_kappa0", omega_min, omega_max, nx),
        AxisSpec("G_over_kappa0", g_min, g_max, ny),
    )


def _run_mu_map(args: argparse.Namespace) -> str:
    rp = _resolve_params(args)
    nx, ny = _parse_resolution(args.resolution)
    x_axis, y_axis = _mu_axes(args, nx, ny)
    grid = sweep(rp, "mu", x_axis, y_axis)
    lines = [
        f"# quantity=mu J0={_fmt(rp.J0)} gamma_tilde={_fmt(rp.gam)} "
        f"theta={_fmt(rp.theta)}",
        "omega_over_kappa0,G_over_kappa0,mu",
    ]
    for iy in range(grid.y_values.size):
        for ix in range(grid.x_values.size):
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (
                        grid.x_values[ix],
                        grid.y_values[iy],
                        grid.values[iy, ix],
                    )
                )
            )
    return "\n".join(lines) + "\n"


def _run_contour(args: argparse.Namespace) -> str:
    rp = _resolve_params(args)
    nx, ny = _parse_resolution(args.resolution)
    if args.quantity in ("K", "mu"):
        x_axis, y_axis = _mu_axes(args, nx, ny)
    else:
        omega_min = 1e-4 if args.omega_min is None else float(args.omega_min)
        omega_max = 2.0 if args.omega_max is None else float(args.omega_max)
        phi_min = -0.4975 if args.phi_min is None else float(args.phi_min)
        phi_max = 0.4975 if args.phi_max is None else float(args.phi_max)
        x_axis = AxisSpec("omega_over_kappa0", omega_min, omega_max, nx)
        y_axis = AxisSpec("phi_over_pi", phi_min, phi_max, ny)
    grid = sweep(rp, args.quantity, x_axis, y_axis)
    contour = extract_contour(grid, float(args.level))
    lines = [
        f"# quantity={args.quantity} level={_fmt(args.level)} "
        f"x={grid.x_name} y={grid.y_name} J0={_fmt(rp.J0)} "
        f"gamma_tilde={_fmt(rp.gam)} theta={_fmt(rp.theta)}",
        "polyline_id,x,y",
    ]
    for pid, poly in enumerate(contour.polylines):
        for px, py in poly:
            lines.append(f"{pid},{_fmt(px)},{_fmt(py)}")
    return "\n".join(lines) + "\n"


def _run_tables(args: argparse.Namespace) -> str:
    which = "both" if args.table is None else str(args.table)
    rows = reproduce_tables()
    lines = ["table,J0,T_K,G_over_kappa0,omega_argmin,mu_min,power_W"]
    for row in rows:
        if which != "both" and str(row.table) != which:
            continue
        lines.append(
            ",".join(
                [str(row.table)]
                + [
                    _fmt(v)
                    for v in (
                        row.J0,
                        row.T_K,
                        row.G_tilde,
                        row.omega_tilde_argmin,
                        row.mu_min,
                        row.power_W,
                    )
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _run_oscillator(args: argparse.Namespace) -> str:
    rp = _resolve_params(args)
    if args.omega_m_tilde is not None:
        wm = float(args.omega_m_tilde)
    elif args.omega_m_rad_s is not None and args.kappa0_rad_s is not None:
        wm = float(args.omega_m_rad_s) / float(args.kappa0_rad_s)
    else:
        raise ConfigError("oscillator needs --omega-m-tilde (or --omega-m-rad-s)")
    omegas = _parse_number_list(args.omega, "omega")
    kept = [w for w in omegas if w > wm]
    skipped = len(omegas) - len(kept)
    if skipped:
        print(
            f"skipped {skipped} rows at or below the trap resonance",
            file=sys.stderr,
        )
    lines = ["omega_over_kappa0,mu_mo,mu_free,ratio"]
    for w in kept:
        pt = oscillator_sensitivity(rp, wm, w, 0.0)
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    w,
                    pt.mu_mo,
                    mu(rp, w),
                    sensitivity_ratio(wm, w),
                )
            )
        )
    return "\n".join(lines) + "\n"


_RUNNERS = {
    "sensitivity": _run_sensitivity,
    "spectrum": _run_spectrum,
    "mu-map": _run_mu_map,
    "contour": _run_contour,
    "tables": _run_tables,
    "oscillator": _run_oscillator,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        _merge_config(args)
        text = _RUNNERS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
