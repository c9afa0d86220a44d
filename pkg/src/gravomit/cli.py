"""Command-line surface: config ingestion, subcommand dispatch, file output.

Subcommands: spectrum, sweep, compare, noise, verify, derive, history.
CSV files are the primary output (17 significant digits by default, so
identical inputs give byte-identical files); JSON summaries sit alongside,
every run drops a ``run_manifest.json`` into the output directory, and
``--plot`` renders SVG figures next to the data.

Exit codes: 0 success, 1 usage, 2 configuration or parameter error,
3 numerical failure (including a failed verify suite).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

import gravomit
from gravomit import analysis, history, noise, oracle, response
from gravomit.params import (
    ConfigError,
    NumericalError,
    ParameterError,
    SystemParams,
    derive,
    load_config,
    load_preset,
    params_hash,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_SPECTRUM_HEADER = ("omega_rad_s", "omega_over_2pi_hz", "re_tp", "im_tp", "abs_tp_sq", "kind")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; this CLI reserves 2 for
    configuration problems, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value, digits: int) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"%.{digits}g" % float(value)


def _write_csv(path: Path, header, rows, digits: int) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(cell, digits) for cell in row) + "\n")
    return path


def _write_json(path: Path, payload) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_manifest(outdir: Path, args: argparse.Namespace, phash: str | None,
                    outputs: list[Path]) -> None:
    payload = {
        "command": args.command_line,
        "params_hash": phash,
        "version": gravomit.__version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": sorted(p.name for p in outputs),
    }
    _write_json(outdir / "run_manifest.json", payload)


def _load_params(args: argparse.Namespace) -> SystemParams:
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        return load_config(path)
    return load_preset(getattr(args, "preset", None) or "reference")


def _outdir(args: argparse.Namespace) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_common(parser: argparse.ArgumentParser, needs_params: bool = True) -> None:
    if needs_params:
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--preset", help="bundled parameter preset name (default: reference)")
        group.add_argument("--config", help="path to a parameter file")
    parser.add_argument("--output", default=".", help="output directory (default: current)")
    parser.add_argument("--digits", type=int, default=17,
                        help="significant digits in CSV cells (default 17, round-trip safe)")
    parser.add_argument("--plot", action="store_true", help="also render SVG figures")


def _spectrum_rows(spec: response.ComplexSpectrum, digits: int):
    for w, t in zip(spec.omega_grid, spec.values):
        yield (w, w / (2.0 * math.pi), t.real, t.imag, abs(t) ** 2, spec.kind.value)


def cmd_spectrum(args: argparse.Namespace) -> int:
    params = _load_params(args)
    derived = derive(params)
    outdir = _outdir(args)

    kinds = []
    if args.driven:
        kinds.append(response.SpectrumKind.DRIVEN)
    if args.undriven:
        kinds.append(response.SpectrumKind.UNDRIVEN)
    if args.unloaded:
        kinds.append(response.SpectrumKind.UNLOADED)
    if args.lorentzian:
        kinds.extend([response.SpectrumKind.LORENTZIAN_DRIVEN,
                      response.SpectrumKind.LORENTZIAN_UNDRIVEN])
    if not kinds:
        kinds = [response.SpectrumKind.DRIVEN, response.SpectrumKind.UNDRIVEN]

    grid = response.default_grid(params, derived, n=args.points)
    zoom = response.zoom_grid(params, derived, n=args.points, factor=args.zoom)
    outputs = []

    for name, omegas in (("spectrum", grid), ("spectrum_zoom", zoom)):
        spectra = [response.spectrum(kind, params, derived, omegas, r=args.r, phi=args.phi)
                   for kind in kinds]
        rows = [row for spec in spectra for row in _spectrum_rows(spec, args.digits)]
        outputs.append(_write_csv(outdir / f"{name}.csv", _SPECTRUM_HEADER, rows, args.digits))
        if args.plot:
            from gravomit import plotting

            outputs.append(plotting.spectrum_figure(spectra, outdir / f"{name}.svg"))

    summary = {"params_hash": params_hash(params), "kinds": [k.value for k in kinds],
               "peaks": {}}
    for kind in kinds:
        m = analysis.peak_metrics(params, derived, kind, r=args.r, phi=args.phi)
        summary["peaks"][kind.value] = dataclasses.asdict(m)
    if (response.SpectrumKind.DRIVEN in kinds
            and response.SpectrumKind.UNDRIVEN in kinds):
        summary["delta_tp_max"] = analysis.delta_transmission_max(
            params, derived, r=args.r, phi=args.phi
        )
    outputs.append(_write_json(outdir / "spectrum_summary.json", summary))
    _write_manifest(outdir, args, params_hash(params), outputs)

    for kind, metrics in summary["peaks"].items():
        print(f"{kind}: peak {metrics['height']:.6g} at {metrics['omega_max']:.10g} rad/s, "
              f"fwhm {metrics['fwhm']:.6g} rad/s")
    if "delta_tp_max" in summary:
        print(f"delta_tp_max = {summary['delta_tp_max']:.6g}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    params = _load_params(args)
    derived = derive(params)
    outdir = _outdir(args)

    if args.values:
        values = np.array([float(v) for v in args.values.split(",")])
    else:
        if args.min is None or args.max is None:
            raise ConfigError("sweep needs either --values or both --min and --max")
        if args.log:
            values = np.geomspace(args.min, args.max, args.num)
        else:
            values = np.linspace(args.min, args.max, args.num)

    result = analysis.sweep(params, derived, args.axis, values)
    header = ("value", "driven_height", "driven_omega_max", "driven_fwhm",
              "undriven_height", "undriven_omega_max", "undriven_fwhm", "delta_tp_max")
    rows = []
    for value, (drv, und), delta in zip(result.values, result.metrics, result.delta_tp_max):
        rows.append((value, drv.height, drv.omega_max, drv.fwhm,
                     und.height, und.omega_max, und.fwhm, delta))
    outputs = [_write_csv(outdir / f"sweep_{args.axis}.csv", header, rows, args.digits)]
    summary = {
        "params_hash": params_hash(params),
        "axis": result.axis,
        "values": result.values.tolist(),
        "delta_tp_max": result.delta_tp_max.tolist(),
    }
    outputs.append(_write_json(outdir / f"sweep_{args.axis}_summary.json", summary))
    if args.plot:
        from gravomit import plotting

        outputs.append(plotting.sweep_figure(
            result.axis, result.values, result.delta_tp_max,
            outdir / f"sweep_{args.axis}.svg"))
    _write_manifest(outdir, args, params_hash(params), outputs)
    print(f"swept {args.axis} over {values.size} values; "
          f"delta_tp_max in [{result.delta_tp_max.min():.6g}, {result.delta_tp_max.max():.6g}]")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    params = _load_params(args)
    derived = derive(params)
    outdir = _outdir(args)

    report = analysis.compare(params, derived, args.mode, dps=args.dps)
    payload = dataclasses.asdict(report)
    payload["params_hash"] = params_hash(params)
    payload["below_resolution"] = [k for k, ok in report.resolved.items() if not ok]
    outputs = [_write_json(outdir / f"compare_{args.mode}.json", payload)]
    _write_manifest(outdir, args, params_hash(params), outputs)

    for name, delta in (("delta_height", report.delta_height),
                        ("delta_omega_max", report.delta_omega_max),
                        ("delta_fwhm", report.delta_fwhm)):
        key = name.removeprefix("delta_")
        bound = report.precision_estimate[key]
        status = "resolved" if report.resolved[key] else "below numerical resolution"
        print(f"{args.mode} {name} = {delta:+.10e}  (precision {bound:.1e}, {status})")
    return EXIT_OK


def cmd_noise(args: argparse.Namespace) -> int:
    params = _load_params(args)
    derived = derive(params)
    outdir = _outdir(args)

    gamma_eff = response.effective_linewidth(params, derived)
    center = derived.omega1_prime
    span = args.span * gamma_eff
    omegas = np.linspace(center - span, center + span, args.num)
    budgets = [noise.noise_budget(float(w), params, derived) for w in omegas]

    header = ("omega_rad_s", "s_zp", "s_thermal", "s_external", "s_qba",
              "s_imprecision", "s_eff", "tau_paper", "tau_seconds")
    rows = [(w, b.s_zp, b.s_thermal, b.s_external, b.s_qba, b.s_imprecision,
             b.s_eff, b.tau_paper, b.tau_seconds)
            for w, b in zip(omegas, budgets)]
    outputs = [_write_csv(outdir / "noise.csv", header, rows, args.digits)]

    at_center = noise.noise_budget(center, params, derived)
    summary = {"params_hash": params_hash(params), "omega_rad_s": center,
               "budget": dataclasses.asdict(at_center)}
    if args.target_tau is not None:
        required = noise.required_external_noise(args.target_tau, center, params, derived)
        summary["target_tau_seconds"] = args.target_tau
        summary["required_s_x_ext"] = required
    outputs.append(_write_json(outdir / "noise_summary.json", summary))
    if args.plot:
        from gravomit import plotting

        outputs.append(plotting.noise_figure(omegas, budgets, outdir / "noise.svg"))
    _write_manifest(outdir, args, params_hash(params), outputs)

    print(f"at omega = {center:.10g} rad/s: S_eff = {at_center.s_eff:.6e} N^2/Hz, "
          f"tau = {at_center.tau_seconds:.4f} s")
    if args.target_tau is not None:
        print(f"required S_x_ext for tau = {args.target_tau:g} s: {required:.6e} m^2/Hz")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = _load_params(args)
    outdir = _outdir(args)

    mech = dataclasses.replace(
        params.mechanics,
        gamma1=params.mechanics.omega1 / args.reduced_q,
        Q1=args.reduced_q,
    )
    reduced = dataclasses.replace(params, mechanics=mech)
    derived = derive(reduced)
    gamma_eff = response.effective_linewidth(reduced, derived)
    omegas = derived.omega1_prime + np.linspace(-1.0, 1.0, args.frequencies) * gamma_eff

    deviations = {"driven": [], "undriven": []}
    for w in omegas:
        w = float(w)
        sim_u = oracle.transmission_from_simulation(reduced, derived, w, False)
        sim_d = oracle.transmission_from_simulation(reduced, derived, w, True)
        deviations["undriven"].append(abs(sim_u - response.transmission_undriven(w, reduced, derived)))
        deviations["driven"].append(abs(sim_d - response.transmission_driven(w, reduced, derived)))

    center = float(derived.omega1_prime)
    period = 2.0 * math.pi / center
    errors = []
    for steps_per_period in (52, 104, 208):
        sim = oracle.transmission_from_simulation(
            reduced, derived, center, True, dt=period / steps_per_period
        )
        errors.append(abs(sim - response.transmission_driven(center, reduced, derived)))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]

    max_dev = max(max(deviations["driven"]), max(deviations["undriven"]))
    order_ok = all(10.0 < ratio < 22.0 for ratio in ratios)
    passed = bool(max_dev < args.tolerance and order_ok)

    payload = {
        "params_hash": params_hash(reduced),
        "reduced_q": args.reduced_q,
        "tolerance": args.tolerance,
        "frequencies_rad_s": [float(w) for w in omegas],
        "max_deviation_driven": max(deviations["driven"]),
        "max_deviation_undriven": max(deviations["undriven"]),
        "convergence_errors": errors,
        "convergence_ratios": ratios,
        "pass": passed,
    }
    outputs = [_write_json(outdir / "verify.json", payload)]
    _write_manifest(outdir, args, params_hash(reduced), outputs)

    verdict = "PASS" if passed else "FAIL"
    print(f"{verdict}: max |t_p(sim) - t_p(analytic)| = {max_dev:.3e} "
          f"(tolerance {args.tolerance:.1e}); dt-halving ratios "
          f"{ratios[0]:.1f}, {ratios[1]:.1f}")
    return EXIT_OK if passed else EXIT_NUMERICAL


def cmd_derive(args: argparse.Namespace) -> int:
    params = _load_params(args)
    derived = derive(params)
    outdir = _outdir(args)

    two_pi = 2.0 * math.pi
    table = [
        ("omega1_prime", derived.omega1_prime, "rad/s", derived.omega1_prime / two_pi, "Hz"),
        ("x_zpf", derived.x_zpf, "m", None, None),
        ("g0", derived.g0, "rad/s", derived.g0 / two_pi, "Hz"),
        ("g", derived.g, "rad/s", derived.g / two_pi, "Hz"),
        ("F_G", derived.F_G, "N", derived.F_G * 1e18, "aN"),
        ("F_p", derived.F_p, "N", derived.F_p * 1e18, "aN"),
        ("r", derived.r, "", None, None),
        ("phi", derived.phi, "rad", derived.phi / math.pi, "pi rad"),
        ("phi_fp", derived.phi_fp, "rad", derived.phi_fp / math.pi, "pi rad"),
        ("phi_G", derived.phi_G, "rad", derived.phi_G / math.pi, "pi rad"),
        ("k_G", derived.k_G, "N/m", None, None),
        ("n_bar_1", derived.n_bar_1, "", None, None),
        ("coop", derived.coop, "", None, None),
        ("n_bar_p", derived.n_bar_p, "", None, None),
        ("snr_shot", derived.snr_shot, "", None, None),
    ]
    payload = {"params_hash": params_hash(params),
               "derived": dataclasses.asdict(derived)}
    outputs = [_write_json(outdir / "derive.json", payload)]
    _write_manifest(outdir, args, params_hash(params), outputs)

    for name, value, unit, alt, alt_unit in table:
        line = f"{name:14s} {value:.10e} {unit}"
        if alt is not None:
            line += f"   ({alt:.10e} {alt_unit})"
        print(line)
    return EXIT_OK


def cmd_history(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    records = history.load_history(
        args.category, min_year=args.min_year, max_year=args.max_year
    )
    header = ("category", "row", "author", "mass_kg", "log10_mass_kg", "material",
              "geometry", "year", "g_value_1e11", "g_uncertainty_ppm",
              "omega_m_mhz", "q_m", "temperature_k")
    rows = [(r.category.value, r.row, r.author, r.mass_kg, math.log10(r.mass_kg),
             r.material, r.geometry, r.year, r.g_value_1e11, r.g_uncertainty_ppm,
             r.omega_m_mhz, r.q_m, r.temperature_k)
            for r in records]
    outputs = [_write_csv(outdir / "history.csv", header, rows, args.digits)]
    summary = {
        "total": len(records),
        "gravity_rows": sum(r.category is history.Category.GRAVITY for r in records),
        "optomechanics_rows": sum(
            r.category is history.Category.OPTOMECHANICS for r in records
        ),
        "overlap_year": history.overlap_year(),
        "dataset_sha256": history.dataset_checksum(),
    }
    outputs.append(_write_json(outdir / "history_summary.json", summary))
    if args.plot:
        from gravomit import plotting

        outputs.append(plotting.history_figure(records, outdir / "history.svg"))
    _write_manifest(outdir, args, None, outputs)
    print(f"{summary['gravity_rows']} gravity rows, "
          f"{summary['optomechanics_rows']} resonator rows; "
          f"mass scales overlapped in {summary['overlap_year']}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="gravomit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=gravomit.__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="probe-transmission spectra on default and zoom grids")
    _add_common(p)
    p.add_argument("--driven", action="store_true", help="spectrum with the source mass vibrating")
    p.add_argument("--undriven", action="store_true", help="spectrum with the source mass at rest")
    p.add_argument("--unloaded", action="store_true", help="spectrum with the source mass removed")
    p.add_argument("--lorentzian", action="store_true",
                   help="narrow-window Lorentzian approximations")
    p.add_argument("--zoom", type=float, default=1e6, help="zoom-grid magnification factor")
    p.add_argument("--points", type=int, default=4001, help="samples per grid")
    p.add_argument("--r", type=float, default=None, help="force-ratio override")
    p.add_argument("--phi", type=float, default=None, help="drive-phase override (rad)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="window metrics along one parameter axis")
    _add_common(p)
    p.add_argument("--axis", required=True, choices=analysis.SWEEP_AXES)
    p.add_argument("--values", help="comma-separated axis values")
    p.add_argument("--min", type=float, help="axis range start")
    p.add_argument("--max", type=float, help="axis range end")
    p.add_argument("--num", type=int, default=11, help="number of range points")
    p.add_argument("--log", action="store_true", help="logarithmic range spacing")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="extended-precision window comparisons")
    _add_common(p)
    p.add_argument("--mode", required=True, choices=("dynamic", "static"))
    p.add_argument("--dps", type=int, default=50, help="working decimal digits")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("noise", help="force-noise budget and averaging time")
    _add_common(p)
    p.add_argument("--span", type=float, default=10.0,
                   help="grid half-width in effective linewidths")
    p.add_argument("--num", type=int, default=401, help="grid points")
    p.add_argument("--target-tau", type=float, default=None,
                   help="back-solve the external noise for this per-point time (s)")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("verify", help="time-domain oracle equivalence suite")
    _add_common(p)
    p.add_argument("--reduced-q", type=float, default=1e3,
                   help="mechanical quality factor for the suite (default 1e3)")
    p.add_argument("--tolerance", type=float, default=1e-4,
                   help="absolute t_p deviation limit")
    p.add_argument("--frequencies", type=int, default=10,
                   help="number of window frequencies to check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", help="derived operating-point quantities")
    _add_common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("history", help="historical experiments dataset")
    _add_common(p, needs_params=False)
    p.add_argument("--category",
                   choices=[c.value for c in history.Category], default=None)
    p.add_argument("--min-year", type=int, default=None)
    p.add_argument("--max-year", type=int, default=None)
    p.set_defaults(func=cmd_history)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_line = ["gravomit", *argv]
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
