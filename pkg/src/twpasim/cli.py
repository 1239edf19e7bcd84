"""Command-line surface: sweeps, fits, and analysis reports.

Every command writes CSV output plus a ``<out>.manifest.yaml`` echoing the
resolved configuration, and embeds the same resolved parameters as ``#``
comments in the CSV itself. Exit codes: 0 success, 1 usage error, 2
domain/model error (the message names the failing operation).
"""

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .analysis import extract_fom, fom_report, load_spectrum
from .config import Config, default_config, flatten, load_config
from .critical_field import (
    ag_fit,
    coherence_length,
    linear_fit_intercepts,
    load_tc_field_csv,
    whh_bc0,
)
from .errors import ModelError
from .materials import Environment
from .network import bandgap_center, save_spectrum, spectrum_sweep
from .noise import delta_snr, delta_snr_band_mean, vortex_entry_field


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1 (argparse defaults to 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _config_comments(cfg: Config):
    return [f"{key} = {value!r}" for key, value in flatten(cfg.raw)]


def _write_rows(path, header, rows, comments):
    lines = [f"# {c}" for c in comments]
    lines.append(header)
    for row in rows:
        lines.append(",".join(f"{float(v)!r}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_manifest(out_path, command, cfg: Config, extra=None):
    manifest = {
        "command": command,
        "config": cfg.raw,
        "outputs": [str(out_path)],
        "version": __version__,
    }
    if extra:
        manifest.update(extra)
    path = Path(out_path).with_suffix(".manifest.yaml")
    path.write_text(yaml.safe_dump(manifest, sort_keys=True), encoding="utf-8")
    return path


def _band_mean_db(spectrum, f_lo, f_hi):
    db = spectrum.values_db()
    mask = (spectrum.frequencies >= f_lo) & (spectrum.frequencies <= f_hi)
    return float(np.mean(db[mask]))


def _env_with_field(cfg: Config, b, orientation):
    t = cfg.num("environment", "temperature_k")
    if orientation == "perp":
        return Environment(temperature=t, b_perp=float(b), b_par=cfg.num("environment", "b_par_t"))
    if orientation == "par":
        return Environment(temperature=t, b_perp=cfg.num("environment", "b_perp_t"), b_par=float(b))
    raise ModelError(f"unknown field orientation {orientation!r}", op="cli.sweep_field")


def _warn_extrapolation(env):
    if env.is_combined_field:
        print(
            "note: both field components are nonzero; combined-field gap "
            "suppression is an extrapolation",
            file=sys.stderr,
        )


def cmd_spectrum(cfg: Config, args):
    out = args.out or "spectrum.csv"
    env = cfg.environment
    _warn_extrapolation(env)
    grid = cfg.frequency_grid(wide=args.wide)
    spec = spectrum_sweep(
        (cfg.strip, cfg.ground), cfg.geometry, cfg.layout, env, grid,
        z_env=cfg.num("sweep", "z_env_ohm"),
    )
    save_spectrum(spec, out, comments=_config_comments(cfg))
    _write_manifest(out, "spectrum", cfg)
    print(f"wrote {len(grid)} points to {out}")
    print(f"mean_s21_db[4-8GHz] = {_band_mean_db(spec, 4e9, 8e9)!r}")
    return 0


def cmd_sweep_temp(cfg: Config, args):
    out = args.out or "sweep_temp.csv"
    grid = cfg.frequency_grid()
    rows = []
    for t in cfg.temperature_grid():
        env = Environment(temperature=float(t), b_perp=cfg.num("environment", "b_perp_t"),
                          b_par=cfg.num("environment", "b_par_t"))
        spec = spectrum_sweep(
            (cfg.strip, cfg.ground), cfg.geometry, cfg.layout, env, grid, z_env=cfg.num("sweep", "z_env_ohm")
        )
        rows.append((t, _band_mean_db(spec, cfg.num("sweep", "f_min_hz"), cfg.num("sweep", "f_max_hz"))))
    _write_rows(out, "temperature_k,mean_s21_db", rows, _config_comments(cfg))
    _write_manifest(out, "sweep-temp", cfg)
    print(f"wrote {len(rows)} temperatures to {out}")
    return 0


def cmd_sweep_field(cfg: Config, args):
    out = args.out or "sweep_field.csv"
    orientation = args.orientation or cfg.section("sweep")["field_orientation"]
    grid = cfg.frequency_grid()
    rows = []
    for b in cfg.field_grid():
        env = _env_with_field(cfg, b, orientation)
        _warn_extrapolation(env)
        spec = spectrum_sweep(
            (cfg.strip, cfg.ground), cfg.geometry, cfg.layout, env, grid,
            z_env=cfg.num("sweep", "z_env_ohm"), orientation="both",
        )
        rows.append((b, _band_mean_db(spec, cfg.num("sweep", "f_min_hz"), cfg.num("sweep", "f_max_hz"))))
    _write_rows(out, f"b_{orientation}_t,mean_s21_db", rows, _config_comments(cfg))
    _write_manifest(out, "sweep-field", cfg, extra={"orientation": orientation})
    print(f"wrote {len(rows)} fields to {out}")
    return 0


def cmd_bandgap(cfg: Config, args):
    out = args.out or "bandgap.csv"
    env = cfg.environment
    _warn_extrapolation(env)
    spec = spectrum_sweep(
        (cfg.strip, cfg.ground), cfg.geometry, cfg.layout, env, cfg.frequency_grid(wide=True),
        z_env=cfg.num("sweep", "z_env_ohm"),
    )
    center = bandgap_center(spec)
    save_spectrum(spec, out, comments=_config_comments(cfg))
    _write_manifest(out, "bandgap", cfg, extra={"bandgap_center_hz": center})
    if center is None:
        print("bandgap: not found (no dip deeper than 10 dB)")
    else:
        print(f"bandgap_center_hz = {center!r}")
    return 0


def cmd_dsnr_model(cfg: Config, args):
    out = args.out or "dsnr_model.csv"
    model = cfg.noise_model
    f_signal = cfg.num("noise", "f_signal_hz")
    rows = []
    for t in cfg.temperature_grid():
        if args.band_mean:
            v = delta_snr_band_mean(
                model, float(t),
                f_min=cfg.num("sweep", "f_min_hz"), f_max=cfg.num("sweep", "f_max_hz"),
            )
        else:
            v = delta_snr(model, f_signal, float(t))
        rows.append((t, v))
    _write_rows(out, "temperature_k,dsnr_db", rows, _config_comments(cfg))
    _write_manifest(out, "dsnr-model", cfg, extra={"band_mean": bool(args.band_mean)})
    print(f"wrote {len(rows)} temperatures to {out}")
    return 0


def cmd_vortex_field(cfg: Config, args):
    out = args.out or "vortex_field.csv"
    h_s = vortex_entry_field(cfg.vortex_strip)
    _write_rows(out, "vortex_entry_field_t", [(h_s,)], _config_comments(cfg))
    _write_manifest(out, "vortex-field", cfg, extra={"vortex_entry_field_t": h_s})
    print(f"vortex_entry_field_mt = {h_s * 1e3:.2f}")
    return 0


def cmd_fit_bc(cfg: Config, args):
    out = args.out or "fit_bc.csv"
    if args.data is not None:
        data = load_tc_field_csv(args.data)
    else:
        with resources.as_file(resources.files("twpasim.data") / "nbtin_tc_vs_b.csv") as p:
            data = load_tc_field_csv(p)
    if args.tc0 is not None:
        tc0 = float(args.tc0)
    else:
        at_zero = np.flatnonzero(data.b == 0.0)
        if len(at_zero) == 0:
            raise ModelError(
                "no zero-field row in the data; pass --tc0 explicitly", op="cli.fit_bc"
            )
        tc0 = float(data.tc[at_zero[0]])

    lin = linear_fit_intercepts(data)
    report = ag_fit(data, tc0)
    xi = coherence_length(report.fit.bc_zero_tc)
    rows = [
        ("tc0_k", tc0),
        ("linear_slope_t_per_k", lin.slope),
        ("linear_b_intercept_t", lin.b_intercept),
        ("linear_tc_intercept_k", lin.tc_intercept),
        ("whh_bc0_t", whh_bc0(tc0, lin.slope)),
        ("ag_bc_zero_tc_t", report.fit.bc_zero_tc),
        ("ag_residual_k2", report.residual),
        ("coherence_length_m", xi),
    ]
    lines = [f"# {c}" for c in _config_comments(cfg)]
    lines.append("parameter,value")
    lines.extend(f"{name},{float(v)!r}" for name, v in rows)
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_manifest(out, "fit-bc", cfg, extra={"data": str(args.data) if args.data else "packaged:nbtin"})
    for name, v in rows:
        print(f"{name} = {float(v)!r}")
    return 0


def cmd_analyze(cfg: Config, args):
    out = args.out or "fom.txt"
    dsnr = load_spectrum(args.dsnr, kind="dsnr_db")
    gain = load_spectrum(args.gain, kind="gain_db") if args.gain else None
    result = extract_fom(dsnr, gain)
    text = fom_report(result)
    Path(out).write_text("".join(f"# {c}\n" for c in _config_comments(cfg)) + text, encoding="utf-8")
    _write_manifest(out, "analyze", cfg)
    print(text, end="")
    return 0


def build_parser():
    parser = _Parser(prog="twpasim", description="KI-TWPA transmission simulator and analysis toolkit")
    parser.add_argument("--version", action="version", version=f"twpasim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML config overlay file")
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config value (dotted key)")

    p = sub.add_parser("spectrum", help="S21 over a frequency grid at fixed T, B")
    common(p)
    p.add_argument("--wide", action="store_true", help="use the wide frequency grid")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep-temp", help="mean in-band S21 versus temperature")
    common(p)
    p.set_defaults(func=cmd_sweep_temp)

    p = sub.add_parser("sweep-field", help="mean in-band S21 versus magnetic field")
    common(p)
    p.add_argument("--orientation", choices=["perp", "par"], help="swept field direction")
    p.set_defaults(func=cmd_sweep_field)

    p = sub.add_parser("bandgap", help="locate the stopband on the wide grid")
    common(p)
    p.set_defaults(func=cmd_bandgap)

    p = sub.add_parser("dsnr-model", help="modeled SNR improvement versus temperature")
    common(p)
    p.add_argument("--band-mean", action="store_true", help="average over the in-band grid instead of f_signal")
    p.set_defaults(func=cmd_dsnr_model)

    p = sub.add_parser("vortex-field", help="vortex entry field of the strip")
    common(p)
    p.set_defaults(func=cmd_vortex_field)

    p = sub.add_parser("fit-bc", help="critical-field fits from Tc(B) data")
    common(p)
    p.add_argument("--data", help="CSV with header b_tesla,tc_kelvin (default: packaged NbTiN-like set)")
    p.add_argument("--tc0", type=float, help="zero-field Tc (default: the b = 0 row)")
    p.set_defaults(func=cmd_fit_bc)

    p = sub.add_parser("analyze", help="figure-of-merit extraction from a spectrum CSV")
    common(p)
    p.add_argument("--dsnr", required=True, help="SNR-improvement spectrum CSV")
    p.add_argument("--gain", help="optional gain spectrum CSV for the in-band gain mean")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config, args.overrides)
        return args.func(cfg, args)
    except ModelError as exc:
        op = exc.op or "model"
        print(f"twpasim: error in {op}: {exc}", file=sys.stderr)
        return 2


def entry():  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
