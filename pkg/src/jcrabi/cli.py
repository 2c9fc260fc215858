"""Command line front end.

Subcommands: spectrum | berry | surfaces | convergence | crossing | verify.
Configuration comes from flags or a single JSON file (--config); flags
override the file.  Exit codes: 0 success, 1 usage error, 2 numerical
failure, 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__, acceptance, berry, spectra, surfaces
from .berry import (
    DegenerateLevelError,
    GaugeConvention,
    PARALLEL_TRANSPORT,
    TrackingError,
    anchor_component,
)
from .fock import TruncationConfig
from .linalg import ConvergenceError, HermiticityError
from .models import ModelKind, ModelParams
from .output import fmt, write_csv, write_json, write_svg_heatmap, write_svg_lines


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "jc"
    omega: float = 1.0
    Omega: float = 1.0
    g: float = 0.1
    n_max: int = 200
    k_levels: int = 11
    phi_nodes: int = 720
    gauge: str = "anchor"
    level: int = 1
    output_dir: str = "."
    format: str = "csv"

    def validate(self):
        if self.model not in ("jc", "rabi", "both"):
            raise UsageError(f"model must be jc, rabi or both, got {self.model!r}")
        if self.omega <= 0:
            raise UsageError(f"omega must be positive, got {self.omega}")
        if self.Omega < 0:
            raise UsageError(f"Omega must be nonnegative, got {self.Omega}")
        if self.n_max < 1:
            raise UsageError(f"nmax must be >= 1, got {self.n_max}")
        if self.k_levels < 1:
            raise UsageError(f"levels must be >= 1, got {self.k_levels}")
        if self.phi_nodes < 16:
            raise UsageError(f"phi-nodes must be >= 16, got {self.phi_nodes}")
        if self.gauge not in ("anchor", "parallel"):
            raise UsageError(f"gauge must be anchor or parallel, got {self.gauge!r}")
        if self.level < 0:
            raise UsageError(f"level must be >= 0, got {self.level}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")

    def params(self) -> ModelParams:
        return ModelParams(Omega=self.Omega, g=self.g, omega=self.omega)

    def cfg(self) -> TruncationConfig:
        return TruncationConfig(self.n_max)

    def gauge_convention(self) -> GaugeConvention:
        return PARALLEL_TRANSPORT if self.gauge == "parallel" else anchor_component()

    def metadata(self, **extra) -> dict:
        meta = {"jcrabi": __version__}
        meta.update(asdict(self))
        meta.update(extra)
        return meta


def _load_config(args) -> RunConfig:
    values = {}
    if args.config:
        try:
            values = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        unknown = set(values) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(**values)
    overrides = {
        "model": args.model,
        "omega": args.omega,
        "Omega": args.Omega,
        "n_max": args.nmax,
        "k_levels": args.levels,
        "phi_nodes": args.phi_nodes,
        "gauge": args.gauge,
        "level": args.level,
        "output_dir": args.out,
    }
    g_flag = getattr(args, "g", None)
    if g_flag is not None:
        overrides["g"] = g_flag[0] if isinstance(g_flag, list) else g_flag
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    return cfg


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise UsageError(f"output directory {out} is not writable: {exc}") from exc
    return out


def _model_kinds(cfg: RunConfig):
    names = ("jc", "rabi") if cfg.model == "both" else (cfg.model,)
    return [ModelKind.of(name, "lab") for name in names]


def cmd_spectrum(cfg: RunConfig, g_min: float, g_max: float, g_step: float, svg: bool) -> int:
    if g_step <= 0 or g_max < g_min:
        raise UsageError("need g-step > 0 and g-max >= g-min")
    out = _out_dir(cfg)
    n_steps = int(round((g_max - g_min) / g_step))
    g_grid = np.round(g_min + g_step * np.arange(n_steps + 1), 12)
    tables = {}
    for kind in _model_kinds(cfg):
        table = spectra.spectrum_sweep(kind, cfg.params(), g_grid, cfg.k_levels, cfg.cfg())
        tables[kind.model] = table
        columns = ["g"] + [f"E{i}" for i in range(1, cfg.k_levels + 1)]
        rows = [[g, *row] for g, row in zip(table.g_values, table.levels)]
        path = write_csv(
            out / f"spectrum_{kind.model}.csv", columns, rows,
            cfg.metadata(command="spectrum", g_min=g_min, g_max=g_max, g_step=g_step,
                         this_model=kind.model),
        )
        print(f"wrote {path}")
    if svg and len(tables) == 2:
        series = []
        for name, table in tables.items():
            for j in range(cfg.k_levels):
                label = f"{name} E{j + 1}" if j == 0 else ""
                series.append((label, table.g_values, table.levels[:, j]))
        path = write_svg_lines(
            out / "spectrum_overlay.svg", series,
            "JC (green) vs Rabi (black) lowest levels", "g", "E",
            cfg.metadata(command="spectrum"),
        )
        print(f"wrote {path}")
    return 0


def cmd_berry(cfg: RunConfig, g_values, svg: bool) -> int:
    if cfg.model == "both":
        raise UsageError("berry tracks one model at a time; pick --model jc or rabi")
    out = _out_dir(cfg)
    gauge = cfg.gauge_convention()
    runs = []
    curves = []
    for g in g_values:
        if g < 0:
            raise UsageError(f"g must be >= 0, got {g}")
        p = ModelParams(Omega=cfg.Omega, g=g, omega=cfg.omega)
        fam = berry.eig_family(cfg.model, p, cfg.level, cfg.phi_nodes, cfg.cfg())
        conn = berry.connection_curve(fam, gauge)
        wilson = berry.wilson_loop(berry.gauge_fix(fam, gauge))
        generator = berry.generator_phase(cfg.model, p, cfg.level, cfg.cfg())
        summary = {
            "g": g,
            "wilson_gamma": wilson.gamma,
            "connection_gamma": conn.gamma,
            "connection_gamma_unwrapped": conn.gamma_unwrapped,
            "generator_gamma": generator,
            "residual": conn.residual,
            "gauge": conn.gauge,
            "min_step_overlap": fam.min_step_overlap,
        }
        runs.append(summary)
        suffix = "" if len(g_values) == 1 else f"_g{g:g}"
        meta = cfg.metadata(command="berry", g=g, gauge=conn.gauge, K=cfg.phi_nodes)
        path = write_csv(
            out / f"berry_curve{suffix}.csv", ["phi", "partial_phase"],
            conn.curve, meta,
        )
        curves.append((f"g={g:g}", conn.curve[:, 0], conn.curve[:, 1]))
        print(f"wrote {path}")
    payload = runs[0] if len(runs) == 1 else {"runs": runs}
    path = write_json(out / "berry_summary.json", payload, cfg.metadata(command="berry"))
    print(f"wrote {path}")
    if svg:
        path = write_svg_lines(
            out / "berry_curve.svg", curves,
            f"{cfg.model} level {cfg.level} accumulated phase ({cfg.gauge} gauge)",
            "phi", "gamma(phi)", cfg.metadata(command="berry"),
        )
        print(f"wrote {path}")
    return 0


def _parse_range(text: str, name: str):
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"{name} must look like lo:hi, got {text!r}") from exc
    if hi <= lo:
        raise UsageError(f"{name}: need hi > lo, got {text!r}")
    return lo, hi


def cmd_surfaces(cfg: RunConfig, x_range: str, p_range: str, resolution: int, svg: bool) -> int:
    if resolution < 2:
        raise UsageError(f"resolution must be >= 2, got {resolution}")
    out = _out_dir(cfg)
    x_lo, x_hi = _parse_range(x_range, "x-range")
    p_lo, p_hi = _parse_range(p_range, "p-range")
    x_axis = np.linspace(x_lo, x_hi, resolution)
    p_axis = np.linspace(p_lo, p_hi, resolution)
    for kind in _model_kinds(cfg):
        grid = surfaces.boa_surface(kind, cfg.params(), x_axis, p_axis)
        rows = [
            [x, p, grid.lower[i, j], grid.upper[i, j], grid.gap[i, j]]
            for i, x in enumerate(x_axis)
            for j, p in enumerate(p_axis)
        ]
        meta = cfg.metadata(command="surfaces", x_range=x_range, p_range=p_range,
                            resolution=resolution, this_model=kind.model)
        path = write_csv(out / f"surface_{kind.model}.csv",
                         ["x", "p", "E_minus", "E_plus", "gap"], rows, meta)
        print(f"wrote {path}")
        report = surfaces.classify_degeneracy(grid)
        payload = {
            "min_gap": report.min_gap,
            "locus": report.locus,
            "tol_gap": report.tol_gap,
            "n_minimal_cells": len(report.coordinates),
            "coordinates": [[x, p] for x, p in report.coordinates],
        }
        path = write_json(out / f"degeneracy_{kind.model}.json", payload, meta)
        print(f"wrote {path} (locus={report.locus}, min_gap={report.min_gap:.6g})")
        if svg:
            path = write_svg_heatmap(
                out / f"surface_gap_{kind.model}.svg", x_axis, p_axis, grid.gap,
                f"{kind.model} adiabatic gap", meta,
            )
            print(f"wrote {path}")
    return 0


def cmd_convergence(cfg: RunConfig, n_list) -> int:
    if cfg.model == "both":
        raise UsageError("convergence studies one model at a time; pick --model jc or rabi")
    out = _out_dir(cfg)
    kind = ModelKind.of(cfg.model, "lab")
    table = spectra.convergence_study(kind, cfg.params(), cfg.g, cfg.k_levels, n_list)
    columns = ["n_max"] + [f"E{i}" for i in range(1, cfg.k_levels + 1)] + ["max_change"]
    rows = []
    for i, n_max in enumerate(table.n_values):
        change = table.max_changes[i - 1] if i > 0 else float("nan")
        rows.append([n_max, *table.levels[i], change])
    meta = cfg.metadata(command="convergence", n_list=",".join(str(n) for n in n_list))
    path = write_csv(out / f"convergence_{kind.model}.csv", columns, rows, meta)
    print(f"wrote {path}")
    return 0


def cmd_crossing(cfg: RunConfig, g_lo: float, g_hi: float) -> int:
    out = _out_dir(cfg)
    res = spectra.ground_crossing(cfg.params(), cfg.cfg(), g_lo, g_hi)
    payload = {
        "analytic_g": res.analytic_g,
        "numerical_g": res.numerical_g,
        "quoted_g": res.quoted_g,
        "note": res.note,
    }
    path = write_json(out / "crossing.json", payload,
                      cfg.metadata(command="crossing", g_lo=g_lo, g_hi=g_hi))
    print(f"ground-state crossing: analytic g* = {res.analytic_g:.10f}, "
          f"numerical g* = {res.numerical_g:.10f}")
    print(res.note)
    print(f"wrote {path}")
    return 0


def cmd_verify(cfg: RunConfig, only) -> int:
    out = _out_dir(cfg)
    numbers = None
    if only:
        try:
            numbers = [int(tok) for tok in only.split(",") if tok.strip()]
        except ValueError as exc:
            raise UsageError(f"--only expects comma-separated criterion numbers: {exc}") from exc
    suite, results = acceptance.run_acceptance(numbers, k_nodes=cfg.phi_nodes)
    report = acceptance.format_report(results)
    print(report)
    (out / "verify_report.txt").write_text(report + "\n", newline="\n")
    print(f"wrote {out / 'verify_report.txt'}")
    if any(r.number == 12 for r in results):
        for path in suite.write_investigation_curves(out):
            print(f"wrote {path}")
    failed = [r for r in results if r.bound and not r.passed]
    return 3 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jcrabi", description=__doc__)
    parser.add_argument("--version", action="version", version=f"jcrabi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, multi_g=False):
        sp.add_argument("--model", choices=["jc", "rabi", "both"])
        if multi_g:
            sp.add_argument("--g", type=float, action="append")
        else:
            sp.add_argument("--g", type=float)
        sp.add_argument("--omega", type=float)
        sp.add_argument("--Omega", type=float)
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--levels", type=int)
        sp.add_argument("--phi-nodes", dest="phi_nodes", type=int)
        sp.add_argument("--gauge", choices=["parallel", "anchor"])
        sp.add_argument("--level", type=int)
        sp.add_argument("--out", type=str)
        sp.add_argument("--config", type=str)

    sp = sub.add_parser("spectrum", help="lowest-levels sweep over the coupling")
    add_common(sp)
    sp.add_argument("--g-min", type=float, default=0.0)
    sp.add_argument("--g-max", type=float, default=1.5)
    sp.add_argument("--g-step", type=float, default=0.01)
    sp.add_argument("--svg", action="store_true")

    sp = sub.add_parser("berry", help="geometric phase of a tracked level")
    add_common(sp, multi_g=True)
    sp.add_argument("--svg", action="store_true")

    sp = sub.add_parser("surfaces", help="adiabatic energy surfaces and gap locus")
    add_common(sp)
    sp.add_argument("--x-range", type=str, default="-3:3")
    sp.add_argument("--p-range", type=str, default="-3:3")
    sp.add_argument("--resolution", type=int, default=61)
    sp.add_argument("--svg", action="store_true")

    sp = sub.add_parser("convergence", help="spectrum vs Fock-space cutoff")
    add_common(sp)
    sp.add_argument("--n-list", type=str, default="100,200,300,500")

    sp = sub.add_parser("crossing", help="ground-state crossing coupling")
    add_common(sp)
    sp.add_argument("--g-lo", type=float, default=0.3)
    sp.add_argument("--g-hi", type=float, default=1.2)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    add_common(sp)
    sp.add_argument("--only", type=str, help="comma-separated criterion numbers")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        cfg = _load_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.g_min, args.g_max, args.g_step, args.svg)
        if args.command == "berry":
            g_values = args.g if args.g else [cfg.g]
            return cmd_berry(cfg, g_values, args.svg)
        if args.command == "surfaces":
            return cmd_surfaces(cfg, args.x_range, args.p_range, args.resolution, args.svg)
        if args.command == "convergence":
            n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
            return cmd_convergence(cfg, n_list)
        if args.command == "crossing":
            return cmd_crossing(cfg, args.g_lo, args.g_hi)
        if args.command == "verify":
            return cmd_verify(cfg, args.only)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (TrackingError, DegenerateLevelError, ConvergenceError, HermiticityError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def entry():  # console script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
