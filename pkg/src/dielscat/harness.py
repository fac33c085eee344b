"""Experiment runner: scattering runs, convergence studies, reports, CLI.

A run sweeps (formulation, resolution) cells for one physical setup:
assemble, solve with full GMRES at the configured tolerance, form the
far field, and measure the maximum far-field deviation eps_inf against a
reference solution. The reference protocol is a refined solve of the
single-equation formulation: SCFIE at twice the largest requested
resolution with GMRES tolerance 1e-12 (overridable).

Resolutions are specified as nominal unknown counts 4n, the block-system
size of the two-density formulations; the single-density SCFIE uses 2n
unknowns on the same grid. For high-contrast runs with k1 > k2 the
CFIESK tolerance is automatically tightened by two orders of magnitude,
matching its observed accuracy lag; an explicit tol_cfiesk overrides
this.

Reports serialize to CSV (one row per cell, provenance in # comments)
and JSON; the provenance block echoes the configuration in the same flat
key=value format the config-file reader accepts, so a report can be
re-run verbatim.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from . import __version__
from .formulations import (FORMULATIONS, OperatorCache, ProblemParams,
                           assemble_system)
from .geometry import load_curve_table, make_curve
from .linsolve import gmres
from .postprocess import FarFieldPattern, far_field, far_field_error
from .trigtools import Grid

__all__ = ["ExperimentConfig", "CellResult", "RunReport", "run_experiment",
           "convergence_study", "write_report_csv", "write_report_json",
           "format_table", "parse_config_text", "format_config_text", "main"]


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one scattering experiment."""

    geometry: str = "kite"
    omega: float = 8.0
    eps1: float = 1.0
    eps2: float = 4.0
    polarization: str = "H"           # nu = 1 (E) or eps1/eps2 (H)
    formulations: tuple = FORMULATIONS
    unknowns: tuple = (512,)          # nominal 4n values
    tol: float = 1e-8
    tol_cfiesk: float | None = None   # None -> auto (tol, or tol/100 if k1>k2)
    kappa: str | complex = "auto"
    eta: str | float = "auto"
    dirs: int = 360
    ref_factor: int = 2
    ref_tol: float = 1e-12
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        for u in self.unknowns:
            if u % 4:
                raise ValueError("unknown counts must be multiples of 4")
        for f in self.formulations:
            if f not in FORMULATIONS:
                raise ValueError(f"unknown formulation {f!r}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.dirs < 1:
            raise ValueError("need at least one far-field direction")

    def params(self) -> ProblemParams:
        return ProblemParams.from_physics(
            self.omega, self.eps1, self.eps2, self.polarization,
            kappa=self.kappa, eta=self.eta)

    def curve(self):
        if self.geometry.startswith("file:"):
            return load_curve_table(self.geometry[5:])
        name = {"kite": "kite", "petal": "five_petal",
                "five_petal": "five_petal", "circle": "circle"}.get(
                    self.geometry)
        if name is None:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        return make_curve(name)

    def cell_tol(self, formulation: str) -> float:
        if formulation != "CFIESK":
            return self.tol
        if self.tol_cfiesk is not None:
            return self.tol_cfiesk
        p = self.params()
        return self.tol * 1e-2 if p.k1 > p.k2 else self.tol


@dataclass
class CellResult:
    """One (formulation, resolution) outcome."""

    formulation: str
    unknowns_nominal: int     # 4n, the paper-style column value
    unknowns: int             # actual system size (2n for SCFIE)
    n: int
    iterations: int
    eps_inf: float
    tol: float
    wall_time_s: float
    converged: bool
    final_residual: float


@dataclass
class RunReport:
    """All cells of one experiment plus provenance."""

    cells: list
    reference: str
    provenance: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)

    def cell(self, formulation: str, unknowns_nominal: int) -> CellResult:
        for c in self.cells:
            if (c.formulation, c.unknowns_nominal) == (formulation,
                                                       unknowns_nominal):
                return c
        raise KeyError((formulation, unknowns_nominal))


def _reference_pattern(config: ExperimentConfig, params, curve) -> tuple:
    n_ref = config.ref_factor * max(u // 4 for u in config.unknowns)
    grid = Grid(n_ref)
    cache = OperatorCache(curve, grid)
    system = assemble_system("SCFIE", params, curve, grid, cache)
    report = gmres(system.matrix, system.rhs, tol=config.ref_tol)
    if not report.converged:
        raise RuntimeError("reference SCFIE solve did not converge")
    pattern = far_field(system, report.solution, curve, config.dirs, cache)
    label = (f"SCFIE n={n_ref} ({config.ref_factor}x finest), "
             f"tol={config.ref_tol:g}")
    return pattern, label


def solve_cell(config: ExperimentConfig, params, curve, formulation: str,
               n: int, cache: OperatorCache,
               reference: FarFieldPattern) -> CellResult:
    grid = Grid(n)
    tol = config.cell_tol(formulation)
    t0 = time.perf_counter()
    system = assemble_system(formulation, params, curve, grid, cache)
    report = gmres(system.matrix, system.rhs, tol=tol)
    pattern = far_field(system, report.solution, curve, config.dirs, cache)
    wall = time.perf_counter() - t0
    eps = far_field_error(pattern, reference)
    final = float(report.residual_history[-1]) if report.iterations else 0.0
    return CellResult(formulation=formulation, unknowns_nominal=4 * n,
                      unknowns=system.unknowns, n=n,
                      iterations=report.iterations, eps_inf=eps, tol=tol,
                      wall_time_s=wall, converged=report.converged,
                      final_residual=final)


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Execute every (formulation, resolution) cell of a configuration.

    Non-convergent cells are recorded (converged=False) and the run
    continues. Results are deterministic: iteration counts reproduce
    exactly, far-field errors to roundoff.
    """
    params = config.params()
    curve = config.curve()
    reference, ref_label = _reference_pattern(config, params, curve)
    cells = []
    caches = {}
    for u in config.unknowns:
        n = u // 4
        cache = caches.setdefault(n, OperatorCache(curve, Grid(n)))
        for formulation in config.formulations:
            cells.append(solve_cell(config, params, curve, formulation, n,
                                    cache, reference))
    provenance = {
        "config": format_config_text(config),
        "version": __version__,
        "k1": params.k1, "k2": params.k2, "nu": params.nu,
        "kappa": [params.kappa.real, params.kappa.imag], "eta": params.eta,
    }
    return RunReport(cells=cells, reference=ref_label, provenance=provenance)


def convergence_study(config: ExperimentConfig) -> RunReport:
    """Run a resolution ladder and fit empirical convergence orders.

    Needs at least three ladder points. For each formulation the
    observed order between consecutive resolutions is
    log(eps_i / eps_{i+1}) / log(n_{i+1} / n_i); a final flag marks
    superalgebraic behavior (orders increasing along the ladder).
    """
    if len(config.unknowns) < 3:
        raise ValueError("convergence study needs at least 3 resolutions")
    report = run_experiment(config)
    ladder = sorted(set(config.unknowns))
    for f in config.formulations:
        eps = np.array([report.cell(f, u).eps_inf for u in ladder])
        ns = np.array([u // 4 for u in ladder], dtype=float)
        with np.errstate(divide="ignore"):
            orders = np.log(eps[:-1] / eps[1:]) / np.log(ns[1:] / ns[:-1])
        report.orders[f] = {
            "orders": orders.tolist(),
            "superalgebraic": bool(np.all(np.diff(orders) > 0)),
        }
    return report


# ---------------------------------------------------------------------------
# Config round trip
# ---------------------------------------------------------------------------
_LIST_KEYS = {"formulations", "unknowns"}


def format_config_text(config: ExperimentConfig) -> str:
    """Flat key=value text; the inverse of :func:`parse_config_text`."""
    lines = []
    for key, val in asdict(config).items():
        if key in _LIST_KEYS:
            val = ",".join(str(v) for v in val)
        elif isinstance(val, complex):
            val = f"{val.real:g},{val.imag:g}"
        elif val is None:
            val = "auto" if key in ("tol_cfiesk", "eta", "kappa") else ""
        lines.append(f"{key}={val}")
    return "\n".join(lines)


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse flat key=value lines (comments with #, blank lines ignored)."""
    raw = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {line!r}")
        key, val = line.split("=", 1)
        raw[key.strip()] = val.strip()
    return _config_from_strings(raw)


def _config_from_strings(raw: dict) -> ExperimentConfig:
    kw = {}
    for key, val in raw.items():
        if key == "geometry":
            kw[key] = val
        elif key in ("omega", "eps1", "eps2", "tol", "ref_tol"):
            kw[key] = float(val)
        elif key == "polarization":
            kw[key] = val
        elif key == "formulations":
            kw[key] = tuple(v.strip().upper() for v in val.split(",") if v)
        elif key == "unknowns":
            kw[key] = tuple(int(v) for v in val.split(",") if v)
        elif key == "tol_cfiesk":
            kw[key] = None if val in ("", "auto") else float(val)
        elif key == "kappa":
            kw[key] = "auto" if val == "auto" else _parse_complex(val)
        elif key == "eta":
            kw[key] = "auto" if val == "auto" else float(val)
        elif key in ("dirs", "ref_factor"):
            kw[key] = int(val)
        elif key == "out":
            kw[key] = val or None
        elif key == "format":
            kw[key] = val
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ExperimentConfig(**kw)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected re,im but got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


# ---------------------------------------------------------------------------
# Report output
# ---------------------------------------------------------------------------
_CSV_COLUMNS = ["formulation", "unknowns_nominal", "unknowns", "n",
                "iterations", "eps_inf", "tol", "wall_time_s", "converged",
                "final_residual"]


def write_report_csv(report: RunReport, path) -> None:
    with open(path, "w") as fh:
        for line in report.provenance["config"].splitlines():
            fh.write(f"# {line}\n")
        fh.write(f"# reference={report.reference}\n")
        fh.write(f"# version={report.provenance['version']}\n")
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for c in report.cells:
            row = [getattr(c, col) for col in _CSV_COLUMNS]
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def write_report_json(report: RunReport, path) -> None:
    doc = {
        "cells": [asdict(c) for c in report.cells],
        "reference": report.reference,
        "provenance": report.provenance,
        "orders": report.orders,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def format_table(report: RunReport, formulations=None) -> str:
    """Paper-style table: one row per resolution, iter/eps per formulation."""
    forms = list(formulations or dict.fromkeys(c.formulation
                                               for c in report.cells))
    sizes = sorted(dict.fromkeys(c.unknowns_nominal for c in report.cells))
    head = "Unknowns" + "".join(f" | {f:^22s}" for f in forms)
    sub = " " * 8 + "".join(f" | {'Iter.':>8s} {'eps_inf':>13s}"
                            for _ in forms)
    lines = [head, sub, "-" * len(sub)]
    for u in sizes:
        row = f"{u:8d}"
        for f in forms:
            try:
                c = report.cell(f, u)
                mark = "" if c.converged else "!"
                row += f" | {c.iterations:>7d}{mark:1s} {c.eps_inf:13.3e}"
            except KeyError:
                row += " | " + " " * 22
        lines.append(row)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------
def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dielscat",
        description="Transmission-scattering experiment runner")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--geometry",
                   help="kite | petal | circle | file:PATH")
    p.add_argument("--omega", type=float)
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--polarization", choices=["E", "H"])
    p.add_argument("--formulations",
                   help="comma list from CFIESK,SCFIE,GCSIE,PSGCSIE")
    p.add_argument("--unknowns", help="comma list of 4n unknown counts")
    p.add_argument("--tol", type=float)
    p.add_argument("--tol-cfiesk", dest="tol_cfiesk",
                   help="CFIESK GMRES tolerance, or 'auto'")
    p.add_argument("--kappa", help="'auto' or re,im")
    p.add_argument("--eta", help="'auto' or a real value")
    p.add_argument("--dirs", type=int, help="number of far-field directions")
    p.add_argument("--out", help="report output path")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--convergence", action="store_true",
                   help="fit empirical convergence orders (needs >= 3 sizes)")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    raw = {}
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line and "=" in line:
                key, val = line.split("=", 1)
                raw[key.strip()] = val.strip()
    for key in ("geometry", "omega", "eps1", "eps2", "polarization",
                "formulations", "unknowns", "tol", "tol_cfiesk", "kappa",
                "eta", "dirs", "out", "format"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = str(val)
    config = _config_from_strings(raw)
    runner = convergence_study if args.convergence else run_experiment
    report = runner(config)
    print(f"geometry={config.geometry} omega={config.omega:g} "
          f"eps=({config.eps1:g},{config.eps2:g}) "
          f"polarization={config.polarization}")
    print(f"reference: {report.reference}")
    print(format_table(report, config.formulations))
    if report.orders:
        for f, d in report.orders.items():
            orders = ", ".join(f"{o:.2f}" for o in d["orders"])
            tag = "superalgebraic" if d["superalgebraic"] else "steady"
            print(f"observed order {f}: {orders} ({tag})")
    if config.out:
        if config.format == "csv":
            write_report_csv(report, config.out)
        else:
            write_report_json(report, config.out)
        print(f"report written to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
