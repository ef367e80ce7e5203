"""Command line: ``mobius-dirac {geometry,gauge,spectrum,validate}``.

Exit codes: 0 success, 1 invalid configuration or usage, 2 I/O error,
3 hard-invariant failure.
"""
import argparse
import sys

import numpy as np

from . import dirac, gauge, geometry
from .config import RunConfig
from .errors import ConfigError, InvariantError, UsageError
from .serialize import column_summary, to_csv, to_json
from .validation import COLUMNS as VALIDATE_COLUMNS
from .validation import run_invariants

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


def geometry_table(cfg: RunConfig):
    params = cfg.strip_params()
    r, theta = gauge.grid_nodes(params, cfg.grid.n_r, cfg.grid.n_theta)
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    ff = geometry.fundamental_forms(params, rr, tt, cfg.physics.normal)
    if cfg.physics.mass_sign == "flipped":
        m_eff = geometry.mean_curvature_flipped(params, rr, tt)
    else:
        m_eff = geometry.curvatures(geometry.weingarten_closed(params, rr, tt))[0]
    columns = ["r", "theta", "K", "M", "m_eff", "g_det"]
    cols = [rr, tt, ff.K, ff.M, m_eff, ff.g_det]
    rows = np.stack([c.ravel() for c in cols], axis=1).tolist()
    return columns, rows, {"columns": column_summary(columns, rows), "normal": cfg.physics.normal}


def gauge_table(cfg: RunConfig):
    params = cfg.strip_params()
    closed = gauge.gauge_field_grid(params, cfg.grid.n_r, cfg.grid.n_theta, "closed-form")
    conn = gauge.gauge_field_grid(params, cfg.grid.n_r, cfg.grid.n_theta, "connection")
    rr, tt = closed.meshgrid()
    columns = ["r", "theta", "A_r", "A_s", "B_n", "A_r_conn", "A_s_conn", "B_n_conn"]
    cols = [rr, tt, closed.A_r, closed.A_s, closed.B_n, conn.A_r, conn.A_s, conn.B_n]
    rows = np.stack([c.ravel() for c in cols], axis=1).tolist()
    summaries = {
        "columns": column_summary(columns, rows),
        "field_character": gauge.field_character(closed).as_dict(),
        "lobes": gauge.sign_lobes(closed.B_n),
        "closed_vs_connection": {
            "max_abs_dA_r": float(np.abs(closed.A_r - conn.A_r).max()),
            "max_abs_dA_s": float(np.abs(closed.A_s - conn.A_s).max()),
        },
    }
    return columns, rows, summaries


def solve_sectors(cfg: RunConfig):
    params = cfg.strip_params()
    options = cfg.dirac_options()
    grid = dirac.DiracGrid(params, cfg.grid.n_r, cfg.grid.n_theta, options.boundary)
    ops, specs = {}, {}
    for s in cfg.sectors():
        ops[s] = dirac.assemble(params, grid, s, cfg.physics.mass, options)
        specs[s] = dirac.spectrum(ops[s], cfg.physics.count)
    return grid, options, ops, specs


def spectrum_table(cfg: RunConfig):
    grid, options, ops, specs = solve_sectors(cfg)
    columns = ["sector", "index", "energy", "mean_r", "edge_weight", "current"]
    rows = []
    for s, sp in specs.items():
        for i, E in enumerate(sp.eigenvalues):
            rows.append([s, i, float(E), float(sp.mean_r[i]), float(sp.edge_weight[i]), float(sp.current[i])])
    summaries = {
        "representation": dirac.REPRESENTATION,
        "dimension": int(2 * grid.size),
        "hermiticity": max(op.hermiticity_error() for op in ops.values()),
    }
    if len(specs) == 2:
        summaries["time_reversal_residual"] = float(np.abs(dirac.time_reversal_conjugate(ops[1]) - ops[-1].matrix).max())
        summaries["sector_pairing"] = dirac.sector_pairing(specs[1], specs[-1])
        sh = dirac.spin_hall_diagnostics(specs[1], specs[-1], cfg.physics.window, cfg.physics.emax)
        summaries["spin_hall"] = {k: v for k, v in sh.items() if k not in ("states", "pairs")}
    if options.metric == "flat" and options.boundary == "periodic":
        # compare |E|: a count cut inside a degenerate +-E multiplet may keep either member
        ref = np.sort(np.abs(dirac.flat_dispersion(grid, cfg.physics.mass, options.wilson)))[: cfg.physics.count]
        summaries["dispersion_deviation"] = max(float(np.abs(np.sort(np.abs(sp.eigenvalues)) - ref).max()) for sp in specs.values())
    return columns, rows, summaries


def validate_table(cfg: RunConfig):
    checks = run_invariants(cfg.strip_params())
    rows = [c.row() for c in checks]
    failed = [c.name for c in checks if c.kind == "hard" and not c.passed]
    summaries = {"hard_failures": failed, "n_checks": len(checks)}
    return VALIDATE_COLUMNS, rows, summaries


COMMANDS = {
    "geometry": geometry_table,
    "gauge": gauge_table,
    "spectrum": spectrum_table,
    "validate": validate_table,
}


def render(cfg: RunConfig, columns, rows, summaries) -> str:
    """Serialize one result.  The output path is not echoed, so the bytes
    depend only on the computation."""
    o = cfg.output
    if o.format == "json":
        config = cfg.as_dict()
        del config["output"]["path"]
        return to_json(config, columns, rows, summaries, o.precision)
    items = [(k, v) for k, v in cfg.flat_items() if k != "output.path"]
    return to_csv(items, columns, rows, o.precision)


def build_parser():
    ap = argparse.ArgumentParser(prog="mobius-dirac", description="Geometry, gauge field and Dirac spectrum of twisted strips.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("geometry", "curvature and metric field map"),
        ("gauge", "gauge potential, B_n and field classification"),
        ("spectrum", "sector spectra with pairing and spin-Hall diagnostics"),
        ("validate", "run the invariant suite"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="INI file with [strip], [grid], [physics], [output]")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override, e.g. grid.n_r=32 (repeatable)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (overrides output.format)")
        p.add_argument("--out", help="output file (overrides output.path; default stdout)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.set)
    if args.format:
        overrides.append(f"output.format={args.format}")
    if args.out:
        overrides.append(f"output.path={args.out}")
    try:
        cfg = RunConfig.load(args.config, overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    try:
        columns, rows, summaries = COMMANDS[args.command](cfg)
    except (ConfigError, UsageError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    text = render(cfg, columns, rows, summaries)
    path = cfg.output.path
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    _report(args.command, rows, summaries, sys.stderr if path is None else sys.stdout)
    if args.command == "validate" and summaries["hard_failures"]:
        return EXIT_INVARIANT
    return EXIT_OK


def _report(command, rows, summaries, stream):
    if command == "validate":
        for row in rows:
            name, kind, value, tol, status, detail = row
            print(f"{status:4s} {kind:4s} {name}: {value:.3g}" + (f" (tol {tol:g})" if kind == "hard" else "") + (f"  [{detail}]" if detail else ""), file=stream)
        return
    for name, st in summaries.get("columns", {}).items():
        print(f"{name:10s} min {st['min']:+.6g} max {st['max']:+.6g} mean {st['mean']:+.6g}", file=stream)
    for key in ("field_character", "sector_pairing", "spin_hall"):
        if key in summaries:
            items = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in summaries[key].items())
            print(f"{key}: {items}", file=stream)
    print(f"{len(rows)} rows", file=stream)


if __name__ == "__main__":
    sys.exit(main())
