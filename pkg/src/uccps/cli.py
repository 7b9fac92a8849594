"""Command line driver: single points, PEC scans, and method tables."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from .bench import (RunConfig, System, load_config, load_presets,
                    run_all_methods, scan_pec, scan_rows_to_csv)


def _write(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _merge_config(args, need_fcidump=True):
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = RunConfig(methods=[])
    if args.fcidump:
        cfg.fcidump = args.fcidump
    if args.method:
        cfg.methods = list(args.method)
    if args.frozen is not None:
        cfg.n_frozen = args.frozen
    if args.out:
        cfg.out = args.out
    if not cfg.methods:
        raise SystemExit("no methods requested (use --method or --config)")
    if need_fcidump and not cfg.fcidump:
        raise SystemExit("no FCIDUMP given (use --fcidump or --config)")
    cfg.__post_init__()
    return cfg


def cmd_run(args):
    cfg = _merge_config(args)
    system = System(cfg.fcidump, cfg.n_frozen, cfg.fci_policy)
    results = run_all_methods(cfg, system=system)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["method", "e_total", "e_corr", "pct_corr", "converged",
                     "wall_time_s", "e4s", "e5", "e6"])
    for res in results:
        extra = res.correction_breakdown or {}
        writer.writerow([
            res.method, f"{res.e_total:.10f}", f"{res.e_corr:.10f}",
            f"{res.pct_corr:.4f}" if res.pct_corr is not None else "",
            res.converged, f"{res.wall_time:.2f}",
            *(f"{extra[k]:.10f}" if k in extra else "" for k in ("e4s", "e5", "e6"))])
    _write(buf.getvalue(), cfg.out)
    if cfg.out:
        _write_summary(cfg, system, results, Path(cfg.out))
    if args.amplitudes_out:
        _export_amplitudes(cfg, system, Path(args.amplitudes_out))
    return 0 if all(r.converged for r in results) else 1


def _write_summary(cfg, system, results, out_path):
    """Machine-readable record of the run next to the CSV."""
    import json
    record = {
        "fcidump": str(cfg.fcidump),
        "n_frozen": cfg.n_frozen,
        "fci_policy": cfg.fci_policy,
        "e_hf": system.e_hf,
        "results": [{
            "method": r.method, "e_total": r.e_total, "e_corr": r.e_corr,
            "pct_corr": r.pct_corr, "converged": r.converged,
            "wall_time_s": r.wall_time,
            "correction_breakdown": r.correction_breakdown,
        } for r in results],
    }
    path = out_path.with_suffix(out_path.suffix + ".summary.json")
    path.write_text(json.dumps(record, indent=1) + "\n", encoding="utf-8")


def _export_amplitudes(cfg, system, out_dir):
    """Converged doubles parameters in the amplitude text format."""
    from .ansatz import params_to_t2, save_amplitudes
    from .bench import UCC_KINDS, parse_method
    out_dir.mkdir(parents=True, exist_ok=True)
    for label in cfg.methods:
        base, _ = parse_method(label)
        if base not in UCC_KINDS or base.endswith("SD"):
            continue
        cached = system._vqe_cache.get((base, True))
        if cached is None:
            continue
        gens, res = cached
        save_amplitudes(params_to_t2(gens, res.params),
                        str(out_dir / f"{base}.amps"))


def cmd_scan(args):
    cfg = _merge_config(args, need_fcidump=False)
    if not cfg.scan:
        raise SystemExit("scan requires a --config with a scan list")
    rows = scan_pec(cfg)
    _write(scan_rows_to_csv(rows), cfg.out)
    return 0 if all(res.converged for _, _, res in rows) else 1


def cmd_corrections(args):
    """Singles corrections from an externally supplied amplitude table."""
    from .ansatz import load_amplitudes
    from .fcidump import freeze_core, load_fcidump
    from .hamiltonian import denominators, to_spin_orbital
    from .singles import corrections

    ints = freeze_core(load_fcidump(args.fcidump), args.frozen or 0)
    h = to_spin_orbital(ints)
    amps = load_amplitudes(args.amplitudes)
    corr = corrections(h, amps, denominators(h))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["e4s", "e5", "e6", "e6s"])
    writer.writerow([f"{corr.e4s:.12f}", f"{corr.e5:.12f}",
                     f"{corr.e6:.12f}", f"{corr.e6s:.12f}"])
    _write(buf.getvalue(), args.out)
    return 0


def cmd_table(args):
    presets = load_presets(args.presets)
    keys = args.system or sorted(presets)
    methods = list(args.method) if args.method else ["MP2", "CCD", "CCSD", "FCI"]
    base_cfg = load_config(args.config) if args.config else RunConfig(methods=methods)
    all_ok = True
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["system", "method", "e_total", "e_corr", "pct_corr",
                     "converged"])
    for key in keys:
        entry = presets[key]
        cfg = RunConfig(fcidump=entry["fcidump"], n_frozen=entry["n_frozen"],
                        methods=methods, fci_policy=entry["fci_policy"],
                        vqe=base_cfg.vqe, cc=base_cfg.cc)
        system = System(cfg.fcidump, cfg.n_frozen, cfg.fci_policy)
        for res in run_all_methods(cfg, system=system):
            all_ok = all_ok and res.converged
            writer.writerow([
                key, res.method, f"{res.e_total:.10f}", f"{res.e_corr:.10f}",
                f"{res.pct_corr:.4f}" if res.pct_corr is not None else "",
                res.converged])
    _write(buf.getvalue(), args.out)
    return 0 if all_ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="uccps",
        description="UCC doubles with perturbative singles corrections: "
                    "single points, PEC scans, percent-correlation tables")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run methods on one FCIDUMP")
    run_p.add_argument("--fcidump")
    run_p.add_argument("--config", help="JSON run configuration")
    run_p.add_argument("--method", action="append",
                       help="method label, repeatable (e.g. UCCD[6S])")
    run_p.add_argument("--frozen", type=int, default=None,
                       help="number of frozen core orbitals")
    run_p.add_argument("--out", help="output CSV path (default stdout); a "
                       "machine-readable .summary.json lands next to it")
    run_p.add_argument("--amplitudes-out", default=None,
                       help="directory for converged doubles amplitude tables")
    run_p.set_defaults(func=cmd_run)

    scan_p = sub.add_parser("scan", help="warm-started PEC scan")
    scan_p.add_argument("--config", required=True)
    scan_p.add_argument("--fcidump", help=argparse.SUPPRESS)
    scan_p.add_argument("--method", action="append")
    scan_p.add_argument("--frozen", type=int, default=None)
    scan_p.add_argument("--out")
    scan_p.set_defaults(func=cmd_scan)

    corr_p = sub.add_parser(
        "corrections",
        help="singles corrections from an amplitude text table")
    corr_p.add_argument("--fcidump", required=True)
    corr_p.add_argument("--amplitudes", required=True,
                        help="'i j a b value' table (0-based spin orbitals)")
    corr_p.add_argument("--frozen", type=int, default=0)
    corr_p.add_argument("--out")
    corr_p.set_defaults(func=cmd_corrections)

    table_p = sub.add_parser("table",
                             help="percent-correlation matrix over presets")
    table_p.add_argument("--presets", default="data/presets.json")
    table_p.add_argument("--system", action="append",
                         help="preset key, repeatable (default: all)")
    table_p.add_argument("--method", action="append")
    table_p.add_argument("--config")
    table_p.add_argument("--out")
    table_p.set_defaults(func=cmd_table)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
