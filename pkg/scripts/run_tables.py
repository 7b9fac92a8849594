#!/usr/bin/env python3
"""Reproduce the percent-correlation tables (equilibrium and stretched).

Writes results/table_equilibrium.csv and results/table_stretched.csv.
Run from the repository root: python scripts/run_tables.py [--quick]
"""

import argparse
import csv
import time
from pathlib import Path

from uccps.bench import RunConfig, System, load_presets, run_method
from uccps.vqe import VqeConfig

ROOT = Path(__file__).resolve().parents[1]

METHODS = ["UCCSD", "UCCD", "UCCD[4S]", "UCCD[6S]",
           "pUCCD", "pUCCD[4S]", "pUCCD[6S]",
           "tUCCSD", "tUCCD", "tUCCD[4S]", "tUCCD[6S]",
           "tpUCCD", "tpUCCD[4S]", "tpUCCD[6S]", "CCD", "CCSD"]
EQUILIBRIUM = ["c2__eq", "co__eq", "h2o__eq", "n2__eq", "o2__eq"]
STRETCHED = ["c2__stretch", "co__stretch", "n2__stretch", "o2__stretch",
             "h2o__stretch_s", "h2o__stretch_d"]


def run_table(presets, keys, methods, out_path):
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["system", "method", "e_total", "e_corr", "pct_corr",
                         "converged", "wall_time_s"])
        for key in keys:
            entry = presets[key]
            cfg = RunConfig(fcidump=entry["fcidump"],
                            n_frozen=entry["n_frozen"], methods=methods,
                            fci_policy=entry["fci_policy"],
                            vqe=VqeConfig(init="mp2-scaled"))
            system = System(cfg.fcidump, cfg.n_frozen, cfg.fci_policy)
            t0 = time.perf_counter()
            for label in methods:
                res = run_method(cfg, label, system=system)
                writer.writerow([key, label, f"{res.e_total:.10f}",
                                 f"{res.e_corr:.10f}", f"{res.pct_corr:.4f}",
                                 res.converged, f"{res.wall_time:.2f}"])
            print(f"{key:16s} done ({time.perf_counter() - t0:5.1f} s)")
    print(f"wrote {out_path}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="CC and paired methods only (no full-rank VQE)")
    args = parser.parse_args()
    methods = METHODS
    if args.quick:
        methods = ["pUCCD", "tpUCCD", "CCD", "CCSD"]
    presets = load_presets(ROOT / "data" / "presets.json")
    run_table(presets, EQUILIBRIUM, methods,
              ROOT / "results" / "table_equilibrium.csv")
    run_table(presets, STRETCHED, methods,
              ROOT / "results" / "table_stretched.csv")


if __name__ == "__main__":
    main()
