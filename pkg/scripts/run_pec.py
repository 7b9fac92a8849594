#!/usr/bin/env python3
"""Potential energy curves: LiF dissociation and H8 symmetric dissociation.

Writes results/pec_lif.csv and results/pec_h8.csv with warm-started VQE
along each scan.  Run from the repository root: python scripts/run_pec.py
"""

import time
from pathlib import Path

from uccps.bench import RunConfig, load_presets, scan_pec, scan_rows_to_csv
from uccps.vqe import VqeConfig

ROOT = Path(__file__).resolve().parents[1]

LIF_TAGS = ["r1.20", "r1.60", "r2.00", "r2.20", "r2.60", "r3.00",
            "r3.20", "r3.60"]
H8_TAGS = ["r1.00", "r1.25", "r1.50", "r1.75", "r2.00", "r2.50", "r3.00"]


def run_scan(presets, molecule, tags, n_frozen, methods, out_path):
    scan = [(tag, presets[f"{molecule}__{tag}"]["fcidump"]) for tag in tags]
    cfg = RunConfig(scan=scan, n_frozen=n_frozen, methods=methods,
                    vqe=VqeConfig(init="mp2-scaled"))
    t0 = time.perf_counter()
    rows = scan_pec(cfg)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    scan_rows_to_csv(rows, dest=out_path)
    bad = [(t, m) for t, m, r in rows if not r.converged]
    print(f"wrote {out_path} ({time.perf_counter() - t0:.0f} s)"
          + (f"; unconverged: {bad}" if bad else ""))


def main():
    presets = load_presets(ROOT / "data" / "presets.json")
    run_scan(presets, "lif", LIF_TAGS, 2,
             ["FCI", "UCCD", "UCCD[4S]", "UCCD[6S]", "UCCSD",
              "tUCCD", "tUCCD[4S]", "tUCCD[6S]", "tUCCSD"],
             ROOT / "results" / "pec_lif.csv")
    run_scan(presets, "h8", H8_TAGS, 0,
             ["FCI", "UCCD", "UCCD[4S]", "UCCD[6S]", "tUCCD", "tUCCD[4S]",
              "tUCCD[6S]", "CCD", "CCSD"],
             ROOT / "results" / "pec_h8.csv")


if __name__ == "__main__":
    main()
