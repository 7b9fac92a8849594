"""End-to-end orchestration: method dispatch, percent-correlation tables,
and warm-started potential energy scans."""

from __future__ import annotations

import csv
import io
import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import build_generators, params_to_t2
from .cc import CcConfig, ccd_solve, ccsd_solve
from .errors import ConvergenceError
from .fcidump import freeze_core, load_fcidump
from .fci import fci_ground_state
from .hamiltonian import denominators, mp2, to_spin_orbital
from .sector import enumerate_sector, hamiltonian_matrix
from .singles import corrections
from .vqe import VqeConfig, minimize

UCC_KINDS = {
    "UCCD": ("doubles-full", False),
    "tUCCD": ("doubles-full", True),
    "pUCCD": ("doubles-paired", False),
    "tpUCCD": ("doubles-paired", True),
    "UCCSD": ("singles+doubles-full", False),
    "tUCCSD": ("singles+doubles-full", True),
}
CORRECTABLE = {"UCCD", "tUCCD", "pUCCD", "tpUCCD"}
_METHOD_RE = re.compile(r"^(t?p?UCC(?:SD|D)|CCD|CCSD|MP2|FCI)"
                        r"(\[4S\]|\[6S\])?$")

CONNECTED_THRESHOLD = 1e-3


def parse_method(label: str):
    """Split a method label into (base, correction); validates the suffix."""
    m = _METHOD_RE.match(label)
    if not m:
        raise ValueError(f"unknown method label {label!r}")
    base, suffix = m.group(1), m.group(2)
    if suffix and base not in CORRECTABLE:
        raise ValueError(
            f"correction suffix only applies to UCC doubles methods, "
            f"not {base!r}")
    return base, (suffix or "").strip("[]") or None


@dataclass
class RunConfig:
    fcidump: str | None = None
    scan: list = field(default_factory=list)   # [(geometry_tag, path), ...]
    n_frozen: int = 0
    methods: list = field(default_factory=lambda: ["FCI"])
    vqe: VqeConfig = field(default_factory=lambda: VqeConfig(init="mp2-scaled"))
    cc: CcConfig = field(default_factory=CcConfig)
    fci_policy: str = "ground"     # or "connected"
    out: str | None = None

    def __post_init__(self):
        for label in self.methods:
            parse_method(label)
        if self.fci_policy not in ("ground", "connected"):
            raise ValueError(f"unknown fci_policy {self.fci_policy!r}")


@dataclass
class MethodResult:
    method: str
    e_total: float
    e_corr: float
    pct_corr: float | None
    converged: bool
    wall_time: float
    correction_breakdown: dict | None = None


def percent_correlation(e_method: float, e_hf: float, e_fci: float) -> float:
    """100 (E_method - E_HF) / (E_FCI - E_HF); above 100 means overshoot."""
    if not e_fci < e_hf:
        raise ValueError("percent correlation undefined: E_FCI >= E_HF")
    return 100.0 * (e_method - e_hf) / (e_fci - e_hf)


class System:
    """Shared per-FCIDUMP state: Hamiltonian, sector, and lazy references."""

    def __init__(self, fcidump_path, n_frozen=0, fci_policy="ground"):
        self.path = str(fcidump_path)
        self.integrals = freeze_core(load_fcidump(fcidump_path), n_frozen)
        self.h = to_spin_orbital(self.integrals)
        n_pair = self.h.n_occ // 2
        self.sector = enumerate_sector(self.h.n_so, n_pair, n_pair)
        self.h_matrix = hamiltonian_matrix(self.sector, self.h)
        self.fci_policy = fci_policy
        self._fci = None
        self._vqe_cache = {}

    @property
    def e_hf(self):
        return self.h.e_hf

    def fci(self):
        if self._fci is None:
            threshold = (CONNECTED_THRESHOLD
                         if self.fci_policy == "connected" else None)
            self._fci = fci_ground_state(self.sector, self.h_matrix,
                                         connected_threshold=threshold)
        return self._fci

    def ucc_solution(self, base: str, cfg: VqeConfig, x0=None):
        key = (base, x0 is None)
        if x0 is None and key in self._vqe_cache:
            return self._vqe_cache[key]
        kind, trotter = UCC_KINDS[base]
        gens = build_generators(self.h, kind, trotter)
        res = minimize(gens, self.h_matrix, self.sector, cfg,
                       h=self.h, x0=x0)
        if x0 is None:
            self._vqe_cache[key] = (gens, res)
        return gens, res


def run_method(cfg: RunConfig, method: str, system: System | None = None,
               warm_params=None) -> MethodResult:
    """Execute one method label on the configured FCIDUMP."""
    if system is None:
        if cfg.fcidump is None:
            raise ValueError("RunConfig.fcidump is required for run_method")
        system = System(cfg.fcidump, cfg.n_frozen, cfg.fci_policy)
    base, correction = parse_method(method)
    t0 = time.perf_counter()
    e_hf = system.e_hf
    breakdown = None

    if base == "FCI":
        res = system.fci()
        e_total = res.energy
        converged = res.residual_norm < 1e-9
    elif base == "MP2":
        _, e_mp2 = mp2(system.h)
        e_total = e_hf + e_mp2
        converged = True
    elif base in ("CCD", "CCSD"):
        solver = ccd_solve if base == "CCD" else ccsd_solve
        res = solver(system.h, cfg.cc)
        e_total = e_hf + res.e_corr
        converged = res.converged
    else:
        gens, res = system.ucc_solution(base, cfg.vqe, x0=warm_params)
        e_total = res.energy
        converged = res.converged
        if correction:
            amps = params_to_t2(gens, res.params)
            d = denominators(system.h)
            corr = corrections(system.h, amps, d)
            breakdown = {"e4s": corr.e4s, "e5": corr.e5, "e6": corr.e6}
            e_total += corr.e4s if correction == "4S" else corr.e6s

    pct = None
    if base != "FCI":
        try:
            pct = percent_correlation(e_total, e_hf, system.fci().energy)
        except (ConvergenceError, ValueError):
            pct = None
    else:
        pct = 100.0
    return MethodResult(method=method, e_total=e_total,
                        e_corr=e_total - e_hf, pct_corr=pct,
                        converged=bool(converged),
                        wall_time=time.perf_counter() - t0,
                        correction_breakdown=breakdown)


def run_all_methods(cfg: RunConfig, system: System | None = None):
    """All configured methods on one system, sharing the expensive state."""
    if system is None:
        system = System(cfg.fcidump, cfg.n_frozen, cfg.fci_policy)
    return [run_method(cfg, label, system=system) for label in cfg.methods]


def scan_pec(cfg: RunConfig):
    """Warm-started scan over geometry-tagged FCIDUMP files.

    Returns rows of (geometry_tag, method, MethodResult); VQE methods are
    warm-started from the previous geometry's converged parameters so the
    scan follows one solution branch.  A failing point is flagged in its
    row and the scan continues.
    """
    rows = []
    warm = {}
    for tag, path in cfg.scan:
        system = System(path, cfg.n_frozen, cfg.fci_policy)
        for label in cfg.methods:
            base, _ = parse_method(label)
            try:
                result = run_method(cfg, label, system=system,
                                    warm_params=warm.get(base))
            except (ConvergenceError, ValueError) as exc:
                result = MethodResult(method=label, e_total=np.nan,
                                      e_corr=np.nan, pct_corr=None,
                                      converged=False, wall_time=0.0)
                result.error = str(exc)
            rows.append((tag, label, result))
        for base in {parse_method(label)[0] for label in cfg.methods}:
            if base in UCC_KINDS:
                cached = system._vqe_cache.get((base, True))
                if cached is not None and cached[1].converged:
                    warm[base] = cached[1].params
    return rows


def scan_rows_to_csv(rows, e_fci_by_tag=None, dest=None) -> str:
    """Serialize scan rows with a stable schema."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["geometry_tag", "method", "e_total", "e_corr",
                     "pct_corr", "error_vs_fci", "converged"])
    fci_cache = {}
    for tag, label, res in rows:
        if label == "FCI" and np.isfinite(res.e_total):
            fci_cache[tag] = res.e_total
    if e_fci_by_tag:
        fci_cache.update(e_fci_by_tag)
    for tag, label, res in rows:
        err = ""
        if tag in fci_cache and np.isfinite(res.e_total):
            err = f"{res.e_total - fci_cache[tag]:.10f}"
        writer.writerow([
            tag, label,
            f"{res.e_total:.10f}" if np.isfinite(res.e_total) else "nan",
            f"{res.e_corr:.10f}" if np.isfinite(res.e_corr) else "nan",
            f"{res.pct_corr:.4f}" if res.pct_corr is not None else "",
            err, res.converged])
    text = buf.getvalue()
    if dest:
        Path(dest).write_text(text, encoding="utf-8")
    return text


def load_config(path) -> RunConfig:
    """Read a RunConfig from JSON (schema documented in the README)."""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    kwargs = {}
    for key in ("fcidump", "n_frozen", "methods", "fci_policy", "out"):
        if key in data:
            kwargs[key] = data[key]
    if "scan" in data:
        kwargs["scan"] = [(p["geometry_tag"], p["fcidump"])
                          for p in data["scan"]]
    if "vqe" in data:
        kwargs["vqe"] = VqeConfig(**data["vqe"])
    if "cc" in data:
        kwargs["cc"] = CcConfig(**data["cc"])
    return RunConfig(**kwargs)


def load_presets(path):
    """Preset registry: molecule__tag -> fcidump path, frozen count, policy."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        raw = json.load(f)
    root = path.parent
    presets = {}
    for key, entry in raw.items():
        presets[key] = {
            "fcidump": str((root / entry["fcidump"]).resolve()),
            "n_frozen": entry.get("n_frozen", 0),
            "fci_policy": entry.get("fci_policy", "ground"),
            "provenance": entry.get("provenance", ""),
        }
    return presets


def config_for_preset(presets, key, methods, vqe=None, cc=None) -> RunConfig:
    entry = presets[key]
    return RunConfig(fcidump=entry["fcidump"], n_frozen=entry["n_frozen"],
                     methods=list(methods), fci_policy=entry["fci_policy"],
                     vqe=vqe or VqeConfig(init="mp2-scaled"),
                     cc=cc or CcConfig())
