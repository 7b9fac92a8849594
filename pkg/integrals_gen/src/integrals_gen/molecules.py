"""Molecule specifications and geometry presets with provenance."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import ANGSTROM_TO_BOHR, count_basis_functions, count_electrons

GEOMETRY_DIR = Path(__file__).resolve().parents[2] / "data" / "geometries"


@dataclass
class MoleculeSpec:
    name: str
    symbols: list
    coords: np.ndarray          # Angstrom
    geometry_tag: str
    charge: int = 0
    multiplicity: int = 1
    basis: str = "STO-6G"
    provenance: str = ""

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=np.float64)
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("coordinates must be finite")
        if self.multiplicity != 1 or self.charge != 0:
            raise ValueError("only neutral singlets are supported")

    @property
    def coords_bohr(self):
        return self.coords * ANGSTROM_TO_BOHR

    @property
    def n_electrons(self):
        return count_electrons(self.symbols, self.charge)

    @property
    def n_orb(self):
        return count_basis_functions(self.symbols)


def diatomic(name, sym1, sym2, r, tag, provenance=""):
    return MoleculeSpec(name=name, symbols=[sym1, sym2],
                        coords=[[0.0, 0.0, 0.0], [0.0, 0.0, r]],
                        geometry_tag=tag, provenance=provenance)


def water(r1, r2, angle_deg, tag, provenance=""):
    theta = np.deg2rad(angle_deg)
    return MoleculeSpec(
        name="h2o", symbols=["O", "H", "H"],
        coords=[[0.0, 0.0, 0.0],
                [0.0, 0.0, r1],
                [0.0, r2 * np.sin(theta), r2 * np.cos(theta)]],
        geometry_tag=tag, provenance=provenance)


def hydrogen_chain(n, spacing, tag, provenance=""):
    return MoleculeSpec(
        name=f"h{n}", symbols=["H"] * n,
        coords=[[0.0, 0.0, k * spacing] for k in range(n)],
        geometry_tag=tag, provenance=provenance)


def load_preset(path) -> MoleculeSpec:
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return MoleculeSpec(name=data["name"], symbols=data["symbols"],
                        coords=np.asarray(data["coords_angstrom"]),
                        geometry_tag=data["geometry_tag"],
                        provenance=data.get("provenance", ""))


def save_preset(spec: MoleculeSpec, path):
    data = {
        "name": spec.name,
        "geometry_tag": spec.geometry_tag,
        "symbols": list(spec.symbols),
        "coords_angstrom": np.asarray(spec.coords).tolist(),
        "basis": spec.basis,
        "provenance": spec.provenance,
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=1)
        f.write("\n")


def preset_path(name, tag):
    return GEOMETRY_DIR / f"{name}__{tag}.json"


def get_preset(name, tag) -> MoleculeSpec:
    path = preset_path(name, tag)
    if not path.exists():
        available = sorted(p.stem for p in GEOMETRY_DIR.glob("*.json"))
        raise KeyError(f"no preset {name}__{tag}; available: {available}")
    return load_preset(path)
